#pragma once

#include <cstddef>
#include <vector>

#include "hetfb/channel.hpp"

namespace hetfb {

void check_feedback_params(unsigned num_rb, unsigned feedback_m);

// Coefficients of F_Y = sum_m xi1(N,M,m) F^(N-m), m = 0..M-1.
double xi1(unsigned num_rb, unsigned feedback_m, unsigned m);
std::vector<double> xi1_coefficients(unsigned num_rb, unsigned feedback_m);

// Coefficients of F_Y^tau = sum_m xi2(N,M,tau,m) F^(N tau - m), m = 0..tau(M-1).
double xi2(unsigned num_rb, unsigned feedback_m, unsigned tau, unsigned m);
std::vector<double> xi2_coefficients(unsigned num_rb, unsigned feedback_m, unsigned tau);

// F_Y^tau through the power coefficients.
double selected_cdf_conditional(const LinkProfile& p, unsigned num_rb, unsigned feedback_m, unsigned tau, double x);

// Distribution of the value a user reports for one fed-back resource block.
double bestm_cdf(const LinkProfile& p, unsigned num_rb, unsigned feedback_m, double x);
double bestm_survival(const LinkProfile& p, unsigned num_rb, unsigned feedback_m, double x);
double bestm_pdf(const LinkProfile& p, unsigned num_rb, unsigned feedback_m, double x);
double bestm_cdf_inv(const LinkProfile& p, unsigned num_rb, unsigned feedback_m, double q);
double bestm_survival_inv(const LinkProfile& p, unsigned num_rb, unsigned feedback_m, double tail);

// Best-M survival and density factor as functions of the per-block survival s.
class BestMTransform {
 public:
  BestMTransform(unsigned num_rb, unsigned feedback_m);
  unsigned num_rb() const { return n_; }
  unsigned feedback_m() const { return m_; }
  double survival(double s) const;
  // dF_Y/dF at F = 1 - s.
  double density_factor(double s) const;
  // s with survival(s) = tail.
  double inverse_survival(double tail) const;

 private:
  unsigned n_;
  unsigned m_;
  std::vector<double> log_binom_;  // log C(N, i)
  std::vector<double> ratio_;      // (N - i + 1) / i
  std::vector<double> log_binom_lower_;  // log C(N - 1, i)
};

// Probability that exactly tau of K0 users report a given resource block.
double feedback_count_pmf(unsigned num_users, unsigned num_rb, unsigned feedback_m, unsigned tau);

// Indices of the M largest values, largest first; equal values keep the lower index first.
std::vector<unsigned> select_best_m(const double* values, unsigned num_rb, unsigned feedback_m);

}  // namespace hetfb
