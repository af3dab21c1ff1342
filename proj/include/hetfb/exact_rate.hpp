#pragma once

#include <cstddef>
#include <vector>

#include "hetfb/channel.hpp"
#include "hetfb/specfun.hpp"

namespace hetfb {

// int_0^inf e^(-alpha x) (beta + x)^(-gamma) dx
double integral_I2(double alpha, double beta, unsigned gamma);
// int_0^inf e^(-alpha x) / ((1 + x)(beta + x)^gamma) dx
double integral_I1(double alpha, double beta, unsigned gamma);

// Partial-fraction coefficients of prod_b (x + poles[b])^(-j[b]); entry
// [b][i-1] multiplies (x + poles[b])^(-i).
std::vector<std::vector<double>> psi_coefficients(const std::vector<double>& poles, const std::vector<unsigned>& j);

inline constexpr unsigned closed_form_max_eps = 64;
inline constexpr std::size_t closed_form_max_interferers = 4;

struct GkResult {
  double value = 0.0;
  double rel_error = 0.0;
  long precision_bits = 0;
  std::size_t terms_audit = 0;
};

// g(eps) = int log2(1 + x) d(F^eps) by the closed-form sums. Throws
// Errc::cancellation when eps or the interferer count is out of reach.
GkResult g_k_closed_form(const LinkProfile& p, unsigned eps);
double g_k(const LinkProfile& p, unsigned eps);
double g_k_quadrature(const LinkProfile& p, unsigned eps, const QuadratureConfig& cfg = {});

enum class RateRoute { automatic, closed_form, quadrature };

struct RateBreakdown {
  double user_rate = 0.0;
  // Contributions of the closed-form feedback counts tau = 1..closed_form_tau_max.
  std::vector<double> per_tau;
  unsigned closed_form_tau_max = 0;
  double closed_form_part = 0.0;
  double quadrature_part = 0.0;
  std::size_t terms_audit = 0;
};

RateBreakdown user_rate_exact_detail(const LinkProfile& p, unsigned num_users, unsigned num_rb, unsigned feedback_m,
                                     RateRoute route = RateRoute::automatic);
double user_rate_exact(const LinkProfile& p, unsigned num_users, unsigned num_rb, unsigned feedback_m,
                       RateRoute route = RateRoute::automatic);

struct SumRate {
  std::vector<double> per_user;
  double total = 0.0;
};

// Every profile is one associated user, so K0 = profiles.size().
SumRate sum_rate_exact(const std::vector<LinkProfile>& profiles, unsigned num_rb, unsigned feedback_m,
                       RateRoute route = RateRoute::automatic);

}  // namespace hetfb
