#pragma once

#include <vector>

#include "hetfb/channel.hpp"

namespace hetfb {

struct NormalizingConstants {
  double a = 0.0;  // location, bits/s/Hz
  double b = 0.0;  // scale, bits/s/Hz
};

// Quantiles of the reported CQI at tails N/(KM) and N/(KMe). K may be
// fractional. Errc::domain when KM/N <= 1.
NormalizingConstants normalizing_constants(const LinkProfile& p, double num_users, unsigned num_rb,
                                           unsigned feedback_m);

// Closed forms for the interference- and noise-limited kinds at M = 1 or M = N.
NormalizingConstants normalizing_constants_closed(const LinkProfile& p, double num_users, unsigned num_rb,
                                                  unsigned feedback_m);

// 1 - (1 - M/N)^K0
double scheduling_probability(unsigned num_users, unsigned num_rb, unsigned feedback_m);

double user_rate_asymptotic(const LinkProfile& p, unsigned num_users, unsigned num_rb, unsigned feedback_m);

// K0 = profiles.size().
double sum_rate_asymptotic(const std::vector<LinkProfile>& profiles, unsigned num_rb, unsigned feedback_m);

enum class TailFunctional {
  hazard_derivative,  // d/dx [(1 - F_Y) / f_Y], tends to 0
  tail_index,         // x f_Y / (1 - F_Y), tends to a positive constant
};

struct TailDiagnostic {
  TailFunctional functional = TailFunctional::hazard_derivative;
  std::vector<double> x;
  std::vector<double> value;
  // Last grid value.
  double limit_estimate = 0.0;
  // |value| shrinking over the last decade (hazard) or |change| shrinking (tail index).
  bool converging = false;
};

TailDiagnostic tail_convergence_diagnostic(const LinkProfile& p, unsigned num_rb, unsigned feedback_m);

}  // namespace hetfb
