#pragma once

#include <cstddef>
#include <vector>

#include "hetfb/channel.hpp"
#include "hetfb/exact_rate.hpp"

namespace hetfb {

struct FeedbackScan {
  unsigned m = 0;
  double ratio_at_m = 0.0;
  // ratio[M-1] = C(M)/C(N); NaN where not evaluated or infeasible.
  std::vector<double> ratio;
  std::size_t evaluations = 0;
  // Evaluated ratios that drop as M grows.
  std::size_t monotonicity_violations = 0;
};

// Smallest M with C(M)/C(N) >= eta by ascending scan. full_scan keeps going
// past the answer so monotonicity is checked over every M.
FeedbackScan min_feedback_exact(const std::vector<LinkProfile>& profiles, unsigned num_rb, double eta,
                                bool full_scan = false, RateRoute route = RateRoute::automatic);

// Same with the asymptotic sum rate. M with K0 M / N <= 1 are skipped;
// Errc::infeasible when none remains.
FeedbackScan min_feedback_asymptotic(const std::vector<LinkProfile>& profiles, unsigned num_rb, double eta,
                                     bool full_scan = false);

struct PlanResult {
  double eta = 0.0;
  FeedbackScan exact;
  FeedbackScan asymptotic;
};

PlanResult plan_feedback(const std::vector<LinkProfile>& profiles, unsigned num_rb, double eta,
                         RateRoute route = RateRoute::automatic);

}  // namespace hetfb
