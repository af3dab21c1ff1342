#include "hetfb/planner.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "hetfb/asymptotics.hpp"
#include "hetfb/error.hpp"
#include "hetfb/feedback.hpp"
#include "hetfb/log.hpp"

namespace hetfb {
namespace {

void check_eta(double eta) {
  if (!(eta > 0.0) || !(eta <= 1.0)) fail(Errc::invalid_argument, "eta must lie in (0, 1]");
}

// rate(M) returns NaN for infeasible M.
FeedbackScan scan(unsigned N, double eta, bool full_scan, const char* label,
                  const std::function<double(unsigned)>& rate) {
  check_eta(eta);
  FeedbackScan out;
  out.ratio.assign(N, std::numeric_limits<double>::quiet_NaN());
  const double full = rate(N);
  ++out.evaluations;
  if (std::isnan(full)) fail(Errc::infeasible, std::string(label) + " rate is unavailable at M = N");
  out.ratio[N - 1] = 1.0;
  double previous = std::numeric_limits<double>::quiet_NaN();
  unsigned previous_m = 0;
  for (unsigned m = 1; m <= N; ++m) {
    double r = 1.0;
    if (m < N) {
      const double c = rate(m);
      ++out.evaluations;
      if (std::isnan(c)) continue;
      r = c / full;
      out.ratio[m - 1] = r;
    }
    if (!std::isnan(previous) && r < previous) {
      ++out.monotonicity_violations;
      log_message(LogLevel::warning, std::string(label) + " sum rate drops from M = " + std::to_string(previous_m) +
                                         " to M = " + std::to_string(m));
    }
    previous = r;
    previous_m = m;
    if (out.m == 0 && r >= eta) {
      out.m = m;
      out.ratio_at_m = r;
      if (!full_scan) break;
    }
  }
  return out;
}

}  // namespace

FeedbackScan min_feedback_exact(const std::vector<LinkProfile>& profiles, unsigned N, double eta, bool full_scan,
                                RateRoute route) {
  if (profiles.empty()) fail(Errc::invalid_argument, "at least one user is required");
  return scan(N, eta, full_scan, "exact",
              [&](unsigned m) { return sum_rate_exact(profiles, N, m, route).total; });
}

FeedbackScan min_feedback_asymptotic(const std::vector<LinkProfile>& profiles, unsigned N, double eta,
                                     bool full_scan) {
  if (profiles.empty()) fail(Errc::invalid_argument, "at least one user is required");
  const double K0 = static_cast<double>(profiles.size());
  return scan(N, eta, full_scan, "asymptotic", [&](unsigned m) {
    if (!(K0 * m / N > 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return sum_rate_asymptotic(profiles, N, m);
  });
}

PlanResult plan_feedback(const std::vector<LinkProfile>& profiles, unsigned N, double eta, RateRoute route) {
  check_feedback_params(N, 1);
  PlanResult r;
  r.eta = eta;
  r.exact = min_feedback_exact(profiles, N, eta, false, route);
  r.asymptotic = min_feedback_asymptotic(profiles, N, eta);
  return r;
}

}  // namespace hetfb
