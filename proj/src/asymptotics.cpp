#include "hetfb/asymptotics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "hetfb/error.hpp"
#include "hetfb/feedback.hpp"
#include "hetfb/specfun.hpp"

namespace hetfb {
namespace {

void check_regime(double K, unsigned N, unsigned M) {
  check_feedback_params(N, M);
  if (!(K > 0.0) || !std::isfinite(K)) fail(Errc::invalid_argument, "number of users must be positive");
  const double tail = N / (K * M);
  if (!(tail < 1.0))
    fail(Errc::domain, "quantile 1 - N/(KM) = " + std::to_string(1.0 - tail) + " is not in (0, 1); need KM/N > 1");
}

NormalizingConstants from_quantiles(double lo, double hi) {
  NormalizingConstants c;
  c.a = std::log2(1.0 + lo);
  c.b = std::log2((1.0 + hi) / (1.0 + lo));
  return c;
}

// F^N = 1 - tail solved for the per-block level: returns odds F/(1-F) and
// log(1/(1-F)), both computed without subtracting nearby roots.
struct BestOneLevel {
  double odds;
  double log_inv_tail;
};

BestOneLevel best_one_level(double tail, unsigned N) {
  const double log_f = std::log1p(-tail) / N;
  const double s = -std::expm1(log_f);
  return {std::exp(log_f) / s, -std::log(s)};
}

}  // namespace

NormalizingConstants normalizing_constants(const LinkProfile& p, double K, unsigned N, unsigned M) {
  check_regime(K, N, M);
  const double tail = N / (K * M);
  const double lo = bestm_survival_inv(p, N, M, tail);
  const double hi = bestm_survival_inv(p, N, M, tail / std::numbers::e);
  return from_quantiles(lo, hi);
}

NormalizingConstants normalizing_constants_closed(const LinkProfile& p, double K, unsigned N, unsigned M) {
  check_regime(K, N, M);
  if (p.kind() == ProfileKind::general)
    fail(Errc::invalid_argument, "closed-form constants need an interference- or noise-limited profile");
  if (M != 1 && M != N) fail(Errc::invalid_argument, "closed-form constants exist for M = 1 and M = N only");
  const double ratio = p.kind() == ProfileKind::interference_limited ? p.rho0() / p.interferers().front() : p.rho0();
  const double e = std::numbers::e;
  if (M == N) {
    if (p.kind() == ProfileKind::interference_limited)
      return from_quantiles(ratio * (K - 1.0), ratio * (K * e - 1.0));
    return from_quantiles(ratio * std::log(K), ratio * (1.0 + std::log(K)));
  }
  const BestOneLevel lo = best_one_level(N / K, N);
  const BestOneLevel hi = best_one_level(N / (K * e), N);
  if (p.kind() == ProfileKind::interference_limited) return from_quantiles(ratio * lo.odds, ratio * hi.odds);
  return from_quantiles(ratio * lo.log_inv_tail, ratio * hi.log_inv_tail);
}

double scheduling_probability(unsigned K0, unsigned N, unsigned M) {
  check_feedback_params(N, M);
  if (M == N) return 1.0;
  return -std::expm1(K0 * std::log1p(-static_cast<double>(M) / N));
}

double user_rate_asymptotic(const LinkProfile& p, unsigned K0, unsigned N, unsigned M) {
  if (K0 == 0) fail(Errc::invalid_argument, "number of users must be positive");
  const NormalizingConstants c = normalizing_constants(p, K0, N, M);
  return scheduling_probability(K0, N, M) * (c.a + euler_gamma * c.b) / K0;
}

double sum_rate_asymptotic(const std::vector<LinkProfile>& profiles, unsigned N, unsigned M) {
  if (profiles.empty()) fail(Errc::invalid_argument, "at least one user is required");
  const unsigned K0 = static_cast<unsigned>(profiles.size());
  double acc = 0.0;
  for (const auto& p : profiles) acc += user_rate_asymptotic(p, K0, N, M);
  return acc;
}

TailDiagnostic tail_convergence_diagnostic(const LinkProfile& p, unsigned N, unsigned M) {
  const BestMTransform tr(N, M);
  TailDiagnostic out;
  const bool heavy = p.kind() == ProfileKind::interference_limited;
  out.functional = heavy ? TailFunctional::tail_index : TailFunctional::hazard_derivative;

  auto survival = [&](double x) { return tr.survival(sinr_survival(p, x)); };
  auto density = [&](double x) { return tr.density_factor(sinr_survival(p, x)) * sinr_pdf(p, x); };
  auto hazard_inverse = [&](double x) { return survival(x) / density(x); };

  const double x_lo = sinr_survival_inv(p, 0.5);
  const double x_hi = heavy ? x_lo * 1e6 : bestm_survival_inv(p, N, M, 1e-250);
  const double decades = std::log10(x_hi / x_lo);
  const int points = static_cast<int>(std::ceil(decades * 10.0));
  for (int i = 0; i <= points; ++i) {
    const double x = x_lo * std::pow(10.0, decades * i / points);
    double v;
    if (heavy) {
      v = x * density(x) / survival(x);
    } else {
      auto central = [&](double h) { return (hazard_inverse(x + h) - hazard_inverse(x - h)) / (2.0 * h); };
      const double h = 1e-4 * x;
      v = (4.0 * central(0.5 * h) - central(h)) / 3.0;
    }
    out.x.push_back(x);
    out.value.push_back(v);
  }
  out.limit_estimate = out.value.back();

  const double last_decade = x_hi / 10.0;
  const double slack = heavy ? 1e-9 : 1e-9 * p.rho0() / x_lo;
  out.converging = true;
  for (std::size_t i = 2; i < out.x.size(); ++i) {
    if (out.x[i - 1] < last_decade) continue;
    const double now = heavy ? std::fabs(out.value[i] - out.value[i - 1]) : std::fabs(out.value[i]);
    const double before = heavy ? std::fabs(out.value[i - 1] - out.value[i - 2]) : std::fabs(out.value[i - 1]);
    if (now > before + slack) out.converging = false;
  }
  return out;
}

}  // namespace hetfb
