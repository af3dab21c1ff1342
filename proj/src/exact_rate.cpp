#include "hetfb/exact_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "closed_form.hpp"
#include "feedback_exact.hpp"
#include "hetfb/error.hpp"
#include "hetfb/feedback.hpp"
#include "specfun_impl.hpp"

namespace hetfb {
namespace {

constexpr double unit_roundoff = 0x1p-53;
constexpr double recursion_tolerance = 1e-9;

double i2_quadrature(double alpha, double beta, unsigned gamma) {
  QuadratureConfig cfg;
  cfg.abs_tol = 0.0;
  cfg.rel_tol = 1e-13;
  const double scale = std::min(1.0 / alpha, beta);
  return quad_halfline([&](double x) { return std::exp(-alpha * x - gamma * std::log(beta + x)); }, cfg, scale).value;
}

double i1_quadrature(double alpha, double beta, unsigned gamma) {
  QuadratureConfig cfg;
  cfg.abs_tol = 0.0;
  cfg.rel_tol = 1e-13;
  const double scale = std::min({1.0 / alpha, beta, 1.0});
  return quad_halfline(
             [&](double x) { return std::exp(-alpha * x - gamma * std::log(beta + x)) / (1.0 + x); }, cfg, scale)
      .value;
}

// Quantile of the largest of `count` draws at its median.
double median_of_max(const LinkProfile& p, double count) {
  const double tail = -std::expm1(std::log(0.5) / std::max(1.0, count));
  const double x = sinr_survival_inv(p, tail);
  return x > 0.0 ? x : 1.0;
}

}  // namespace

double integral_I2(double alpha, double beta, unsigned gamma) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    fail(Errc::domain, "I2 requires alpha > 0 and beta > 0");
  if (gamma == 0) fail(Errc::domain, "I2 requires gamma >= 1");
  double value = detail::exp_e1(alpha * beta);
  double err = 4.0 * unit_roundoff * value;
  for (unsigned g = 2; g <= gamma; ++g) {
    const double pw = std::pow(beta, 1.0 - static_cast<double>(g));
    const double prev = value;
    value = (pw - alpha * prev) / static_cast<double>(g - 1);
    err = (unit_roundoff * (std::fabs(pw) + 2.0 * alpha * std::fabs(prev)) + alpha * err) / static_cast<double>(g - 1) +
          unit_roundoff * std::fabs(value);
    if (!(value > 0.0) || err > recursion_tolerance * value) return i2_quadrature(alpha, beta, gamma);
  }
  return value;
}

double integral_I1(double alpha, double beta, unsigned gamma) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    fail(Errc::domain, "I1 requires alpha > 0 and beta > 0");
  if (gamma == 0) return integral_I2(alpha, 1.0, 1);
  if (std::fabs(beta - 1.0) < 1e-6) return integral_I2(alpha, 1.0, gamma + 1);
  const double inv = 1.0 / (1.0 - beta);
  double acc = std::pow(inv, gamma) * integral_I2(alpha, 1.0, 1);
  if (gamma % 2 == 1) acc = -acc;
  double magnitude = std::fabs(acc);
  double p = 1.0;
  for (unsigned i = 1; i <= gamma; ++i) {
    p *= inv;
    double term = p * integral_I2(alpha, beta, gamma - i + 1);
    if (i % 2 == 0) term = -term;
    acc += term;
    magnitude += std::fabs(term);
  }
  if (!(acc > 0.0) || 8.0 * gamma * unit_roundoff * magnitude > recursion_tolerance * acc)
    return i1_quadrature(alpha, beta, gamma);
  return acc;
}

std::vector<std::vector<double>> psi_coefficients(const std::vector<double>& poles, const std::vector<unsigned>& j) {
  if (poles.size() != j.size()) fail(Errc::invalid_argument, "one exponent per pole is required");
  for (std::size_t a = 0; a < poles.size(); ++a)
    for (std::size_t b = a + 1; b < poles.size(); ++b)
      if (std::fabs(poles[a] - poles[b]) <= distinctness_tolerance * std::max(std::fabs(poles[a]), std::fabs(poles[b])))
        fail(Errc::distinctness, "poles must be distinct");
  return detail::psi_coefficients_impl(poles, j);
}

GkResult g_k_closed_form(const LinkProfile& p, unsigned eps) {
  if (eps == 0) fail(Errc::invalid_argument, "eps must be at least 1");
  if (eps > closed_form_max_eps)
    fail(Errc::cancellation, "closed form is limited to eps <= 64; use quadrature");
  const auto table = detail::ClosedFormTable::get(p);
  GkResult r;
  r.value = table->g(eps).to_double();
  r.rel_error = table->rel_error(eps);
  r.precision_bits = table->precision_bits();
  r.terms_audit = table->terms_audit();
  if (!(r.rel_error <= 1e-6)) fail(Errc::cancellation, "closed-form cancellation estimate exceeds 1e-6");
  return r;
}

double g_k(const LinkProfile& p, unsigned eps) { return g_k_closed_form(p, eps).value; }

double g_k_quadrature(const LinkProfile& p, unsigned eps, const QuadratureConfig& cfg) {
  if (eps == 0) fail(Errc::invalid_argument, "eps must be at least 1");
  const double e = static_cast<double>(eps);
  auto integrand = [&](double x) {
    const double s = sinr_survival(p, x);
    if (s <= 0.0) return 0.0;
    const double tail = s >= 1.0 ? 1.0 : -std::expm1(e * std::log1p(-s));
    return tail / (1.0 + x);
  };
  return quad_halfline(integrand, cfg, median_of_max(p, e)).value / std::numbers::ln2;
}

RateBreakdown user_rate_exact_detail(const LinkProfile& p, unsigned K0, unsigned N, unsigned M, RateRoute route) {
  check_feedback_params(N, M);
  if (K0 == 0) fail(Errc::invalid_argument, "number of users must be positive");
  RateBreakdown out;
  const bool closed_ok = route != RateRoute::quadrature && detail::closed_form_supported(p);
  unsigned tau_c = closed_ok ? std::min(K0, closed_form_max_eps / N) : 0;
  if (route == RateRoute::closed_form && (!closed_ok || tau_c < K0))
    fail(Errc::cancellation, "closed form needs N*K0 <= 64 and at most 4 interferers");

  if (tau_c > 0) {
    const auto table = detail::ClosedFormTable::get(p);
    mp::PrecisionScope scope(table->precision_bits());
    out.terms_audit = table->terms_audit();
    const double table_err = table->max_rel_error();
    for (unsigned tau = 1; tau <= tau_c; ++tau) {
      const auto& xi = detail::xi2_exact(N, M, tau);
      mp::BigFloat inner(0.0);
      mp::BigFloat magnitude(0.0);
      for (std::size_t m = 0; m < xi.size(); ++m) {
        if (xi[m] == 0) continue;
        const mp::BigFloat term = mp::BigFloat(xi[m]) * table->g(N * tau - static_cast<unsigned>(m));
        inner += term;
        magnitude += abs(term);
      }
      const double amplification = inner.is_zero() ? HUGE_VAL : (magnitude / abs(inner)).to_double();
      if (!(amplification * table_err <= 1e-12)) {
        if (route == RateRoute::closed_form)
          fail(Errc::cancellation, "cancellation in the feedback-count sum exceeds the closed-form accuracy");
        tau_c = tau - 1;
        break;
      }
      const double pmf = feedback_count_pmf(K0, N, M, tau);
      const double contribution = pmf * inner.to_double() / K0;
      out.per_tau.push_back(contribution);
      out.closed_form_part += contribution;
    }
    out.per_tau.resize(tau_c);
  }
  out.closed_form_tau_max = tau_c;

  if (tau_c < K0) {
    const BestMTransform tr(N, M);
    const double pr = static_cast<double>(M) / N;
    std::vector<double> pmf(K0 + 1, 0.0);
    for (unsigned tau = 1; tau <= K0; ++tau) pmf[tau] = feedback_count_pmf(K0, N, M, tau);
    auto integrand = [&](double x) {
      const double s = sinr_survival(p, x);
      if (s <= 0.0) return 0.0;
      const double sy = tr.survival(s);
      double v = 0.0;
      if (tau_c == 0) {
        // sum_tau PMF(tau) (1 - F_Y^tau) = 1 - (1 - p S_Y)^K0
        v = -std::expm1(K0 * std::log1p(-pr * sy));
      } else {
        const double log_fy = std::log1p(-sy);
        for (unsigned tau = tau_c + 1; tau <= K0; ++tau) {
          if (pmf[tau] == 0.0) continue;
          v += pmf[tau] * (sy >= 1.0 ? 1.0 : -std::expm1(tau * log_fy));
        }
      }
      return v / (1.0 + x);
    };
    QuadratureConfig cfg;
    cfg.abs_tol = 0.0;
    cfg.rel_tol = 1e-12;
    const double scale = median_of_max(p, static_cast<double>(K0));
    out.quadrature_part = quad_halfline(integrand, cfg, scale).value / (std::numbers::ln2 * K0);
  }
  out.user_rate = out.closed_form_part + out.quadrature_part;
  return out;
}

double user_rate_exact(const LinkProfile& p, unsigned K0, unsigned N, unsigned M, RateRoute route) {
  return user_rate_exact_detail(p, K0, N, M, route).user_rate;
}

SumRate sum_rate_exact(const std::vector<LinkProfile>& profiles, unsigned N, unsigned M, RateRoute route) {
  if (profiles.empty()) fail(Errc::invalid_argument, "at least one user is required");
  SumRate out;
  const unsigned K0 = static_cast<unsigned>(profiles.size());
  for (const auto& p : profiles) {
    out.per_user.push_back(user_rate_exact(p, K0, N, M, route));
    out.total += out.per_user.back();
  }
  return out;
}

}  // namespace hetfb
