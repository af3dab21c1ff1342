#include "hetfb/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "specfun_impl.hpp"

namespace hetfb {

double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0;
  if (k > n - k) k = n - k;
  long double r = 1.0L;
  for (unsigned i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  if (r < 0x1p63L) r = std::nearbyint(r);
  return static_cast<double>(r);
}

double beta_integer(unsigned m, unsigned n) {
  if (m == 0 || n == 0) fail(Errc::domain, "Beta requires positive integer arguments");
  return 1.0 / (static_cast<double>(m) * binomial(m + n - 1, m));
}

double expint_e1(double x) { return detail::e1(x); }

double exp_expint_e1(double x) { return detail::exp_e1(x); }

double hyp2f1_11(double c, double z) {
  if (!(c > 1.0)) fail(Errc::domain, "2F1(1,1;c;z) requires c > 1");
  if (!(z < 1.0)) fail(Errc::domain, "2F1(1,1;c;z) requires z < 1");
  if (std::fabs(z) <= 0.5) return detail::hyp2f1_11_series(c, z);
  QuadratureConfig cfg;
  cfg.rel_tol = 1e-13;
  cfg.abs_tol = 0.0;
  // u = log(1 - z t) / log(1 - z) absorbs the pole factor
  const double L = std::log1p(-z);
  const QuadResult r = quad_interval(
      [&](double u) {
        const double t = -std::expm1(u * L) / z;
        return std::pow(std::max(0.0, 1.0 - t), c - 2.0);
      },
      0.0, 1.0, cfg);
  return (c - 1.0) * (-L / z) * r.value;
}

namespace {

struct RawQuad {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

RawQuad gk_integrate(const std::function<double(double)>& f, double a, double b, const QuadratureConfig& cfg) {
  RawQuad r;
  if (a == b) return r;
  unsigned depth = 1;
  while ((std::size_t{1} << depth) < cfg.max_subdivisions && depth < 60) ++depth;
  const double tol = cfg.rel_tol > 0.0 ? cfg.rel_tol : std::numeric_limits<double>::epsilon();
  r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, tol, &r.error, &r.l1);
  if (!std::isfinite(r.value)) fail(Errc::convergence, "quadrature produced a non-finite value");
  return r;
}

QuadResult accept(const RawQuad& r, const QuadratureConfig& cfg) {
  const double allowed =
      std::max({cfg.abs_tol, cfg.rel_tol * r.l1, 64.0 * std::numeric_limits<double>::epsilon() * r.l1});
  if (r.error > allowed) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "quadrature did not reach tolerance (error %.3g, allowed %.3g)", r.error, allowed);
    fail(Errc::convergence, buf);
  }
  return {r.value, r.error};
}

}  // namespace

QuadResult quad_interval(const std::function<double(double)>& f, double a, double b,
                         const QuadratureConfig& cfg) {
  if (!(a <= b)) fail(Errc::invalid_argument, "quadrature interval must satisfy a <= b");
  return accept(gk_integrate(f, a, b, cfg), cfg);
}

// [0, scale] through x = e^u - 1, [scale, scale e^V] through x = scale e^v,
// the rest through x = far / (1 - t).
QuadResult quad_halfline(const std::function<double(double)>& f, const QuadratureConfig& cfg, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) fail(Errc::invalid_argument, "half-line scale must be positive");
  auto head = [&](double u) {
    const double x = std::expm1(u);
    const double v = f(x);
    return v == 0.0 ? 0.0 : v * (1.0 + x);
  };
  const double span = std::max(0.0, std::min(40.0, std::log(std::numeric_limits<double>::max() / scale) - 1.0));
  const double far = scale * std::exp(span);
  auto middle = [&](double v) {
    const double x = scale * std::exp(v);
    const double y = f(x);
    return y == 0.0 ? 0.0 : y * x;
  };
  auto tail = [&](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double v = f(far / one_minus);
    if (v == 0.0) return 0.0;
    return v * far / (one_minus * one_minus);
  };
  const RawQuad a = gk_integrate(head, 0.0, std::log1p(scale), cfg);
  const RawQuad b = gk_integrate(middle, 0.0, span, cfg);
  const RawQuad c = gk_integrate(tail, 0.0, 1.0, cfg);
  return accept({a.value + b.value + c.value, a.error + b.error + c.error, a.l1 + b.l1 + c.l1}, cfg);
}

}  // namespace hetfb
