#pragma once

// Special functions templated on the real type so the closed-form engine can
// run them in MPFR and the public API in double.

#include <cmath>
#include <string>
#include <vector>

#include "bigfloat.hpp"
#include "hetfb/error.hpp"
#include "hetfb/specfun.hpp"

namespace hetfb::detail {

template <class Real>
struct Num;

template <>
struct Num<double> {
  static double eps() { return 0x1p-53; }
  static double euler() { return euler_gamma; }
  static double series_cutoff() { return 1.0; }
  static long max_iterations() { return 100000; }
};

template <>
struct Num<mp::BigFloat> {
  static mp::BigFloat eps() {
    mp::BigFloat r;
    mpfr_set_ui_2exp(r.raw(), 1, -static_cast<long>(mp::working_precision()), MPFR_RNDN);
    return r;
  }
  static mp::BigFloat euler() { return mp::euler_constant(); }
  // The E1 series loses about 1.44*x bits; above this the continued fraction wins.
  static double series_cutoff() {
    const double p = static_cast<double>(mp::working_precision());
    return p / 32.0 > 1.0 ? p / 32.0 : 1.0;
  }
  static long max_iterations() { return 2000000; }
};

inline double to_double(double x) { return x; }
inline double to_double(const mp::BigFloat& x) { return x.to_double(); }

template <class Real>
Real binomial_real(unsigned n, unsigned k) {
  if (k > n) return Real(0.0);
  if (k > n - k) k = n - k;
  Real r(1.0);
  for (unsigned i = 1; i <= k; ++i) {
    r *= Real(static_cast<double>(n - k + i));
    r /= Real(static_cast<double>(i));
  }
  return r;
}

template <class Real>
Real e1_series_sum(const Real& x) {
  using std::abs;
  const Real eps = Num<Real>::eps();
  Real sum(0.0);
  Real term(1.0);
  for (long k = 1; k < Num<Real>::max_iterations(); ++k) {
    term *= -x;
    term /= Real(static_cast<double>(k));
    Real c = term / Real(static_cast<double>(k));
    sum += c;
    if (abs(c) <= eps * abs(sum)) return sum;
  }
  fail(Errc::convergence, "E1 series did not converge");
}

// e^x E1(x) from the power series: -gamma - ln x - sum (-x)^k/(k k!).
template <class Real>
Real e1_series(const Real& x) {
  using std::log;
  return -Num<Real>::euler() - log(x) - e1_series_sum(x);
}

// e^x E_n(x) by the modified Lentz continued fraction.
template <class Real>
Real exp_en_cf(const Real& x, unsigned n) {
  using std::abs;
  const Real eps = Num<Real>::eps();
  Real b = x + static_cast<double>(n);
  Real c(1e300);
  Real d = Real(1.0) / b;
  Real h = d;
  for (long i = 1; i < Num<Real>::max_iterations(); ++i) {
    const double an = -static_cast<double>(i) * static_cast<double>(static_cast<long>(n) - 1 + i);
    b += Real(2.0);
    d = Real(1.0) / (an * d + b);
    c = b + an / c;
    Real del = c * d;
    h *= del;
    if (abs(del - 1.0) <= eps) return h;
  }
  fail(Errc::convergence, "E_n continued fraction did not converge");
}

template <class Real>
Real e1(const Real& x) {
  using std::exp;
  if (!(x > 0.0)) fail(Errc::domain, "E1 requires x > 0");
  if (x < Num<Real>::series_cutoff()) return e1_series(x);
  return exp(-x) * exp_en_cf(x, 1);
}

template <class Real>
Real exp_e1(const Real& x) {
  using std::exp;
  if (!(x > 0.0)) fail(Errc::domain, "E1 requires x > 0");
  if (x < Num<Real>::series_cutoff()) return exp(x) * e1_series(x);
  return exp_en_cf(x, 1);
}

template <class Real>
Real hyp2f1_11_series(const Real& c, const Real& z) {
  using std::abs;
  const Real eps = Num<Real>::eps();
  Real sum(1.0);
  Real term(1.0);
  for (long n = 0; n < Num<Real>::max_iterations(); ++n) {
    term *= z;
    term *= Real(static_cast<double>(n + 1));
    term /= c + static_cast<double>(n);
    sum += term;
    if (abs(term) <= eps * abs(sum)) return sum;
  }
  fail(Errc::convergence, "2F1 series did not converge");
}

// 2F1(1,1;c;z) for integer c >= 2 through the elementary antiderivative of
// (c-1) * int_0^1 u^(c-2) / (1 - z + z u) du. Exact, but loses bits to
// cancellation; meant for extended precision.
template <class Real>
Real hyp2f1_11_integer(unsigned c, const Real& z) {
  using std::abs;
  using std::log;
  if (!(z < 1.0)) fail(Errc::domain, "2F1(1,1;c;z) requires z < 1");
  if (c < 2) fail(Errc::domain, "integer 2F1 path requires c >= 2");
  if (abs(z) <= 0.5) return hyp2f1_11_series(Real(static_cast<double>(c)), z);
  const unsigned n = c - 2;
  const Real a = Real(1.0) - z;
  std::vector<Real> apow(n + 1);
  apow[0] = Real(1.0);
  for (unsigned k = 1; k <= n; ++k) apow[k] = apow[k - 1] * a;
  Real total = apow[n] * (-log(a));
  if (n % 2 == 1) total = -total;
  Real binom(1.0);
  for (unsigned k = 1; k <= n; ++k) {
    binom *= Real(static_cast<double>(n - k + 1));
    binom /= Real(static_cast<double>(k));
    Real t = binom * apow[n - k] * (Real(1.0) - apow[k]) / Real(static_cast<double>(k));
    if ((n - k) % 2 == 1) t = -t;
    total += t;
  }
  Real zp(1.0);
  for (unsigned k = 0; k <= n; ++k) zp *= z;
  return Real(static_cast<double>(c - 1)) * total / zp;
}

// I2(alpha, beta, g) = int_0^inf e^(-alpha x) (beta + x)^(-g) dx for g = 1..gmax
// (index 0 unused). Upward recurrence while alpha*beta is small, otherwise a
// continued-fraction anchor with downward recurrence below it.
template <class Real>
std::vector<Real> i2_table(const Real& alpha, const Real& beta, unsigned gmax) {
  if (!(alpha > 0.0) || !(beta > 0.0)) fail(Errc::domain, "I2 requires alpha > 0 and beta > 0");
  std::vector<Real> t(gmax + 1);
  if (gmax == 0) return t;
  const Real z = alpha * beta;
  std::vector<Real> inv_pow(gmax + 1);  // beta^(1-g)
  inv_pow[1] = Real(1.0);
  const Real inv_beta = Real(1.0) / beta;
  for (unsigned g = 2; g <= gmax; ++g) inv_pow[g] = inv_pow[g - 1] * inv_beta;
  if (z < Num<Real>::series_cutoff() || gmax == 1) {
    t[1] = exp_e1(z);
    for (unsigned g = 2; g <= gmax; ++g)
      t[g] = (inv_pow[g] - alpha * t[g - 1]) / Real(static_cast<double>(g - 1));
    return t;
  }
  const double zd = to_double(z);
  unsigned anchor = gmax;
  if (zd < static_cast<double>(gmax)) anchor = static_cast<unsigned>(std::ceil(zd));
  if (anchor < 1) anchor = 1;
  t[anchor] = inv_pow[anchor] * exp_en_cf(z, anchor);
  for (unsigned g = anchor; g >= 2; --g)
    t[g - 1] = (inv_pow[g] - Real(static_cast<double>(g - 1)) * t[g]) / alpha;
  for (unsigned g = anchor + 1; g <= gmax; ++g)
    t[g] = (inv_pow[g] - alpha * t[g - 1]) / Real(static_cast<double>(g - 1));
  return t;
}

// I1(alpha, beta, g) = int_0^inf e^(-alpha x) / ((1 + x)(beta + x)^g) dx for
// g = 0..gmax, by partial fractions over I2 values.
template <class Real>
std::vector<Real> i1_table(const Real& alpha, const Real& beta, unsigned gmax) {
  std::vector<Real> out(gmax + 1);
  const Real seed = exp_e1(alpha);  // I2(alpha, 1, 1)
  out[0] = seed;
  if (gmax == 0) return out;
  if (beta == Real(1.0)) {
    std::vector<Real> merged = i2_table(alpha, Real(1.0), gmax + 1);
    for (unsigned g = 1; g <= gmax; ++g) out[g] = merged[g + 1];
    return out;
  }
  const std::vector<Real> i2 = i2_table(alpha, beta, gmax);
  const Real inv_one_minus = Real(1.0) / (Real(1.0) - beta);
  std::vector<Real> p(gmax + 1);  // (1 - beta)^(-i)
  p[0] = Real(1.0);
  for (unsigned i = 1; i <= gmax; ++i) p[i] = p[i - 1] * inv_one_minus;
  for (unsigned g = 1; g <= gmax; ++g) {
    // (beta - 1)^(-g) = (-1)^g (1 - beta)^(-g)
    Real acc = p[g] * seed;
    if (g % 2 == 1) acc = -acc;
    for (unsigned i = 1; i <= g; ++i) {
      Real term = p[i] * i2[g - i + 1];
      if (i % 2 == 0) term = -term;
      acc += term;
    }
    out[g] = acc;
  }
  return out;
}

// Partial-fraction coefficients of prod_b (x + pole_b)^(-j_b):
// psi[b][i-1] multiplies (x + pole_b)^(-i), i = 1..j_b. Each pole's
// coefficients come from the Taylor series of the other factors around it.
template <class Real>
std::vector<std::vector<Real>> psi_coefficients_impl(const std::vector<Real>& poles,
                                                     const std::vector<unsigned>& j) {
  const std::size_t J = poles.size();
  std::vector<std::vector<Real>> psi(J);
  for (std::size_t b = 0; b < J; ++b) {
    const unsigned jb = j[b];
    if (jb == 0) continue;
    // series[n] = coefficient of t^n in prod_{c != b} (t + delta_c)^(-j_c), t = x + pole_b
    std::vector<Real> series(jb, Real(0.0));
    series[0] = Real(1.0);
    bool trivial = true;
    for (std::size_t c = 0; c < J; ++c) {
      if (c == b || j[c] == 0) continue;
      const Real delta = poles[c] - poles[b];
      const Real inv_delta = Real(1.0) / delta;
      // factor[n] = (-1)^n C(j_c + n - 1, n) delta^(-j_c - n)
      std::vector<Real> factor(jb);
      Real base(1.0);
      for (unsigned k = 0; k < j[c]; ++k) base *= inv_delta;
      factor[0] = base;
      for (unsigned n = 1; n < jb; ++n) {
        factor[n] = factor[n - 1] * Real(static_cast<double>(j[c] + n - 1)) / Real(static_cast<double>(n));
        factor[n] *= inv_delta;
        factor[n] = -factor[n];
      }
      if (trivial) {
        series = std::move(factor);
        trivial = false;
        continue;
      }
      std::vector<Real> next(jb, Real(0.0));
      for (unsigned n = 0; n < jb; ++n)
        for (unsigned k = 0; k <= n; ++k) next[n] += series[k] * factor[n - k];
      series = std::move(next);
    }
    psi[b].resize(jb);
    for (unsigned i = 1; i <= jb; ++i) psi[b][i - 1] = series[jb - i];
  }
  return psi;
}

}  // namespace hetfb::detail
