#pragma once

#include <cstddef>
#include <functional>

namespace hetfb {

inline constexpr double euler_gamma = 0.5772156649015329;

struct QuadratureConfig {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  std::size_t max_subdivisions = 1u << 16;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

double binomial(unsigned n, unsigned k);

// Beta(m, n) for positive integers.
double beta_integer(unsigned m, unsigned n);

// E1(x) for x > 0.
double expint_e1(double x);

// e^x * E1(x) for x > 0, without overflow for large x.
double exp_expint_e1(double x);

// 2F1(1, 1; c; z) for c > 1 and z < 1.
double hyp2f1_11(double c, double z);

QuadResult quad_interval(const std::function<double(double)>& f, double a, double b,
                         const QuadratureConfig& cfg = {});

// Integral over [0, inf); scale marks where f starts to decay.
QuadResult quad_halfline(const std::function<double(double)>& f, const QuadratureConfig& cfg = {},
                         double scale = 1.0);

}  // namespace hetfb
