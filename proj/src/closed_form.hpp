#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "bigfloat.hpp"
#include "hetfb/channel.hpp"

namespace hetfb::detail {

inline constexpr unsigned closed_form_eps_limit = 64;
inline constexpr std::size_t closed_form_interferer_limit = 4;

bool closed_form_supported(const LinkProfile& p);

// g(eps) = int log2(1+x) d(F^eps) for eps = 1..64 by the closed-form sums,
// evaluated in MPFR. The working precision grows until two evaluations
// 64 bits apart agree to target_rel_error or the precision cap is reached.
class ClosedFormTable {
 public:
  static constexpr double target_rel_error = 1e-40;
  static constexpr long max_precision_bits = 4096;

  static std::shared_ptr<const ClosedFormTable> get(const LinkProfile& p);

  unsigned max_eps() const { return static_cast<unsigned>(g_.size()) - 1; }
  long precision_bits() const { return precision_; }
  // Value at precision_bits(); index by eps.
  const mp::BigFloat& g(unsigned eps) const { return g_.at(eps); }
  double rel_error(unsigned eps) const { return err_.at(eps); }
  double max_rel_error() const;
  std::size_t terms_audit() const { return terms_; }

 private:
  ClosedFormTable() = default;
  std::vector<mp::BigFloat> g_;
  std::vector<double> err_;
  long precision_ = 0;
  std::size_t terms_ = 0;
};

// Inner integrals T_l = int_0^inf (1 - F)^(l+1) / (1 + x) dx for l = 0..count-1
// at the current working precision.
std::vector<mp::BigFloat> tail_power_integrals(const LinkProfile& p, unsigned count);

// Partial-fraction coefficients of S(x)^(l+1), S = sum_b w_b / (x + d_b), by
// enumerating j-vectors (literal) or by multiplying out one factor at a time.
// Result[b][i-1] multiplies (x + d_b)^(-i).
std::vector<std::vector<mp::BigFloat>> power_coefficients_literal(const std::vector<mp::BigFloat>& w,
                                                                  const std::vector<mp::BigFloat>& d,
                                                                  unsigned power);
std::vector<std::vector<mp::BigFloat>> power_coefficients_step(const std::vector<std::vector<mp::BigFloat>>& a,
                                                               const std::vector<mp::BigFloat>& w,
                                                               const std::vector<mp::BigFloat>& d);

std::size_t j_vector_count(std::size_t num_interferers, unsigned power);

}  // namespace hetfb::detail
