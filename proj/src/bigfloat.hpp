#pragma once

// Thin RAII wrapper over MPFR. Every new value takes the calling thread's
// working precision, set through PrecisionScope.

#include <gmpxx.h>
#include <mpfr.h>

#include <climits>
#include <utility>

namespace hetfb::mp {

mpfr_prec_t working_precision();

class PrecisionScope {
 public:
  explicit PrecisionScope(mpfr_prec_t bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

class BigFloat {
 public:
  BigFloat() { mpfr_init2(v_, working_precision()); mpfr_set_zero(v_, 1); }
  BigFloat(double x) { mpfr_init2(v_, working_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  BigFloat(int x) { mpfr_init2(v_, working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigFloat(long x) { mpfr_init2(v_, working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  BigFloat(unsigned x) { mpfr_init2(v_, working_precision()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  BigFloat(unsigned long x) { mpfr_init2(v_, working_precision()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  explicit BigFloat(const mpq_class& q) { mpfr_init2(v_, working_precision()); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }
  explicit BigFloat(const mpz_class& z) { mpfr_init2(v_, working_precision()); mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
  BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  ~BigFloat() { mpfr_clear(v_); }

  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }

  BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
  BigFloat& operator*=(long s) { mpfr_mul_si(v_, v_, s, MPFR_RNDN); return *this; }
  BigFloat& operator/=(long s) { mpfr_div_si(v_, v_, s, MPFR_RNDN); return *this; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  long exponent2() const { return mpfr_zero_p(v_) ? LONG_MIN / 2 : static_cast<long>(mpfr_get_exp(v_)); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

inline BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
inline BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
inline BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
inline BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
inline BigFloat operator+(BigFloat a, double b) { mpfr_add_d(a.raw(), a.raw(), b, MPFR_RNDN); return a; }
inline BigFloat operator+(double b, BigFloat a) { mpfr_add_d(a.raw(), a.raw(), b, MPFR_RNDN); return a; }
inline BigFloat operator-(BigFloat a, double b) { mpfr_sub_d(a.raw(), a.raw(), b, MPFR_RNDN); return a; }
inline BigFloat operator-(double b, BigFloat a) { mpfr_d_sub(a.raw(), b, a.raw(), MPFR_RNDN); return a; }
inline BigFloat operator*(BigFloat a, double b) { mpfr_mul_d(a.raw(), a.raw(), b, MPFR_RNDN); return a; }
inline BigFloat operator*(double b, BigFloat a) { mpfr_mul_d(a.raw(), a.raw(), b, MPFR_RNDN); return a; }
inline BigFloat operator/(BigFloat a, double b) { mpfr_div_d(a.raw(), a.raw(), b, MPFR_RNDN); return a; }
inline BigFloat operator/(double b, BigFloat a) { mpfr_d_div(a.raw(), b, a.raw(), MPFR_RNDN); return a; }
inline BigFloat operator-(BigFloat a) { mpfr_neg(a.raw(), a.raw(), MPFR_RNDN); return a; }

inline bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.raw(), b.raw()) != 0; }
inline bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.raw(), b.raw()) != 0; }
inline bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.raw(), b.raw()) != 0; }
inline bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.raw(), b.raw()) != 0; }
inline bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.raw(), b.raw()) != 0; }
inline bool operator<(const BigFloat& a, double b) { return mpfr_cmp_d(a.raw(), b) < 0; }
inline bool operator>(const BigFloat& a, double b) { return mpfr_cmp_d(a.raw(), b) > 0; }
inline bool operator<=(const BigFloat& a, double b) { return mpfr_cmp_d(a.raw(), b) <= 0; }
inline bool operator>=(const BigFloat& a, double b) { return mpfr_cmp_d(a.raw(), b) >= 0; }

inline BigFloat abs(BigFloat a) { mpfr_abs(a.raw(), a.raw(), MPFR_RNDN); return a; }
inline BigFloat exp(BigFloat a) { mpfr_exp(a.raw(), a.raw(), MPFR_RNDN); return a; }
inline BigFloat log(BigFloat a) { mpfr_log(a.raw(), a.raw(), MPFR_RNDN); return a; }
inline BigFloat log1p(BigFloat a) { mpfr_log1p(a.raw(), a.raw(), MPFR_RNDN); return a; }
inline BigFloat expm1(BigFloat a) { mpfr_expm1(a.raw(), a.raw(), MPFR_RNDN); return a; }
inline BigFloat sqrt(BigFloat a) { mpfr_sqrt(a.raw(), a.raw(), MPFR_RNDN); return a; }
inline BigFloat pow(BigFloat a, unsigned long n) { mpfr_pow_ui(a.raw(), a.raw(), n, MPFR_RNDN); return a; }
inline BigFloat pow(BigFloat a, long n) { mpfr_pow_si(a.raw(), a.raw(), n, MPFR_RNDN); return a; }

BigFloat euler_constant();
BigFloat ln2_constant();
// 2^-(working precision)
double unit_roundoff_log2();

}  // namespace hetfb::mp
