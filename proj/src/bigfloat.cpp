#include "bigfloat.hpp"

namespace hetfb::mp {
namespace {
thread_local mpfr_prec_t t_precision = 256;
}

mpfr_prec_t working_precision() { return t_precision; }

PrecisionScope::PrecisionScope(mpfr_prec_t bits) : saved_(t_precision) { t_precision = bits; }
PrecisionScope::~PrecisionScope() { t_precision = saved_; }

BigFloat euler_constant() {
  BigFloat r;
  mpfr_const_euler(r.raw(), MPFR_RNDN);
  return r;
}

BigFloat ln2_constant() {
  BigFloat r;
  mpfr_const_log2(r.raw(), MPFR_RNDN);
  return r;
}

double unit_roundoff_log2() { return -static_cast<double>(t_precision); }

}  // namespace hetfb::mp
