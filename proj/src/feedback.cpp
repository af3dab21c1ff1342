#include "hetfb/feedback.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "feedback_exact.hpp"
#include "hetfb/error.hpp"

namespace hetfb {
namespace detail {
namespace {

std::mutex g_xi_mutex;
std::map<std::pair<unsigned, unsigned>, std::vector<mpq_class>> g_xi1;
std::map<std::tuple<unsigned, unsigned, unsigned>, std::vector<mpq_class>> g_xi2;

mpz_class binom_z(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

std::vector<mpq_class> compute_xi1(unsigned N, unsigned M) {
  std::vector<mpq_class> out(M);
  for (unsigned m = 0; m < M; ++m) {
    mpq_class acc = 0;
    for (unsigned i = m; i < M; ++i) {
      mpq_class term(mpz_class(binom_z(N, i) * binom_z(i, m) * (M - i)), mpz_class(M));
      term.canonicalize();
      if ((i - m) % 2 == 1) acc -= term;
      else acc += term;
    }
    out[m] = acc;
  }
  return out;
}

const std::vector<mpq_class>& xi1_locked(unsigned N, unsigned M) {
  auto key = std::make_pair(N, M);
  auto it = g_xi1.find(key);
  if (it == g_xi1.end()) it = g_xi1.emplace(key, compute_xi1(N, M)).first;
  return it->second;
}

std::vector<mpq_class> recursion(const std::vector<mpq_class>& a, unsigned M, unsigned tau) {
  if (a[0] == 0) fail(Errc::domain, "xi2 recurrence divides by xi1(N,M,0) = 0");
  const unsigned top = tau * (M - 1);
  std::vector<mpq_class> b(top + 1);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), a[0].get_num_mpz_t(), tau);
  mpz_pow_ui(den.get_mpz_t(), a[0].get_den_mpz_t(), tau);
  b[0] = mpq_class(num, den);
  b[0].canonicalize();
  for (unsigned m = 1; m < top; ++m) {
    mpq_class acc = 0;
    const unsigned lmax = std::min(m, M - 1);
    for (unsigned l = 1; l <= lmax; ++l) {
      const long weight = static_cast<long>(tau + 1) * l - static_cast<long>(m);
      if (weight == 0) continue;
      acc += mpq_class(weight) * a[l] * b[m - l];
    }
    b[m] = acc / (mpq_class(m) * a[0]);
  }
  if (top > 0) {
    mpz_pow_ui(num.get_mpz_t(), a[M - 1].get_num_mpz_t(), tau);
    mpz_pow_ui(den.get_mpz_t(), a[M - 1].get_den_mpz_t(), tau);
    b[top] = mpq_class(num, den);
    b[top].canonicalize();
  }
  return b;
}

std::vector<mpq_class> convolution(const std::vector<mpq_class>& a, unsigned tau) {
  std::vector<mpq_class> b{mpq_class(1)};
  for (unsigned t = 0; t < tau; ++t) {
    std::vector<mpq_class> next(b.size() + a.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (b[i] == 0) continue;
      for (std::size_t j = 0; j < a.size(); ++j) next[i + j] += b[i] * a[j];
    }
    b = std::move(next);
  }
  return b;
}

}  // namespace

const std::vector<mpq_class>& xi1_exact(unsigned N, unsigned M) {
  check_feedback_params(N, M);
  std::lock_guard<std::mutex> lock(g_xi_mutex);
  return xi1_locked(N, M);
}

std::vector<mpq_class> xi2_recursion_exact(unsigned N, unsigned M, unsigned tau) {
  if (tau == 0) return {mpq_class(1)};
  return recursion(xi1_exact(N, M), M, tau);
}

std::vector<mpq_class> xi2_convolution_exact(unsigned N, unsigned M, unsigned tau) {
  return convolution(xi1_exact(N, M), tau);
}

const std::vector<mpq_class>& xi2_exact(unsigned N, unsigned M, unsigned tau) {
  check_feedback_params(N, M);
  std::lock_guard<std::mutex> lock(g_xi_mutex);
  auto key = std::make_tuple(N, M, tau);
  auto it = g_xi2.find(key);
  if (it != g_xi2.end()) return it->second;
  const auto& a = xi1_locked(N, M);
  std::vector<mpq_class> b;
  if (tau == 0) b = {mpq_class(1)};
  else if (a[0] != 0) b = recursion(a, M, tau);
  else b = convolution(a, tau);
  return g_xi2.emplace(key, std::move(b)).first->second;
}

}  // namespace detail

void check_feedback_params(unsigned num_rb, unsigned feedback_m) {
  if (num_rb == 0) fail(Errc::invalid_argument, "number of resource blocks must be positive");
  if (feedback_m == 0 || feedback_m > num_rb) fail(Errc::invalid_argument, "feedback M must satisfy 1 <= M <= N");
}

double xi1(unsigned N, unsigned M, unsigned m) {
  const auto& c = detail::xi1_exact(N, M);
  if (m >= c.size()) fail(Errc::invalid_argument, "xi1 index m must be below M");
  return c[m].get_d();
}

std::vector<double> xi1_coefficients(unsigned N, unsigned M) {
  const auto& c = detail::xi1_exact(N, M);
  std::vector<double> out;
  for (const auto& q : c) out.push_back(q.get_d());
  return out;
}

double xi2(unsigned N, unsigned M, unsigned tau, unsigned m) {
  const auto& c = detail::xi2_exact(N, M, tau);
  if (m >= c.size()) fail(Errc::invalid_argument, "xi2 index m must not exceed tau(M-1)");
  return c[m].get_d();
}

std::vector<double> xi2_coefficients(unsigned N, unsigned M, unsigned tau) {
  const auto& c = detail::xi2_exact(N, M, tau);
  std::vector<double> out;
  for (const auto& q : c) out.push_back(q.get_d());
  return out;
}

BestMTransform::BestMTransform(unsigned num_rb, unsigned feedback_m) : n_(num_rb), m_(feedback_m) {
  check_feedback_params(num_rb, feedback_m);
  log_binom_.resize(n_ + 1);
  ratio_.resize(n_ + 1);
  log_binom_lower_.resize(n_);
  for (unsigned i = 0; i < n_; ++i)
    log_binom_lower_[i] = std::lgamma(static_cast<double>(n_)) - std::lgamma(i + 1.0) - std::lgamma(static_cast<double>(n_ - i));
  for (unsigned i = 0; i <= n_; ++i) {
    log_binom_[i] = std::lgamma(n_ + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n_ - i + 1.0);
    ratio_[i] = i == 0 ? 0.0 : static_cast<double>(n_ - i + 1) / i;
  }
}

// (1/M) sum_i min(i, M) C(N, i) s^i (1 - s)^(N - i)
double BestMTransform::survival(double s) const {
  if (!(s > 0.0)) return 0.0;
  if (s >= 1.0) return 1.0;
  const double f = 1.0 - s;
  if (m_ == n_) return s;
  double term = std::pow(f, static_cast<double>(n_));
  double acc = 0.0;
  if (term > 1e-280 && f > 1e-3) {
    const double odds = s / f;
    for (unsigned i = 1; i <= n_; ++i) {
      term *= ratio_[i] * odds;
      acc += std::min(i, m_) * term;
    }
  } else {
    const double ls = std::log(s);
    const double lf = std::log1p(-s);
    for (unsigned i = 1; i <= n_; ++i) acc += std::min(i, m_) * std::exp(log_binom_[i] + i * ls + (n_ - i) * lf);
  }
  return std::min(1.0, acc / m_);
}

// (1/M) sum_{r=1}^{M} N C(N-1, r-1) F^(N-r) s^(r-1)
double BestMTransform::density_factor(double s) const {
  if (s < 0.0) s = 0.0;
  if (s > 1.0) s = 1.0;
  const double f = 1.0 - s;
  double acc = 0.0;
  for (unsigned r = 1; r <= m_; ++r) {
    double t = static_cast<double>(n_) * std::exp(log_binom_lower_[r - 1]);
    if (n_ > r) t *= std::pow(f, static_cast<double>(n_ - r));
    if (r > 1) t *= std::pow(s, static_cast<double>(r - 1));
    acc += t;
  }
  return acc / m_;
}

double BestMTransform::inverse_survival(double tail) const {
  if (!(tail > 0.0) || !(tail <= 1.0)) fail(Errc::domain, "tail probability must lie in (0, 1]");
  if (tail == 1.0) return 1.0;
  if (m_ == n_) return tail;
  if (m_ == 1) return -std::expm1(std::log1p(-tail) / n_);
  const double log_tail = std::log(tail);
  auto g = [&](double s) { return std::log(survival(s)) - log_tail; };
  double lo = tail * m_ / n_;
  double hi = tail;
  if (g(lo) >= 0.0) return lo;
  if (g(hi) <= 0.0) return hi;
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (root.first + root.second);
}

double bestm_cdf(const LinkProfile& p, unsigned N, unsigned M, double x) {
  check_feedback_params(N, M);
  // positive-term form: i of the N blocks exceed x and the pick lands below
  const double F = sinr_cdf(p, x);
  const double s = sinr_survival(p, x);
  if (F <= 0.0) return 0.0;
  if (s <= 0.0) return 1.0;
  const double logF = std::log(F), logS = std::log(s);
  double acc = 0.0;
  for (unsigned i = 0; i < M; ++i) {
    const double logc = std::lgamma(N + 1.0) - std::lgamma(i + 1.0) - std::lgamma(N - i + 1.0);
    acc += std::exp(logc + i * logS + (N - i) * logF) * (M - i) / M;
  }
  return std::min(acc, 1.0);
}

double selected_cdf_conditional(const LinkProfile& p, unsigned N, unsigned M, unsigned tau, double x) {
  if (tau == 0) fail(Errc::invalid_argument, "tau must be at least 1");
  const std::vector<double> c = xi2_coefficients(N, M, tau);
  const double F = sinr_cdf(p, x);
  double acc = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m) acc += c[m] * std::pow(F, static_cast<double>(N * tau - m));
  return acc;
}

double bestm_survival(const LinkProfile& p, unsigned N, unsigned M, double x) {
  return BestMTransform(N, M).survival(sinr_survival(p, x));
}

double bestm_pdf(const LinkProfile& p, unsigned N, unsigned M, double x) {
  return BestMTransform(N, M).density_factor(sinr_survival(p, x)) * sinr_pdf(p, x);
}

double bestm_survival_inv(const LinkProfile& p, unsigned N, unsigned M, double tail) {
  const double s = BestMTransform(N, M).inverse_survival(tail);
  if (s >= 1.0) return 0.0;
  return sinr_survival_inv(p, s);
}

double bestm_cdf_inv(const LinkProfile& p, unsigned N, unsigned M, double q) {
  if (!(q >= 0.0) || !(q < 1.0)) fail(Errc::domain, "quantile level must lie in [0, 1)");
  if (q == 0.0) return 0.0;
  return bestm_survival_inv(p, N, M, 1.0 - q);
}

double feedback_count_pmf(unsigned K0, unsigned N, unsigned M, unsigned tau) {
  check_feedback_params(N, M);
  if (tau > K0) return 0.0;
  const double p = static_cast<double>(M) / N;
  if (M == N) return tau == K0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::binomial_distribution<double>(K0, p), tau);
}

std::vector<unsigned> select_best_m(const double* values, unsigned N, unsigned M) {
  check_feedback_params(N, M);
  std::vector<unsigned> idx(N);
  std::iota(idx.begin(), idx.end(), 0u);
  std::partial_sort(idx.begin(), idx.begin() + M, idx.end(), [&](unsigned a, unsigned b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  });
  idx.resize(M);
  return idx;
}

}  // namespace hetfb
