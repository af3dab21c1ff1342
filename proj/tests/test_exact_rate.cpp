#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hetfb/error.hpp"
#include "hetfb/exact_rate.hpp"
#include "hetfb/rng.hpp"
#include "hetfb/specfun.hpp"

using namespace hetfb;

namespace {

double binom(unsigned n, unsigned k) { return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0))); }

// reference values from 40-digit evaluation
struct Frozen {
  LinkProfile profile;
  std::vector<unsigned> eps;
  std::vector<double> g;
};

std::vector<Frozen> frozen_g() {
  return {
      {LinkProfile::general(10.0, {2.0}), {1, 2, 4, 16, 64},
       {1.9687952696835380, 2.6434947231927919, 3.2480333276121821, 4.1741441041853813, 4.8208537532288489}},
      {LinkProfile::general(20.0, {3.0, 0.5}), {1, 2, 4, 16, 64},
       {2.2672170639204170, 3.0071535730159235, 3.6567320664801931, 4.6438931006397387, 5.3397107987772909}},
      {LinkProfile::general(5.0, {1.5, 0.7, 0.2}), {1, 2, 4, 16, 64},
       {1.2065655632620756, 1.6761777364751387, 2.1301849234032690, 2.8894179163997910, 3.4659135316311894}},
      {LinkProfile::interference_limited(1.0, 1.0), {1, 8, 64}, {1.4426950408889634, 3.9210390218446470, 6.8439878812945760}},
      {LinkProfile::interference_limited(10.0, 1.0), {1, 8, 64}, {3.6910312165415137, 7.0829094894971807, 10.145660176810563}},
      {LinkProfile::noise_limited(1.0), {1, 8, 64}, {0.86034738227088595, 1.8222233388796812, 2.4892684581926879}},
      {LinkProfile::noise_limited(31.6), {1, 8, 64}, {4.3292595329706660, 6.3036799543881131, 7.1901158773829865}},
  };
}

}  // namespace

TEST_CASE("exponential-power integral") {
  // gamma = 1 reduces to e^(alpha beta) E1(alpha beta)
  CHECK(integral_I2(1.0, 1.0, 1) == doctest::Approx(exp_expint_e1(1.0)).epsilon(1e-14));
  CHECK(integral_I2(1.0, 1.0, 2) == doctest::Approx(0.40365263767680592566).epsilon(1e-13));
  CHECK(integral_I2(0.5, 2.0, 3) == doctest::Approx(0.074543420290399259293).epsilon(1e-13));
  CHECK(integral_I2(7.0, 0.3, 12) == doctest::Approx(42544.453024565012373).epsilon(1e-12));
  CHECK(integral_I2(0.01, 50.0, 9) == doctest::Approx(2.9887770905521638941e-15).epsilon(1e-12));
  for (unsigned g = 1; g < 10; ++g) CHECK(integral_I2(0.8, 1.5, g + 1) < integral_I2(0.8, 1.5, g));
  CHECK_THROWS_AS(integral_I2(2.0, 3.0, 0), Error);
  CHECK_THROWS_AS(integral_I2(0.0, 1.0, 1), Error);
  CHECK_THROWS_AS(integral_I2(1.0, 0.0, 1), Error);
}

TEST_CASE("rational-exponential integral") {
  CHECK(integral_I1(1.0, 2.0, 1) == doctest::Approx(0.23501874543497148964).epsilon(1e-13));
  CHECK(integral_I1(0.7, 3.0, 4) == doctest::Approx(0.0046830492505489964805).epsilon(1e-12));
  CHECK(integral_I1(2.0, 1.0, 2) == doctest::Approx(0.22265723377644516939).epsilon(1e-13));
  CHECK(integral_I1(1.3, 4.0, 0) == doctest::Approx(integral_I2(1.3, 1.0, 1)).epsilon(1e-14));
  // beta near 1 merges the two poles
  CHECK(integral_I1(1.0, 1.0 + 1e-8, 2) == doctest::Approx(integral_I2(1.0, 1.0, 3)).epsilon(1e-7));
  for (double beta : {0.2, 0.9, 1.1, 6.0})
    for (unsigned g : {1u, 3u}) {
      const double q = quad_halfline([&](double x) { return std::exp(-0.6 * x) / ((1 + x) * std::pow(beta + x, g)); }).value;
      CHECK(integral_I1(0.6, beta, g) == doctest::Approx(q).epsilon(1e-11));
    }
}

TEST_CASE("partial fractions") {
  const auto one = psi_coefficients({2.0}, {3});
  REQUIRE(one.size() == 1);
  CHECK(one[0] == std::vector<double>{0.0, 0.0, 1.0});

  // two poles against the binomial expansion around each pole
  const std::vector<double> d = {0.5, 2.5};
  const std::vector<unsigned> j = {3, 2};
  const auto psi = psi_coefficients(d, j);
  for (unsigned b = 0; b < 2; ++b) {
    const unsigned o = 1 - b;
    for (unsigned i = 1; i <= j[b]; ++i) {
      const unsigned k = j[b] - i;
      const double expect = binom(k + j[o] - 1, j[o] - 1) * (k % 2 ? -1.0 : 1.0) / std::pow(d[o] - d[b], k + j[o]);
      CHECK(psi[b][i - 1] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  const std::vector<double> d3 = {0.3, 1.1, 4.0};
  const std::vector<unsigned> j3 = {2, 3, 1};
  const auto psi3 = psi_coefficients(d3, j3);
  for (int n = 0; n < 20; ++n) {
    const double x = 0.05 + 0.7 * n;
    double direct = 1.0, recon = 0.0;
    for (unsigned b = 0; b < 3; ++b) {
      direct /= std::pow(x + d3[b], j3[b]);
      for (unsigned i = 1; i <= j3[b]; ++i) recon += psi3[b][i - 1] / std::pow(x + d3[b], i);
    }
    CHECK(recon == doctest::Approx(direct).epsilon(1e-10));
  }
  CHECK_THROWS_AS(psi_coefficients({1.0, 1.0}, {1, 1}), Error);
}

TEST_CASE("order-statistic rate values") {
  const double ln2 = std::numbers::ln2;
  CHECK(g_k(LinkProfile::interference_limited(1.0, 1.0), 1) == doctest::Approx(1.0 / ln2).epsilon(1e-13));
  CHECK(g_k(LinkProfile::noise_limited(1.0), 1) == doctest::Approx(0.86034738227088595119).epsilon(1e-13));
  CHECK(g_k(LinkProfile::noise_limited(1.0), 1) == doctest::Approx(exp_expint_e1(1.0) / ln2).epsilon(1e-13));
  for (const auto& f : frozen_g())
    for (std::size_t i = 0; i < f.eps.size(); ++i) {
      CHECK(g_k(f.profile, f.eps[i]) == doctest::Approx(f.g[i]).epsilon(1e-10));
      CHECK(g_k_quadrature(f.profile, f.eps[i]) == doctest::Approx(f.g[i]).epsilon(1e-10));
    }
}

TEST_CASE("closed form agrees with quadrature") {
  for (const auto& p : {LinkProfile::general(10.0, {2.0}), LinkProfile::general(20.0, {3.0, 0.5}),
                        LinkProfile::general(5.0, {1.5, 0.7, 0.2}), LinkProfile::general(40.0, {4.0, 2.0, 1.0, 0.3})})
    for (unsigned e : {1u, 2u, 3u, 7u, 20u, 64u}) {
      const GkResult c = g_k_closed_form(p, e);
      CHECK(c.rel_error <= 1e-12);
      CHECK(std::fabs(c.value - g_k_quadrature(p, e)) <= 1e-8 * c.value);
    }
}

TEST_CASE("order-statistic rate by simulation") {
  const auto p = LinkProfile::general(20.0, {3.0, 0.5});
  Rng rng = make_rng(5, 0, 0);
  std::exponential_distribution<double> ex(1.0);
  for (unsigned eps : {1u, 4u}) {
    const int n = eps == 1 ? 10000000 : 1000000;
    double sum = 0.0, sq = 0.0;
    for (int t = 0; t < n; ++t) {
      double best = 0.0;
      for (unsigned k = 0; k < eps; ++k) {
        double den = 1.0;
        for (double r : p.interferers()) den += r * ex(rng);
        best = std::max(best, p.rho0() * ex(rng) / den);
      }
      const double v = std::log2(1.0 + best);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / n, se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::fabs(mean - g_k(p, eps)) <= 3.0 * se);
  }
}

TEST_CASE("order-statistic rate is increasing and concave") {
  for (const auto& f : frozen_g()) {
    double prev = 0.0, prev_step = 1e300;
    for (unsigned e = 1; e <= 64; ++e) {
      const double v = g_k(f.profile, e);
      CHECK(v > prev);
      if (e > 1) CHECK(v - prev <= prev_step + 1e-12);
      if (e > 1) prev_step = v - prev;
      prev = v;
    }
  }
}

TEST_CASE("closed-form limits") {
  CHECK_THROWS_AS(g_k_closed_form(LinkProfile::noise_limited(1.0), 65), Error);
  const auto five = LinkProfile::general(10.0, {2.0, 1.5, 1.0, 0.5, 0.25});
  CHECK_THROWS_AS(g_k_closed_form(five, 2), Error);
  CHECK_THROWS_AS(g_k(five, 2), Error);
  CHECK(g_k_quadrature(five, 2) > g_k_quadrature(five, 1));
  try {
    g_k(five, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cancellation);
  }
  CHECK_THROWS_AS(g_k(LinkProfile::noise_limited(1.0), 0), Error);
}

TEST_CASE("user rate identities") {
  const auto p = LinkProfile::general(10.0, {2.0});
  CHECK(user_rate_exact(p, 1, 16, 16) == doctest::Approx(g_k(p, 1)).epsilon(1e-12));
  CHECK(user_rate_exact(p, 1, 16, 1) == doctest::Approx(g_k(p, 16) / 16.0).epsilon(1e-12));
  for (unsigned K0 : {2u, 5u, 12u}) {
    const std::vector<LinkProfile> same(K0, p);
    const SumRate s = sum_rate_exact(same, 8, 8);
    CHECK(s.total == doctest::Approx(g_k(p, K0)).epsilon(1e-12));
    for (double u : s.per_user) CHECK(u == doctest::Approx(s.total / K0).epsilon(1e-12));
  }
  const RateBreakdown d = user_rate_exact_detail(p, 20, 16, 3);
  double acc = d.quadrature_part;
  for (double c : d.per_tau) acc += c;
  CHECK(acc == doctest::Approx(d.user_rate).epsilon(1e-13));
  CHECK(d.closed_form_part + d.quadrature_part == doctest::Approx(d.user_rate).epsilon(1e-13));
  CHECK(d.per_tau.size() == d.closed_form_tau_max);
}

TEST_CASE("rate routes agree") {
  const std::vector<LinkProfile> cell = {LinkProfile::general(10.0, {2.0}), LinkProfile::noise_limited(3.0),
                                         LinkProfile::general(40.0, {4.0, 2.0, 1.0}), LinkProfile::interference_limited(5.0, 1.0),
                                         LinkProfile::general(0.5, {0.2, 0.1})};
  for (unsigned M : {1u, 2u, 5u}) {
    const SumRate a = sum_rate_exact(cell, 8, M, RateRoute::closed_form);
    const SumRate b = sum_rate_exact(cell, 8, M, RateRoute::quadrature);
    const SumRate c = sum_rate_exact(cell, 8, M, RateRoute::automatic);
    CHECK(a.total == doctest::Approx(b.total).epsilon(1e-8));
    CHECK(c.total == doctest::Approx(a.total).epsilon(1e-12));
  }
}

TEST_CASE("sum rate grows with feedback and with users") {
  const std::vector<LinkProfile> base = {LinkProfile::general(10.0, {2.0}), LinkProfile::noise_limited(3.0),
                                         LinkProfile::general(40.0, {4.0, 2.0, 1.0}), LinkProfile::noise_limited(0.7)};
  double prev = 0.0;
  for (unsigned M = 1; M <= 8; ++M) {
    const double v = sum_rate_exact(base, 8, M).total;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  std::vector<LinkProfile> cell;
  prev = 0.0;
  for (unsigned k = 0; k < 12; ++k) {
    cell.push_back(LinkProfile::noise_limited(1.0 + k));
    const double v = sum_rate_exact(cell, 8, 2).total;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("weak interference approaches the noise-limited rate") {
  const double nl = user_rate_exact(LinkProfile::noise_limited(4.0), 10, 16, 4);
  const double weak = user_rate_exact(LinkProfile::general(4.0, {1e-6}), 10, 16, 4);
  CHECK(std::fabs(weak - nl) <= 1e-3 * nl);
}

TEST_CASE("user rate argument checks") {
  const auto p = LinkProfile::noise_limited(1.0);
  CHECK_THROWS_AS(user_rate_exact(p, 0, 16, 1), Error);
  CHECK_THROWS_AS(user_rate_exact(p, 4, 16, 17), Error);
  CHECK_THROWS_AS(user_rate_exact(p, 4, 16, 0), Error);
  CHECK_THROWS_AS(sum_rate_exact({}, 16, 1), Error);
}
