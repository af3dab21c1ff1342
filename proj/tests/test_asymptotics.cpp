#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hetfb/asymptotics.hpp"
#include "hetfb/error.hpp"
#include "hetfb/exact_rate.hpp"
#include "hetfb/feedback.hpp"

using namespace hetfb;

namespace {
const double egamma = std::numbers::egamma;
}

TEST_CASE("normalizing constants at trivial points") {
  const auto nl = normalizing_constants(LinkProfile::noise_limited(1.0), std::numbers::e, 16, 16);
  CHECK(nl.a == doctest::Approx(1.0).epsilon(1e-12));
  const auto il = normalizing_constants(LinkProfile::interference_limited(1.0, 1.0), 2.0, 16, 16);
  CHECK(il.a == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(il.b == doctest::Approx(std::numbers::log2e).epsilon(1e-12));
}

TEST_CASE("closed-form constants") {
  const double rho = 3.0, K = 40.0;
  const auto c = normalizing_constants_closed(LinkProfile::noise_limited(rho), K, 16, 16);
  CHECK(c.a == doctest::Approx(std::log2(1 + rho * std::log(K))).epsilon(1e-14));
  CHECK(c.b == doctest::Approx(std::log2(1 + rho / (1 + rho * std::log(K)))).epsilon(1e-14));

  // best-1, interference limited, K = 2N
  const double N = 16, K1 = 32;
  const double r1 = std::pow(K1 - N, 1 / N);
  const double direct = std::log2(1 + r1 / (std::pow(K1, 1 / N) - r1));
  const auto il = normalizing_constants_closed(LinkProfile::interference_limited(1.0, 1.0), K1, 16, 1);
  CHECK(il.a == doctest::Approx(direct).epsilon(1e-13));
  CHECK(il.a == doctest::Approx(4.5599035577853539).epsilon(1e-13));
}

TEST_CASE("closed-form constants match the quantile path") {
  const std::vector<LinkProfile> profiles = {LinkProfile::noise_limited(1.0), LinkProfile::noise_limited(25.0),
                                             LinkProfile::interference_limited(1.0, 1.0),
                                             LinkProfile::interference_limited(8.0, 0.5)};
  for (const auto& p : profiles)
    for (unsigned M : {1u, 16u})
      for (double K : {20.0, 33.5, 100.0, 1000.0}) {
        if (M == 1 && K <= 16.0) continue;
        const auto g = normalizing_constants(p, K, 16, M);
        const auto c = normalizing_constants_closed(p, K, 16, M);
        CHECK(std::fabs(g.a - c.a) <= 1e-10 * std::fabs(c.a));
        CHECK(std::fabs(g.b - c.b) <= 1e-10 * std::fabs(c.b));
      }
}

TEST_CASE("single resource block makes both closed forms agree") {
  // with N = 1 the best-1 expression reduces to the full-feedback one
  for (double K : {3.0, 10.0, 200.0}) {
    const double r = std::pow(K - 1, 1.0);
    const double best1 = std::log2(1 + 2.0 * r / (K - r));
    const auto full = normalizing_constants_closed(LinkProfile::interference_limited(2.0, 1.0), K, 1, 1);
    CHECK(full.a == doctest::Approx(best1).epsilon(1e-13));
  }
}

TEST_CASE("scale constant is positive") {
  for (const auto& p : {LinkProfile::general(10.0, {2.0}), LinkProfile::noise_limited(0.1),
                        LinkProfile::interference_limited(3.0, 1.0), LinkProfile::general(1.0, {0.9, 0.5, 0.1})})
    for (unsigned M : {1u, 3u, 16u})
      for (double K : {2.0, 20.0, 500.0}) {
        if (K * M / 16.0 <= 1.0) continue;
        const auto c = normalizing_constants(p, K, 16, M);
        CHECK(c.b > 0.0);
        CHECK(c.a >= 0.0);
      }
}

TEST_CASE("constants need an effective sample above one") {
  CHECK_THROWS_AS(normalizing_constants(LinkProfile::noise_limited(1.0), 16.0, 16, 1), Error);
  CHECK_THROWS_AS(normalizing_constants(LinkProfile::noise_limited(1.0), 4.0, 16, 2), Error);
  CHECK_THROWS_AS(user_rate_asymptotic(LinkProfile::noise_limited(1.0), 10, 16, 1), Error);
  CHECK_THROWS_AS(normalizing_constants_closed(LinkProfile::general(1.0, {0.5}), 40.0, 16, 16), Error);
  CHECK_THROWS_AS(normalizing_constants_closed(LinkProfile::noise_limited(1.0), 40.0, 16, 4), Error);
}

TEST_CASE("scheduling probability") {
  CHECK(scheduling_probability(7, 16, 16) == 1.0);
  CHECK(scheduling_probability(1, 16, 4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(scheduling_probability(3, 16, 8) == doctest::Approx(0.875).epsilon(1e-15));
  for (unsigned K0 = 1; K0 < 60; K0 += 7)
    for (unsigned M = 1; M < 16; ++M) {
      const double s = scheduling_probability(K0, 16, M);
      CHECK(s > 0.0);
      if (std::pow(1.0 - M / 16.0, K0) > 1e-15) CHECK(s < 1.0);
      CHECK(s <= 1.0);
    }
}

TEST_CASE("asymptotic user and sum rates") {
  const auto p = LinkProfile::general(10.0, {2.0});
  const auto c = normalizing_constants(p, 12.0, 16, 16);
  CHECK(user_rate_asymptotic(p, 12, 16, 16) == doctest::Approx((c.a + egamma * c.b) / 12).epsilon(1e-14));
  const auto c4 = normalizing_constants(p, 12.0, 16, 4);
  CHECK(user_rate_asymptotic(p, 12, 16, 4) ==
        doctest::Approx(scheduling_probability(12, 16, 4) * (c4.a + egamma * c4.b) / 12).epsilon(1e-14));

  const auto one = normalizing_constants(LinkProfile::noise_limited(2.0), 2.0, 16, 16);
  CHECK(sum_rate_asymptotic({LinkProfile::noise_limited(2.0), LinkProfile::noise_limited(2.0)}, 16, 16) ==
        doctest::Approx(one.a + egamma * one.b).epsilon(1e-14));

  const std::vector<LinkProfile> cell = {LinkProfile::general(10.0, {2.0}), LinkProfile::noise_limited(3.0),
                                         LinkProfile::interference_limited(4.0, 1.0), LinkProfile::noise_limited(0.5),
                                         LinkProfile::general(1.0, {0.3, 0.1})};
  for (unsigned M : {4u, 8u, 16u}) {
    double acc = 0.0;
    for (const auto& q : cell) acc += user_rate_asymptotic(q, 5, 16, M);
    CHECK(sum_rate_asymptotic(cell, 16, M) == doctest::Approx(acc).epsilon(1e-14));
  }
}

TEST_CASE("asymptotic rate tracks the exact rate in a large cell") {
  const std::vector<LinkProfile> cell(50, LinkProfile::noise_limited(1.0));
  const double asym = sum_rate_asymptotic(cell, 16, 4);
  const double exact = sum_rate_exact(cell, 16, 4).total;
  CHECK(std::fabs(asym - exact) <= 0.05 * exact);
}

TEST_CASE("best-1 loss vanishes with many users") {
  double prev = 0.0, last = 0.0;
  for (unsigned K = 32; K <= 1024; K *= 2) {
    const std::vector<LinkProfile> cell(K, LinkProfile::noise_limited(1.0));
    const double r = sum_rate_asymptotic(cell, 16, 1) / sum_rate_asymptotic(cell, 16, 16);
    CHECK(r > prev);
    CHECK(r < 1.0);
    prev = last = r;
  }
  CHECK(last > 0.9);
}

TEST_CASE("tail diagnostics") {
  const auto nl = tail_convergence_diagnostic(LinkProfile::noise_limited(2.5), 16, 16);
  CHECK(nl.functional == TailFunctional::hazard_derivative);
  REQUIRE(nl.x.size() == nl.value.size());
  REQUIRE(nl.x.size() > 10);
  for (double v : nl.value) CHECK(std::fabs(v) < 1e-6);
  for (std::size_t i = 0; i < nl.x.size(); i += 7) {
    const double x = nl.x[i];
    const auto p = LinkProfile::noise_limited(2.5);
    CHECK(sinr_survival(p, x) / sinr_pdf(p, x) == doctest::Approx(2.5).epsilon(1e-12));
  }

  const auto il = tail_convergence_diagnostic(LinkProfile::interference_limited(3.0, 1.5), 16, 16);
  CHECK(il.functional == TailFunctional::tail_index);
  CHECK(il.converging);
  CHECK(il.limit_estimate == doctest::Approx(1.0).epsilon(1e-3));
  const auto ilp = LinkProfile::interference_limited(3.0, 1.5);
  const double x = 1e4 * 3.0 / 1.5;
  CHECK(x * bestm_pdf(ilp, 16, 16, x) / bestm_survival(ilp, 16, 16, x) == doctest::Approx(1.0).epsilon(1e-3));

  for (unsigned M : {1u, 4u}) {
    const auto d = tail_convergence_diagnostic(LinkProfile::general(10.0, {2.0, 0.5}), 16, M);
    CHECK(d.functional == TailFunctional::hazard_derivative);
    CHECK(d.converging);
    CHECK(std::fabs(d.value.back()) < std::fabs(d.value[d.value.size() - 11]));
  }
}
