#include <doctest.h>

#include <cmath>
#include <vector>

#include "hetfb/asymptotics.hpp"
#include "hetfb/error.hpp"
#include "hetfb/exact_rate.hpp"
#include "hetfb/planner.hpp"

using namespace hetfb;

namespace {

std::vector<LinkProfile> cell(unsigned K0) {
  std::vector<LinkProfile> c;
  for (unsigned k = 0; k < K0; ++k) c.push_back(LinkProfile::noise_limited(0.5 + 0.25 * (k % 5)));
  return c;
}

}  // namespace

TEST_CASE("exact planner returns the smallest sufficient feedback") {
  const auto c = cell(6);
  const FeedbackScan full = min_feedback_exact(c, 8, 0.95, true);
  REQUIRE(full.ratio.size() == 8);
  CHECK(full.ratio[7] == doctest::Approx(1.0).epsilon(1e-15));
  const double full_rate = sum_rate_exact(c, 8, 8).total;
  for (unsigned M = 1; M <= 8; ++M)
    CHECK(full.ratio[M - 1] == doctest::Approx(sum_rate_exact(c, 8, M).total / full_rate).epsilon(1e-12));
  CHECK(full.monotonicity_violations == 0);

  for (double eta : {0.5, 0.8, 0.9, 0.95, 0.99}) {
    const FeedbackScan s = min_feedback_exact(c, 8, eta);
    REQUIRE(s.m >= 1);
    CHECK(s.ratio_at_m >= eta);
    CHECK(s.ratio_at_m == full.ratio[s.m - 1]);
    if (s.m > 1) CHECK(full.ratio[s.m - 2] < eta);
    CHECK(s.evaluations <= full.evaluations);
  }
  CHECK(min_feedback_exact(c, 8, 1e-6).m == 1);
  CHECK(min_feedback_exact(c, 8, 1.0).m <= 8);
}

TEST_CASE("asymptotic planner") {
  const auto c = cell(30);
  const FeedbackScan s = min_feedback_asymptotic(c, 16, 0.9, true);
  REQUIRE(s.ratio.size() == 16);
  CHECK(s.ratio[15] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.ratio_at_m >= 0.9);
  CHECK(s.ratio[s.m - 1] == s.ratio_at_m);
  const double full = sum_rate_asymptotic(c, 16, 16);
  CHECK(s.ratio[2] == doctest::Approx(sum_rate_asymptotic(c, 16, 3) / full).epsilon(1e-13));

  // K0 M / N <= 1 leaves M = 1 unevaluated for ten users on sixteen blocks
  const FeedbackScan small = min_feedback_asymptotic(cell(10), 16, 0.5, true);
  CHECK(std::isnan(small.ratio[0]));
  CHECK(!std::isnan(small.ratio[1]));
  CHECK(small.m >= 2);

  CHECK_THROWS_AS(min_feedback_asymptotic(cell(1), 16, 0.9), Error);
  try {
    min_feedback_asymptotic(cell(1), 16, 0.9);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::infeasible);
  }
}

TEST_CASE("required feedback shrinks as the cell grows") {
  unsigned prev = 1000;
  for (unsigned K0 : {4u, 8u, 16u, 32u}) {
    const unsigned m = min_feedback_exact(cell(K0), 8, 0.9).m;
    CHECK(m <= prev);
    prev = m;
  }
}

TEST_CASE("plan combines both planners") {
  const auto c = cell(24);
  const PlanResult r = plan_feedback(c, 16, 0.9);
  CHECK(r.eta == 0.9);
  CHECK(r.exact.m == min_feedback_exact(c, 16, 0.9).m);
  CHECK(r.asymptotic.m == min_feedback_asymptotic(c, 16, 0.9).m);
  CHECK(std::abs(static_cast<int>(r.exact.m) - static_cast<int>(r.asymptotic.m)) <= 1);
}

TEST_CASE("planner argument checks") {
  CHECK_THROWS_AS(min_feedback_exact(cell(4), 8, 0.0), Error);
  CHECK_THROWS_AS(min_feedback_exact(cell(4), 8, 1.5), Error);
  CHECK_THROWS_AS(min_feedback_exact({}, 8, 0.9), Error);
  CHECK_THROWS_AS(min_feedback_asymptotic(cell(40), 8, -1.0), Error);
}
