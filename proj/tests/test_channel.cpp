#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hetfb/channel.hpp"
#include "hetfb/error.hpp"
#include "hetfb/rng.hpp"
#include "hetfb/specfun.hpp"

using namespace hetfb;

TEST_CASE("mixture weights") {
  CHECK(varpi({3.0}, 0) == 1.0);
  CHECK(varpi({2.0, 1.0}, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(varpi({2.0, 1.0}, 1) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK_THROWS_AS(varpi({2.0, 2.0}, 0), Error);
  const auto p = LinkProfile::general(4.0, {2.0, 1.0});
  // the density must integrate to one
  const double mass = quad_halfline([&](double x) { return sinr_pdf(p, x); }, {}, 4.0).value;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sinr_cdf(p, 1e6) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profile construction") {
  const auto p = LinkProfile::general(5.0, {0.5, 3.0, 1.0});
  CHECK(p.kind() == ProfileKind::general);
  CHECK(p.interferers() == std::vector<double>{3.0, 1.0, 0.5});
  CHECK_THROWS_AS(LinkProfile::general(5.0, {1.0, 1.0 + 1e-12}), Error);
  CHECK_THROWS_AS(LinkProfile::general(-1.0, {1.0}), Error);
  CHECK_THROWS_AS(LinkProfile::general(1.0, {}), Error);
  CHECK_THROWS_AS(LinkProfile::noise_limited(0.0), Error);
  CHECK_THROWS_AS(LinkProfile::interference_limited(1.0, std::nan("")), Error);
}

TEST_CASE("SINR distribution closed forms") {
  const auto nl = LinkProfile::noise_limited(1.0);
  CHECK(sinr_cdf(nl, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  const auto il = LinkProfile::interference_limited(1.0, 1.0);
  CHECK(sinr_cdf(il, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sinr_cdf_inv(il, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sinr_cdf_inv(nl, 1.0 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  const auto il3 = LinkProfile::interference_limited(6.0, 2.0);
  CHECK(sinr_cdf_inv(il3, 0.8) == doctest::Approx(3.0 * 0.8 / 0.2).epsilon(1e-14));
}

TEST_CASE("inverse round trip") {
  for (const auto& p : {LinkProfile::general(7.0, {2.0, 0.3}), LinkProfile::general(100.0, {40.0, 9.0, 1.0, 0.2}),
                        LinkProfile::general(0.5, {3.0})})
    for (double q : {0.01, 0.5, 0.99}) CHECK(sinr_cdf(p, sinr_cdf_inv(p, q)) == doctest::Approx(q).epsilon(1e-10));
  const auto p = LinkProfile::general(7.0, {2.0, 0.3});
  for (double tail : {1e-3, 1e-30, 1e-200})
    CHECK(sinr_survival(p, sinr_survival_inv(p, tail)) == doctest::Approx(tail).epsilon(1e-10));
}

TEST_CASE("CDF properties") {
  for (const auto& p : {LinkProfile::noise_limited(3.0), LinkProfile::interference_limited(3.0, 0.5),
                        LinkProfile::general(3.0, {1.2, 0.4})}) {
    CHECK(sinr_cdf(p, 0.0) == 0.0);
    CHECK(sinr_cdf(p, -1.0) == 0.0);
    double prev = 0.0;
    for (double x = 1e-4; x < 1e7; x *= 1.3) {
      const double f = sinr_cdf(p, x);
      CHECK(f >= prev);
      prev = f;
    }
    CHECK(prev > 0.9999);
  }
}

TEST_CASE("hazard tail tends to the signal level") {
  const auto p = LinkProfile::general(2.0, {1.5, 0.5});
  double prev_gap = HUGE_VAL;
  for (double m : {20.0, 40.0, 80.0}) {
    const double x = m * p.rho0();
    const double gap = std::fabs(sinr_survival(p, x) / sinr_pdf(p, x) - p.rho0());
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.05 * p.rho0());
  const auto nl = LinkProfile::noise_limited(2.0);
  for (double m : {20.0, 40.0, 80.0})
    CHECK(sinr_survival(nl, m * 2.0) / sinr_pdf(nl, m * 2.0) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("strong single interferer approaches the interference-limited form") {
  const auto il = LinkProfile::interference_limited(2.0, 0.7);
  const auto g = LinkProfile::general(2.0e6, {0.7e6});
  for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) CHECK(std::fabs(sinr_cdf(g, x) - sinr_cdf(il, x)) < 1e-4);
}

TEST_CASE("path loss and association") {
  CHECK(path_loss_db(Tier::macro, 100.0) == doctest::Approx(90.5).epsilon(1e-14));
  CHECK(path_loss_db(Tier::pico, 100.0) == doctest::Approx(104.0).epsilon(1e-14));
  CHECK_THROWS_AS(path_loss_db(Tier::macro, 0.5), Error);
  CHECK(serving_cell({1.0, 3.0, 3.0, 2.0}) == 1);
  RadioParams r;
  // -170 dBm/Hz over 5 MHz / 16
  CHECK(noise_power_per_rb_mw(r) == doctest::Approx(std::pow(10.0, (-170.0 + 10.0 * std::log10(5e6 / 16.0)) / 10.0)).epsilon(1e-12));
}

TEST_CASE("link profile from geometry") {
  std::vector<Cell> cells = {{Tier::macro, {0, 0}, 43.0}, {Tier::macro, {600, 0}, 43.0}, {Tier::pico, {100, 0}, 30.0},
                             {Tier::pico, {5000, 0}, 30.0}};
  RadioParams radio;
  const UserLink link = build_link_profile(cells, {50, 0}, {0, 0, 0, 0}, radio);
  // macro at 50 m: 43 - 12.04 - (15.3 + 37.6 log10 50) vs pico at 50 m: 30 - 12.04 - (30.6 + 36.7 log10 50)
  CHECK(link.serving_cell == 0);
  CHECK(link.folded_count == 1);
  CHECK(link.profile.num_interferers() == 2);
  const double per_rb = 10.0 * std::log10(16.0);
  const double serving = std::pow(10.0, (43.0 - per_rb - path_loss_db(Tier::macro, 50.0)) / 10.0);
  const double folded = std::pow(10.0, (30.0 - per_rb - path_loss_db(Tier::pico, 4950.0)) / 10.0);
  CHECK(link.folded_mw == doctest::Approx(folded).epsilon(1e-12));
  CHECK(link.profile.rho0() == doctest::Approx(serving / (link.noise_mw + folded)).epsilon(1e-12));
  // shadowing shifts association
  const UserLink shadowed = build_link_profile(cells, {50, 0}, {-30, 0, 0, 0}, radio);
  CHECK(shadowed.serving_cell == 2);
}

TEST_CASE("equal interferers are nudged apart") {
  std::vector<Cell> cells = {{Tier::macro, {0, 0}, 43.0}, {Tier::macro, {0, 1000}, 43.0}, {Tier::macro, {0, -1000}, 43.0}};
  const UserLink link = build_link_profile(cells, {100, 0}, {0, 0, 0}, RadioParams{});
  CHECK(link.tie_perturbed);
  CHECK(link.profile.num_interferers() == 2);
  const auto& r = link.profile.interferers();
  CHECK(r[1] == doctest::Approx(r[0] * (1.0 - 1e-6)).epsilon(1e-12));
  CHECK_THROWS_AS(build_link_profile(cells, {100, 0}, {0, 0, 0}, RadioParams{}, false), Error);
}

TEST_CASE("small-scale fading draws") {
  Rng rng = make_rng(11, 0, 0);
  const int n = 1000000;
  std::vector<double> power(n);
  double sum = 0.0;
  for (auto& v : power) {
    v = std::norm(draw_small_scale(rng));
    sum += v;
  }
  CHECK(std::fabs(sum / n - 1.0) < 0.01);
  std::sort(power.begin(), power.end());
  double ks = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = -std::expm1(-power[i]);
    ks = std::max({ks, std::fabs(f - static_cast<double>(i) / n), std::fabs(f - static_cast<double>(i + 1) / n)});
  }
  CHECK(ks < 0.002);

  // neighbouring resource blocks are uncorrelated
  const auto p = LinkProfile::noise_limited(1.0);
  std::vector<double> buf(16);
  double sxy = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  const int slots = 200000;
  for (int s = 0; s < slots; ++s) {
    slot_sinr(p, 16, rng, buf.data());
    sx += buf[3];
    sy += buf[4];
    sxy += buf[3] * buf[4];
    sxx += buf[3] * buf[3];
    syy += buf[4] * buf[4];
  }
  const double cov = sxy / slots - sx * sy / slots / slots;
  const double corr = cov / std::sqrt((sxx / slots - sx * sx / slots / slots) * (syy / slots - sy * sy / slots / slots));
  CHECK(std::fabs(corr) < 0.01);
}

TEST_CASE("slot SINR follows the analytic distribution") {
  const auto nl = LinkProfile::noise_limited(2.5);
  std::vector<double> buf(16);
  Rng rng = make_rng(3, 1, 1);
  slot_sinr(nl, 16, rng, buf.data());
  for (double v : buf) CHECK(v >= 0.0);

  const auto p = LinkProfile::general(4.0, {1.5, 0.3});
  const int slots = 62500;
  std::vector<double> grid;
  for (double q = 0.05; q < 1.0; q += 0.1) grid.push_back(sinr_cdf_inv(p, q));
  std::vector<long> below(grid.size(), 0);
  for (int s = 0; s < slots; ++s) {
    slot_sinr(p, 16, rng, buf.data());
    for (double v : buf) {
      CHECK_FALSE(v < 0.0);
      for (std::size_t g = 0; g < grid.size(); ++g) below[g] += v <= grid[g];
    }
  }
  const double n = slots * 16.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double f = sinr_cdf(p, grid[g]);
    CHECK(std::fabs(below[g] / n - f) <= 3.0 * std::sqrt(f * (1.0 - f) / n));
  }
}

TEST_CASE("counter-based generators") {
  Rng a = make_rng(5, 7, 1), b = make_rng(5, 7, 1), c = make_rng(5, 8, 1), d = make_rng(5, 7, 0);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());
}
