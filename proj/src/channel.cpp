#include "hetfb/channel.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hetfb/error.hpp"
#include "hetfb/log.hpp"

namespace hetfb {
namespace {

void check_level(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(Errc::invalid_argument, std::string(what) + " must be positive and finite");
}

void check_distinct(const std::vector<double>& sorted_desc) {
  for (std::size_t i = 1; i < sorted_desc.size(); ++i) {
    const double hi = sorted_desc[i - 1];
    const double lo = sorted_desc[i];
    if (hi - lo <= distinctness_tolerance * hi) {
      std::ostringstream os;
      os << "interferer levels " << hi << " and " << lo << " are not distinct";
      fail(Errc::distinctness, os.str());
    }
  }
}

double mw_from_dbm(double dbm) { return std::pow(10.0, dbm / 10.0); }

}  // namespace

const char* profile_kind_name(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::general: return "general";
    case ProfileKind::interference_limited: return "interference_limited";
    case ProfileKind::noise_limited: return "noise_limited";
  }
  return "?";
}

LinkProfile::LinkProfile(ProfileKind kind, double rho0, std::vector<double> rho)
    : kind_(kind), rho0_(rho0), rho_(std::move(rho)) {
  if (kind_ == ProfileKind::general) {
    varpi_.resize(rho_.size());
    for (std::size_t b = 0; b < rho_.size(); ++b) varpi_[b] = varpi(rho_, b);
  }
}

LinkProfile LinkProfile::general(double rho0, std::vector<double> interferers) {
  check_level(rho0, "rho0");
  if (interferers.empty()) fail(Errc::invalid_argument, "general profile needs at least one interferer");
  for (double r : interferers) check_level(r, "interferer level");
  std::sort(interferers.begin(), interferers.end(), std::greater<>());
  check_distinct(interferers);
  return LinkProfile(ProfileKind::general, rho0, std::move(interferers));
}

LinkProfile LinkProfile::interference_limited(double rho0, double rho1) {
  check_level(rho0, "rho0");
  check_level(rho1, "rho1");
  return LinkProfile(ProfileKind::interference_limited, rho0, {rho1});
}

LinkProfile LinkProfile::noise_limited(double rho0) {
  check_level(rho0, "rho0");
  return LinkProfile(ProfileKind::noise_limited, rho0, {});
}

double varpi(const std::vector<double>& interferers, std::size_t b) {
  if (b >= interferers.size()) fail(Errc::invalid_argument, "interferer index out of range");
  double w = 1.0;
  const double rb = interferers[b];
  for (std::size_t i = 0; i < interferers.size(); ++i) {
    if (i == b) continue;
    const double diff = rb - interferers[i];
    if (std::fabs(diff) <= distinctness_tolerance * std::max(rb, interferers[i]))
      fail(Errc::distinctness, "interferer levels are not distinct");
    w *= rb / diff;
  }
  return w;
}

double sinr_survival(const LinkProfile& p, double x) {
  if (std::isnan(x)) fail(Errc::invalid_argument, "SINR argument is NaN");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const double rho0 = p.rho0();
  switch (p.kind()) {
    case ProfileKind::noise_limited: return std::exp(-x / rho0);
    case ProfileKind::interference_limited: return rho0 / (p.interferers()[0] * x + rho0);
    case ProfileKind::general: {
      double s = 0.0;
      const auto& rho = p.interferers();
      const auto& w = p.weights();
      for (std::size_t b = 0; b < rho.size(); ++b) s += w[b] * rho0 / (rho0 + rho[b] * x);
      return std::exp(-x / rho0) * s;
    }
  }
  return 0.0;
}

double sinr_cdf(const LinkProfile& p, double x) { return 1.0 - sinr_survival(p, x); }

double sinr_pdf(const LinkProfile& p, double x) {
  if (std::isnan(x)) fail(Errc::invalid_argument, "SINR argument is NaN");
  if (x < 0.0 || std::isinf(x)) return 0.0;
  const double rho0 = p.rho0();
  switch (p.kind()) {
    case ProfileKind::noise_limited: return std::exp(-x / rho0) / rho0;
    case ProfileKind::interference_limited: {
      const double d = p.interferers()[0] * x + rho0;
      return rho0 * p.interferers()[0] / (d * d);
    }
    case ProfileKind::general: {
      double s = 0.0;
      const auto& rho = p.interferers();
      const auto& w = p.weights();
      for (std::size_t b = 0; b < rho.size(); ++b) {
        const double d = rho0 + rho[b] * x;
        s += w[b] * (1.0 / d + rho0 * rho[b] / (d * d));
      }
      return std::exp(-x / rho0) * s;
    }
  }
  return 0.0;
}

double sinr_survival_inv(const LinkProfile& p, double tail) {
  if (!(tail > 0.0) || !(tail <= 1.0)) fail(Errc::domain, "tail probability must lie in (0, 1]");
  if (tail == 1.0) return 0.0;
  const double rho0 = p.rho0();
  switch (p.kind()) {
    case ProfileKind::noise_limited: return -rho0 * std::log(tail);
    case ProfileKind::interference_limited: return rho0 * (1.0 - tail) / (tail * p.interferers()[0]);
    case ProfileKind::general: break;
  }
  const double log_tail = std::log(tail);
  auto g = [&](double x) {
    const double s = sinr_survival(p, x);
    return s > 0.0 ? std::log(s) - log_tail : -1e300;
  };
  double hi = rho0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (!std::isfinite(hi)) fail(Errc::convergence, "could not bracket SINR quantile");
  }
  double lo = hi / 2.0;
  while (lo > 0.0 && g(lo) < 0.0) lo /= 2.0;
  if (g(lo) < 0.0) lo = 0.0;
  std::uintmax_t iters = 200;
  const auto root = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (root.first + root.second);
}

double sinr_cdf_inv(const LinkProfile& p, double q) {
  if (!(q >= 0.0) || !(q < 1.0)) fail(Errc::domain, "quantile level must lie in [0, 1)");
  if (q == 0.0) return 0.0;
  return sinr_survival_inv(p, 1.0 - q);
}

const char* tier_name(Tier tier) { return tier == Tier::macro ? "macro" : "pico"; }

double path_loss_db(Tier tier, double distance_m) {
  if (!(distance_m >= 1.0) || !std::isfinite(distance_m))
    fail(Errc::domain, "path loss needs a distance of at least 1 m");
  if (tier == Tier::macro) return 15.3 + 37.6 * std::log10(distance_m);
  return 30.6 + 36.7 * std::log10(distance_m);
}

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double noise_power_per_rb_mw(const RadioParams& radio) {
  if (radio.num_rb == 0) fail(Errc::invalid_argument, "num_rb must be positive");
  return mw_from_dbm(radio.noise_psd_dbm_per_hz + 10.0 * std::log10(radio.bandwidth_hz / radio.num_rb));
}

std::size_t serving_cell(const std::vector<double>& rx_power) {
  if (rx_power.empty()) fail(Errc::invalid_argument, "no cells");
  std::size_t best = 0;
  for (std::size_t c = 1; c < rx_power.size(); ++c)
    if (rx_power[c] > rx_power[best]) best = c;
  return best;
}

UserLink build_link_profile(const std::vector<Cell>& cells, const Position& user,
                            const std::vector<double>& shadowing_db, const RadioParams& radio, bool perturb_ties) {
  if (cells.empty()) fail(Errc::invalid_argument, "no cells");
  if (shadowing_db.size() != cells.size()) fail(Errc::invalid_argument, "one shadowing draw per cell is required");
  if (!(radio.interferer_keep_threshold >= 0.0) || !(radio.interferer_keep_threshold <= 1.0))
    fail(Errc::invalid_argument, "interferer_keep_threshold must lie in [0, 1]");
  UserLink link;
  const double per_rb_db = 10.0 * std::log10(static_cast<double>(radio.num_rb));
  link.rx_power_mw.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double pl = path_loss_db(cells[c].tier, distance(cells[c].position, user));
    link.rx_power_mw[c] = mw_from_dbm(cells[c].tx_power_dbm - per_rb_db - pl + shadowing_db[c]);
  }
  link.serving_cell = serving_cell(link.rx_power_mw);
  link.noise_mw = noise_power_per_rb_mw(radio);

  std::vector<double> interf;
  for (std::size_t c = 0; c < cells.size(); ++c)
    if (c != link.serving_cell) interf.push_back(link.rx_power_mw[c]);
  std::sort(interf.begin(), interf.end(), std::greater<>());

  std::vector<double> kept;
  if (!interf.empty()) {
    link.strongest_interferer_mw = interf.front();
    const double floor = radio.interferer_keep_threshold * interf.front();
    for (double v : interf) {
      if (v >= floor) {
        kept.push_back(v);
      } else {
        link.folded_mw += v;
        ++link.folded_count;
      }
    }
  }
  const double effective_noise = link.noise_mw + link.folded_mw;
  const double rho0 = link.rx_power_mw[link.serving_cell] / effective_noise;
  for (double& v : kept) v /= effective_noise;

  if (perturb_ties) {
    for (std::size_t i = 1; i < kept.size(); ++i) {
      if (kept[i - 1] - kept[i] <= distinctness_tolerance * kept[i - 1]) {
        kept[i] = kept[i - 1] * (1.0 - 1e-6);
        link.tie_perturbed = true;
      }
    }
    if (link.tie_perturbed) log_message(LogLevel::warning, "equal interferer levels perturbed by 1e-6 relative");
  }
  link.profile = kept.empty() ? LinkProfile::noise_limited(rho0) : LinkProfile::general(rho0, kept);
  return link;
}

std::complex<double> draw_small_scale(Rng& rng) {
  std::exponential_distribution<double> power(1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  return std::polar(std::sqrt(power(rng)), phase(rng));
}

void slot_sinr(const LinkProfile& p, unsigned num_rb, Rng& rng, double* out) {
  std::exponential_distribution<double> power(1.0);
  const auto& rho = p.interferers();
  for (unsigned n = 0; n < num_rb; ++n) {
    const double signal = p.rho0() * power(rng);
    switch (p.kind()) {
      case ProfileKind::noise_limited: out[n] = signal; break;
      case ProfileKind::interference_limited: out[n] = signal / (rho[0] * power(rng)); break;
      case ProfileKind::general: {
        double den = 1.0;
        for (double r : rho) den += r * power(rng);
        out[n] = signal / den;
        break;
      }
    }
  }
}

}  // namespace hetfb
