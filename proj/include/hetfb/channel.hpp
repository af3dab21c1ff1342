#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "hetfb/rng.hpp"

namespace hetfb {

enum class ProfileKind { general, interference_limited, noise_limited };

const char* profile_kind_name(ProfileKind kind);

// Relative separation below which two interferer levels count as equal.
inline constexpr double distinctness_tolerance = 1e-9;

// Large-scale SINR parameters of one user: linear mean SNR of the serving
// link and of each retained interferer, all relative to the noise floor.
class LinkProfile {
 public:
  static LinkProfile general(double rho0, std::vector<double> interferers);
  static LinkProfile interference_limited(double rho0, double rho1);
  static LinkProfile noise_limited(double rho0);

  ProfileKind kind() const { return kind_; }
  double rho0() const { return rho0_; }
  // Sorted in descending order.
  const std::vector<double>& interferers() const { return rho_; }
  std::size_t num_interferers() const { return rho_.size(); }
  // Mixture weights varpi_b of the general kind, aligned with interferers().
  const std::vector<double>& weights() const { return varpi_; }

 private:
  LinkProfile(ProfileKind kind, double rho0, std::vector<double> rho);

  ProfileKind kind_;
  double rho0_;
  std::vector<double> rho_;
  std::vector<double> varpi_;
};

double varpi(const std::vector<double>& interferers, std::size_t b);

double sinr_cdf(const LinkProfile& p, double x);
double sinr_survival(const LinkProfile& p, double x);
double sinr_pdf(const LinkProfile& p, double x);
double sinr_cdf_inv(const LinkProfile& p, double q);
// Inverse of the survival function: x with 1 - F(x) = tail.
double sinr_survival_inv(const LinkProfile& p, double tail);

enum class Tier { macro, pico };

const char* tier_name(Tier tier);

double path_loss_db(Tier tier, double distance_m);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct Cell {
  Tier tier = Tier::macro;
  Position position;
  double tx_power_dbm = 43.0;
};

struct RadioParams {
  double bandwidth_hz = 5e6;
  double noise_psd_dbm_per_hz = -170.0;
  unsigned num_rb = 16;
  double shadowing_sigma_db = 8.0;
  // Interferers weaker than this fraction of the strongest one join the noise.
  double interferer_keep_threshold = 0.01;
};

struct UserLink {
  LinkProfile profile = LinkProfile::noise_limited(1.0);
  std::size_t serving_cell = 0;
  std::vector<double> rx_power_mw;  // per cell, per resource block
  double noise_mw = 0.0;
  double folded_mw = 0.0;
  std::size_t folded_count = 0;
  double strongest_interferer_mw = 0.0;
  bool tie_perturbed = false;
};

double noise_power_per_rb_mw(const RadioParams& radio);

// Index of the strongest entry; ties go to the lowest index.
std::size_t serving_cell(const std::vector<double>& rx_power);

// shadowing_db holds one draw per cell. With perturb_ties, interferer levels
// closer than distinctness_tolerance are nudged apart by 1e-6 relative.
UserLink build_link_profile(const std::vector<Cell>& cells, const Position& user,
                            const std::vector<double>& shadowing_db, const RadioParams& radio,
                            bool perturb_ties = true);

// Unit-power circularly symmetric complex Gaussian gain.
std::complex<double> draw_small_scale(Rng& rng);

// One SINR draw per resource block, written to out[0..num_rb).
void slot_sinr(const LinkProfile& p, unsigned num_rb, Rng& rng, double* out);

}  // namespace hetfb
