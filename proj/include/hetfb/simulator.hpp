#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hetfb/channel.hpp"

namespace hetfb {

enum class Policy { cdf, greedy, round_robin };

const char* policy_name(Policy policy);
// Errc::invalid_argument on unknown names.
Policy parse_policy(const std::string& name);

struct SimConfig {
  unsigned num_drops = 1;
  unsigned slots_per_drop = 1000;
  Policy policy = Policy::cdf;
  unsigned feedback_m = 1;
  std::uint64_t master_seed = 1;
  // 0 picks the hardware concurrency.
  unsigned threads_hint = 0;
};

// Accumulators for one replication: a whole drop, or one batch of slots when
// the run has a single drop.
struct BatchStats {
  std::vector<double> per_user_rate_sum;
  std::vector<std::uint64_t> assignment_counts;
  std::uint64_t outage_rb_count = 0;
  std::uint64_t rb_count = 0;
};

struct DropStats {
  std::vector<BatchStats> batches;
};

struct RateReport {
  Policy policy = Policy::cdf;
  unsigned num_users = 0;
  unsigned num_rb = 0;
  unsigned feedback_m = 0;
  unsigned num_drops = 0;
  unsigned slots_per_drop = 0;
  std::size_t replications = 0;
  std::vector<double> per_user_rate;
  std::vector<double> per_user_rate_se;
  double sum_rate = 0.0;
  double sum_rate_se = 0.0;
  // NaN with a single user.
  double fairness_theta = 0.0;
  double fairness_theta_se = 0.0;
  double outage_fraction = 0.0;
  double outage_fraction_se = 0.0;
};

// Normalized entropy of the assignment proportions. Errc::invalid_argument for
// fewer than two users or an all-zero count vector.
double fairness_theta(const std::vector<std::uint64_t>& counts);

// Slots of one drop with fixed profiles; fading comes from make_rng(seed, drop, 1).
// batches > 1 splits the slots into that many replications.
DropStats run_drop(const std::vector<LinkProfile>& profiles, unsigned num_rb, const SimConfig& cfg,
                   std::uint64_t drop, unsigned batches = 1);

using ProfileSource = std::function<std::vector<LinkProfile>(std::uint64_t drop)>;

// Profiles may change per drop but the user count must not.
RateReport simulate(const ProfileSource& source, unsigned num_rb, const SimConfig& cfg);
RateReport simulate_profiles(const std::vector<LinkProfile>& profiles, unsigned num_rb, const SimConfig& cfg);

}  // namespace hetfb
