#include "hetfb/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "hetfb/error.hpp"
#include "hetfb/feedback.hpp"
#include "hetfb/rng.hpp"

namespace hetfb {
namespace {

constexpr unsigned single_drop_batches = 20;

struct Mean {
  double mean = 0.0;
  double se = 0.0;
};

Mean mean_se(const std::vector<double>& v) {
  Mean m;
  if (v.empty()) return m;
  double acc = 0.0;
  for (double x : v) acc += x;
  m.mean = acc / v.size();
  if (v.size() < 2) {
    m.se = std::numeric_limits<double>::quiet_NaN();
    return m;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - m.mean) * (x - m.mean);
  m.se = std::sqrt(ss / (v.size() - 1) / v.size());
  return m;
}

// Winner bookkeeping with uniform tie-breaking by reservoir sampling.
struct Best {
  double key = 0.0;
  int user = -1;
  double cqi = 0.0;
  unsigned ties = 0;
};

}  // namespace

const char* policy_name(Policy policy) {
  switch (policy) {
    case Policy::cdf: return "cdf";
    case Policy::greedy: return "greedy";
    case Policy::round_robin: return "round_robin";
  }
  return "?";
}

Policy parse_policy(const std::string& name) {
  if (name == "cdf") return Policy::cdf;
  if (name == "greedy") return Policy::greedy;
  if (name == "round_robin") return Policy::round_robin;
  fail(Errc::invalid_argument, "unknown policy '" + name + "' (expected cdf, greedy or round_robin)");
}

double fairness_theta(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) fail(Errc::invalid_argument, "fairness needs at least two users");
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) fail(Errc::invalid_argument, "fairness needs at least one assignment");
  if (std::all_of(counts.begin(), counts.end(), [&](auto c) { return c == counts.front(); })) return 1.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / total;
    h -= q * std::log(q);
  }
  return std::clamp(h / std::log(static_cast<double>(counts.size())), 0.0, 1.0);
}

DropStats run_drop(const std::vector<LinkProfile>& profiles, unsigned N, const SimConfig& cfg, std::uint64_t drop,
                   unsigned batches) {
  check_feedback_params(N, cfg.feedback_m);
  if (profiles.empty()) fail(Errc::invalid_argument, "at least one user is required");
  if (cfg.slots_per_drop == 0) fail(Errc::invalid_argument, "slots_per_drop must be positive");
  batches = std::clamp(batches, 1u, cfg.slots_per_drop);
  const std::size_t K = profiles.size();
  const unsigned M = cfg.feedback_m;

  std::vector<BestMTransform> transforms;
  if (cfg.policy == Policy::cdf)
    for (std::size_t k = 0; k < K; ++k) transforms.emplace_back(N, M);

  Rng rng = make_rng(cfg.master_seed, drop, 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> cqi(K * N);
  std::vector<Best> best(N);
  std::uint64_t rr_counter = 0;

  DropStats out;
  out.batches.resize(batches);
  for (auto& b : out.batches) {
    b.per_user_rate_sum.assign(K, 0.0);
    b.assignment_counts.assign(K, 0);
  }

  for (unsigned slot = 0; slot < cfg.slots_per_drop; ++slot) {
    BatchStats& acc = out.batches[static_cast<std::size_t>(slot) * batches / cfg.slots_per_drop];
    for (std::size_t k = 0; k < K; ++k) slot_sinr(profiles[k], N, rng, &cqi[k * N]);
    acc.rb_count += N;

    if (cfg.policy == Policy::round_robin) {
      for (unsigned n = 0; n < N; ++n) {
        const std::size_t k = rr_counter++ % K;
        acc.per_user_rate_sum[k] += std::log2(1.0 + cqi[k * N + n]);
        ++acc.assignment_counts[k];
      }
      continue;
    }

    std::fill(best.begin(), best.end(), Best{});
    for (std::size_t k = 0; k < K; ++k) {
      const double* row = &cqi[k * N];
      for (unsigned n : select_best_m(row, N, M)) {
        // Both policies maximize the key; cdf uses the negated best-M survival.
        const double key = cfg.policy == Policy::cdf
                               ? -transforms[k].survival(sinr_survival(profiles[k], row[n]))
                               : row[n];
        Best& b = best[n];
        if (b.user < 0 || key > b.key) {
          b = {key, static_cast<int>(k), row[n], 1};
        } else if (key == b.key) {
          ++b.ties;
          if (unit(rng) * b.ties < 1.0) {
            b.user = static_cast<int>(k);
            b.cqi = row[n];
          }
        }
      }
    }
    for (unsigned n = 0; n < N; ++n) {
      if (best[n].user < 0) {
        ++acc.outage_rb_count;
        continue;
      }
      acc.per_user_rate_sum[best[n].user] += std::log2(1.0 + best[n].cqi);
      ++acc.assignment_counts[best[n].user];
    }
  }
  return out;
}

RateReport simulate(const ProfileSource& source, unsigned N, const SimConfig& cfg) {
  check_feedback_params(N, cfg.feedback_m);
  if (cfg.num_drops == 0) fail(Errc::invalid_argument, "num_drops must be positive");
  if (cfg.slots_per_drop == 0) fail(Errc::invalid_argument, "slots_per_drop must be positive");
  const unsigned batches = cfg.num_drops == 1 ? single_drop_batches : 1;

  std::vector<DropStats> drops(cfg.num_drops);
  std::vector<std::size_t> users(cfg.num_drops, 0);
  std::atomic<unsigned> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const unsigned d = next.fetch_add(1);
      if (d >= cfg.num_drops) return;
      try {
        const auto profiles = source(d);
        users[d] = profiles.size();
        drops[d] = run_drop(profiles, N, cfg, d, batches);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(cfg.num_drops);
        return;
      }
    }
  };
  unsigned threads = cfg.threads_hint ? cfg.threads_hint : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.num_drops);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  const std::size_t K = users.front();
  for (std::size_t u : users)
    if (u != K) fail(Errc::invalid_argument, "user count changed between drops");

  RateReport r;
  r.policy = cfg.policy;
  r.num_users = static_cast<unsigned>(K);
  r.num_rb = N;
  r.feedback_m = cfg.feedback_m;
  r.num_drops = cfg.num_drops;
  r.slots_per_drop = cfg.slots_per_drop;

  std::vector<std::vector<double>> user_rates(K);
  std::vector<double> sum_rates, thetas, outages;
  for (const auto& d : drops) {
    for (const auto& b : d.batches) {
      if (b.rb_count == 0) continue;
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double v = b.per_user_rate_sum[k] / b.rb_count;
        user_rates[k].push_back(v);
        total += v;
      }
      sum_rates.push_back(total);
      outages.push_back(static_cast<double>(b.outage_rb_count) / b.rb_count);
      std::uint64_t assigned = 0;
      for (auto c : b.assignment_counts) assigned += c;
      if (K >= 2 && assigned > 0) thetas.push_back(fairness_theta(b.assignment_counts));
    }
  }
  r.replications = sum_rates.size();
  for (std::size_t k = 0; k < K; ++k) {
    const Mean m = mean_se(user_rates[k]);
    r.per_user_rate.push_back(m.mean);
    r.per_user_rate_se.push_back(m.se);
  }
  Mean m = mean_se(sum_rates);
  r.sum_rate = m.mean;
  r.sum_rate_se = m.se;
  m = mean_se(outages);
  r.outage_fraction = m.mean;
  r.outage_fraction_se = m.se;
  if (K < 2 || thetas.empty()) {
    r.fairness_theta = std::numeric_limits<double>::quiet_NaN();
    r.fairness_theta_se = std::numeric_limits<double>::quiet_NaN();
  } else {
    m = mean_se(thetas);
    // Plug-in entropy undershoots by about (K-1)/(2n) nats per replication.
    const double n = static_cast<double>(cfg.slots_per_drop) * N / batches;
    const double bias = (K - 1.0) / (2.0 * n * std::log(static_cast<double>(K)));
    r.fairness_theta = m.mean;
    r.fairness_theta_se = std::sqrt((std::isnan(m.se) ? 0.0 : m.se * m.se) + bias * bias);
  }
  return r;
}

RateReport simulate_profiles(const std::vector<LinkProfile>& profiles, unsigned N, const SimConfig& cfg) {
  return simulate([&](std::uint64_t) { return profiles; }, N, cfg);
}

}  // namespace hetfb
