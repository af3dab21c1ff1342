#include "hetfb/validate.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>

#include "closed_form.hpp"
#include "feedback_exact.hpp"
#include "hetfb/asymptotics.hpp"
#include "hetfb/error.hpp"
#include "hetfb/exact_rate.hpp"
#include "hetfb/feedback.hpp"
#include "hetfb/simulator.hpp"

namespace hetfb {
namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

void guarded(std::vector<ValidationCheck>& out, const std::string& name,
             const std::function<void(ValidationCheck&)>& body) {
  ValidationCheck c;
  c.name = name;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("error: ") + e.what();
  }
  out.push_back(std::move(c));
}

std::vector<LinkProfile> reference_profiles() {
  return {LinkProfile::noise_limited(1.0),          LinkProfile::noise_limited(31.6),
          LinkProfile::interference_limited(1.0, 1.0), LinkProfile::interference_limited(10.0, 1.0),
          LinkProfile::general(10.0, {2.0}),         LinkProfile::general(20.0, {3.0, 0.5}),
          LinkProfile::general(5.0, {1.5, 0.7, 0.2})};
}

}  // namespace

std::vector<ValidationCheck> run_validation(const Scenario& s, const ValidationOptions& opt) {
  validate_scenario(s);
  const unsigned N = s.radio.num_rb;
  const unsigned M = std::min(std::max(opt.feedback_m, 1u), N);
  std::vector<ValidationCheck> out;

  DropRealization drop0;
  guarded(out, "scenario_drop", [&](ValidationCheck& c) {
    drop0 = realize_drop(s, opt.seed, 0);
    c.passed = !drop0.profiles.empty();
    c.detail = fmt("K0=%.0f attempts=%.0f", static_cast<double>(drop0.profiles.size()),
                   static_cast<double>(drop0.placement_attempts));
  });

  std::vector<LinkProfile> profiles = reference_profiles();
  for (const auto& p : drop0.profiles)
    if (detail::closed_form_supported(p)) profiles.push_back(p);

  guarded(out, "closed_form_vs_quadrature", [&](ValidationCheck& c) {
    double worst = 0.0;
    for (const auto& p : profiles)
      for (unsigned eps : {1u, 2u, 4u, 8u, 16u, 32u, 64u})
        worst = std::max(worst, rel(g_k_closed_form(p, eps).value, g_k_quadrature(p, eps)));
    c.passed = worst <= 1e-8;
    c.detail = fmt("profiles=%.0f max_rel=%.3g", static_cast<double>(profiles.size()), worst);
  });

  guarded(out, "xi2_recurrence_vs_convolution", [&](ValidationCheck& c) {
    std::size_t compared = 0;
    bool same = true;
    for (unsigned m = 2; m <= std::min(N, 8u); ++m) {
      if (detail::xi1_exact(N, m).front() == 0) continue;
      for (unsigned tau = 1; tau <= 6; ++tau) {
        same = same && detail::xi2_recursion_exact(N, m, tau) == detail::xi2_convolution_exact(N, m, tau);
        ++compared;
      }
    }
    c.passed = same;
    c.detail = fmt("cases=%.0f", static_cast<double>(compared));
  });

  guarded(out, "xi1_sums_to_one", [&](ValidationCheck& c) {
    bool ok = true;
    for (unsigned m = 1; m <= N; ++m) {
      mpq_class acc = 0;
      for (const auto& q : detail::xi1_exact(N, m)) acc += q;
      ok = ok && acc == 1;
    }
    c.passed = ok;
    c.detail = fmt("N=%.0f", N);
  });

  guarded(out, "integral_recursion_vs_quadrature", [&](ValidationCheck& c) {
    double worst = 0.0;
    QuadratureConfig cfg;
    cfg.abs_tol = 0.0;
    cfg.rel_tol = 1e-12;
    for (double alpha : {0.05, 1.0, 7.0})
      for (double beta : {0.3, 1.0, 4.0})
        for (unsigned gamma : {1u, 2u, 5u, 12u}) {
          const double q = quad_halfline(
                               [&](double x) { return std::exp(-alpha * x - gamma * std::log(beta + x)); }, cfg,
                               std::min(1.0 / alpha, beta))
                               .value;
          worst = std::max(worst, rel(integral_I2(alpha, beta, gamma), q));
        }
    c.passed = worst <= 1e-9;
    c.detail = fmt("max_rel=%.3g", worst);
  });

  guarded(out, "asymptotic_constants_closed_vs_quantile", [&](ValidationCheck& c) {
    double worst = 0.0;
    for (const auto& p : {LinkProfile::noise_limited(1.0), LinkProfile::noise_limited(10.0),
                          LinkProfile::interference_limited(1.0, 1.0), LinkProfile::interference_limited(10.0, 1.0)})
      for (unsigned m : {1u, N})
        for (double K : {2.0 * N, 5.0 * N}) {
          const auto a = normalizing_constants(p, K, N, m);
          const auto b = normalizing_constants_closed(p, K, N, m);
          worst = std::max({worst, rel(a.a, b.a), rel(a.b, b.b)});
        }
    c.passed = worst <= 1e-10;
    c.detail = fmt("max_rel=%.3g", worst);
  });

  if (drop0.profiles.empty()) return out;

  SimConfig sim;
  sim.num_drops = opt.drops;
  sim.slots_per_drop = opt.slots_per_drop;
  sim.feedback_m = M;
  sim.master_seed = opt.seed;
  sim.threads_hint = opt.threads_hint;
  RateReport report;
  bool simulated = false;
  guarded(out, "simulation_vs_exact_sum_rate", [&](ValidationCheck& c) {
    report = simulate_profiles(drop0.profiles, N, sim);
    simulated = true;
    const double exact = sum_rate_exact(drop0.profiles, N, M).total;
    const double r = rel(report.sum_rate, exact);
    c.passed = r <= 0.01;
    c.detail = fmt("sim=%.6g exact=%.6g", report.sum_rate, exact) + fmt(" rel=%.3g M=%.0f", r, M);
  });
  if (!simulated) return out;

  guarded(out, "simulation_outage_vs_analysis", [&](ValidationCheck& c) {
    const double K0 = static_cast<double>(drop0.profiles.size());
    const double expected = std::pow(1.0 - static_cast<double>(M) / N, K0);
    const double dev = std::fabs(report.outage_fraction - expected);
    c.passed = M == N ? report.outage_fraction == 0.0 : dev <= 3.0 * report.outage_fraction_se;
    c.detail = fmt("sim=%.6g expected=%.6g", report.outage_fraction, expected) +
               fmt(" se=%.3g", report.outage_fraction_se);
  });

  guarded(out, "simulation_cdf_fairness", [&](ValidationCheck& c) {
    if (drop0.profiles.size() < 2) {
      c.passed = true;
      c.detail = "single user";
      return;
    }
    c.passed = std::fabs(report.fairness_theta - 1.0) <= 3.0 * report.fairness_theta_se;
    c.detail = fmt("theta=%.6g se=%.3g", report.fairness_theta, report.fairness_theta_se);
  });
  return out;
}

}  // namespace hetfb
