// hetfb: rates, simulation and feedback planning for a scenario file.
#include <CLI11.hpp>

#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hetfb/hetfb.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_validation = 2;

struct Failure {
  hetfb_status status;
  std::string message;
};

void check(hetfb_status s) {
  if (s != HETFB_OK) throw Failure{s, hetfb_last_error()};
}

struct ScenarioDeleter {
  void operator()(hetfb_scenario* s) const { hetfb_scenario_free(s); }
};
struct DropDeleter {
  void operator()(hetfb_drop* d) const { hetfb_drop_free(d); }
};
struct ReportDeleter {
  void operator()(hetfb_report* r) const { hetfb_report_free(r); }
};
struct ValidationDeleter {
  void operator()(hetfb_validation* v) const { hetfb_validation_free(v); }
};
using ScenarioPtr = std::unique_ptr<hetfb_scenario, ScenarioDeleter>;
using DropPtr = std::unique_ptr<hetfb_drop, DropDeleter>;

// RFC 4180 rows, numbers at 12 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& cell(const std::string& s) {
    sep();
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
      out_ << s;
    } else {
      out_ << '"';
      for (char c : s) {
        if (c == '"') out_ << '"';
        out_ << c;
      }
      out_ << '"';
    }
    return *this;
  }
  CsvWriter& cell(double v) {
    if (std::isnan(v)) return cell(std::string("nan"));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return cell(std::string(buf));
  }
  CsvWriter& cell(std::uint64_t v) { return cell(std::to_string(v)); }
  CsvWriter& cell(unsigned v) { return cell(std::to_string(v)); }
  CsvWriter& cell(std::size_t v, int) { return cell(std::to_string(v)); }
  void header(const std::vector<std::string>& names) {
    for (const auto& n : names) cell(n);
    end();
  }
  void end() {
    out_ << "\r\n";
    first_ = true;
  }

 private:
  void sep() {
    if (!first_) out_ << ',';
    first_ = false;
  }
  std::ostream& out_;
  bool first_ = true;
};

struct Options {
  std::string scenario;
  std::string out;
  std::optional<unsigned> m;
  double eta = 0.9;
  unsigned drops = 1;
  std::optional<unsigned> drops_flag;
  unsigned slots = 1000;
  std::string policy = "cdf";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> users;
  unsigned threads = 0;
  std::string route = "automatic";
};

const char* kind_name(hetfb_kind k) {
  switch (k) {
    case HETFB_KIND_GENERAL: return "general";
    case HETFB_KIND_INTERFERENCE_LIMITED: return "interference_limited";
    case HETFB_KIND_NOISE_LIMITED: return "noise_limited";
  }
  return "unknown";
}

hetfb_route parse_route(const std::string& r) {
  if (r == "automatic") return HETFB_ROUTE_AUTOMATIC;
  if (r == "closed_form") return HETFB_ROUTE_CLOSED_FORM;
  return HETFB_ROUTE_QUADRATURE;
}

ScenarioPtr open_scenario(const Options& o) {
  hetfb_scenario* s = nullptr;
  check(hetfb_scenario_load(o.scenario.c_str(), &s));
  ScenarioPtr p(s);
  if (o.users) check(hetfb_scenario_set_user_count(p.get(), *o.users));
  return p;
}

// flag, then scenario file, then HETFB_SEED, then the library default.
std::uint64_t resolve_seed(const Options& o, const hetfb_scenario* s) {
  if (o.seed) return *o.seed;
  int has = 0;
  std::uint64_t seed = 0;
  check(hetfb_scenario_seed(s, &has, &seed));
  if (has) return seed;
  if (const char* env = std::getenv("HETFB_SEED")) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || env[0] == '-')
      throw Failure{HETFB_E_VALIDATION, std::string("HETFB_SEED is not an unsigned integer: ") + env};
    return v;
  }
  return seed;
}

unsigned feedback_m(const Options& o, unsigned N) {
  const unsigned m = o.m.value_or(N);
  if (m < 1 || m > N) throw Failure{HETFB_E_VALIDATION, "--M must lie in [1, " + std::to_string(N) + "]"};
  return m;
}

void rate_table(const Options& o, std::ostream& out, bool asymptotic) {
  ScenarioPtr s = open_scenario(o);
  unsigned N = 0;
  check(hetfb_scenario_num_rb(s.get(), &N));
  const unsigned M = feedback_m(o, N);
  const std::uint64_t seed = resolve_seed(o, s.get());
  const hetfb_route route = parse_route(o.route);

  CsvWriter csv(out);
  std::vector<std::string> cols = {"drop", "user", "kind", "num_interferers", "rho0_db", "K0", "N", "M", "user_rate",
                                   "sum_rate"};
  if (asymptotic) {
    cols.push_back("a");
    cols.push_back("b");
  }
  csv.header(cols);
  for (unsigned d = 0; d < o.drops; ++d) {
    hetfb_drop* raw = nullptr;
    check(hetfb_scenario_realize(s.get(), seed, d, &raw));
    DropPtr drop(raw);
    const hetfb_profile* const* profiles = nullptr;
    std::size_t K0 = 0;
    check(hetfb_drop_profiles(drop.get(), &profiles, &K0));
    std::vector<double> rates(K0), a(K0), b(K0);
    double total = 0.0;
    if (asymptotic) {
      for (std::size_t k = 0; k < K0; ++k) {
        check(hetfb_normalizing_constants(profiles[k], static_cast<double>(K0), N, M, &a[k], &b[k]));
        check(hetfb_user_rate_asymptotic(profiles[k], static_cast<unsigned>(K0), N, M, &rates[k]));
      }
      check(hetfb_sum_rate_asymptotic(profiles, K0, N, M, &total));
    } else {
      check(hetfb_sum_rate_exact(profiles, K0, N, M, route, rates.data(), &total));
    }
    for (std::size_t k = 0; k < K0; ++k) {
      hetfb_user_info info{};
      check(hetfb_drop_user(drop.get(), k, &info));
      csv.cell(static_cast<unsigned>(d)).cell(k, 0).cell(std::string(kind_name(info.kind)));
      csv.cell(info.num_interferers, 0).cell(10.0 * std::log10(info.rho0)).cell(K0, 0).cell(N).cell(M);
      csv.cell(rates[k]).cell(total);
      if (asymptotic) csv.cell(a[k]).cell(b[k]);
      csv.end();
    }
  }
}

void simulate_table(const Options& o, std::ostream& out) {
  ScenarioPtr s = open_scenario(o);
  unsigned N = 0;
  check(hetfb_scenario_num_rb(s.get(), &N));
  hetfb_sim_config cfg;
  hetfb_sim_config_init(&cfg);
  cfg.num_drops = o.drops;
  cfg.slots_per_drop = o.slots;
  cfg.feedback_m = feedback_m(o, N);
  cfg.master_seed = resolve_seed(o, s.get());
  cfg.threads_hint = o.threads;
  check(hetfb_policy_from_name(o.policy.c_str(), &cfg.policy));
  hetfb_report* raw = nullptr;
  check(hetfb_simulate_scenario(s.get(), &cfg, &raw));
  std::unique_ptr<hetfb_report, ReportDeleter> report(raw);
  hetfb_report_summary r{};
  check(hetfb_report_summary_get(report.get(), &r));

  CsvWriter csv(out);
  csv.header({"policy", "N", "M", "K0", "drops", "slots_per_drop", "sum_rate", "sum_rate_se", "fairness_theta",
              "fairness_theta_se", "outage_fraction", "outage_fraction_se"});
  csv.cell(std::string(hetfb_policy_name(r.policy))).cell(r.num_rb).cell(r.feedback_m).cell(r.num_users);
  csv.cell(r.num_drops).cell(r.slots_per_drop).cell(r.sum_rate).cell(r.sum_rate_se);
  csv.cell(r.fairness_theta).cell(r.fairness_theta_se).cell(r.outage_fraction).cell(r.outage_fraction_se);
  csv.end();
}

void plan_table(const Options& o, std::ostream& out) {
  ScenarioPtr s = open_scenario(o);
  unsigned N = 0;
  check(hetfb_scenario_num_rb(s.get(), &N));
  const std::uint64_t seed = resolve_seed(o, s.get());
  CsvWriter csv(out);
  csv.header({"drop", "K0", "N", "eta", "m_exact", "ratio_exact", "m_asymptotic", "ratio_asymptotic",
              "violations_exact", "violations_asymptotic"});
  for (unsigned d = 0; d < o.drops; ++d) {
    hetfb_drop* raw = nullptr;
    check(hetfb_scenario_realize(s.get(), seed, d, &raw));
    DropPtr drop(raw);
    const hetfb_profile* const* profiles = nullptr;
    std::size_t K0 = 0;
    check(hetfb_drop_profiles(drop.get(), &profiles, &K0));
    hetfb_feedback_plan exact{}, asym{};
    check(hetfb_min_feedback_exact(profiles, K0, N, o.eta, parse_route(o.route), &exact));
    const hetfb_status as = hetfb_min_feedback_asymptotic(profiles, K0, N, o.eta, &asym);
    if (as != HETFB_OK && as != HETFB_E_INFEASIBLE) check(as);
    csv.cell(static_cast<unsigned>(d)).cell(K0, 0).cell(N).cell(o.eta).cell(exact.m).cell(exact.ratio_at_m);
    if (as == HETFB_OK) csv.cell(asym.m).cell(asym.ratio_at_m);
    else csv.cell(std::string("NA")).cell(std::string("NA"));
    csv.cell(exact.monotonicity_violations, 0);
    if (as == HETFB_OK) csv.cell(asym.monotonicity_violations, 0);
    else csv.cell(std::string("NA"));
    csv.end();
  }
}

bool validate_table(const Options& o, std::ostream& out) {
  ScenarioPtr s = open_scenario(o);
  unsigned N = 0;
  check(hetfb_scenario_num_rb(s.get(), &N));
  hetfb_validate_options opt;
  hetfb_validate_options_init(&opt);
  opt.seed = resolve_seed(o, s.get());
  opt.feedback_m = o.m ? feedback_m(o, N) : std::min(opt.feedback_m, N);
  if (o.drops_flag) opt.drops = *o.drops_flag;
  opt.slots_per_drop = o.slots;
  opt.threads_hint = o.threads;
  hetfb_validation* raw = nullptr;
  check(hetfb_validate(s.get(), &opt, &raw));
  std::unique_ptr<hetfb_validation, ValidationDeleter> v(raw);
  CsvWriter csv(out);
  csv.header({"check", "status", "detail"});
  bool all = true;
  for (std::size_t i = 0; i < hetfb_validation_count(v.get()); ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int passed = 0;
    check(hetfb_validation_check(v.get(), i, &name, &passed, &detail));
    all = all && passed;
    csv.cell(std::string(name)).cell(std::string(passed ? "PASS" : "FAIL")).cell(std::string(detail));
    csv.end();
  }
  return all;
}

int exit_code_for(hetfb_status s) {
  return s == HETFB_E_PARSE || s == HETFB_E_VALIDATION || s == HETFB_E_INVALID_ARGUMENT ? exit_validation
                                                                                          : exit_runtime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rates, simulation and feedback planning for multi-tier cellular scenarios"};
  app.set_version_flag("--version", std::string("hetfb ") + hetfb_version());
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Write CSV here instead of stdout");
    sub->add_option("--seed", o.seed, "Master seed (beats the file and HETFB_SEED)");
    sub->add_option("--users", o.users, "Override user_drop.count")->check(CLI::Range(1u, 100000u));
  };
  auto drops_opt = [&](CLI::App* sub, const char* help) {
    sub->add_option("--drops", o.drops_flag, help)->check(CLI::Range(1u, 1000000u));
  };
  auto route_opt = [&](CLI::App* sub) {
    sub->add_option("--route", o.route, "Exact-rate evaluation route")
        ->check(CLI::IsMember({"automatic", "closed_form", "quadrature"}));
  };

  CLI::App* exact = app.add_subcommand("rate-exact", "Exact per-user and sum rates under the CDF scheduler");
  common(exact);
  exact->add_option("--M", o.m, "Resource blocks fed back per user (default N)");
  drops_opt(exact, "Number of large-scale realizations");
  route_opt(exact);

  CLI::App* asym = app.add_subcommand("rate-asymptotic", "Extreme-value approximation of the rates");
  common(asym);
  asym->add_option("--M", o.m, "Resource blocks fed back per user (default N)");
  drops_opt(asym, "Number of large-scale realizations");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo simulation of a scheduling policy");
  common(sim);
  sim->add_option("--M", o.m, "Resource blocks fed back per user (default N)");
  drops_opt(sim, "Number of drops");
  sim->add_option("--slots", o.slots, "Slots per drop")->check(CLI::Range(1u, 100000000u));
  sim->add_option("--policy", o.policy, "cdf, greedy or round_robin")
      ->check(CLI::IsMember({"cdf", "greedy", "round_robin"}));
  sim->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  CLI::App* plan = app.add_subcommand("plan-feedback", "Smallest M meeting a sum-rate ratio");
  common(plan);
  plan->add_option("--eta", o.eta, "Target ratio C(M)/C(N)")->check(CLI::Range(1e-12, 1.0));
  drops_opt(plan, "Number of large-scale realizations");
  route_opt(plan);

  CLI::App* val = app.add_subcommand("validate", "Oracle cross-checks; exit 2 if any fails");
  common(val);
  val->add_option("--M", o.m, "Feedback size for the simulation checks");
  drops_opt(val, "Drops for the simulation checks");
  val->add_option("--slots", o.slots, "Slots per drop for the simulation checks")->check(CLI::Range(1u, 100000000u));
  val->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation;
  }
  if (o.drops_flag) o.drops = *o.drops_flag;

  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out, std::ios::binary);
    if (!file) {
      std::cerr << "hetfb: cannot write " << o.out << "\n";
      return exit_runtime;
    }
  }
  std::ostringstream buffer;
  int code = exit_ok;
  try {
    if (exact->parsed()) rate_table(o, buffer, false);
    else if (asym->parsed()) rate_table(o, buffer, true);
    else if (sim->parsed()) simulate_table(o, buffer);
    else if (plan->parsed()) plan_table(o, buffer);
    else if (val->parsed() && !validate_table(o, buffer)) code = exit_validation;
  } catch (const Failure& f) {
    std::cerr << "hetfb: " << hetfb_status_name(f.status) << ": " << f.message << "\n";
    return exit_code_for(f.status);
  }
  (o.out.empty() ? std::cout : file) << buffer.str();
  return code;
}
