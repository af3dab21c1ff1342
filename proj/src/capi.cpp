#include "hetfb/hetfb.h"

#include <cmath>
#include <exception>
#include <mutex>
#include <new>
#include <string>
#include <vector>

#include "hetfb/asymptotics.hpp"
#include "hetfb/error.hpp"
#include "hetfb/exact_rate.hpp"
#include "hetfb/log.hpp"
#include "hetfb/planner.hpp"
#include "hetfb/scenario.hpp"
#include "hetfb/simulator.hpp"
#include "hetfb/validate.hpp"

struct hetfb_profile {
  hetfb::LinkProfile value;
};

struct hetfb_scenario {
  hetfb::Scenario value;
};

struct hetfb_drop {
  hetfb::DropRealization value;
  std::vector<hetfb_profile> profiles;
  std::vector<const hetfb_profile*> handles;
};

struct hetfb_report {
  hetfb::RateReport value;
};

struct hetfb_validation {
  std::vector<hetfb::ValidationCheck> checks;
};

namespace {

thread_local std::string g_last_error;

hetfb_status to_status(hetfb::Errc e) { return static_cast<hetfb_status>(static_cast<int>(e)); }

template <class F>
hetfb_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return HETFB_OK;
  } catch (const hetfb::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return HETFB_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HETFB_E_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return HETFB_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) hetfb::fail(hetfb::Errc::invalid_argument, std::string(what) + " must not be null");
}

std::vector<hetfb::LinkProfile> collect(const hetfb_profile* const* profiles, size_t count) {
  if (count > 0) need(profiles, "profiles");
  std::vector<hetfb::LinkProfile> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    need(profiles[i], "profile entry");
    out.push_back(profiles[i]->value);
  }
  return out;
}

hetfb::RateRoute route_of(hetfb_route r) {
  switch (r) {
    case HETFB_ROUTE_AUTOMATIC: return hetfb::RateRoute::automatic;
    case HETFB_ROUTE_CLOSED_FORM: return hetfb::RateRoute::closed_form;
    case HETFB_ROUTE_QUADRATURE: return hetfb::RateRoute::quadrature;
  }
  hetfb::fail(hetfb::Errc::invalid_argument, "unknown rate route");
}

hetfb::Policy policy_of(hetfb_policy p) {
  switch (p) {
    case HETFB_POLICY_CDF: return hetfb::Policy::cdf;
    case HETFB_POLICY_GREEDY: return hetfb::Policy::greedy;
    case HETFB_POLICY_ROUND_ROBIN: return hetfb::Policy::round_robin;
  }
  hetfb::fail(hetfb::Errc::invalid_argument, "unknown policy");
}

hetfb::SimConfig sim_config(const hetfb_sim_config* cfg) {
  need(cfg, "config");
  hetfb::SimConfig c;
  c.num_drops = cfg->num_drops;
  c.slots_per_drop = cfg->slots_per_drop;
  c.policy = policy_of(cfg->policy);
  c.feedback_m = cfg->feedback_m;
  c.master_seed = cfg->master_seed;
  c.threads_hint = cfg->threads_hint;
  return c;
}

hetfb_kind kind_of(hetfb::ProfileKind k) {
  switch (k) {
    case hetfb::ProfileKind::general: return HETFB_KIND_GENERAL;
    case hetfb::ProfileKind::interference_limited: return HETFB_KIND_INTERFERENCE_LIMITED;
    case hetfb::ProfileKind::noise_limited: return HETFB_KIND_NOISE_LIMITED;
  }
  return HETFB_KIND_GENERAL;
}

void fill_plan(const hetfb::FeedbackScan& s, hetfb_feedback_plan* out) {
  out->m = s.m;
  out->ratio_at_m = s.ratio_at_m;
  out->evaluations = s.evaluations;
  out->monotonicity_violations = s.monotonicity_violations;
}

}  // namespace

extern "C" {

const char* hetfb_version(void) { return "1.0.0"; }

const char* hetfb_status_name(hetfb_status status) {
  switch (status) {
    case HETFB_OK: return "ok";
    case HETFB_E_INVALID_ARGUMENT: return "invalid_argument";
    case HETFB_E_DOMAIN: return "domain";
    case HETFB_E_DISTINCTNESS: return "distinctness";
    case HETFB_E_CANCELLATION: return "cancellation";
    case HETFB_E_CONVERGENCE: return "convergence";
    case HETFB_E_PARSE: return "parse";
    case HETFB_E_VALIDATION: return "validation";
    case HETFB_E_IO: return "io";
    case HETFB_E_INFEASIBLE: return "infeasible";
    case HETFB_E_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* hetfb_last_error(void) { return g_last_error.c_str(); }

void hetfb_set_log_handler(hetfb_log_fn fn, void* user) {
  if (!fn) {
    hetfb::set_log_sink({});
    return;
  }
  hetfb::set_log_sink([fn, user](hetfb::LogLevel level, const std::string& msg) {
    fn(static_cast<hetfb_log_level>(static_cast<int>(level)), msg.c_str(), user);
  });
}

hetfb_status hetfb_profile_general(double rho0, const double* interferers, size_t count, hetfb_profile** out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(interferers, "interferers");
    *out = new hetfb_profile{hetfb::LinkProfile::general(rho0, std::vector<double>(interferers, interferers + count))};
  });
}

hetfb_status hetfb_profile_interference_limited(double rho0, double rho1, hetfb_profile** out) {
  return guard([&] {
    need(out, "out");
    *out = new hetfb_profile{hetfb::LinkProfile::interference_limited(rho0, rho1)};
  });
}

hetfb_status hetfb_profile_noise_limited(double rho0, hetfb_profile** out) {
  return guard([&] {
    need(out, "out");
    *out = new hetfb_profile{hetfb::LinkProfile::noise_limited(rho0)};
  });
}

void hetfb_profile_free(hetfb_profile* p) { delete p; }

hetfb_status hetfb_profile_describe(const hetfb_profile* p, hetfb_kind* kind, double* rho0, size_t* num_interferers) {
  return guard([&] {
    need(p, "profile");
    if (kind) *kind = kind_of(p->value.kind());
    if (rho0) *rho0 = p->value.rho0();
    if (num_interferers) *num_interferers = p->value.num_interferers();
  });
}

hetfb_status hetfb_profile_interferers(const hetfb_profile* p, double* out, size_t cap) {
  return guard([&] {
    need(p, "profile");
    const auto& v = p->value.interferers();
    if (cap > 0) need(out, "out");
    for (size_t i = 0; i < v.size() && i < cap; ++i) out[i] = v[i];
  });
}

hetfb_status hetfb_sinr_cdf(const hetfb_profile* p, double x, double* out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    *out = hetfb::sinr_cdf(p->value, x);
  });
}

hetfb_status hetfb_g_k(const hetfb_profile* p, unsigned eps, hetfb_route route, double* out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    switch (route_of(route)) {
      case hetfb::RateRoute::closed_form: *out = hetfb::g_k_closed_form(p->value, eps).value; break;
      case hetfb::RateRoute::quadrature: *out = hetfb::g_k_quadrature(p->value, eps); break;
      case hetfb::RateRoute::automatic:
        try {
          *out = hetfb::g_k_closed_form(p->value, eps).value;
        } catch (const hetfb::Error& e) {
          if (e.code() != hetfb::Errc::cancellation) throw;
          *out = hetfb::g_k_quadrature(p->value, eps);
        }
        break;
    }
  });
}

hetfb_status hetfb_user_rate_exact(const hetfb_profile* p, unsigned K0, unsigned N, unsigned M, hetfb_route route,
                                   double* out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    *out = hetfb::user_rate_exact(p->value, K0, N, M, route_of(route));
  });
}

hetfb_status hetfb_sum_rate_exact(const hetfb_profile* const* profiles, size_t count, unsigned N, unsigned M,
                                  hetfb_route route, double* per_user, double* total) {
  return guard([&] {
    need(total, "total");
    const auto r = hetfb::sum_rate_exact(collect(profiles, count), N, M, route_of(route));
    if (per_user)
      for (size_t i = 0; i < r.per_user.size(); ++i) per_user[i] = r.per_user[i];
    *total = r.total;
  });
}

hetfb_status hetfb_normalizing_constants(const hetfb_profile* p, double K, unsigned N, unsigned M, double* a,
                                         double* b) {
  return guard([&] {
    need(p, "profile");
    const auto c = hetfb::normalizing_constants(p->value, K, N, M);
    if (a) *a = c.a;
    if (b) *b = c.b;
  });
}

hetfb_status hetfb_user_rate_asymptotic(const hetfb_profile* p, unsigned K0, unsigned N, unsigned M, double* out) {
  return guard([&] {
    need(p, "profile");
    need(out, "out");
    *out = hetfb::user_rate_asymptotic(p->value, K0, N, M);
  });
}

hetfb_status hetfb_sum_rate_asymptotic(const hetfb_profile* const* profiles, size_t count, unsigned N, unsigned M,
                                       double* total) {
  return guard([&] {
    need(total, "total");
    *total = hetfb::sum_rate_asymptotic(collect(profiles, count), N, M);
  });
}

hetfb_status hetfb_fairness_theta(const uint64_t* counts, size_t count, double* out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(counts, "counts");
    *out = hetfb::fairness_theta(std::vector<std::uint64_t>(counts, counts + count));
  });
}

hetfb_status hetfb_min_feedback_exact(const hetfb_profile* const* profiles, size_t count, unsigned N, double eta,
                                      hetfb_route route, hetfb_feedback_plan* out) {
  return guard([&] {
    need(out, "out");
    fill_plan(hetfb::min_feedback_exact(collect(profiles, count), N, eta, false, route_of(route)), out);
  });
}

hetfb_status hetfb_min_feedback_asymptotic(const hetfb_profile* const* profiles, size_t count, unsigned N,
                                           double eta, hetfb_feedback_plan* out) {
  return guard([&] {
    need(out, "out");
    fill_plan(hetfb::min_feedback_asymptotic(collect(profiles, count), N, eta), out);
  });
}

hetfb_status hetfb_scenario_load(const char* path, hetfb_scenario** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new hetfb_scenario{hetfb::load_scenario(path)};
  });
}

hetfb_status hetfb_scenario_parse(const char* json_text, hetfb_scenario** out) {
  return guard([&] {
    need(json_text, "text");
    need(out, "out");
    *out = new hetfb_scenario{hetfb::parse_scenario(json_text)};
  });
}

void hetfb_scenario_free(hetfb_scenario* s) { delete s; }

hetfb_status hetfb_scenario_num_rb(const hetfb_scenario* s, unsigned* out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    *out = s->value.radio.num_rb;
  });
}

hetfb_status hetfb_scenario_num_cells(const hetfb_scenario* s, size_t* out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    *out = s->value.cells.size();
  });
}

hetfb_status hetfb_scenario_seed(const hetfb_scenario* s, int* has_seed, uint64_t* seed) {
  return guard([&] {
    need(s, "scenario");
    if (has_seed) *has_seed = s->value.seed.has_value();
    if (seed) *seed = s->value.seed.value_or(hetfb::default_seed);
  });
}

hetfb_status hetfb_scenario_set_user_count(hetfb_scenario* s, unsigned count) {
  return guard([&] {
    need(s, "scenario");
    if (!s->value.user_drop) hetfb::fail(hetfb::Errc::invalid_argument, "scenario has fixed users");
    if (count < 1) hetfb::fail(hetfb::Errc::invalid_argument, "user count must be at least 1");
    s->value.user_drop->count = count;
  });
}

hetfb_status hetfb_scenario_realize(const hetfb_scenario* s, uint64_t seed, uint64_t drop, hetfb_drop** out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    auto* d = new hetfb_drop{hetfb::realize_drop(s->value, seed, drop), {}, {}};
    d->profiles.reserve(d->value.profiles.size());
    for (const auto& p : d->value.profiles) d->profiles.push_back(hetfb_profile{p});
    for (const auto& p : d->profiles) d->handles.push_back(&p);
    *out = d;
  });
}

void hetfb_drop_free(hetfb_drop* d) { delete d; }

hetfb_status hetfb_drop_num_users(const hetfb_drop* d, size_t* out) {
  return guard([&] {
    need(d, "drop");
    need(out, "out");
    *out = d->profiles.size();
  });
}

hetfb_status hetfb_drop_user(const hetfb_drop* d, size_t index, hetfb_user_info* out) {
  return guard([&] {
    need(d, "drop");
    need(out, "out");
    if (index >= d->value.links.size()) hetfb::fail(hetfb::Errc::invalid_argument, "user index out of range");
    const auto& link = d->value.links[index];
    out->x_m = d->value.positions[index].x;
    out->y_m = d->value.positions[index].y;
    out->serving_cell = link.serving_cell;
    out->kind = kind_of(link.profile.kind());
    out->rho0 = link.profile.rho0();
    out->num_interferers = link.profile.num_interferers();
    out->folded_count = link.folded_count;
  });
}

hetfb_status hetfb_drop_profiles(const hetfb_drop* d, const hetfb_profile* const** out, size_t* count) {
  return guard([&] {
    need(d, "drop");
    need(out, "out");
    need(count, "count");
    *out = d->handles.data();
    *count = d->handles.size();
  });
}

void hetfb_sim_config_init(hetfb_sim_config* cfg) {
  if (!cfg) return;
  const hetfb::SimConfig c;
  cfg->num_drops = c.num_drops;
  cfg->slots_per_drop = c.slots_per_drop;
  cfg->policy = HETFB_POLICY_CDF;
  cfg->feedback_m = c.feedback_m;
  cfg->master_seed = c.master_seed;
  cfg->threads_hint = c.threads_hint;
}

hetfb_status hetfb_policy_from_name(const char* name, hetfb_policy* out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = static_cast<hetfb_policy>(static_cast<int>(hetfb::parse_policy(name)));
  });
}

const char* hetfb_policy_name(hetfb_policy policy) {
  switch (policy) {
    case HETFB_POLICY_CDF:
    case HETFB_POLICY_GREEDY:
    case HETFB_POLICY_ROUND_ROBIN: return hetfb::policy_name(static_cast<hetfb::Policy>(policy));
  }
  return "unknown";
}

hetfb_status hetfb_simulate_scenario(const hetfb_scenario* s, const hetfb_sim_config* cfg, hetfb_report** out) {
  return guard([&] {
    need(s, "scenario");
    need(out, "out");
    const auto c = sim_config(cfg);
    const hetfb::Scenario& sc = s->value;
    auto source = [&](std::uint64_t drop) { return hetfb::realize_drop(sc, c.master_seed, drop).profiles; };
    *out = new hetfb_report{hetfb::simulate(source, sc.radio.num_rb, c)};
  });
}

hetfb_status hetfb_simulate_profiles(const hetfb_profile* const* profiles, size_t count, unsigned N,
                                     const hetfb_sim_config* cfg, hetfb_report** out) {
  return guard([&] {
    need(out, "out");
    *out = new hetfb_report{hetfb::simulate_profiles(collect(profiles, count), N, sim_config(cfg))};
  });
}

void hetfb_report_free(hetfb_report* r) { delete r; }

hetfb_status hetfb_report_summary_get(const hetfb_report* r, hetfb_report_summary* out) {
  return guard([&] {
    need(r, "report");
    need(out, "out");
    const auto& v = r->value;
    out->policy = static_cast<hetfb_policy>(static_cast<int>(v.policy));
    out->num_users = v.num_users;
    out->num_rb = v.num_rb;
    out->feedback_m = v.feedback_m;
    out->num_drops = v.num_drops;
    out->slots_per_drop = v.slots_per_drop;
    out->sum_rate = v.sum_rate;
    out->sum_rate_se = v.sum_rate_se;
    out->fairness_theta = v.fairness_theta;
    out->fairness_theta_se = v.fairness_theta_se;
    out->outage_fraction = v.outage_fraction;
    out->outage_fraction_se = v.outage_fraction_se;
  });
}

hetfb_status hetfb_report_user_rate(const hetfb_report* r, size_t user, double* rate, double* se) {
  return guard([&] {
    need(r, "report");
    if (user >= r->value.per_user_rate.size()) hetfb::fail(hetfb::Errc::invalid_argument, "user index out of range");
    if (rate) *rate = r->value.per_user_rate[user];
    if (se) *se = r->value.per_user_rate_se[user];
  });
}

void hetfb_validate_options_init(hetfb_validate_options* opt) {
  if (!opt) return;
  const hetfb::ValidationOptions o;
  opt->seed = o.seed;
  opt->feedback_m = o.feedback_m;
  opt->drops = o.drops;
  opt->slots_per_drop = o.slots_per_drop;
  opt->threads_hint = o.threads_hint;
}

hetfb_status hetfb_validate(const hetfb_scenario* s, const hetfb_validate_options* opt, hetfb_validation** out) {
  return guard([&] {
    need(s, "scenario");
    need(opt, "options");
    need(out, "out");
    hetfb::ValidationOptions o;
    o.seed = opt->seed;
    o.feedback_m = opt->feedback_m;
    o.drops = opt->drops;
    o.slots_per_drop = opt->slots_per_drop;
    o.threads_hint = opt->threads_hint;
    *out = new hetfb_validation{hetfb::run_validation(s->value, o)};
  });
}

void hetfb_validation_free(hetfb_validation* v) { delete v; }

size_t hetfb_validation_count(const hetfb_validation* v) { return v ? v->checks.size() : 0; }

hetfb_status hetfb_validation_check(const hetfb_validation* v, size_t index, const char** name, int* passed,
                                    const char** detail) {
  return guard([&] {
    need(v, "validation");
    if (index >= v->checks.size()) hetfb::fail(hetfb::Errc::invalid_argument, "check index out of range");
    const auto& c = v->checks[index];
    if (name) *name = c.name.c_str();
    if (passed) *passed = c.passed ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

}  // extern "C"
