/* C interface to the hetfb rate analysis and simulation library. */
#ifndef HETFB_H
#define HETFB_H

#include <stddef.h>
#include <stdint.h>

#if defined(HETFB_BUILDING)
#define HETFB_API __attribute__((visibility("default")))
#else
#define HETFB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hetfb_status {
  HETFB_OK = 0,
  HETFB_E_INVALID_ARGUMENT = 1,
  HETFB_E_DOMAIN = 2,
  HETFB_E_DISTINCTNESS = 3,
  HETFB_E_CANCELLATION = 4,
  HETFB_E_CONVERGENCE = 5,
  HETFB_E_PARSE = 6,
  HETFB_E_VALIDATION = 7,
  HETFB_E_IO = 8,
  HETFB_E_INFEASIBLE = 9,
  HETFB_E_INTERNAL = 10
} hetfb_status;

typedef enum hetfb_kind {
  HETFB_KIND_GENERAL = 0,
  HETFB_KIND_INTERFERENCE_LIMITED = 1,
  HETFB_KIND_NOISE_LIMITED = 2
} hetfb_kind;

typedef enum hetfb_route {
  HETFB_ROUTE_AUTOMATIC = 0,
  HETFB_ROUTE_CLOSED_FORM = 1,
  HETFB_ROUTE_QUADRATURE = 2
} hetfb_route;

typedef enum hetfb_policy {
  HETFB_POLICY_CDF = 0,
  HETFB_POLICY_GREEDY = 1,
  HETFB_POLICY_ROUND_ROBIN = 2
} hetfb_policy;

typedef enum hetfb_log_level {
  HETFB_LOG_DEBUG = 0,
  HETFB_LOG_INFO = 1,
  HETFB_LOG_WARNING = 2,
  HETFB_LOG_ERROR = 3
} hetfb_log_level;

typedef struct hetfb_profile hetfb_profile;
typedef struct hetfb_scenario hetfb_scenario;
typedef struct hetfb_drop hetfb_drop;
typedef struct hetfb_report hetfb_report;
typedef struct hetfb_validation hetfb_validation;

HETFB_API const char* hetfb_version(void);
HETFB_API const char* hetfb_status_name(hetfb_status status);
/* Message of the last failed call on this thread; "" if none. */
HETFB_API const char* hetfb_last_error(void);

typedef void (*hetfb_log_fn)(hetfb_log_level level, const char* message, void* user);
/* NULL restores the default stderr sink. */
HETFB_API void hetfb_set_log_handler(hetfb_log_fn fn, void* user);

/* Profiles. Levels are linear, relative to the noise floor. */
HETFB_API hetfb_status hetfb_profile_general(double rho0, const double* interferers, size_t count,
                                             hetfb_profile** out);
HETFB_API hetfb_status hetfb_profile_interference_limited(double rho0, double rho1, hetfb_profile** out);
HETFB_API hetfb_status hetfb_profile_noise_limited(double rho0, hetfb_profile** out);
HETFB_API void hetfb_profile_free(hetfb_profile* p);
HETFB_API hetfb_status hetfb_profile_describe(const hetfb_profile* p, hetfb_kind* kind, double* rho0,
                                              size_t* num_interferers);
/* Copies min(cap, count) levels, largest first. */
HETFB_API hetfb_status hetfb_profile_interferers(const hetfb_profile* p, double* out, size_t cap);
HETFB_API hetfb_status hetfb_sinr_cdf(const hetfb_profile* p, double x, double* out);

/* Analysis. */
HETFB_API hetfb_status hetfb_g_k(const hetfb_profile* p, unsigned eps, hetfb_route route, double* out);
HETFB_API hetfb_status hetfb_user_rate_exact(const hetfb_profile* p, unsigned num_users, unsigned num_rb,
                                             unsigned feedback_m, hetfb_route route, double* out);
/* per_user may be NULL; otherwise it receives count values. */
HETFB_API hetfb_status hetfb_sum_rate_exact(const hetfb_profile* const* profiles, size_t count, unsigned num_rb,
                                            unsigned feedback_m, hetfb_route route, double* per_user,
                                            double* total);
HETFB_API hetfb_status hetfb_normalizing_constants(const hetfb_profile* p, double num_users, unsigned num_rb,
                                                   unsigned feedback_m, double* a, double* b);
HETFB_API hetfb_status hetfb_user_rate_asymptotic(const hetfb_profile* p, unsigned num_users, unsigned num_rb,
                                                  unsigned feedback_m, double* out);
HETFB_API hetfb_status hetfb_sum_rate_asymptotic(const hetfb_profile* const* profiles, size_t count,
                                                 unsigned num_rb, unsigned feedback_m, double* total);
HETFB_API hetfb_status hetfb_fairness_theta(const uint64_t* counts, size_t count, double* out);

typedef struct hetfb_feedback_plan {
  unsigned m;
  double ratio_at_m;
  size_t evaluations;
  size_t monotonicity_violations;
} hetfb_feedback_plan;

HETFB_API hetfb_status hetfb_min_feedback_exact(const hetfb_profile* const* profiles, size_t count,
                                                unsigned num_rb, double eta, hetfb_route route,
                                                hetfb_feedback_plan* out);
/* HETFB_E_INFEASIBLE when every M has K0 M / N <= 1. */
HETFB_API hetfb_status hetfb_min_feedback_asymptotic(const hetfb_profile* const* profiles, size_t count,
                                                     unsigned num_rb, double eta, hetfb_feedback_plan* out);

/* Scenarios. */
HETFB_API hetfb_status hetfb_scenario_load(const char* path, hetfb_scenario** out);
HETFB_API hetfb_status hetfb_scenario_parse(const char* json_text, hetfb_scenario** out);
HETFB_API void hetfb_scenario_free(hetfb_scenario* s);
HETFB_API hetfb_status hetfb_scenario_num_rb(const hetfb_scenario* s, unsigned* out);
HETFB_API hetfb_status hetfb_scenario_num_cells(const hetfb_scenario* s, size_t* out);
/* *has_seed = 0 when the file gives none. */
HETFB_API hetfb_status hetfb_scenario_seed(const hetfb_scenario* s, int* has_seed, uint64_t* seed);
/* Random-drop scenarios only. */
HETFB_API hetfb_status hetfb_scenario_set_user_count(hetfb_scenario* s, unsigned count);

typedef struct hetfb_user_info {
  double x_m;
  double y_m;
  size_t serving_cell;
  hetfb_kind kind;
  double rho0;
  size_t num_interferers;
  size_t folded_count;
} hetfb_user_info;

HETFB_API hetfb_status hetfb_scenario_realize(const hetfb_scenario* s, uint64_t seed, uint64_t drop,
                                              hetfb_drop** out);
HETFB_API void hetfb_drop_free(hetfb_drop* d);
HETFB_API hetfb_status hetfb_drop_num_users(const hetfb_drop* d, size_t* out);
HETFB_API hetfb_status hetfb_drop_user(const hetfb_drop* d, size_t index, hetfb_user_info* out);
/* Borrowed; valid while the drop lives. */
HETFB_API hetfb_status hetfb_drop_profiles(const hetfb_drop* d, const hetfb_profile* const** out, size_t* count);

/* Simulation. */
typedef struct hetfb_sim_config {
  unsigned num_drops;
  unsigned slots_per_drop;
  hetfb_policy policy;
  unsigned feedback_m;
  uint64_t master_seed;
  unsigned threads_hint; /* 0: hardware concurrency */
} hetfb_sim_config;

HETFB_API void hetfb_sim_config_init(hetfb_sim_config* cfg);
HETFB_API hetfb_status hetfb_policy_from_name(const char* name, hetfb_policy* out);
HETFB_API const char* hetfb_policy_name(hetfb_policy policy);

typedef struct hetfb_report_summary {
  hetfb_policy policy;
  unsigned num_users;
  unsigned num_rb;
  unsigned feedback_m;
  unsigned num_drops;
  unsigned slots_per_drop;
  double sum_rate;
  double sum_rate_se;
  double fairness_theta; /* NaN with one user */
  double fairness_theta_se;
  double outage_fraction;
  double outage_fraction_se;
} hetfb_report_summary;

/* Large-scale draws and fading both follow cfg->master_seed. */
HETFB_API hetfb_status hetfb_simulate_scenario(const hetfb_scenario* s, const hetfb_sim_config* cfg,
                                               hetfb_report** out);
HETFB_API hetfb_status hetfb_simulate_profiles(const hetfb_profile* const* profiles, size_t count,
                                               unsigned num_rb, const hetfb_sim_config* cfg, hetfb_report** out);
HETFB_API void hetfb_report_free(hetfb_report* r);
HETFB_API hetfb_status hetfb_report_summary_get(const hetfb_report* r, hetfb_report_summary* out);
HETFB_API hetfb_status hetfb_report_user_rate(const hetfb_report* r, size_t user, double* rate, double* se);

/* Oracle cross-checks. */
typedef struct hetfb_validate_options {
  uint64_t seed;
  unsigned feedback_m;
  unsigned drops;
  unsigned slots_per_drop;
  unsigned threads_hint;
} hetfb_validate_options;

HETFB_API void hetfb_validate_options_init(hetfb_validate_options* opt);
HETFB_API hetfb_status hetfb_validate(const hetfb_scenario* s, const hetfb_validate_options* opt,
                                      hetfb_validation** out);
HETFB_API void hetfb_validation_free(hetfb_validation* v);
HETFB_API size_t hetfb_validation_count(const hetfb_validation* v);
/* Strings are borrowed from v. */
HETFB_API hetfb_status hetfb_validation_check(const hetfb_validation* v, size_t index, const char** name,
                                              int* passed, const char** detail);

#ifdef __cplusplus
}
#endif

#endif
