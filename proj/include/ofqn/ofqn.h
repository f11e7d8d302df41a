/*
 * ofqn: OpenFlow switch/controller queueing model.
 *
 * C interface to the analytic model, the sojourn-time distribution, the
 * discrete-event simulator, dimensioning sweeps and the validation suite.
 *
 * Conventions:
 *   - every function returns an ofqn_status; outputs go through pointers;
 *   - on failure a description is available from ofqn_last_error() on the
 *     calling thread until the next failing call on that thread;
 *   - objects created by ofqn_*_create / returned through `**out` are owned by
 *     the caller and released with the matching ofqn_*_destroy;
 *   - rates are in events per second, times in seconds.
 */
#ifndef OFQN_OFQN_H
#define OFQN_OFQN_H

#include <stddef.h>
#include <stdint.h>

#if defined(OFQN_BUILDING_LIBRARY)
#define OFQN_API __attribute__((visibility("default")))
#else
#define OFQN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ofqn_status {
    OFQN_OK = 0,
    OFQN_ERR_DOMAIN = 1,     /* argument outside its domain */
    OFQN_ERR_UNSTABLE = 2,   /* a station is saturated */
    OFQN_ERR_UNDEFINED = 3,  /* model undefined for these inputs */
    OFQN_ERR_NULL = 4,       /* required pointer argument was NULL */
    OFQN_ERR_RANGE = 5,      /* index out of range or buffer too small */
    OFQN_ERR_IO = 6,
    OFQN_ERR_INTERNAL = 7
} ofqn_status;

OFQN_API const char* ofqn_version(void);
OFQN_API const char* ofqn_last_error(void);
OFQN_API const char* ofqn_status_name(ofqn_status status);

/* ---- analytic model --------------------------------------------------- */

typedef struct ofqn_node_params {
    double lambda;     /* external arrival rate */
    double mu_switch;  /* switch service rate */
    double q_nf;       /* new-flow probability */
} ofqn_node_params;

typedef struct ofqn_solved_rates {
    double gamma_switch;
    double gamma_controller;
    double q_jack;
    double rho_switch;
    double rho_controller;
    int stable; /* both loads below 1 - 1e-9 */
} ofqn_solved_rates;

OFQN_API ofqn_status ofqn_derive_q_jack(double q_nf, double* q_jack);
OFQN_API ofqn_status ofqn_solve_rates(const ofqn_node_params* node, double mu_controller, ofqn_solved_rates* out);
OFQN_API ofqn_status ofqn_mean_sojourn_jackson(const ofqn_node_params* node, double mu_controller, double* out);
OFQN_API ofqn_status ofqn_mean_sojourn_openflow(const ofqn_node_params* node, double mu_controller, double* out);
OFQN_API ofqn_status ofqn_mean_sojourn_naive_jackson(const ofqn_node_params* node, double mu_controller,
                                                     double* out);

/* Station named by the most recent OFQN_ERR_UNSTABLE on this thread
 * ("switch", "switch 2", "controller"), or "" if none. */
OFQN_API const char* ofqn_last_unstable_station(void);

/* ---- chains ------------------------------------------------------------ */

typedef struct ofqn_chain ofqn_chain;

OFQN_API ofqn_status ofqn_chain_create(double mu_controller, ofqn_chain** out);
OFQN_API void ofqn_chain_destroy(ofqn_chain* chain);
OFQN_API ofqn_status ofqn_chain_add_node(ofqn_chain* chain, const ofqn_node_params* node);
OFQN_API size_t ofqn_chain_size(const ofqn_chain* chain);
/* Rates of node `index`; rho_controller/stable refer to the shared controller. */
OFQN_API ofqn_status ofqn_chain_solve(const ofqn_chain* chain, size_t index, ofqn_solved_rates* out);
/* per_class must hold ofqn_chain_size() values. */
OFQN_API ofqn_status ofqn_chain_sojourn(const ofqn_chain* chain, double* per_class, size_t capacity,
                                        double* aggregate);

/* ---- sojourn distribution --------------------------------------------- */

typedef struct ofqn_distribution ofqn_distribution;

typedef struct ofqn_distribution_info {
    double a_switch;
    double a_controller;
    double b1;
    double b2;
    double d;
    double q_nf;
    int degenerate;
} ofqn_distribution_info;

OFQN_API ofqn_status ofqn_distribution_create(const ofqn_node_params* node, double mu_controller,
                                              ofqn_distribution** out);
OFQN_API void ofqn_distribution_destroy(ofqn_distribution* dist);
OFQN_API ofqn_status ofqn_distribution_info_get(const ofqn_distribution* dist, ofqn_distribution_info* out);
OFQN_API ofqn_status ofqn_distribution_pdf(const ofqn_distribution* dist, double t, double* out);
OFQN_API ofqn_status ofqn_distribution_ccdf(const ofqn_distribution* dist, double t, double* out);
OFQN_API ofqn_status ofqn_distribution_prob_within(const ofqn_distribution* dist, double deadline, double* out);
OFQN_API ofqn_status ofqn_distribution_quantile(const ofqn_distribution* dist, double p, double* out);

/* ---- tables ------------------------------------------------------------ */

typedef struct ofqn_table ofqn_table;

typedef enum ofqn_format { OFQN_FORMAT_CSV = 0, OFQN_FORMAT_JSON = 1 } ofqn_format;

/* An empty table with the given header; rows are appended with
 * ofqn_table_append_row and filled cell by cell (new cells are empty). */
OFQN_API ofqn_status ofqn_table_create(const char* const* columns, size_t count, ofqn_table** out);
OFQN_API ofqn_status ofqn_table_append_row(ofqn_table* table, size_t* row);
OFQN_API ofqn_status ofqn_table_set_number(ofqn_table* table, size_t row, size_t column, double value);
OFQN_API ofqn_status ofqn_table_set_text(ofqn_table* table, size_t row, size_t column, const char* text);
OFQN_API void ofqn_table_destroy(ofqn_table* table);
OFQN_API size_t ofqn_table_rows(const ofqn_table* table);
OFQN_API size_t ofqn_table_columns(const ofqn_table* table);
OFQN_API const char* ofqn_table_column_name(const ofqn_table* table, size_t column);
/* NaN for empty or text cells. */
OFQN_API ofqn_status ofqn_table_number(const ofqn_table* table, size_t row, size_t column, double* out);
/* Two-call pattern: with buffer == NULL only *length is set (excluding the
 * terminating NUL). */
OFQN_API ofqn_status ofqn_table_render(const ofqn_table* table, ofqn_format format, char* buffer, size_t capacity,
                                       size_t* length);
OFQN_API ofqn_status ofqn_table_write_file(const ofqn_table* table, ofqn_format format, const char* path);

/* pdf/ccdf/cdf on `points` evenly spaced times in [0, t_max]; t_max <= 0
 * picks 10 mean sojourn times. */
OFQN_API ofqn_status ofqn_distribution_table(const ofqn_distribution* dist, size_t points, double t_max,
                                             ofqn_table** out);
OFQN_API ofqn_status ofqn_quantile_table(const ofqn_distribution* dist, const double* probabilities, size_t count,
                                         ofqn_table** out);

/* ---- simulation -------------------------------------------------------- */

typedef struct ofqn_sim_config {
    uint64_t seed;
    uint64_t packets_per_replication;
    uint32_t replications;
    double warmup_fraction;
    uint64_t sample_cap;
    int parallel;
} ofqn_sim_config;

typedef struct ofqn_sim_summary {
    double mean_sojourn;
    double ci_halfwidth;
    double controller_visit_fraction;
    uint64_t packets;
} ofqn_sim_summary;

typedef struct ofqn_sim_result ofqn_sim_result;

OFQN_API void ofqn_sim_config_default(ofqn_sim_config* cfg);
OFQN_API ofqn_status ofqn_simulate_node(const ofqn_node_params* node, double mu_controller,
                                        const ofqn_sim_config* cfg, ofqn_sim_result** out);
OFQN_API ofqn_status ofqn_simulate_chain(const ofqn_chain* chain, const ofqn_sim_config* cfg,
                                         ofqn_sim_result** out);
OFQN_API void ofqn_sim_result_destroy(ofqn_sim_result* result);
OFQN_API size_t ofqn_sim_result_classes(const ofqn_sim_result* result);
/* cls == (size_t)-1 selects the aggregate over all classes. */
OFQN_API ofqn_status ofqn_sim_result_summary(const ofqn_sim_result* result, size_t cls, ofqn_sim_summary* out);
OFQN_API ofqn_status ofqn_sim_result_replication_means(const ofqn_sim_result* result, size_t cls, double* buffer,
                                                       size_t capacity, size_t* count);
OFQN_API int ofqn_sim_result_max_controller_visits(const ofqn_sim_result* result);
OFQN_API size_t ofqn_sim_result_sample_count(const ofqn_sim_result* result);
OFQN_API ofqn_status ofqn_sim_result_empirical_ccdf(const ofqn_sim_result* result, double t, double* out);
/* Copies up to `capacity` sorted retained samples; *count receives the total. */
OFQN_API ofqn_status ofqn_sim_result_samples(const ofqn_sim_result* result, double* buffer, size_t capacity,
                                             size_t* count);

/* ---- dimensioning ------------------------------------------------------ */

typedef struct ofqn_throughput {
    double lambda;
    double lambda_sup;
    int feasible;
} ofqn_throughput;

OFQN_API ofqn_status ofqn_max_throughput(double delay_bound, double mu_switch, double q_nf, double mu_controller,
                                         ofqn_throughput* out);

typedef enum ofqn_sweep_variable {
    OFQN_SWEEP_LAMBDA = 0,
    OFQN_SWEEP_RHO_CONTROLLER = 1,
    OFQN_SWEEP_Q_NF = 2,
    OFQN_SWEEP_MU_CONTROLLER = 3,
    OFQN_SWEEP_DELAY_BOUND = 4
} ofqn_sweep_variable;

enum {
    OFQN_OUT_ANALYTIC_MEAN = 1,
    OFQN_OUT_NAIVE_MEAN = 2,
    OFQN_OUT_SIMULATED_MEAN = 4,
    OFQN_OUT_DEADLINE_PROB = 8,
    OFQN_OUT_THROUGHPUT = 16
};

typedef struct ofqn_sweep_spec {
    ofqn_sweep_variable variable;
    const double* grid;
    size_t grid_size;
    double lambda;
    double mu_switch;
    double q_nf;
    double mu_controller;
    double delay_bound;
    double deadline;
    unsigned outputs;
    ofqn_sim_config sim;
} ofqn_sweep_spec;

OFQN_API ofqn_status ofqn_sweep(const ofqn_sweep_spec* spec, ofqn_table** out);

typedef struct ofqn_figure_options {
    double mu_switch;
    double mu_controller;
    const double* q_values;  /* NULL/0: figure default */
    size_t q_count;
    const double* rho_grid;  /* NULL/0: 0.1 .. 0.9 */
    size_t rho_count;
    const double* controller_service_times; /* fig5, seconds */
    size_t controller_service_count;
    double deadline;
    size_t delay_points;
    int simulate;
    ofqn_sim_config sim;
} ofqn_figure_options;

OFQN_API void ofqn_figure_options_default(ofqn_figure_options* opts);
OFQN_API ofqn_status ofqn_figure(const char* name, const ofqn_figure_options* opts, ofqn_table** out);

/* ---- validation -------------------------------------------------------- */

typedef struct ofqn_validation_report ofqn_validation_report;

typedef struct ofqn_validation_options {
    int quick;
    uint64_t seed;
    double q_jack_perturbation;
    const int* only; /* criterion ids; NULL/0 runs all */
    size_t only_count;
} ofqn_validation_options;

typedef void (*ofqn_validation_callback)(int id, const char* name, int passed, const char* line, void* user);

OFQN_API void ofqn_validation_options_default(ofqn_validation_options* opts);
OFQN_API ofqn_status ofqn_validate(const ofqn_validation_options* opts, ofqn_validation_callback callback,
                                   void* user, ofqn_validation_report** out);
OFQN_API void ofqn_validation_report_destroy(ofqn_validation_report* report);
OFQN_API size_t ofqn_validation_report_size(const ofqn_validation_report* report);
OFQN_API int ofqn_validation_report_all_passed(const ofqn_validation_report* report);
/* Formatted one-line result for entry `index`, valid while the report lives. */
OFQN_API const char* ofqn_validation_report_line(const ofqn_validation_report* report, size_t index);
OFQN_API int ofqn_validation_report_passed(const ofqn_validation_report* report, size_t index);

#ifdef __cplusplus
}
#endif

#endif /* OFQN_OFQN_H */
