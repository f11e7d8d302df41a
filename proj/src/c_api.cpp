#include "ofqn/ofqn.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "ofqn/analytic.hpp"
#include "ofqn/dimensioning.hpp"
#include "ofqn/distribution.hpp"
#include "ofqn/errors.hpp"
#include "ofqn/figures.hpp"
#include "ofqn/simulator.hpp"
#include "ofqn/table.hpp"
#include "ofqn/validation.hpp"

struct ofqn_chain {
    ofqn::ChainModel model;
};

struct ofqn_distribution {
    ofqn::SojournDistribution dist;
};

struct ofqn_table {
    ofqn::Table table;
};

struct ofqn_sim_result {
    ofqn::SimResult result;
};

struct ofqn_validation_report {
    ofqn::ValidationReport report;
    std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_unstable_station;

ofqn_status fail(ofqn_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
ofqn_status guarded(F&& body) {
    try {
        body();
        return OFQN_OK;
    } catch (const ofqn::UnstableError& e) {
        g_unstable_station = e.station();
        return fail(OFQN_ERR_UNSTABLE, e.what());
    } catch (const ofqn::UndefinedError& e) {
        return fail(OFQN_ERR_UNDEFINED, e.what());
    } catch (const ofqn::DomainError& e) {
        return fail(OFQN_ERR_DOMAIN, e.what());
    } catch (const std::out_of_range& e) {
        return fail(OFQN_ERR_RANGE, e.what());
    } catch (const std::bad_alloc&) {
        return fail(OFQN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(OFQN_ERR_INTERNAL, e.what());
    }
}

#define OFQN_REQUIRE(ptr)                                                       \
    do {                                                                        \
        if ((ptr) == nullptr) return fail(OFQN_ERR_NULL, #ptr " is NULL");      \
    } while (0)

ofqn::NodeParams to_node(const ofqn_node_params& n) { return {n.lambda, n.mu_switch, n.q_nf}; }

void from_rates(const ofqn::SolvedRates& r, ofqn_solved_rates* out) {
    out->gamma_switch = r.gamma_switch;
    out->gamma_controller = r.gamma_controller;
    out->q_jack = r.q_jack;
    out->rho_switch = r.rho_switch;
    out->rho_controller = r.rho_controller;
    out->stable = r.stable() ? 1 : 0;
}

ofqn::SimConfig to_sim(const ofqn_sim_config& c) {
    ofqn::SimConfig s;
    s.seed = c.seed;
    s.packets_per_replication = c.packets_per_replication;
    s.replications = c.replications;
    s.warmup_fraction = c.warmup_fraction;
    s.sample_cap = c.sample_cap;
    s.parallel = c.parallel != 0;
    return s;
}

std::vector<double> to_vector(const double* values, size_t count) {
    return values && count ? std::vector<double>(values, values + count) : std::vector<double>{};
}

ofqn::OutputFormat to_format(ofqn_format f) {
    return f == OFQN_FORMAT_JSON ? ofqn::OutputFormat::Json : ofqn::OutputFormat::Csv;
}

const ofqn::ClassStatistics* class_stats(const ofqn_sim_result* r, size_t cls, ofqn::ClassStatistics& aggregate) {
    if (cls == static_cast<size_t>(-1)) {
        aggregate.mean_sojourn = r->result.mean_sojourn;
        aggregate.ci_halfwidth = r->result.ci_halfwidth;
        aggregate.per_replication_means = r->result.per_replication_means;
        aggregate.packets = r->result.packets_counted;
        aggregate.controller_visit_fraction = r->result.controller_visit_fraction;
        return &aggregate;
    }
    return &r->result.classes.at(cls);
}

} // namespace

extern "C" {

const char* ofqn_version(void) { return "1.0.0"; }

const char* ofqn_last_error(void) { return g_last_error.c_str(); }

const char* ofqn_last_unstable_station(void) { return g_unstable_station.c_str(); }

const char* ofqn_status_name(ofqn_status status) {
    switch (status) {
    case OFQN_OK: return "ok";
    case OFQN_ERR_DOMAIN: return "domain error";
    case OFQN_ERR_UNSTABLE: return "unstable";
    case OFQN_ERR_UNDEFINED: return "undefined";
    case OFQN_ERR_NULL: return "null argument";
    case OFQN_ERR_RANGE: return "out of range";
    case OFQN_ERR_IO: return "i/o error";
    case OFQN_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

ofqn_status ofqn_derive_q_jack(double q_nf, double* q_jack) {
    OFQN_REQUIRE(q_jack);
    return guarded([&] { *q_jack = ofqn::derive_q_jack(q_nf); });
}

ofqn_status ofqn_solve_rates(const ofqn_node_params* node, double mu_controller, ofqn_solved_rates* out) {
    OFQN_REQUIRE(node);
    OFQN_REQUIRE(out);
    return guarded([&] { from_rates(ofqn::solve_rates(to_node(*node), {mu_controller}), out); });
}

ofqn_status ofqn_mean_sojourn_jackson(const ofqn_node_params* node, double mu_controller, double* out) {
    OFQN_REQUIRE(node);
    OFQN_REQUIRE(out);
    return guarded([&] {
        const auto n = to_node(*node);
        *out = ofqn::mean_sojourn_jackson(ofqn::solve_rates(n, {mu_controller}), n);
    });
}

ofqn_status ofqn_mean_sojourn_openflow(const ofqn_node_params* node, double mu_controller, double* out) {
    OFQN_REQUIRE(node);
    OFQN_REQUIRE(out);
    return guarded([&] {
        const auto n = to_node(*node);
        const ofqn::ControllerParams c{mu_controller};
        *out = ofqn::mean_sojourn_openflow(n, c, ofqn::solve_rates(n, c));
    });
}

ofqn_status ofqn_mean_sojourn_naive_jackson(const ofqn_node_params* node, double mu_controller, double* out) {
    OFQN_REQUIRE(node);
    OFQN_REQUIRE(out);
    return guarded([&] { *out = ofqn::mean_sojourn_naive_jackson(to_node(*node), {mu_controller}); });
}

ofqn_status ofqn_chain_create(double mu_controller, ofqn_chain** out) {
    OFQN_REQUIRE(out);
    return guarded([&] {
        ofqn::validate(ofqn::ControllerParams{mu_controller});
        *out = new ofqn_chain{ofqn::ChainModel{{}, {mu_controller}}};
    });
}

void ofqn_chain_destroy(ofqn_chain* chain) { delete chain; }

ofqn_status ofqn_chain_add_node(ofqn_chain* chain, const ofqn_node_params* node) {
    OFQN_REQUIRE(chain);
    OFQN_REQUIRE(node);
    return guarded([&] {
        ofqn::validate(to_node(*node));
        chain->model.nodes.push_back(to_node(*node));
    });
}

size_t ofqn_chain_size(const ofqn_chain* chain) { return chain ? chain->model.nodes.size() : 0; }

ofqn_status ofqn_chain_solve(const ofqn_chain* chain, size_t index, ofqn_solved_rates* out) {
    OFQN_REQUIRE(chain);
    OFQN_REQUIRE(out);
    return guarded([&] {
        const ofqn::ChainRates rates = ofqn::solve_chain(chain->model);
        from_rates(rates.nodes.at(index), out);
        out->stable = rates.stable() ? 1 : 0;
    });
}

ofqn_status ofqn_chain_sojourn(const ofqn_chain* chain, double* per_class, size_t capacity, double* aggregate) {
    OFQN_REQUIRE(chain);
    OFQN_REQUIRE(aggregate);
    if (per_class == nullptr && capacity > 0) return fail(OFQN_ERR_NULL, "per_class is NULL");
    if (capacity < chain->model.nodes.size()) return fail(OFQN_ERR_RANGE, "per_class buffer too small");
    return guarded([&] {
        const auto s = ofqn::chain_sojourn(chain->model, ofqn::solve_chain(chain->model));
        for (size_t i = 0; i < s.per_class.size(); ++i) per_class[i] = s.per_class[i];
        *aggregate = s.aggregate;
    });
}

ofqn_status ofqn_distribution_create(const ofqn_node_params* node, double mu_controller, ofqn_distribution** out) {
    OFQN_REQUIRE(node);
    OFQN_REQUIRE(out);
    return guarded([&] {
        const auto n = to_node(*node);
        const ofqn::ControllerParams c{mu_controller};
        *out = new ofqn_distribution{ofqn::build_distribution(n, c, ofqn::solve_rates(n, c))};
    });
}

void ofqn_distribution_destroy(ofqn_distribution* dist) { delete dist; }

ofqn_status ofqn_distribution_info_get(const ofqn_distribution* dist, ofqn_distribution_info* out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    const auto& d = dist->dist;
    *out = ofqn_distribution_info{d.a_switch, d.a_controller, d.b1, d.b2, d.d, d.q_nf, d.degenerate ? 1 : 0};
    return OFQN_OK;
}

ofqn_status ofqn_distribution_pdf(const ofqn_distribution* dist, double t, double* out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    return guarded([&] { *out = ofqn::pdf(dist->dist, t); });
}

ofqn_status ofqn_distribution_ccdf(const ofqn_distribution* dist, double t, double* out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    return guarded([&] { *out = ofqn::ccdf(dist->dist, t); });
}

ofqn_status ofqn_distribution_prob_within(const ofqn_distribution* dist, double deadline, double* out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    return guarded([&] { *out = ofqn::prob_within_deadline(dist->dist, deadline); });
}

ofqn_status ofqn_distribution_quantile(const ofqn_distribution* dist, double p, double* out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    return guarded([&] { *out = ofqn::quantile(dist->dist, p); });
}

ofqn_status ofqn_table_create(const char* const* columns, size_t count, ofqn_table** out) {
    OFQN_REQUIRE(out);
    if (columns == nullptr && count > 0) return fail(OFQN_ERR_NULL, "columns is NULL");
    for (size_t i = 0; i < count; ++i)
        if (columns[i] == nullptr) return fail(OFQN_ERR_NULL, "column name is NULL");
    return guarded([&] {
        auto t = std::make_unique<ofqn_table>();
        for (size_t i = 0; i < count; ++i) t->table.columns.emplace_back(columns[i]);
        *out = t.release();
    });
}

ofqn_status ofqn_table_append_row(ofqn_table* table, size_t* row) {
    OFQN_REQUIRE(table);
    return guarded([&] {
        table->table.add_row(std::vector<ofqn::Cell>(table->table.columns.size()));
        if (row) *row = table->table.rows.size() - 1;
    });
}

ofqn_status ofqn_table_set_number(ofqn_table* table, size_t row, size_t column, double value) {
    OFQN_REQUIRE(table);
    return guarded([&] { table->table.rows.at(row).at(column) = value; });
}

ofqn_status ofqn_table_set_text(ofqn_table* table, size_t row, size_t column, const char* text) {
    OFQN_REQUIRE(table);
    OFQN_REQUIRE(text);
    return guarded([&] { table->table.rows.at(row).at(column) = std::string(text); });
}

void ofqn_table_destroy(ofqn_table* table) { delete table; }

size_t ofqn_table_rows(const ofqn_table* table) { return table ? table->table.rows.size() : 0; }

size_t ofqn_table_columns(const ofqn_table* table) { return table ? table->table.columns.size() : 0; }

const char* ofqn_table_column_name(const ofqn_table* table, size_t column) {
    if (!table || column >= table->table.columns.size()) return nullptr;
    return table->table.columns[column].c_str();
}

ofqn_status ofqn_table_number(const ofqn_table* table, size_t row, size_t column, double* out) {
    OFQN_REQUIRE(table);
    OFQN_REQUIRE(out);
    return guarded([&] {
        const ofqn::Cell& c = table->table.rows.at(row).at(column);
        const double* v = std::get_if<double>(&c);
        *out = v ? *v : std::numeric_limits<double>::quiet_NaN();
    });
}

ofqn_status ofqn_table_render(const ofqn_table* table, ofqn_format format, char* buffer, size_t capacity,
                              size_t* length) {
    OFQN_REQUIRE(table);
    OFQN_REQUIRE(length);
    return guarded([&] {
        const std::string text = table->table.render(to_format(format));
        *length = text.size();
        if (buffer == nullptr) return;
        if (capacity < text.size() + 1) throw std::out_of_range("buffer too small for rendered table");
        std::memcpy(buffer, text.c_str(), text.size() + 1);
    });
}

ofqn_status ofqn_table_write_file(const ofqn_table* table, ofqn_format format, const char* path) {
    OFQN_REQUIRE(table);
    OFQN_REQUIRE(path);
    std::ofstream f(path, std::ios::binary);
    if (!f) return fail(OFQN_ERR_IO, std::string("cannot open ") + path + " for writing");
    const ofqn_status st = guarded([&] { f << table->table.render(to_format(format)); });
    if (st != OFQN_OK) return st;
    f.close();
    if (!f) return fail(OFQN_ERR_IO, std::string("failed writing ") + path);
    return OFQN_OK;
}

ofqn_status ofqn_distribution_table(const ofqn_distribution* dist, size_t points, double t_max, ofqn_table** out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    return guarded([&] {
        const double horizon = t_max > 0.0 ? t_max : 10.0 * dist->dist.mean();
        *out = new ofqn_table{ofqn::distribution_table(dist->dist, points, horizon)};
    });
}

ofqn_status ofqn_quantile_table(const ofqn_distribution* dist, const double* probabilities, size_t count,
                                ofqn_table** out) {
    OFQN_REQUIRE(dist);
    OFQN_REQUIRE(out);
    if (probabilities == nullptr && count > 0) return fail(OFQN_ERR_NULL, "probabilities is NULL");
    return guarded([&] { *out = new ofqn_table{ofqn::quantile_table(dist->dist, to_vector(probabilities, count))}; });
}

void ofqn_sim_config_default(ofqn_sim_config* cfg) {
    if (!cfg) return;
    const ofqn::SimConfig d;
    *cfg = ofqn_sim_config{d.seed, d.packets_per_replication, d.replications, d.warmup_fraction, d.sample_cap,
                           d.parallel ? 1 : 0};
}

ofqn_status ofqn_simulate_node(const ofqn_node_params* node, double mu_controller, const ofqn_sim_config* cfg,
                               ofqn_sim_result** out) {
    OFQN_REQUIRE(node);
    OFQN_REQUIRE(cfg);
    OFQN_REQUIRE(out);
    return guarded([&] {
        *out = new ofqn_sim_result{ofqn::run_single_node(to_node(*node), {mu_controller}, to_sim(*cfg))};
    });
}

ofqn_status ofqn_simulate_chain(const ofqn_chain* chain, const ofqn_sim_config* cfg, ofqn_sim_result** out) {
    OFQN_REQUIRE(chain);
    OFQN_REQUIRE(cfg);
    OFQN_REQUIRE(out);
    return guarded([&] { *out = new ofqn_sim_result{ofqn::run_chain(chain->model, to_sim(*cfg))}; });
}

void ofqn_sim_result_destroy(ofqn_sim_result* result) { delete result; }

size_t ofqn_sim_result_classes(const ofqn_sim_result* result) { return result ? result->result.classes.size() : 0; }

ofqn_status ofqn_sim_result_summary(const ofqn_sim_result* result, size_t cls, ofqn_sim_summary* out) {
    OFQN_REQUIRE(result);
    OFQN_REQUIRE(out);
    return guarded([&] {
        ofqn::ClassStatistics aggregate;
        const auto* s = class_stats(result, cls, aggregate);
        *out = ofqn_sim_summary{s->mean_sojourn, s->ci_halfwidth, s->controller_visit_fraction, s->packets};
    });
}

ofqn_status ofqn_sim_result_replication_means(const ofqn_sim_result* result, size_t cls, double* buffer,
                                              size_t capacity, size_t* count) {
    OFQN_REQUIRE(result);
    OFQN_REQUIRE(count);
    return guarded([&] {
        ofqn::ClassStatistics aggregate;
        const auto& means = class_stats(result, cls, aggregate)->per_replication_means;
        *count = means.size();
        for (size_t i = 0; buffer && i < means.size() && i < capacity; ++i) buffer[i] = means[i];
    });
}

int ofqn_sim_result_max_controller_visits(const ofqn_sim_result* result) {
    return result ? result->result.max_controller_visits : 0;
}

size_t ofqn_sim_result_sample_count(const ofqn_sim_result* result) {
    return result ? result->result.empirical_samples.size() : 0;
}

ofqn_status ofqn_sim_result_empirical_ccdf(const ofqn_sim_result* result, double t, double* out) {
    OFQN_REQUIRE(result);
    OFQN_REQUIRE(out);
    *out = ofqn::empirical_ccdf(result->result, t);
    return OFQN_OK;
}

ofqn_status ofqn_sim_result_samples(const ofqn_sim_result* result, double* buffer, size_t capacity, size_t* count) {
    OFQN_REQUIRE(result);
    OFQN_REQUIRE(count);
    const auto& s = result->result.empirical_samples;
    *count = s.size();
    for (size_t i = 0; buffer && i < s.size() && i < capacity; ++i) buffer[i] = s[i];
    return OFQN_OK;
}

ofqn_status ofqn_max_throughput(double delay_bound, double mu_switch, double q_nf, double mu_controller,
                                ofqn_throughput* out) {
    OFQN_REQUIRE(out);
    return guarded([&] {
        const auto r = ofqn::max_throughput(delay_bound, {mu_switch, q_nf}, {mu_controller});
        *out = ofqn_throughput{r.lambda, r.lambda_sup, r.feasible ? 1 : 0};
    });
}

ofqn_status ofqn_sweep(const ofqn_sweep_spec* spec, ofqn_table** out) {
    OFQN_REQUIRE(spec);
    OFQN_REQUIRE(out);
    if (spec->grid == nullptr && spec->grid_size > 0) return fail(OFQN_ERR_NULL, "grid is NULL");
    if (spec->variable < OFQN_SWEEP_LAMBDA || spec->variable > OFQN_SWEEP_DELAY_BOUND)
        return fail(OFQN_ERR_DOMAIN, "unknown sweep variable");
    return guarded([&] {
        ofqn::SweepSpec s;
        s.variable = static_cast<ofqn::SweepVariable>(spec->variable);
        s.grid = to_vector(spec->grid, spec->grid_size);
        s.fixed = ofqn::SweepFixed{spec->lambda,      spec->mu_switch,   spec->q_nf,
                                   spec->mu_controller, spec->delay_bound, spec->deadline};
        s.outputs = spec->outputs;
        s.sim = to_sim(spec->sim);
        *out = new ofqn_table{ofqn::sweep(s)};
    });
}

void ofqn_figure_options_default(ofqn_figure_options* opts) {
    if (!opts) return;
    const ofqn::FigureOptions d;
    *opts = ofqn_figure_options{};
    opts->mu_switch = d.mu_switch;
    opts->mu_controller = d.mu_controller;
    opts->deadline = d.deadline;
    opts->delay_points = d.delay_points;
    opts->simulate = d.simulate ? 1 : 0;
    ofqn_sim_config_default(&opts->sim);
}

ofqn_status ofqn_figure(const char* name, const ofqn_figure_options* opts, ofqn_table** out) {
    OFQN_REQUIRE(name);
    OFQN_REQUIRE(opts);
    OFQN_REQUIRE(out);
    return guarded([&] {
        ofqn::FigureOptions o;
        o.mu_switch = opts->mu_switch;
        o.mu_controller = opts->mu_controller;
        o.q_values = to_vector(opts->q_values, opts->q_count);
        o.rho_grid = to_vector(opts->rho_grid, opts->rho_count);
        o.controller_service_times = to_vector(opts->controller_service_times, opts->controller_service_count);
        o.deadline = opts->deadline;
        o.delay_points = opts->delay_points;
        o.simulate = opts->simulate != 0;
        o.sim = to_sim(opts->sim);
        *out = new ofqn_table{ofqn::figure(name, o)};
    });
}

void ofqn_validation_options_default(ofqn_validation_options* opts) {
    if (!opts) return;
    const ofqn::ValidationOptions d;
    *opts = ofqn_validation_options{d.quick ? 1 : 0, d.seed, d.q_jack_perturbation, nullptr, 0};
}

ofqn_status ofqn_validate(const ofqn_validation_options* opts, ofqn_validation_callback callback, void* user,
                          ofqn_validation_report** out) {
    OFQN_REQUIRE(opts);
    OFQN_REQUIRE(out);
    return guarded([&] {
        ofqn::ValidationOptions o;
        o.quick = opts->quick != 0;
        o.seed = opts->seed;
        o.q_jack_perturbation = opts->q_jack_perturbation;
        if (opts->only && opts->only_count) o.only.assign(opts->only, opts->only + opts->only_count);
        auto report = std::make_unique<ofqn_validation_report>();
        report->report = ofqn::run_validation(o, [&](const ofqn::CriterionResult& r) {
            if (callback)
                callback(r.id, r.name.c_str(), r.passed ? 1 : 0, ofqn::format_result_line(r).c_str(), user);
        });
        for (const auto& r : report->report.criteria) report->lines.push_back(ofqn::format_result_line(r));
        *out = report.release();
    });
}

void ofqn_validation_report_destroy(ofqn_validation_report* report) { delete report; }

size_t ofqn_validation_report_size(const ofqn_validation_report* report) {
    return report ? report->report.criteria.size() : 0;
}

int ofqn_validation_report_all_passed(const ofqn_validation_report* report) {
    return report && report->report.all_passed() ? 1 : 0;
}

const char* ofqn_validation_report_line(const ofqn_validation_report* report, size_t index) {
    if (!report || index >= report->lines.size()) return nullptr;
    return report->lines[index].c_str();
}

int ofqn_validation_report_passed(const ofqn_validation_report* report, size_t index) {
    if (!report || index >= report->report.criteria.size()) return 0;
    return report->report.criteria[index].passed ? 1 : 0;
}

} // extern "C"
