// ofqn command line. Talks to the model exclusively through the C API.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ofqn/ofqn.h"
#include "run_config.hpp"

namespace {

using namespace ofqn_cli;

enum ExitCode { kSuccess = 0, kUsage = 1, kUnstable = 2, kValidationFailed = 3 };

class CliFailure : public std::runtime_error {
public:
    CliFailure(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

void check(ofqn_status status) {
    if (status == OFQN_OK) return;
    throw CliFailure(status == OFQN_ERR_UNSTABLE ? kUnstable : kUsage, ofqn_last_error());
}

template <class T, void (*Destroy)(T*)>
struct Releaser {
    void operator()(T* p) const { Destroy(p); }
};
using TablePtr = std::unique_ptr<ofqn_table, Releaser<ofqn_table, ofqn_table_destroy>>;
using ChainPtr = std::unique_ptr<ofqn_chain, Releaser<ofqn_chain, ofqn_chain_destroy>>;
using DistPtr = std::unique_ptr<ofqn_distribution, Releaser<ofqn_distribution, ofqn_distribution_destroy>>;
using SimPtr = std::unique_ptr<ofqn_sim_result, Releaser<ofqn_sim_result, ofqn_sim_result_destroy>>;
using ReportPtr =
    std::unique_ptr<ofqn_validation_report, Releaser<ofqn_validation_report, ofqn_validation_report_destroy>>;

// Builds a result table through the C API so formatting matches library tables.
class TableBuilder {
public:
    explicit TableBuilder(std::vector<std::string> columns) : columns_(std::move(columns)) {
        std::vector<const char*> names;
        for (const auto& c : columns_) names.push_back(c.c_str());
        ofqn_table* raw = nullptr;
        check(ofqn_table_create(names.data(), names.size(), &raw));
        table_.reset(raw);
    }

    std::size_t add_row() {
        std::size_t row = 0;
        check(ofqn_table_append_row(table_.get(), &row));
        return row;
    }
    void set(std::size_t row, const std::string& column, double v) {
        check(ofqn_table_set_number(table_.get(), row, index(column), v));
    }
    void set(std::size_t row, const std::string& column, const std::string& text) {
        check(ofqn_table_set_text(table_.get(), row, index(column), text.c_str()));
    }
    const ofqn_table* get() const { return table_.get(); }

private:
    std::size_t index(const std::string& column) const {
        for (std::size_t i = 0; i < columns_.size(); ++i)
            if (columns_[i] == column) return i;
        throw std::logic_error("unknown column " + column);
    }

    std::vector<std::string> columns_;
    TablePtr table_;
};

void emit(const ofqn_table* table, const RunConfig& cfg) {
    const ofqn_format format = cfg.output.format == "json" ? OFQN_FORMAT_JSON : OFQN_FORMAT_CSV;
    if (cfg.output.path != "-") {
        check(ofqn_table_write_file(table, format, cfg.output.path.c_str()));
        return;
    }
    std::size_t length = 0;
    check(ofqn_table_render(table, format, nullptr, 0, &length));
    std::string text(length + 1, '\0');
    check(ofqn_table_render(table, format, text.data(), text.size(), &length));
    text.resize(length);
    std::cout.write(text.data(), static_cast<std::streamsize>(text.size()));
    std::cout.flush();
}

// ---- option plumbing --------------------------------------------------------

struct Overrides {
    std::string config_path;
    bool dump_config = false;
    std::optional<double> lambda, q_nf, mu_switch, mu_switch_us, mu_controller, mu_controller_us;
    std::optional<std::uint64_t> seed, packets, sample_cap;
    std::optional<std::uint32_t> replications;
    std::optional<double> warmup;
    std::optional<std::string> format, output;
};

void add_config_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_flag("--dump-config", o.dump_config, "Print the effective configuration as JSON and exit");
}

void add_output_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("-o,--output", o.output, "Output file ('-' for stdout)");
}

void add_node_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--lambda", o.lambda, "External arrival rate (1/s)");
    cmd->add_option("--q-nf", o.q_nf, "New-flow probability")->check(CLI::Range(0.0, 1.0));
    auto* ms = cmd->add_option("--mu-switch", o.mu_switch, "Switch service rate (1/s)");
    auto* msu = cmd->add_option("--mu-switch-us", o.mu_switch_us, "Switch mean service time (us)");
    ms->excludes(msu);
}

void add_controller_options(CLI::App* cmd, Overrides& o) {
    auto* mc = cmd->add_option("--mu-controller", o.mu_controller, "Controller service rate (1/s)");
    auto* mcu = cmd->add_option("--mu-controller-us", o.mu_controller_us, "Controller mean service time (us)");
    mc->excludes(mcu);
}

void add_sim_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--seed", o.seed, "Master seed (default: $OFQN_SEED or 1)");
    cmd->add_option("--packets", o.packets, "Packets per replication");
    cmd->add_option("--replications", o.replications, "Independent replications");
    cmd->add_option("--warmup", o.warmup, "Fraction of departures discarded as warm-up");
    cmd->add_option("--sample-cap", o.sample_cap, "Retained sojourn samples (reservoir size)");
}

void positive(double v, const std::string& flag) {
    if (!(v > 0.0)) throw ConfigError(flag + " must be positive");
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg = o.config_path.empty() ? default_config() : load_config_file(o.config_path);
    auto apply_node = [&](NodeConfig& n) {
        if (o.lambda) positive(*o.lambda, "--lambda"), n.lambda = *o.lambda;
        if (o.q_nf) n.q_nf = *o.q_nf;
        if (o.mu_switch) positive(*o.mu_switch, "--mu-switch"), n.mu_switch = ServiceRate::per_second(*o.mu_switch);
        if (o.mu_switch_us)
            positive(*o.mu_switch_us, "--mu-switch-us"), n.mu_switch = ServiceRate::service_time_us(*o.mu_switch_us);
    };
    apply_node(cfg.node);
    if (o.mu_controller)
        positive(*o.mu_controller, "--mu-controller"),
            cfg.controller.mu_controller = ServiceRate::per_second(*o.mu_controller);
    if (o.mu_controller_us)
        positive(*o.mu_controller_us, "--mu-controller-us"),
            cfg.controller.mu_controller = ServiceRate::service_time_us(*o.mu_controller_us);
    if (o.seed) cfg.sim.seed = *o.seed;
    if (o.packets) cfg.sim.packets_per_replication = *o.packets;
    if (o.replications) cfg.sim.replications = *o.replications;
    if (o.warmup) cfg.sim.warmup_fraction = *o.warmup;
    if (o.sample_cap) cfg.sim.sample_cap = *o.sample_cap;
    if (o.format) cfg.output.format = *o.format;
    if (o.output) cfg.output.path = *o.output;
    return cfg;
}

ofqn_sim_config sim_config(const RunConfig& cfg) {
    ofqn_sim_config s;
    ofqn_sim_config_default(&s);
    s.seed = cfg.sim.seed;
    s.packets_per_replication = cfg.sim.packets_per_replication;
    s.replications = cfg.sim.replications;
    s.warmup_fraction = cfg.sim.warmup_fraction;
    s.sample_cap = cfg.sim.sample_cap;
    return s;
}

ofqn_node_params node_params(const NodeConfig& n, const std::string& field) {
    if (!n.lambda) throw ConfigError("config field '" + field + ".lambda' is required (or pass --lambda)");
    return ofqn_node_params{*n.lambda, n.mu_switch.per_second(), n.q_nf};
}

double mu_controller(const RunConfig& cfg) { return cfg.controller.mu_controller.per_second(); }

std::string station_verdict() { return std::string("unstable: ") + ofqn_last_unstable_station(); }

int dump(const RunConfig& cfg) {
    std::cout << config_to_json(cfg).dump(2) << "\n";
    return kSuccess;
}

// ---- subcommands ------------------------------------------------------------

int cmd_analyze(const RunConfig& cfg) {
    const ofqn_node_params node = node_params(cfg.node, "node");
    const double mu_c = mu_controller(cfg);
    ofqn_solved_rates rates{};
    check(ofqn_solve_rates(&node, mu_c, &rates));

    TableBuilder t({"lambda", "q_nf", "mu_switch", "mu_controller", "q_jack", "gamma_switch", "gamma_controller",
                    "rho_switch", "rho_controller", "verdict", "mean_sojourn", "mean_sojourn_product_form",
                    "mean_difference", "naive_mean", "notes"});
    const std::size_t r = t.add_row();
    t.set(r, "lambda", node.lambda);
    t.set(r, "q_nf", node.q_nf);
    t.set(r, "mu_switch", node.mu_switch);
    t.set(r, "mu_controller", mu_c);
    t.set(r, "q_jack", rates.q_jack);
    t.set(r, "gamma_switch", rates.gamma_switch);
    t.set(r, "gamma_controller", rates.gamma_controller);
    t.set(r, "rho_switch", rates.rho_switch);
    t.set(r, "rho_controller", rates.rho_controller);

    double path_form = 0.0;
    const ofqn_status st = ofqn_mean_sojourn_openflow(&node, mu_c, &path_form);
    if (st == OFQN_ERR_UNSTABLE) {
        t.set(r, "verdict", station_verdict());
        emit(t.get(), cfg);
        return kUnstable;
    }
    check(st);
    double product_form = 0.0;
    check(ofqn_mean_sojourn_jackson(&node, mu_c, &product_form));
    t.set(r, "verdict", std::string("stable"));
    t.set(r, "mean_sojourn", path_form);
    t.set(r, "mean_sojourn_product_form", product_form);
    t.set(r, "mean_difference", product_form - path_form);

    double naive = 0.0;
    const ofqn_status ns = ofqn_mean_sojourn_naive_jackson(&node, mu_c, &naive);
    if (ns == OFQN_OK)
        t.set(r, "naive_mean", naive);
    else if (ns == OFQN_ERR_UNDEFINED)
        t.set(r, "notes", std::string("naive undefined"));
    else if (ns == OFQN_ERR_UNSTABLE)
        t.set(r, "notes", "naive " + station_verdict());
    else
        check(ns);
    emit(t.get(), cfg);
    return kSuccess;
}

struct DistributionArgs {
    std::size_t points = 200;
    double t_max = 0.0;
    std::string quantiles;
};

int cmd_distribution(const RunConfig& cfg, const DistributionArgs& a) {
    const ofqn_node_params node = node_params(cfg.node, "node");
    ofqn_distribution* raw = nullptr;
    check(ofqn_distribution_create(&node, mu_controller(cfg), &raw));
    DistPtr dist(raw);
    ofqn_table* table = nullptr;
    if (a.quantiles.empty()) {
        check(ofqn_distribution_table(dist.get(), a.points, a.t_max, &table));
    } else {
        const auto probs = parse_number_list(a.quantiles, "--quantiles");
        check(ofqn_quantile_table(dist.get(), probs.data(), probs.size(), &table));
    }
    TablePtr owned(table);
    emit(owned.get(), cfg);
    return kSuccess;
}

struct SimulateArgs {
    std::size_t ccdf_points = 0;
    double t_max = 0.0;
};

int cmd_simulate(const RunConfig& cfg, const SimulateArgs& a) {
    const ofqn_node_params node = node_params(cfg.node, "node");
    const double mu_c = mu_controller(cfg);
    const ofqn_sim_config sim = sim_config(cfg);
    ofqn_sim_result* raw = nullptr;
    check(ofqn_simulate_node(&node, mu_c, &sim, &raw));
    SimPtr result(raw);
    ofqn_sim_summary s{};
    check(ofqn_sim_result_summary(result.get(), static_cast<std::size_t>(-1), &s));
    ofqn_solved_rates rates{};
    check(ofqn_solve_rates(&node, mu_c, &rates));
    // Unstable parameters still simulate (queues just grow); the analytic columns stay empty.
    double analytic = 0.0;
    if (rates.stable) check(ofqn_mean_sojourn_openflow(&node, mu_c, &analytic));

    if (a.ccdf_points > 0) {
        ofqn_distribution* draw = nullptr;
        if (rates.stable) check(ofqn_distribution_create(&node, mu_c, &draw));
        DistPtr dist(draw);
        const double t_max = a.t_max > 0.0 ? a.t_max : 10.0 * (rates.stable ? analytic : s.mean_sojourn);
        TableBuilder t({"t", "empirical_ccdf", "analytic_ccdf"});
        for (std::size_t i = 0; i < a.ccdf_points; ++i) {
            const double time = a.ccdf_points == 1 ? 0.0 : t_max * static_cast<double>(i) / (a.ccdf_points - 1);
            double emp = 0.0, ana = 0.0;
            check(ofqn_sim_result_empirical_ccdf(result.get(), time, &emp));
            const std::size_t r = t.add_row();
            t.set(r, "t", time);
            t.set(r, "empirical_ccdf", emp);
            if (dist) {
                check(ofqn_distribution_ccdf(dist.get(), time, &ana));
                t.set(r, "analytic_ccdf", ana);
            }
        }
        emit(t.get(), cfg);
        return kSuccess;
    }

    TableBuilder t({"lambda", "q_nf", "rho_switch", "rho_controller", "analytic_mean", "sim_mean", "sim_ci",
                    "controller_visit_fraction", "packets", "replications", "seed"});
    const std::size_t r = t.add_row();
    t.set(r, "lambda", node.lambda);
    t.set(r, "q_nf", node.q_nf);
    t.set(r, "rho_switch", rates.rho_switch);
    t.set(r, "rho_controller", rates.rho_controller);
    if (rates.stable) t.set(r, "analytic_mean", analytic);
    t.set(r, "sim_mean", s.mean_sojourn);
    t.set(r, "sim_ci", s.ci_halfwidth);
    t.set(r, "controller_visit_fraction", s.controller_visit_fraction);
    t.set(r, "packets", static_cast<double>(s.packets));
    t.set(r, "replications", static_cast<double>(sim.replications));
    t.set(r, "seed", static_cast<double>(sim.seed));
    emit(t.get(), cfg);
    return kSuccess;
}

// "lambda,q_nf[,mu_switch_us]"
NodeConfig parse_node_flag(const std::string& text) {
    const auto v = parse_number_list(text, "--node");
    if (v.size() < 2 || v.size() > 3) throw ConfigError("--node expects lambda,q_nf[,mu_switch_us]");
    NodeConfig n;
    positive(v[0], "--node lambda");
    n.lambda = v[0];
    if (!(v[1] >= 0.0 && v[1] <= 1.0)) throw ConfigError("--node q_nf must lie in [0, 1]");
    n.q_nf = v[1];
    if (v.size() == 3) positive(v[2], "--node mu_switch_us"), n.mu_switch = ServiceRate::service_time_us(v[2]);
    return n;
}

int cmd_chain(const RunConfig& cfg, bool simulate) {
    if (cfg.chain.empty()) throw ConfigError("config field 'chain' is required (or pass --node)");
    ofqn_chain* raw = nullptr;
    check(ofqn_chain_create(mu_controller(cfg), &raw));
    ChainPtr chain(raw);
    const std::size_t n = cfg.chain.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ofqn_node_params p = node_params(cfg.chain[i], "chain[" + std::to_string(i) + "]");
        check(ofqn_chain_add_node(chain.get(), &p));
    }

    std::vector<std::string> columns{"class",      "lambda",         "q_nf",   "mu_switch",    "gamma_switch",
                                     "q_jack",     "rho_switch",     "rho_controller", "status", "analytic_mean"};
    if (simulate) columns.insert(columns.end(), {"sim_mean", "sim_ci", "controller_visit_fraction"});
    TableBuilder t(columns);

    std::vector<double> per_class(n);
    double aggregate = 0.0;
    const ofqn_status st = ofqn_chain_sojourn(chain.get(), per_class.data(), n, &aggregate);
    if (st != OFQN_ERR_UNSTABLE) check(st);
    const bool stable = st == OFQN_OK;
    const std::string status = stable ? "ok" : station_verdict();

    SimPtr result;
    if (simulate && stable) {
        const ofqn_sim_config sim = sim_config(cfg);
        ofqn_sim_result* sraw = nullptr;
        check(ofqn_simulate_chain(chain.get(), &sim, &sraw));
        result.reset(sraw);
    }

    auto fill_sim = [&](std::size_t row, std::size_t cls) {
        if (!result) return;
        ofqn_sim_summary s{};
        check(ofqn_sim_result_summary(result.get(), cls, &s));
        t.set(row, "sim_mean", s.mean_sojourn);
        t.set(row, "sim_ci", s.ci_halfwidth);
        t.set(row, "controller_visit_fraction", s.controller_visit_fraction);
    };

    double total_lambda = 0.0, rho_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ofqn_solved_rates rates{};
        check(ofqn_chain_solve(chain.get(), i, &rates));
        const NodeConfig& nc = cfg.chain[i];
        total_lambda += *nc.lambda;
        rho_c = rates.rho_controller;
        const std::size_t r = t.add_row();
        t.set(r, "class", std::to_string(i + 1));
        t.set(r, "lambda", *nc.lambda);
        t.set(r, "q_nf", nc.q_nf);
        t.set(r, "mu_switch", nc.mu_switch.per_second());
        t.set(r, "gamma_switch", rates.gamma_switch);
        t.set(r, "q_jack", rates.q_jack);
        t.set(r, "rho_switch", rates.rho_switch);
        t.set(r, "rho_controller", rates.rho_controller);
        t.set(r, "status", status);
        if (stable) t.set(r, "analytic_mean", per_class[i]);
        fill_sim(r, i);
    }
    const std::size_t r = t.add_row();
    t.set(r, "class", std::string("aggregate"));
    t.set(r, "lambda", total_lambda);
    t.set(r, "rho_controller", rho_c);
    t.set(r, "status", status);
    if (stable) t.set(r, "analytic_mean", aggregate);
    fill_sim(r, static_cast<std::size_t>(-1));
    emit(t.get(), cfg);
    return stable ? kSuccess : kUnstable;
}

struct DimensionArgs {
    std::string delay_bound;
    std::string delay_bound_us;
};

int cmd_dimension(const RunConfig& cfg, const DimensionArgs& a) {
    std::vector<double> bounds;
    if (!a.delay_bound.empty()) bounds = parse_number_list(a.delay_bound, "--delay-bound");
    if (!a.delay_bound_us.empty())
        for (double us : parse_number_list(a.delay_bound_us, "--delay-bound-us")) bounds.push_back(us / 1e6);
    if (bounds.empty() && cfg.sweep.delay_bound) bounds.push_back(*cfg.sweep.delay_bound);
    if (bounds.empty()) throw ConfigError("dimension needs --delay-bound, --delay-bound-us or sweep.delay_bound");

    const double mu_l = cfg.node.mu_switch.per_second();
    const double mu_c = mu_controller(cfg);
    TableBuilder t({"delay_bound", "q_nf", "mu_switch", "mu_controller", "throughput", "lambda_sup", "feasible"});
    for (double bound : bounds) {
        ofqn_throughput tp{};
        check(ofqn_max_throughput(bound, mu_l, cfg.node.q_nf, mu_c, &tp));
        const std::size_t r = t.add_row();
        t.set(r, "delay_bound", bound);
        t.set(r, "q_nf", cfg.node.q_nf);
        t.set(r, "mu_switch", mu_l);
        t.set(r, "mu_controller", mu_c);
        t.set(r, "throughput", tp.lambda);
        t.set(r, "lambda_sup", tp.lambda_sup);
        t.set(r, "feasible", tp.feasible ? 1.0 : 0.0);
    }
    emit(t.get(), cfg);
    return kSuccess;
}

struct SweepArgs {
    std::optional<std::string> variable, grid, range, outputs;
    std::optional<double> delay_bound, deadline;
};

ofqn_sweep_variable sweep_variable(const std::string& name) {
    if (name == "lambda") return OFQN_SWEEP_LAMBDA;
    if (name == "rho_controller") return OFQN_SWEEP_RHO_CONTROLLER;
    if (name == "q_nf") return OFQN_SWEEP_Q_NF;
    if (name == "mu_controller") return OFQN_SWEEP_MU_CONTROLLER;
    if (name == "delay_bound") return OFQN_SWEEP_DELAY_BOUND;
    throw ConfigError("config field 'sweep.variable': unknown variable '" + name +
                      "' (lambda, rho_controller, q_nf, mu_controller, delay_bound)");
}

unsigned sweep_outputs(const std::vector<std::string>& names) {
    unsigned mask = 0;
    for (const auto& n : names) {
        if (n == "analytic_mean") mask |= OFQN_OUT_ANALYTIC_MEAN;
        else if (n == "naive_mean") mask |= OFQN_OUT_NAIVE_MEAN;
        else if (n == "simulated_mean") mask |= OFQN_OUT_SIMULATED_MEAN;
        else if (n == "deadline_prob") mask |= OFQN_OUT_DEADLINE_PROB;
        else if (n == "throughput") mask |= OFQN_OUT_THROUGHPUT;
        else
            throw ConfigError("config field 'sweep.outputs': unknown output '" + n +
                              "' (analytic_mean, naive_mean, simulated_mean, deadline_prob, throughput)");
    }
    return mask;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> names;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) names.push_back(item);
    return names;
}

void apply_sweep_args(RunConfig& cfg, const SweepArgs& a) {
    if (a.variable) cfg.sweep.variable = *a.variable;
    if (a.grid) cfg.sweep.grid = parse_number_list(*a.grid, "--grid");
    if (a.range) {
        std::string spec = *a.range;
        for (char& c : spec)
            if (c == ':') c = ',';
        const auto v = parse_number_list(spec, "--range");
        if (v.size() != 3) throw ConfigError("--range expects from:to:step");
        cfg.sweep.grid = expand_range(v[0], v[1], v[2], "--range");
    }
    if (a.outputs) cfg.sweep.outputs = split_names(*a.outputs);
    if (a.delay_bound) cfg.sweep.delay_bound = *a.delay_bound;
    if (a.deadline) cfg.sweep.deadline = *a.deadline;
}

int cmd_sweep(const RunConfig& cfg) {
    if (cfg.sweep.grid.empty()) throw ConfigError("config field 'sweep.grid' is required (or pass --grid/--range)");
    ofqn_sweep_spec spec{};
    spec.variable = sweep_variable(cfg.sweep.variable);
    spec.grid = cfg.sweep.grid.data();
    spec.grid_size = cfg.sweep.grid.size();
    spec.lambda = cfg.node.lambda.value_or(0.0);
    spec.mu_switch = cfg.node.mu_switch.per_second();
    spec.q_nf = cfg.node.q_nf;
    spec.mu_controller = mu_controller(cfg);
    spec.delay_bound = cfg.sweep.delay_bound.value_or(0.0);
    spec.deadline = cfg.sweep.deadline;
    spec.outputs = sweep_outputs(cfg.sweep.outputs);
    spec.sim = sim_config(cfg);
    ofqn_table* raw = nullptr;
    check(ofqn_sweep(&spec, &raw));
    TablePtr table(raw);
    emit(table.get(), cfg);
    return kSuccess;
}

struct FigureArgs {
    std::string name;
    std::string q_values, rho_grid, tc_us;
    std::optional<double> deadline;
    std::optional<std::size_t> points;
    bool no_sim = false;
};

int cmd_figure(const RunConfig& cfg, const FigureArgs& a) {
    ofqn_figure_options opts;
    ofqn_figure_options_default(&opts);
    opts.mu_switch = cfg.node.mu_switch.per_second();
    opts.mu_controller = mu_controller(cfg);
    std::vector<double> qs, rhos, tcs;
    if (!a.q_values.empty()) qs = parse_number_list(a.q_values, "--q");
    if (!a.rho_grid.empty()) rhos = parse_number_list(a.rho_grid, "--rho");
    if (!a.tc_us.empty())
        for (double us : parse_number_list(a.tc_us, "--tc-us")) tcs.push_back(us / 1e6);
    opts.q_values = qs.data();
    opts.q_count = qs.size();
    opts.rho_grid = rhos.data();
    opts.rho_count = rhos.size();
    opts.controller_service_times = tcs.data();
    opts.controller_service_count = tcs.size();
    if (a.deadline) opts.deadline = *a.deadline;
    if (a.points) opts.delay_points = *a.points;
    opts.simulate = a.no_sim ? 0 : 1;
    opts.sim = sim_config(cfg);
    ofqn_table* raw = nullptr;
    check(ofqn_figure(a.name.c_str(), &opts, &raw));
    TablePtr table(raw);
    emit(table.get(), cfg);
    return kSuccess;
}

struct ValidateArgs {
    bool quick = false;
    std::string only;
    double perturb_q_jack = 0.0;
};

int cmd_validate(const RunConfig& cfg, const ValidateArgs& a) {
    ofqn_validation_options opts;
    ofqn_validation_options_default(&opts);
    opts.quick = a.quick ? 1 : 0;
    opts.seed = cfg.sim.seed;
    opts.q_jack_perturbation = a.perturb_q_jack;
    std::vector<int> only;
    if (!a.only.empty())
        for (double v : parse_number_list(a.only, "--only")) {
            if (v != std::floor(v) || v < 1) throw ConfigError("--only expects criterion numbers");
            only.push_back(static_cast<int>(v));
        }
    opts.only = only.data();
    opts.only_count = only.size();

    auto print = [](int, const char*, int, const char* line, void*) {
        std::cout << line << "\n";
        std::cout.flush();
    };
    ofqn_validation_report* raw = nullptr;
    check(ofqn_validate(&opts, print, nullptr, &raw));
    ReportPtr report(raw);
    const bool ok = ofqn_validation_report_all_passed(report.get()) != 0;
    std::cout << (ok ? "all criteria passed" : "validation FAILED") << "\n";
    return ok ? kSuccess : kValidationFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OpenFlow switch/controller queueing model"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ofqn_version()));

    Overrides o;

    auto* analyze = app.add_subcommand("analyze", "Rates, loads, mean sojourn time and stability verdict");
    auto* distribution = app.add_subcommand("distribution", "Sojourn-time pdf/ccdf or quantile table");
    auto* simulate = app.add_subcommand("simulate", "Discrete-event simulation of one switch and its controller");
    auto* chain = app.add_subcommand("chain", "Tandem of switches sharing one controller");
    auto* dimension = app.add_subcommand("dimension", "Largest arrival rate meeting a mean delay bound");
    auto* sweep = app.add_subcommand("sweep", "Evaluate the model over a parameter grid");
    auto* figure = app.add_subcommand("figure", "Data for one of the standard figures (fig2..fig6)");
    auto* validate = app.add_subcommand("validate", "Run the acceptance criteria");

    for (auto* cmd : {analyze, distribution, simulate, chain, dimension, sweep, figure, validate})
        add_config_options(cmd, o);
    for (auto* cmd : {analyze, distribution, simulate, chain, dimension, sweep, figure}) {
        add_output_options(cmd, o);
        add_controller_options(cmd, o);
    }
    for (auto* cmd : {analyze, distribution, simulate, dimension, sweep, figure}) add_node_options(cmd, o);
    for (auto* cmd : {simulate, chain, sweep, figure}) add_sim_options(cmd, o);
    validate->add_option("--seed", o.seed, "Master seed (default: $OFQN_SEED or 1)");

    DistributionArgs dist_args;
    distribution->add_option("--points", dist_args.points, "Number of time points")->check(CLI::PositiveNumber);
    distribution->add_option("--t-max", dist_args.t_max, "Largest time (s); default 10 mean sojourn times");
    distribution->add_option("--quantiles", dist_args.quantiles, "Emit quantiles for these probabilities, e.g. 0.5,0.9");

    SimulateArgs sim_args;
    simulate->add_option("--ccdf-points", sim_args.ccdf_points, "Emit empirical vs analytic ccdf on this many points");
    simulate->add_option("--t-max", sim_args.t_max, "Largest ccdf time (s); default 10 mean sojourn times");

    std::vector<std::string> chain_nodes;
    bool chain_simulate = false;
    chain->add_option("--node", chain_nodes, "Append a node: lambda,q_nf[,mu_switch_us] (repeatable)");
    chain->add_flag("--simulate", chain_simulate, "Also simulate the chain");

    DimensionArgs dim_args;
    dimension->add_option("--delay-bound", dim_args.delay_bound, "Mean delay bound(s) in seconds, comma separated");
    dimension->add_option("--delay-bound-us", dim_args.delay_bound_us, "Mean delay bound(s) in microseconds");

    SweepArgs sweep_args;
    sweep->add_option("--variable", sweep_args.variable, "lambda, rho_controller, q_nf, mu_controller, delay_bound");
    auto* grid = sweep->add_option("--grid", sweep_args.grid, "Grid values, comma separated");
    sweep->add_option("--range", sweep_args.range, "Grid as from:to:step")->excludes(grid);
    sweep->add_option("--outputs", sweep_args.outputs,
                      "analytic_mean, naive_mean, simulated_mean, deadline_prob, throughput");
    sweep->add_option("--delay-bound", sweep_args.delay_bound, "Mean delay bound (s) for throughput");
    sweep->add_option("--deadline", sweep_args.deadline, "Deadline (s) for deadline_prob");

    FigureArgs fig_args;
    figure->add_option("name", fig_args.name, "fig2, fig3, fig4, fig5 or fig6")->required();
    figure->add_option("--q", fig_args.q_values, "New-flow probabilities, comma separated");
    figure->add_option("--rho", fig_args.rho_grid, "Controller loads, comma separated");
    figure->add_option("--tc-us", fig_args.tc_us, "Controller service times for fig5 (us), comma separated");
    figure->add_option("--deadline", fig_args.deadline, "Deadline for fig6 (s)");
    figure->add_option("--points", fig_args.points, "Delay-bound grid points for fig4");
    figure->add_flag("--no-sim", fig_args.no_sim, "Skip simulation columns");

    ValidateArgs val_args;
    validate->add_flag("--quick", val_args.quick, "Reduced packet counts and looser tolerances");
    validate->add_option("--only", val_args.only, "Criterion numbers to run, comma separated");
    validate->add_option("--perturb-q-jack", val_args.perturb_q_jack,
                         "Relative error injected into q_jack (mutation check)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        RunConfig cfg = resolve(o);
        if (chain->parsed() && !chain_nodes.empty()) {
            cfg.chain.clear();
            for (const auto& text : chain_nodes) cfg.chain.push_back(parse_node_flag(text));
        }
        if (sweep->parsed()) apply_sweep_args(cfg, sweep_args);
        if (o.dump_config) return dump(cfg);

        if (analyze->parsed()) return cmd_analyze(cfg);
        if (distribution->parsed()) return cmd_distribution(cfg, dist_args);
        if (simulate->parsed()) return cmd_simulate(cfg, sim_args);
        if (chain->parsed()) return cmd_chain(cfg, chain_simulate);
        if (dimension->parsed()) return cmd_dimension(cfg, dim_args);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (figure->parsed()) return cmd_figure(cfg, fig_args);
        if (validate->parsed()) return cmd_validate(cfg, val_args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CliFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code();
    }
    return kUsage;
}
