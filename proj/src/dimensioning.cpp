#include "ofqn/dimensioning.hpp"

#include <cmath>
#include <limits>

#include "ofqn/distribution.hpp"
#include "ofqn/errors.hpp"

namespace ofqn {

double stability_supremum(const NodeTemplate& node, const ControllerParams& ctrl) {
    const double switch_bound = node.mu_switch / (1.0 + node.q_nf);
    if (node.q_nf == 0.0) return switch_bound;
    return std::min(switch_bound, ctrl.mu_controller / node.q_nf);
}

double zero_load_sojourn(const NodeTemplate& node, const ControllerParams& ctrl) {
    return (1.0 + node.q_nf) / node.mu_switch + node.q_nf / ctrl.mu_controller;
}

ThroughputResult max_throughput(double delay_bound, const NodeTemplate& node, const ControllerParams& ctrl) {
    validate(NodeParams{1.0, node.mu_switch, node.q_nf});
    validate(ctrl);
    if (!(delay_bound > 0.0)) throw DomainError("delay bound must be positive");

    ThroughputResult out;
    out.lambda_sup = stability_supremum(node, ctrl);
    if (delay_bound <= zero_load_sojourn(node, ctrl)) return out;
    out.feasible = true;

    // Mean sojourn is strictly increasing in lambda on (0, lambda_sup).
    double lo = 0.0;
    double hi = out.lambda_sup;
    const double tol = 1e-12 * out.lambda_sup;
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (mean_sojourn_openflow_unchecked(mid, node.q_nf, node.mu_switch, ctrl.mu_controller) <= delay_bound)
            lo = mid;
        else
            hi = mid;
    }
    out.lambda = lo;
    return out;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi >= lo) || points == 0) throw DomainError("log grid needs 0 < lo <= hi and points > 0");
    std::vector<double> g;
    if (points == 1) return {lo};
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g.push_back(lo * std::exp(step * static_cast<double>(i)));
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double first, double last, double step) {
    if (!(step > 0.0) || last < first) throw DomainError("linear grid needs step > 0 and last >= first");
    std::vector<double> g;
    for (int i = 0;; ++i) {
        const double v = first + step * i;
        if (v > last + 1e-9 * std::max(1.0, std::abs(last))) break;
        g.push_back(v);
    }
    return g;
}

std::string to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::Lambda: return "lambda";
    case SweepVariable::RhoController: return "rho_controller";
    case SweepVariable::QNf: return "q_nf";
    case SweepVariable::MuController: return "mu_controller";
    case SweepVariable::DelayBound: return "delay_bound";
    }
    return "?";
}

SweepVariable parse_sweep_variable(const std::string& name) {
    for (auto v : {SweepVariable::Lambda, SweepVariable::RhoController, SweepVariable::QNf,
                   SweepVariable::MuController, SweepVariable::DelayBound})
        if (to_string(v) == name) return v;
    throw DomainError("unknown sweep variable '" + name + "'");
}

namespace {

struct OutputName {
    unsigned flag;
    const char* name;
};

constexpr OutputName kOutputNames[] = {
    {kAnalyticMean, "analytic_mean"}, {kNaiveMean, "naive_mean"},   {kSimulatedMean, "simulated_mean"},
    {kDeadlineProb, "deadline_prob"}, {kThroughput, "throughput"},
};

bool needs_lambda(unsigned outputs) {
    return (outputs & (kAnalyticMean | kNaiveMean | kSimulatedMean | kDeadlineProb)) != 0;
}

} // namespace

unsigned parse_sweep_output(const std::string& name) {
    for (const auto& o : kOutputNames)
        if (name == o.name) return o.flag;
    throw DomainError("unknown sweep output '" + name + "'");
}

std::vector<std::string> sweep_output_names(unsigned outputs) {
    std::vector<std::string> names;
    for (const auto& o : kOutputNames)
        if (outputs & o.flag) names.emplace_back(o.name);
    return names;
}

void validate(const SweepSpec& spec) {
    if (spec.grid.empty()) throw DomainError("sweep grid is empty");
    for (std::size_t i = 1; i < spec.grid.size(); ++i)
        if (!(spec.grid[i] > spec.grid[i - 1])) throw DomainError("sweep grid must be strictly increasing");
    if (spec.outputs == 0) throw DomainError("sweep requests no outputs");

    const SweepFixed& f = spec.fixed;
    if (!(f.mu_switch > 0.0)) throw DomainError("mu_switch must be positive");
    if (spec.variable != SweepVariable::MuController && !(f.mu_controller > 0.0))
        throw DomainError("mu_controller must be positive");
    if (spec.variable != SweepVariable::QNf && !(f.q_nf >= 0.0 && f.q_nf <= 1.0))
        throw DomainError("q_nf must lie in [0, 1]");
    if (spec.variable == SweepVariable::RhoController && f.q_nf == 0.0)
        throw DomainError("cannot sweep rho_controller with q_nf = 0: no arrival rate gives a positive controller load");
    const bool lambda_from_grid = spec.variable == SweepVariable::Lambda || spec.variable == SweepVariable::RhoController;
    if (needs_lambda(spec.outputs) && !lambda_from_grid && !(f.lambda > 0.0))
        throw DomainError("lambda must be positive for the requested outputs");
    if ((spec.outputs & kThroughput) && spec.variable != SweepVariable::DelayBound && !(f.delay_bound > 0.0))
        throw DomainError("throughput output needs a positive delay_bound");
    if ((spec.outputs & kDeadlineProb) && !(f.deadline >= 0.0)) throw DomainError("deadline must be non-negative");
    if (spec.outputs & kSimulatedMean) validate(spec.sim);
}

Table sweep(const SweepSpec& spec) {
    validate(spec);
    const std::string var = to_string(spec.variable);

    Table table;
    table.columns.push_back(var);
    if (spec.variable != SweepVariable::Lambda) table.columns.push_back("lambda");
    if (spec.variable != SweepVariable::RhoController) table.columns.push_back("rho_controller");
    table.columns.push_back("status");
    if (spec.outputs & kAnalyticMean) table.columns.push_back("analytic_mean");
    if (spec.outputs & kNaiveMean) table.columns.push_back("naive_mean");
    if (spec.outputs & kSimulatedMean) {
        table.columns.push_back("sim_mean");
        table.columns.push_back("sim_ci");
    }
    if (spec.outputs & kDeadlineProb) table.columns.push_back("deadline_prob");
    if (spec.outputs & kThroughput) table.columns.push_back("throughput");
    table.columns.push_back("notes");

    for (double x : spec.grid) {
        NodeParams node{spec.fixed.lambda, spec.fixed.mu_switch, spec.fixed.q_nf};
        ControllerParams ctrl{spec.fixed.mu_controller};
        double delay_bound = spec.fixed.delay_bound;
        double naive_lambda = node.lambda;
        switch (spec.variable) {
        case SweepVariable::Lambda: node.lambda = naive_lambda = x; break;
        case SweepVariable::RhoController:
            node.lambda = x * ctrl.mu_controller / node.q_nf;
            naive_lambda = x * ctrl.mu_controller * (1.0 - node.q_nf) / node.q_nf;
            break;
        case SweepVariable::QNf: node.q_nf = x; break;
        case SweepVariable::MuController: ctrl.mu_controller = x; break;
        case SweepVariable::DelayBound: delay_bound = x; break;
        }

        std::vector<Cell> row;
        std::string notes;
        auto add_note = [&notes](const std::string& n) { notes += notes.empty() ? n : "; " + n; };

        row.emplace_back(x);
        if (spec.variable != SweepVariable::Lambda) row.emplace_back(node.lambda > 0.0 ? Cell(node.lambda) : Cell());

        std::string status = "ok";
        bool stable = false;
        SolvedRates rates;
        try {
            if (node.lambda > 0.0) {
                rates = solve_rates(node, ctrl);
                stable = rates.stable();
                if (!stable) status = is_stable_load(rates.rho_switch) ? "unstable: controller" : "unstable: switch";
            } else {
                validate(ctrl);
            }
        } catch (const DomainError& e) {
            status = std::string("invalid: ") + e.what();
        }
        if (spec.variable != SweepVariable::RhoController)
            row.emplace_back(node.lambda > 0.0 && status.rfind("invalid", 0) != 0 ? Cell(rates.rho_controller) : Cell());
        row.emplace_back(status);

        if (spec.outputs & kAnalyticMean)
            row.emplace_back(stable ? Cell(mean_sojourn_openflow(node, ctrl, rates)) : Cell());
        if (spec.outputs & kNaiveMean) {
            Cell c;
            if (status.rfind("invalid", 0) != 0) {
                try {
                    c = mean_sojourn_naive_jackson(NodeParams{naive_lambda, node.mu_switch, node.q_nf}, ctrl);
                } catch (const UndefinedError&) {
                    add_note("naive undefined");
                } catch (const UnstableError& e) {
                    add_note("naive unstable: " + e.station());
                }
            }
            row.push_back(c);
        }
        if (spec.outputs & kSimulatedMean) {
            if (stable) {
                const SimResult sim = run_single_node(node, ctrl, spec.sim);
                row.emplace_back(sim.mean_sojourn);
                row.emplace_back(sim.ci_halfwidth);
            } else {
                row.emplace_back();
                row.emplace_back();
            }
        }
        if (spec.outputs & kDeadlineProb)
            row.emplace_back(stable ? Cell(prob_within_deadline(build_distribution(node, ctrl, rates), spec.fixed.deadline))
                                    : Cell());
        if (spec.outputs & kThroughput) {
            Cell c;
            try {
                const ThroughputResult tp = max_throughput(delay_bound, NodeTemplate{node.mu_switch, node.q_nf}, ctrl);
                c = tp.lambda;
                if (!tp.feasible) add_note("bound infeasible");
            } catch (const DomainError& e) {
                add_note(e.what());
            }
            row.push_back(c);
        }
        row.emplace_back(notes);
        table.add_row(std::move(row));
    }
    return table;
}

} // namespace ofqn
