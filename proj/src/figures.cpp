#include "ofqn/figures.hpp"

#include <algorithm>

#include "ofqn/dimensioning.hpp"
#include "ofqn/errors.hpp"

namespace ofqn {

namespace {

std::vector<double> rho_grid(const FigureOptions& o) {
    return o.rho_grid.empty() ? linear_grid(0.1, 0.9, 0.1) : o.rho_grid;
}

std::vector<double> q_values(const FigureOptions& o, std::vector<double> fallback) {
    return o.q_values.empty() ? fallback : o.q_values;
}

SweepSpec rho_sweep(const FigureOptions& o, double q, double mu_controller, unsigned outputs) {
    SweepSpec s;
    s.variable = SweepVariable::RhoController;
    s.grid = rho_grid(o);
    s.fixed.mu_switch = o.mu_switch;
    s.fixed.mu_controller = mu_controller;
    s.fixed.q_nf = q;
    s.fixed.deadline = o.deadline;
    s.outputs = outputs;
    s.sim = o.sim;
    return s;
}

Cell cell_of(const Table& t, std::size_t row, const std::string& column) {
    return t.rows.at(row).at(t.column_index(column));
}

// Joins per-curve sweeps on their shared first column.
Table join_curves(const std::string& x_name, const std::vector<double>& grid,
                  const std::vector<std::pair<std::string, std::pair<const Table*, std::string>>>& curves) {
    Table out;
    out.columns.push_back(x_name);
    for (const auto& c : curves) out.columns.push_back(c.first);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<Cell> row{grid[i]};
        for (const auto& c : curves) row.push_back(cell_of(*c.second.first, i, c.second.second));
        out.add_row(std::move(row));
    }
    return out;
}

Table fig2(const FigureOptions& o) {
    const double q = q_values(o, {0.5}).front();
    unsigned outputs = kAnalyticMean | kNaiveMean;
    if (o.simulate) outputs |= kSimulatedMean;
    const Table t = sweep(rho_sweep(o, q, o.mu_controller, outputs));
    std::vector<std::pair<std::string, std::pair<const Table*, std::string>>> curves{
        {"naive_jackson_mean", {&t, "naive_mean"}},
        {"modified_jackson_mean", {&t, "analytic_mean"}},
    };
    if (o.simulate) {
        curves.push_back({"sim_mean", {&t, "sim_mean"}});
        curves.push_back({"sim_ci", {&t, "sim_ci"}});
    }
    return join_curves("rho_c", rho_grid(o), curves);
}

Table fig3(const FigureOptions& o) {
    const auto qs = q_values(o, {0.2, 1.0});
    unsigned outputs = kAnalyticMean;
    if (o.simulate) outputs |= kSimulatedMean;
    std::vector<Table> tables;
    for (double q : qs) tables.push_back(sweep(rho_sweep(o, q, o.mu_controller, outputs)));
    std::vector<std::pair<std::string, std::pair<const Table*, std::string>>> curves;
    for (std::size_t k = 0; k < qs.size(); ++k) {
        const std::string tag = "_q" + format_label(qs[k]);
        curves.push_back({"modified_jackson_mean" + tag, {&tables[k], "analytic_mean"}});
        if (o.simulate) {
            curves.push_back({"sim_mean" + tag, {&tables[k], "sim_mean"}});
            curves.push_back({"sim_ci" + tag, {&tables[k], "sim_ci"}});
        }
    }
    return join_curves("rho_c", rho_grid(o), curves);
}

Table fig4(const FigureOptions& o) {
    const auto qs = q_values(o, {0.2, 0.5, 1.0});
    const ControllerParams ctrl{o.mu_controller};
    double lo = 0.0;
    double hi = 0.0;
    for (double q : qs) {
        const double e0 = zero_load_sojourn(NodeTemplate{o.mu_switch, q}, ctrl);
        lo = lo == 0.0 ? e0 : std::min(lo, e0);
        hi = std::max(hi, e0);
    }
    const std::vector<double> grid = log_grid(1.05 * lo, 100.0 * hi, o.delay_points);

    std::vector<Table> tables;
    for (double q : qs) {
        SweepSpec s;
        s.variable = SweepVariable::DelayBound;
        s.grid = grid;
        s.fixed.mu_switch = o.mu_switch;
        s.fixed.mu_controller = o.mu_controller;
        s.fixed.q_nf = q;
        s.outputs = kThroughput;
        tables.push_back(sweep(s));
    }
    std::vector<std::pair<std::string, std::pair<const Table*, std::string>>> curves;
    for (std::size_t k = 0; k < qs.size(); ++k)
        curves.push_back({"throughput_q" + format_label(qs[k]), {&tables[k], "throughput"}});
    return join_curves("delay_bound", grid, curves);
}

Table fig5(const FigureOptions& o) {
    const double q = q_values(o, {0.5}).front();
    const std::vector<double> times =
        o.controller_service_times.empty() ? std::vector<double>{120e-6, 240e-6, 480e-6} : o.controller_service_times;
    std::vector<Table> tables;
    for (double tc : times) tables.push_back(sweep(rho_sweep(o, q, 1.0 / tc, kAnalyticMean)));
    std::vector<std::pair<std::string, std::pair<const Table*, std::string>>> curves;
    for (std::size_t k = 0; k < times.size(); ++k)
        curves.push_back({"mean_sojourn_tc" + format_number(times[k] * 1e6) + "us", {&tables[k], "analytic_mean"}});
    return join_curves("rho_c", rho_grid(o), curves);
}

Table fig6(const FigureOptions& o) {
    const auto qs = q_values(o, {0.2, 0.5, 1.0});
    std::vector<Table> tables;
    for (double q : qs) tables.push_back(sweep(rho_sweep(o, q, o.mu_controller, kDeadlineProb)));
    std::vector<std::pair<std::string, std::pair<const Table*, std::string>>> curves;
    const std::string prefix = "p_within_" + format_number(o.deadline * 1e3) + "ms_q";
    for (std::size_t k = 0; k < qs.size(); ++k)
        curves.push_back({prefix + format_label(qs[k]), {&tables[k], "deadline_prob"}});
    return join_curves("rho_c", rho_grid(o), curves);
}

} // namespace

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5", "fig6"};
    return names;
}

Table figure(const std::string& name, const FigureOptions& opts) {
    if (name == "fig2") return fig2(opts);
    if (name == "fig3") return fig3(opts);
    if (name == "fig4") return fig4(opts);
    if (name == "fig5") return fig5(opts);
    if (name == "fig6") return fig6(opts);
    throw DomainError("unknown figure '" + name + "' (expected fig2..fig6)");
}

} // namespace ofqn
