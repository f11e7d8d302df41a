#include <cmath>

#include "doctest.h"
#include "ofqn/distribution.hpp"
#include "ofqn/errors.hpp"
#include "ofqn/figures.hpp"

using namespace ofqn;

namespace {

FigureOptions analytic_only() {
    FigureOptions o;
    o.simulate = false;
    return o;
}

} // namespace

TEST_CASE("figure names") {
    CHECK(figure_names() == std::vector<std::string>{"fig2", "fig3", "fig4", "fig5", "fig6"});
    CHECK_THROWS_AS(figure("fig7", analytic_only()), DomainError);
}

TEST_CASE("fig2 columns and values") {
    FigureOptions o;
    o.rho_grid = {0.3, 0.6};
    o.sim.packets_per_replication = 10000;
    o.sim.replications = 3;
    const Table t = figure("fig2", o);
    CHECK(t.columns ==
          std::vector<std::string>{"rho_c", "naive_jackson_mean", "modified_jackson_mean", "sim_mean", "sim_ci"});
    REQUIRE(t.rows.size() == 2);
    const double q = 0.5;
    const NodeParams node{0.6 * o.mu_controller / q, o.mu_switch, q};
    const ControllerParams ctrl{o.mu_controller};
    CHECK(t.number(1, "modified_jackson_mean") == mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl)));
    CHECK(t.number(1, "naive_jackson_mean") > t.number(1, "modified_jackson_mean"));
    CHECK(t.number(1, "sim_ci") > 0.0);

    const Table no_sim = figure("fig2", analytic_only());
    CHECK(no_sim.columns.size() == 3);
    CHECK(no_sim.rows.size() == 9);
}

TEST_CASE("fig3 has a column group per q_nf") {
    const Table t = figure("fig3", analytic_only());
    CHECK(t.columns ==
          std::vector<std::string>{"rho_c", "modified_jackson_mean_q0.2", "modified_jackson_mean_q1.0"});
}

TEST_CASE("fig4 throughput curves are nondecreasing") {
    const Table t = figure("fig4", analytic_only());
    CHECK(t.columns ==
          std::vector<std::string>{"delay_bound", "throughput_q0.2", "throughput_q0.5", "throughput_q1.0"});
    CHECK(t.rows.size() == 50);
    for (const char* col : {"throughput_q0.2", "throughput_q0.5", "throughput_q1.0"})
        for (std::size_t r = 1; r < t.rows.size(); ++r) CHECK(t.number(r, col) >= t.number(r - 1, col));
}

TEST_CASE("fig5 mean sojourn grows with the controller service time") {
    const Table t = figure("fig5", analytic_only());
    CHECK(t.columns == std::vector<std::string>{"rho_c", "mean_sojourn_tc120us", "mean_sojourn_tc240us",
                                                "mean_sojourn_tc480us"});
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(t.number(r, "mean_sojourn_tc120us") < t.number(r, "mean_sojourn_tc240us"));
        CHECK(t.number(r, "mean_sojourn_tc240us") < t.number(r, "mean_sojourn_tc480us"));
    }
}

TEST_CASE("fig6 deadline probability falls with load") {
    const Table t = figure("fig6", analytic_only());
    CHECK(t.columns == std::vector<std::string>{"rho_c", "p_within_0.5ms_q0.2", "p_within_0.5ms_q0.5",
                                                "p_within_0.5ms_q1.0"});
    for (const char* col : {"p_within_0.5ms_q0.2", "p_within_0.5ms_q0.5", "p_within_0.5ms_q1.0"})
        for (std::size_t r = 1; r < t.rows.size(); ++r) CHECK(t.number(r, col) <= t.number(r - 1, col));
}

TEST_CASE("figure overrides") {
    FigureOptions o = analytic_only();
    o.q_values = {0.7};
    o.rho_grid = {0.5};
    const Table t = figure("fig6", o);
    CHECK(t.columns == std::vector<std::string>{"rho_c", "p_within_0.5ms_q0.7"});
    REQUIRE(t.rows.size() == 1);
    const NodeParams node{0.5 * o.mu_controller / 0.7, o.mu_switch, 0.7};
    const ControllerParams ctrl{o.mu_controller};
    CHECK(t.number(0, "p_within_0.5ms_q0.7") ==
          prob_within_deadline(build_distribution(node, ctrl, solve_rates(node, ctrl)), 0.5e-3));
}
