#include <cmath>
#include <random>
#include <string>

#include "doctest.h"
#include "ofqn/dimensioning.hpp"
#include "ofqn/errors.hpp"

using namespace ofqn;

namespace {

constexpr double kMuL = 1.0 / 9.8e-6;
constexpr double kMuC = 1.0 / 240e-6;

std::string text(const Table& t, std::size_t row, const std::string& column) {
    const Cell& c = t.rows.at(row).at(t.column_index(column));
    const std::string* s = std::get_if<std::string>(&c);
    return s ? *s : std::string();
}

bool empty(const Table& t, std::size_t row, const std::string& column) {
    return std::holds_alternative<std::monostate>(t.rows.at(row).at(t.column_index(column)));
}

} // namespace

TEST_CASE("M/M/1 inversion: a 19.6 us bound admits half the service rate") {
    const ThroughputResult r = max_throughput(19.6e-6, NodeTemplate{kMuL, 0.0}, ControllerParams{kMuC});
    CHECK(r.feasible);
    CHECK(r.lambda == doctest::Approx(kMuL / 2.0).epsilon(1e-9));
    CHECK(r.lambda_sup == doctest::Approx(kMuL).epsilon(1e-15));
}

TEST_CASE("stability supremum and zero-load delay") {
    const ControllerParams ctrl{kMuC};
    CHECK(stability_supremum(NodeTemplate{kMuL, 1.0}, ctrl) == doctest::Approx(kMuC).epsilon(1e-15));
    CHECK(stability_supremum(NodeTemplate{kMuL, 0.0}, ctrl) == doctest::Approx(kMuL).epsilon(1e-15));
    CHECK(stability_supremum(NodeTemplate{kMuL, 0.01}, ctrl) == doctest::Approx(kMuL / 1.01).epsilon(1e-15));
    CHECK(zero_load_sojourn(NodeTemplate{kMuL, 0.5}, ctrl) ==
          doctest::Approx(1.5 / kMuL + 0.5 / kMuC).epsilon(1e-15));
}

TEST_CASE("max throughput inverts the mean sojourn") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ControllerParams ctrl{kMuC};
    for (int i = 0; i < 300; ++i) {
        const NodeTemplate node{kMuL, u(rng)};
        const double lambda = (0.01 + 0.97 * u(rng)) * stability_supremum(node, ctrl);
        const NodeParams params{lambda, node.mu_switch, node.q_nf};
        const double bound = mean_sojourn_openflow(params, ctrl, solve_rates(params, ctrl));
        const ThroughputResult r = max_throughput(bound, node, ctrl);
        CHECK(r.feasible);
        CHECK(r.lambda == doctest::Approx(lambda).epsilon(1e-9));
    }
}

TEST_CASE("bounds at or below the zero-load delay are infeasible") {
    const NodeTemplate node{kMuL, 0.5};
    const ControllerParams ctrl{kMuC};
    const double e0 = zero_load_sojourn(node, ctrl);
    for (double bound : {0.5 * e0, e0}) {
        const ThroughputResult r = max_throughput(bound, node, ctrl);
        CHECK_FALSE(r.feasible);
        CHECK(r.lambda == 0.0);
    }
    CHECK_THROWS_AS(max_throughput(-1.0, node, ctrl), DomainError);
}

TEST_CASE("throughput grows with the bound and approaches the supremum") {
    const ControllerParams ctrl{kMuC};
    for (double q : {0.2, 0.5, 1.0}) {
        const NodeTemplate node{kMuL, q};
        const double e0 = zero_load_sojourn(node, ctrl);
        const double sup = stability_supremum(node, ctrl);
        double previous = 0.0;
        for (double bound : log_grid(1.01 * e0, 1e4 * e0, 80)) {
            const double lambda = max_throughput(bound, node, ctrl).lambda;
            CHECK(lambda >= previous);
            CHECK(lambda < sup);
            previous = lambda;
        }
        CHECK(previous > 0.999 * sup);
    }
}

TEST_CASE("grids") {
    const auto g = log_grid(1e-5, 1e-1, 5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 1e-5);
    CHECK(g.back() == 1e-1);
    CHECK(g[2] == doctest::Approx(1e-3).epsilon(1e-12));
    const auto l = linear_grid(0.1, 0.9, 0.1);
    REQUIRE(l.size() == 9);
    CHECK(l[2] == doctest::Approx(0.3));
    CHECK(l.back() == doctest::Approx(0.9));
}

TEST_CASE("sweep over controller load keeps unstable rows") {
    SweepSpec spec;
    spec.variable = SweepVariable::RhoController;
    spec.grid = {0.2, 0.5, 1.0, 1.2};
    spec.fixed = SweepFixed{0.0, kMuL, 1.0, kMuC, 0.0, 0.5e-3};
    spec.outputs = kAnalyticMean | kNaiveMean | kDeadlineProb;
    const Table t = sweep(spec);
    CHECK(t.columns ==
          std::vector<std::string>{"rho_controller", "lambda", "status", "analytic_mean", "naive_mean",
                                   "deadline_prob", "notes"});
    REQUIRE(t.rows.size() == 4);
    CHECK(text(t, 0, "status") == "ok");
    CHECK(t.number(0, "lambda") == doctest::Approx(0.2 * kMuC));
    CHECK(text(t, 2, "status") == "unstable: controller");
    CHECK(text(t, 3, "status") == "unstable: controller");
    CHECK(empty(t, 2, "analytic_mean"));
    CHECK(text(t, 0, "notes").find("naive undefined") != std::string::npos);

    const NodeParams node{0.5 * kMuC, kMuL, 1.0};
    const ControllerParams ctrl{kMuC};
    CHECK(t.number(1, "analytic_mean") == mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl)));
}

TEST_CASE("sweep over lambda reports the switch as saturated") {
    SweepSpec spec;
    spec.variable = SweepVariable::Lambda;
    spec.grid = {1000.0, 0.99 * kMuL};
    spec.fixed = SweepFixed{0.0, kMuL, 0.0, kMuC, 0.0, 0.5e-3};
    spec.outputs = kAnalyticMean | kNaiveMean;
    const Table t = sweep(spec);
    CHECK(text(t, 0, "status") == "ok");
    CHECK(t.number(0, "analytic_mean") == doctest::Approx(1.0 / (kMuL - 1000.0)).epsilon(1e-14));
    CHECK(t.number(0, "naive_mean") == doctest::Approx(t.number(0, "analytic_mean")).epsilon(1e-14));
    CHECK(text(t, 1, "status") == "ok");

    spec.fixed.q_nf = 0.5;
    const Table u = sweep(spec);
    CHECK(text(u, 1, "status") == "unstable: switch");
}

TEST_CASE("sweep over the delay bound tabulates throughput") {
    SweepSpec spec;
    spec.variable = SweepVariable::DelayBound;
    spec.grid = {1e-5, 1e-3, 1e-2};
    spec.fixed = SweepFixed{0.0, kMuL, 0.5, kMuC, 0.0, 0.5e-3};
    spec.outputs = kThroughput;
    const Table t = sweep(spec);
    CHECK(t.number(0, "throughput") == 0.0);
    CHECK(text(t, 0, "notes").find("infeasible") != std::string::npos);
    CHECK(t.number(1, "throughput") < t.number(2, "throughput"));
}

TEST_CASE("sweep rejects bad specifications") {
    SweepSpec spec;
    spec.variable = SweepVariable::RhoController;
    spec.grid = {0.2, 0.4};
    spec.fixed = SweepFixed{0.0, kMuL, 0.0, kMuC, 0.0, 0.5e-3};
    spec.outputs = kAnalyticMean;
    CHECK_THROWS_AS(sweep(spec), DomainError);  // q_nf = 0 has no controller load to sweep

    spec.fixed.q_nf = 0.5;
    spec.grid = {};
    CHECK_THROWS_AS(sweep(spec), DomainError);
    spec.grid = {0.4, 0.2};
    CHECK_THROWS_AS(sweep(spec), DomainError);
    spec.grid = {0.2, 0.4};
    spec.outputs = 0;
    CHECK_THROWS_AS(sweep(spec), DomainError);

    spec.variable = SweepVariable::QNf;
    spec.outputs = kAnalyticMean;
    CHECK_THROWS_AS(sweep(spec), DomainError);  // needs a fixed lambda
}

TEST_CASE("sweep names round-trip") {
    for (auto v : {SweepVariable::Lambda, SweepVariable::RhoController, SweepVariable::QNf,
                   SweepVariable::MuController, SweepVariable::DelayBound})
        CHECK(parse_sweep_variable(to_string(v)) == v);
    CHECK_THROWS_AS(parse_sweep_variable("rho"), DomainError);
    unsigned all = 0;
    for (const char* name : {"analytic_mean", "naive_mean", "simulated_mean", "deadline_prob", "throughput"})
        all |= parse_sweep_output(name);
    CHECK(all == 31u);
    CHECK(sweep_output_names(kNaiveMean | kThroughput) == std::vector<std::string>{"naive_mean", "throughput"});
}

TEST_CASE("sweep output is identical across runs, simulation included") {
    SweepSpec spec;
    spec.variable = SweepVariable::RhoController;
    spec.grid = {0.3, 0.6};
    spec.fixed = SweepFixed{0.0, kMuL, 0.5, kMuC, 0.0, 0.5e-3};
    spec.outputs = kAnalyticMean | kSimulatedMean;
    spec.sim.packets_per_replication = 10000;
    spec.sim.replications = 3;
    CHECK(sweep(spec).to_csv() == sweep(spec).to_csv());
}
