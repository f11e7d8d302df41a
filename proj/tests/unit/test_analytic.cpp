#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "ofqn/analytic.hpp"
#include "ofqn/errors.hpp"

using namespace ofqn;

namespace {

constexpr double kMuL = 1.0 / 9.8e-6;
constexpr double kMuC = 1.0 / 240e-6;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Textbook M/M/1 mean sojourn, the per-station building block.
double mm1(double arrival, double service) { return 1.0 / (service - arrival); }

} // namespace

TEST_CASE("q_jack endpoints are exact") {
    CHECK(derive_q_jack(0.0) == 0.0);
    CHECK(derive_q_jack(1.0) == 0.5);
    CHECK(derive_q_jack(0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("q_jack is strictly increasing and below one half") {
    double previous = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double q = i / 1000.0;
        const double qj = derive_q_jack(q);
        CHECK(qj > previous);
        CHECK(qj <= 0.5);
        previous = qj;
    }
}

TEST_CASE("q_jack rejects probabilities outside [0, 1]") {
    CHECK_THROWS_AS(derive_q_jack(-0.01), DomainError);
    CHECK_THROWS_AS(derive_q_jack(1.01), DomainError);
    CHECK_THROWS_AS(derive_q_jack(std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("solve_rates: heavy new-flow traffic saturates the controller") {
    const NodeParams node{10000.0, kMuL, 0.5};
    const SolvedRates r = solve_rates(node, ControllerParams{kMuC});
    CHECK(r.gamma_switch == doctest::Approx(15000.0).epsilon(1e-15));
    CHECK(r.gamma_controller == doctest::Approx(5000.0).epsilon(1e-15));
    CHECK(r.rho_controller == doctest::Approx(1.2).epsilon(1e-12));
    CHECK_FALSE(r.stable());
    try {
        r.require_stable();
        FAIL("expected UnstableError");
    } catch (const UnstableError& e) {
        CHECK(e.station() == "controller");
        CHECK(e.rho() == doctest::Approx(1.2));
    }
}

TEST_CASE("solve_rates: measured controller rate of 4175/s at lambda = 2000") {
    const NodeParams node{2000.0, kMuL, 1.0};
    const ControllerParams ctrl{4175.0};
    const SolvedRates r = solve_rates(node, ctrl);
    CHECK(r.rho_controller == doctest::Approx(0.479).epsilon(1e-3));
    CHECK(r.stable());
    // Three M/M/1 stations on the path: switch twice, controller once.
    const double expected = 2.0 * mm1(4000.0, kMuL) + mm1(2000.0, 4175.0);
    CHECK(rel(mean_sojourn_openflow(node, ctrl, r), expected) < 1e-14);
}

TEST_CASE("no new flows reduces to M/M/1") {
    for (double lambda : {1.0, 1000.0, 50000.0, 100000.0}) {
        const NodeParams node{lambda, kMuL, 0.0};
        const ControllerParams ctrl{kMuC};
        const SolvedRates r = solve_rates(node, ctrl);
        CHECK(r.gamma_controller == 0.0);
        CHECK(r.rho_controller == 0.0);
        CHECK(rel(mean_sojourn_openflow(node, ctrl, r), mm1(lambda, kMuL)) < 1e-14);
        CHECK(rel(mean_sojourn_jackson(r, node), mm1(lambda, kMuL)) < 1e-14);
    }
}

TEST_CASE("switch saturation is reported as the switch") {
    const double q = 0.3;
    const NodeParams node{kMuL / (1.0 + q), kMuL, q};
    const SolvedRates r = solve_rates(node, ControllerParams{1e9});
    CHECK_FALSE(r.stable());
    CHECK_THROWS_WITH_AS(mean_sojourn_openflow(node, ControllerParams{1e9}, r), doctest::Contains("switch"),
                         UnstableError);
}

TEST_CASE("loads within the stability margin of one count as unstable") {
    CHECK(is_stable_load(0.999));
    CHECK(is_stable_load(1.0 - 2e-9));
    CHECK_FALSE(is_stable_load(1.0 - 5e-10));
    CHECK_FALSE(is_stable_load(1.0));
}

TEST_CASE("product form equals path form over random stable parameters") {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    double worst = 0.0;
    while (checked < 2000) {
        const double q = u(rng);
        const double mu_l = 1e3 * std::pow(1e3, u(rng));
        const double mu_c = 1e2 * std::pow(1e3, u(rng));
        const double rho_l = 0.01 + 0.98 * u(rng);
        const double lambda = rho_l * mu_l / (1.0 + q);
        const NodeParams node{lambda, mu_l, q};
        const ControllerParams ctrl{mu_c};
        // Independent route to the product form: the Jackson balance with the
        // corrected feedback probability, not the OpenFlow rate formulas.
        const SolvedRates jackson = jackson_balance(lambda, q / (1.0 + q), mu_l, mu_c);
        if (!jackson.stable()) continue;
        const SolvedRates openflow = solve_rates(node, ctrl);
        REQUIRE(openflow.stable());
        const double product = mean_sojourn_jackson(jackson, node);
        const double path = mean_sojourn_openflow(node, ctrl, openflow);
        worst = std::max(worst, rel(product, path));
        ++checked;
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("Jackson balance with the corrected probability reproduces the OpenFlow rates") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double q = u(rng);
        const double lambda = 1.0 + 1e4 * u(rng);
        const SolvedRates j = jackson_balance(lambda, derive_q_jack(q), kMuL, kMuC);
        const SolvedRates o = solve_rates(NodeParams{lambda, kMuL, q}, ControllerParams{kMuC});
        CHECK(rel(j.gamma_switch, o.gamma_switch) < 1e-12);
        if (q > 0.0) CHECK(rel(j.gamma_controller, o.gamma_controller) < 1e-12);
        CHECK(rel(o.q_jack * o.gamma_switch, q * lambda) < 1e-12);
    }
}

TEST_CASE("naive model overestimates the mean sojourn") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    while (checked < 500) {
        const double q = 0.01 + 0.98 * u(rng);
        const double lambda = 1.0 + 2e4 * u(rng);
        const NodeParams node{lambda, kMuL, q};
        const ControllerParams ctrl{kMuC};
        const SolvedRates naive_rates = jackson_balance(lambda, q, kMuL, kMuC);
        if (!naive_rates.stable()) continue;
        const double naive = mean_sojourn_naive_jackson(node, ctrl);
        const double modified = mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl));
        CHECK(naive >= modified);
        ++checked;
    }
}

TEST_CASE("naive model is undefined at q_nf = 1") {
    CHECK_THROWS_AS(mean_sojourn_naive_jackson(NodeParams{100.0, kMuL, 1.0}, ControllerParams{kMuC}),
                    UndefinedError);
}

TEST_CASE("invalid parameters are domain errors") {
    const ControllerParams ctrl{kMuC};
    CHECK_THROWS_AS(solve_rates(NodeParams{-1.0, kMuL, 0.5}, ctrl), DomainError);
    CHECK_THROWS_AS(solve_rates(NodeParams{0.0, kMuL, 0.5}, ctrl), DomainError);
    CHECK_THROWS_AS(solve_rates(NodeParams{10.0, 0.0, 0.5}, ctrl), DomainError);
    CHECK_THROWS_AS(solve_rates(NodeParams{10.0, kMuL, 1.5}, ctrl), DomainError);
    CHECK_THROWS_AS(solve_rates(NodeParams{10.0, kMuL, 0.5}, ControllerParams{0.0}), DomainError);
    CHECK_THROWS_AS(solve_rates(NodeParams{std::numeric_limits<double>::infinity(), kMuL, 0.5}, ctrl), DomainError);
}

TEST_CASE("a one-node chain reduces to the single node") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const NodeParams node{1.0 + 3000.0 * u(rng), kMuL, u(rng)};
        const ControllerParams ctrl{kMuC};
        const ChainModel chain{{node}, ctrl};
        const ChainRates cr = solve_chain(chain);
        const SolvedRates sr = solve_rates(node, ctrl);
        CHECK(cr.nodes[0] == sr);
        CHECK(cr.rho_controller == sr.rho_controller);
        if (!sr.stable()) continue;
        const ChainSojourn cs = chain_sojourn(chain, cr);
        const double single = mean_sojourn_openflow(node, ctrl, sr);
        CHECK(cs.per_class[0] == single);
        CHECK(cs.aggregate == doctest::Approx(single).epsilon(1e-15));  // weighted average rounds
    }
}

TEST_CASE("symmetric two-node chain rates") {
    const double q = 0.4, l1 = 3000.0, l2 = 2000.0;
    const ChainModel chain{{NodeParams{l1, kMuL, q}, NodeParams{l2, kMuL, q}}, ControllerParams{kMuC}};
    const ChainRates r = solve_chain(chain);
    CHECK(rel(r.nodes[0].gamma_switch, l1 * (1.0 + q)) < 1e-15);
    CHECK(rel(r.nodes[1].gamma_switch, l1 + l2 * (1.0 + q)) < 1e-15);
    CHECK(rel(r.nodes[1].q_jack, q * l2 / (l1 + l2 * (1.0 + q))) < 1e-12);
    CHECK(rel(r.gamma_controller, q * (l1 + l2)) < 1e-15);
    CHECK(rel(r.rho_controller, q * (l1 + l2) / kMuC) < 1e-15);
}

TEST_CASE("chain per-class sojourn follows each class's path") {
    const double q1 = 0.2, q2 = 0.6, l1 = 4000.0, l2 = 1500.0, mu2 = 0.8 * kMuL;
    const ChainModel chain{{NodeParams{l1, kMuL, q1}, NodeParams{l2, mu2, q2}}, ControllerParams{kMuC}};
    const ChainRates r = solve_chain(chain);
    const ChainSojourn s = chain_sojourn(chain, r);
    const double g1 = l1 * (1.0 + q1);
    const double g2 = l1 + l2 * (1.0 + q2);
    const double gc = q1 * l1 + q2 * l2;
    const double w1 = (1.0 + q1) * mm1(g1, kMuL) + q1 * mm1(gc, kMuC) + mm1(g2, mu2);
    const double w2 = (1.0 + q2) * mm1(g2, mu2) + q2 * mm1(gc, kMuC);
    CHECK(rel(s.per_class[0], w1) < 1e-13);
    CHECK(rel(s.per_class[1], w2) < 1e-13);
    CHECK(rel(s.aggregate, (l1 * w1 + l2 * w2) / (l1 + l2)) < 1e-13);
}

TEST_CASE("chain instability names the saturated switch") {
    const ChainModel chain{{NodeParams{40000.0, kMuL, 0.0}, NodeParams{70000.0, kMuL, 0.0}}, ControllerParams{kMuC}};
    const ChainRates r = solve_chain(chain);
    CHECK_FALSE(r.stable());
    CHECK_THROWS_WITH_AS(r.require_stable(), doctest::Contains("switch 2"), UnstableError);
    CHECK_THROWS_AS(solve_chain(ChainModel{{}, ControllerParams{kMuC}}), DomainError);
}

TEST_CASE("unchecked mean is infinite at saturation and matches the checked form below it") {
    CHECK(std::isinf(mean_sojourn_openflow_unchecked(kMuL, 0.0, kMuL, kMuC)));
    CHECK(std::isinf(mean_sojourn_openflow_unchecked(kMuC, 1.0, kMuL, kMuC)));
    const NodeParams node{2500.0, kMuL, 0.7};
    const ControllerParams ctrl{kMuC};
    CHECK(mean_sojourn_openflow_unchecked(node.lambda, node.q_nf, node.mu_switch, ctrl.mu_controller) ==
          doctest::Approx(mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl))).epsilon(1e-14));
}
