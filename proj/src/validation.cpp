#include "ofqn/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "ofqn/analytic.hpp"
#include "ofqn/dimensioning.hpp"
#include "ofqn/distribution.hpp"
#include "ofqn/errors.hpp"
#include "ofqn/figures.hpp"
#include "ofqn/numeric.hpp"
#include "ofqn/simulator.hpp"

namespace ofqn {

namespace {

constexpr double kMuSwitch = 1.0 / kDefaultSwitchServiceTime;
constexpr double kMuController = 1.0 / kDefaultControllerServiceTime;
constexpr double kDeadline = 0.5e-3;
constexpr double kStudentT4At99 = 4.604094871415897;  // 0.995 quantile, 4 degrees of freedom

std::string fmt(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

struct Context {
    const ValidationOptions& opts;

    std::uint64_t packets() const { return opts.quick ? 50000 : 200000; }
    // Enough packets for 10^6 post-warmup samples over 5 replications.
    std::uint64_t packets_for_million() const { return opts.quick ? 55556 : 222223; }

    SimConfig sim(std::uint64_t packets_per_replication) const {
        SimConfig cfg;
        cfg.seed = opts.seed;
        cfg.packets_per_replication = packets_per_replication;
        cfg.replications = 5;
        return cfg;
    }

    // Quick mode judges containment against a 99% Student-t interval (4
    // degrees of freedom for 5 replications). The normal 95% interval covers
    // only ~88% at R = 5, and the shorter quick runs add skew at high load.
    double ci_scale() const { return opts.quick ? kStudentT4At99 / kNormalQuantile95 : 1.0; }
    bool within_ci(double x, const SimResult& sim) const {
        return std::abs(x - sim.mean_sojourn) <= ci_scale() * sim.ci_halfwidth;
    }

    double perturbed_q_jack(double q_nf) const { return derive_q_jack(q_nf) * (1.0 + opts.q_jack_perturbation); }
};

struct Outcome {
    bool passed = true;
    std::ostringstream detail;

    void fail() { passed = false; }
    void require(bool ok) { passed = passed && ok; }
};

// Random stable single-node parameters with max station load in [0.01, 0.99].
struct RandomStable {
    std::mt19937_64 rng;

    explicit RandomStable(std::uint64_t seed) : rng(seed) {}

    std::pair<NodeParams, ControllerParams> next() {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double mu_l = std::pow(10.0, 3.0 + 3.0 * u(rng));
        const double mu_c = std::pow(10.0, 2.0 + 3.0 * u(rng));
        const double q = u(rng);
        const double load = 0.01 + 0.98 * u(rng);
        const double lambda = load * stability_supremum(NodeTemplate{mu_l, q}, ControllerParams{mu_c});
        return {NodeParams{lambda, mu_l, q}, ControllerParams{mu_c}};
    }
};

Outcome q_jack_exactness(const Context& ctx) {
    Outcome o;
    const double at1 = ctx.perturbed_q_jack(1.0);
    const double at0 = ctx.perturbed_q_jack(0.0);
    o.require(at1 == 0.5 && at0 == 0.0);

    std::mt19937_64 rng(ctx.opts.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double q = u(rng);
        const double lambda = std::pow(10.0, 6.0 * u(rng));
        const double gamma_switch = lambda * (1.0 + q);
        worst = std::max(worst, rel_diff(ctx.perturbed_q_jack(q) * gamma_switch, q * lambda));
    }
    o.require(worst <= 1e-12);
    o.detail << "q_jack(1)=" << fmt(at1, 17) << " q_jack(0)=" << fmt(at0) << " max rel |q_jack*Gamma_l - q*lambda|="
             << fmt(worst, 3) << " (tol 1e-12, n=1000)";
    return o;
}

Outcome mean_identity(const Context& ctx) {
    Outcome o;
    RandomStable gen(ctx.opts.seed + 1);
    double worst = 0.0;
    int unstable = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto [node, ctrl] = gen.next();
        const double path_form = mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl));
        try {
            const SolvedRates jackson =
                jackson_balance(node.lambda, ctx.perturbed_q_jack(node.q_nf), node.mu_switch, ctrl.mu_controller);
            worst = std::max(worst, rel_diff(mean_sojourn_jackson(jackson, node), path_form));
        } catch (const std::exception&) {
            ++unstable;
        }
    }
    o.require(worst <= 1e-12 && unstable == 0);
    o.detail << "max rel |product-form - path-form|=" << fmt(worst, 3) << " (tol 1e-12, n=1000)";
    if (unstable) o.detail << ", " << unstable << " tuples unsolvable in the Jackson model";
    return o;
}

Outcome distribution_consistency(const Context& ctx) {
    Outcome o;
    std::vector<std::pair<NodeParams, ControllerParams>> cases;
    for (double q : {0.2, 0.5, 1.0})
        for (double rho : {0.3, 0.7})
            cases.push_back({NodeParams{rho * kMuController / q, kMuSwitch, q}, ControllerParams{kMuController}});
    RandomStable gen(ctx.opts.seed + 2);
    for (int i = 0; i < 20; ++i) cases.push_back(gen.next());

    double worst_sum = 0.0, worst_pdf_mass = 0.0, worst_mean = 0.0, worst_laplace = 0.0;
    for (const auto& [node, ctrl] : cases) {
        const SolvedRates rates = solve_rates(node, ctrl);
        const SojournDistribution dist = build_distribution(node, ctrl, rates);
        if (!dist.degenerate) worst_sum = std::max(worst_sum, std::abs(dist.b1 + dist.b2 + dist.d - 1.0));

        const double horizon = 50.0 / std::min(dist.a_switch, dist.a_controller);
        const double pieces[] = {0.0, 50.0 / std::max(dist.a_switch, dist.a_controller), horizon};
        const auto integrate = [&pieces](const auto& f) { return numeric::adaptive_simpson_pieces(f, pieces, 1e-10); };
        const double mass = integrate([&](double t) { return pdf(dist, t); });
        worst_pdf_mass = std::max(worst_pdf_mass, std::abs(mass - 1.0));

        const double mean = integrate([&](double t) { return ccdf(dist, t); });
        worst_mean = std::max(worst_mean, rel_diff(mean, mean_sojourn_openflow(node, ctrl, rates)));

        const double al = dist.a_switch;
        const double ac = dist.a_controller;
        const double q = dist.q_nf;
        for (double s : {al / 2.0, al, 2.0 * al}) {
            const double numeric_lt = integrate([&](double t) { return pdf(dist, t) * std::exp(-s * t); });
            const double x = al / (al + s);
            const double closed = (1.0 - q) * x + q * x * x * ac / (ac + s);
            worst_laplace = std::max(worst_laplace, rel_diff(numeric_lt, closed));
        }
    }

    double worst_continuity = 0.0;
    for (double a : {50.0, 3830.0, 90000.0})
        for (double q : {0.2, 0.5, 1.0}) {
            const SojournDistribution limit = distribution_from_rates(a, a, q);
            const SojournDistribution near = distribution_from_rates(a, a * (1.0 + 1e-6), q);
            if (!limit.degenerate || near.degenerate) o.fail();
            for (int i = 0; i < 100; ++i) {
                const double t = 20.0 / a * i / 99.0;
                worst_continuity = std::max(worst_continuity, rel_diff(pdf(limit, t), pdf(near, t)));
                worst_continuity = std::max(worst_continuity, rel_diff(ccdf(limit, t), ccdf(near, t)));
            }
        }

    o.require(worst_sum <= 1e-12 && worst_pdf_mass <= 1e-9 && worst_mean <= 1e-6 && worst_laplace <= 1e-6 &&
              worst_continuity <= 1e-5);
    o.detail << "|b1+b2+d-1|=" << fmt(worst_sum, 3) << " |int pdf-1|=" << fmt(worst_pdf_mass, 3)
             << " rel(int ccdf, mean)=" << fmt(worst_mean, 3) << " rel(Laplace)=" << fmt(worst_laplace, 3)
             << " continuity=" << fmt(worst_continuity, 3) << " over " << cases.size() << " cases";
    return o;
}

Outcome fig3_reproduction(const Context& ctx) {
    Outcome o;
    const SimConfig cfg = ctx.sim(ctx.packets());
    int inside = 0;
    int total = 0;
    std::ostringstream misses;
    for (double q : {0.2, 1.0})
        for (double rho : linear_grid(0.1, 0.9, 0.1)) {
            const NodeParams node{rho * kMuController / q, kMuSwitch, q};
            const ControllerParams ctrl{kMuController};
            const double analytic = mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl));
            const SimResult sim = run_single_node(node, ctrl, cfg);
            ++total;
            if (ctx.within_ci(analytic, sim))
                ++inside;
            else
                misses << " [q=" << fmt(q) << " rho_c=" << fmt(rho, 2) << ": analytic " << fmt(analytic)
                       << " sim " << fmt(sim.mean_sojourn) << " +- " << fmt(sim.ci_halfwidth, 3) << "]";
        }
    o.require(inside >= 16);
    o.detail << inside << "/" << total << " grid points inside the "
             << (ctx.opts.quick ? "99% t interval" : "95% CI") << " (need >= 16)";
    if (!misses.str().empty()) o.detail << "; outside:" << misses.str();
    return o;
}

Outcome naive_discrimination(const Context& ctx) {
    Outcome o;
    const SimConfig cfg = ctx.sim(ctx.packets());
    const double rho = 0.8;
    // {q used for the simulation and corrected model, q used for the naive model}
    for (auto [q, q_naive] : {std::pair{1.0, 0.9}, std::pair{0.5, 0.5}}) {
        const ControllerParams ctrl{kMuController};
        const NodeParams node{rho * kMuController / q, kMuSwitch, q};
        const double modified = mean_sojourn_openflow(node, ctrl, solve_rates(node, ctrl));
        // Naive model placed at the same controller load under its own rates.
        const NodeParams naive_node{rho * kMuController * (1.0 - q_naive) / q_naive, kMuSwitch, q_naive};
        const double naive = mean_sojourn_naive_jackson(naive_node, ctrl);
        const SimResult sim = run_single_node(node, ctrl, cfg);
        const double naive_dev = std::abs(naive - sim.mean_sojourn) / sim.ci_halfwidth;
        const double modified_dev = std::abs(modified - sim.mean_sojourn) / sim.ci_halfwidth;
        o.require(naive_dev > 3.0 && modified_dev <= 3.0);
        o.detail << "[q=" << fmt(q) << " (naive q=" << fmt(q_naive) << ") rho_c=0.8: sim " << fmt(sim.mean_sojourn)
                 << " +- " << fmt(sim.ci_halfwidth, 3) << ", naive " << fmt(naive) << " (" << fmt(naive_dev, 3)
                 << " CI), modified " << fmt(modified) << " (" << fmt(modified_dev, 3) << " CI)] ";
    }
    return o;
}

Outcome mm1_sanity(const Context& ctx) {
    Outcome o;
    // Always the full 10^6 samples: short runs at rho = 0.9 give skewed
    // replication means that no interval handles well, and this check is cheap.
    const SimConfig cfg = ctx.sim(222223);
    const double ks_tol = ctx.opts.quick ? 0.02 : 0.01;
    for (double rho : {0.3, 0.6, 0.9}) {
        const double lambda = rho * kMuSwitch;
        const double a = kMuSwitch - lambda;
        const SimResult sim = run_single_node(NodeParams{lambda, kMuSwitch, 0.0}, ControllerParams{kMuController}, cfg);
        const double expected = 1.0 / a;
        const bool in_ci = ctx.within_ci(expected, sim);
        const double ks = numeric::ks_distance(sim.empirical_samples, [a](double t) { return -std::expm1(-a * t); });
        o.require(in_ci && ks < ks_tol);
        o.detail << "[rho=" << fmt(rho, 2) << ": 1/(mu-lambda)=" << fmt(expected) << " sim " << fmt(sim.mean_sojourn)
                 << " +- " << fmt(sim.ci_halfwidth, 3) << (in_ci ? " in CI" : " OUTSIDE CI") << ", KS=" << fmt(ks, 3)
                 << " n=" << sim.empirical_samples.size() << "] ";
    }
    o.detail << "(KS tol " << fmt(ks_tol) << ")";
    return o;
}

Outcome saturation_limit(const Context&) {
    Outcome o;
    const ControllerParams ctrl{kMuController};
    for (double q : {0.2, 0.5, 1.0}) {
        const NodeTemplate node{kMuSwitch, q};
        const double e0 = zero_load_sojourn(node, ctrl);
        const ThroughputResult far = max_throughput(1e3 * e0, node, ctrl);
        const double expected = std::min(kMuSwitch / (1.0 + q), kMuController / q);
        const double gap = std::abs(far.lambda - expected) / expected;

        bool monotone = true;
        double previous = 0.0;
        auto grid = log_grid(1.05 * e0, 100.0 * e0, 50);
        grid.push_back(1e3 * e0);
        for (double bound : grid) {
            const double lambda = max_throughput(bound, node, ctrl).lambda;
            monotone = monotone && lambda >= previous && lambda <= far.lambda_sup;
            previous = lambda;
        }
        o.require(far.feasible && gap <= 1e-3 && monotone);
        o.detail << "[q=" << fmt(q) << ": lambda=" << fmt(far.lambda, 8) << " sup=" << fmt(expected, 8)
                 << " gap=" << fmt(100.0 * gap, 3) << "%" << (monotone ? "" : " NOT MONOTONE") << "] ";
    }
    return o;
}

Outcome deadline_probability(const Context& ctx) {
    Outcome o;
    const ControllerParams ctrl{kMuController};
    const SimConfig cfg = ctx.sim(ctx.packets_for_million());
    const double tol = ctx.opts.quick ? 0.02 : 0.01;
    const double high_load_tol = ctx.opts.quick ? 0.04 : 0.03;
    for (double q : {0.2, 0.5, 1.0}) {
        bool monotone = true;
        double previous = 1.0;
        for (double rho : linear_grid(0.05, 0.95, 0.05)) {
            const NodeParams node{rho * kMuController / q, kMuSwitch, q};
            const double p = prob_within_deadline(build_distribution(node, ctrl, solve_rates(node, ctrl)), kDeadline);
            monotone = monotone && p <= previous;
            previous = p;
        }
        o.require(monotone);
        o.detail << "[q=" << fmt(q) << (monotone ? " monotone" : " NOT MONOTONE");
        for (double rho : {0.3, 0.5, 0.7}) {
            const NodeParams node{rho * kMuController / q, kMuSwitch, q};
            const double p = prob_within_deadline(build_distribution(node, ctrl, solve_rates(node, ctrl)), kDeadline);
            const SimResult sim = run_single_node(node, ctrl, cfg);
            const double empirical = 1.0 - empirical_ccdf(sim, kDeadline);
            const double dev = std::abs(p - empirical);
            const double allowed = rho >= 0.7 ? high_load_tol : tol;
            o.require(dev <= allowed);
            o.detail << "; rho_c=" << fmt(rho, 2) << " analytic " << fmt(p, 5) << " sim " << fmt(empirical, 5)
                     << " dev " << fmt(dev, 3);
            if (dev > tol) o.detail << " (exceeds " << fmt(tol) << ", allowed " << fmt(allowed) << ")";
        }
        o.detail << "] ";
    }
    return o;
}

Outcome chain_consistency(const Context& ctx) {
    Outcome o;
    const ControllerParams ctrl{kMuController};
    double worst_q2 = 0.0;
    std::mt19937_64 rng(ctx.opts.seed + 3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double q = u(rng);
        const double lambda1 = 1.0 + 1e4 * u(rng);
        const double lambda2 = 1.0 + 1e4 * u(rng);
        const ChainModel chain{{NodeParams{lambda1, kMuSwitch, q}, NodeParams{lambda2, kMuSwitch, q}}, ctrl};
        const ChainRates rates = solve_chain(chain);
        const double expected = q * lambda2 / (lambda1 + lambda2 * (1.0 + q));
        worst_q2 = std::max(worst_q2, rel_diff(rates.nodes[1].q_jack, expected));
        worst_q2 = std::max(worst_q2, rel_diff(rates.nodes[1].q_jack * rates.nodes[1].gamma_switch, q * lambda2));
        worst_q2 = std::max(worst_q2, rel_diff(rates.nodes[0].q_jack, q / (1.0 + q)));
    }
    o.require(worst_q2 <= 1e-12);
    o.detail << "max rel error of node-2 feedback probability=" << fmt(worst_q2, 3) << "; ";

    const SimConfig cfg = ctx.sim(ctx.packets());
    for (auto [q, lambda] : {std::pair{0.2, 5000.0}, std::pair{1.0, 1500.0}}) {
        const ChainModel chain{{NodeParams{lambda, kMuSwitch, q}, NodeParams{lambda, kMuSwitch, q}}, ctrl};
        const ChainSojourn analytic = chain_sojourn(chain, solve_chain(chain));
        const SimResult sim = run_chain(chain, cfg);
        const bool in_ci = ctx.within_ci(analytic.aggregate, sim);
        o.require(in_ci);
        o.detail << "[q=" << fmt(q) << " lambda=" << fmt(lambda) << ": aggregate analytic " << fmt(analytic.aggregate)
                 << " sim " << fmt(sim.mean_sojourn) << " +- " << fmt(sim.ci_halfwidth, 3)
                 << (in_ci ? " in CI" : " OUTSIDE CI");
        for (std::size_t c = 0; c < sim.classes.size(); ++c)
            o.detail << "; class " << c + 1 << " analytic " << fmt(analytic.per_class[c]) << " sim "
                     << fmt(sim.classes[c].mean_sojourn) << " +- " << fmt(sim.classes[c].ci_halfwidth, 3);
        o.detail << "] ";
    }
    return o;
}

Outcome simulator_invariants(const Context& ctx) {
    Outcome o;
    const ControllerParams ctrl{kMuController};
    SimConfig cfg = ctx.sim(ctx.opts.quick ? 20000 : 100000);
    int max_visits = 0;
    double worst_visit_z = 0.0;
    for (double q : {0.2, 0.5, 1.0}) {
        const NodeParams node{0.5 * kMuController / q, kMuSwitch, q};
        const SimResult sim = run_single_node(node, ctrl, cfg);
        max_visits = std::max(max_visits, sim.max_controller_visits);
        const double n = static_cast<double>(sim.packets_counted);
        const double sd = std::sqrt(q * (1.0 - q) / n);
        const double err = std::abs(sim.controller_visit_fraction - q);
        if (sd > 0.0) worst_visit_z = std::max(worst_visit_z, err / sd);
        o.require(err <= 3.0 * sd);
    }
    const ChainModel chain{{NodeParams{1500.0, kMuSwitch, 0.7}, NodeParams{800.0, kMuSwitch, 0.4}}, ctrl};
    max_visits = std::max(max_visits, run_chain(chain, cfg).max_controller_visits);
    o.require(max_visits <= 1);

    SweepSpec spec;
    spec.variable = SweepVariable::RhoController;
    spec.grid = {0.3, 0.6, 0.9};
    spec.fixed = SweepFixed{0.0, kMuSwitch, 0.5, kMuController, 0.0, kDeadline};
    spec.outputs = kAnalyticMean | kNaiveMean | kSimulatedMean | kDeadlineProb;
    spec.sim = ctx.sim(20000);
    const std::string first = sweep(spec).to_csv();
    const std::string second = sweep(spec).to_csv();
    o.require(first == second);

    o.detail << "max controller visits per packet=" << max_visits << ", worst visit-fraction z=" << fmt(worst_visit_z, 3)
             << " (limit 3), repeated sweep CSV " << (first == second ? "byte-identical" : "DIFFERS") << " ("
             << first.size() << " bytes)";
    return o;
}

struct CriterionSpec {
    int id;
    const char* name;
    double time_limit;
    Outcome (*run)(const Context&);
};

constexpr CriterionSpec kCriteria[] = {
    {1, "q-jack-exactness", 1.0, q_jack_exactness},
    {2, "mean-sojourn-identity", 1.0, mean_identity},
    {3, "distribution-consistency", 10.0, distribution_consistency},
    {4, "corrected-model-vs-simulation", 180.0, fig3_reproduction},
    {5, "naive-model-discrimination", 60.0, naive_discrimination},
    {6, "mm1-sanity", 60.0, mm1_sanity},
    {7, "throughput-saturation", 5.0, saturation_limit},
    {8, "deadline-probability", 180.0, deadline_probability},
    {9, "chain-consistency", 120.0, chain_consistency},
    {10, "simulator-invariants", 60.0, simulator_invariants},
};

} // namespace

bool ValidationReport::all_passed() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& r) { return r.passed; });
}

ValidationReport run_validation(const ValidationOptions& opts,
                                const std::function<void(const CriterionResult&)>& on_result) {
    const Context ctx{opts};
    ValidationReport report;
    for (const auto& c : kCriteria) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), c.id) == opts.only.end()) continue;
        CriterionResult r;
        r.id = c.id;
        r.name = c.name;
        r.time_limit = c.time_limit;
        const auto start = std::chrono::steady_clock::now();
        try {
            Outcome o = c.run(ctx);
            r.passed = o.passed;
            r.detail = o.detail.str();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (r.seconds >= r.time_limit) {
            r.passed = false;
            r.detail += " [runtime " + fmt(r.seconds, 3) + " s exceeds limit " + fmt(r.time_limit) + " s]";
        }
        if (on_result) on_result(r);
        report.criteria.push_back(std::move(r));
    }
    return report;
}

std::string format_result_line(const CriterionResult& r) {
    char head[128];
    std::snprintf(head, sizeof head, "%s %2d %-30s (%.2f s / %.0f s)  ", r.passed ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.seconds, r.time_limit);
    return head + r.detail;
}

} // namespace ofqn
