#include "ofqn/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ofqn/errors.hpp"

namespace ofqn {

namespace {

void require_time(double t, const char* what) {
    if (!(t >= 0.0)) throw DomainError(std::string(what) + " must be non-negative, got " + std::to_string(t));
}

// e^{-a_l t} (e^{-delta t} - 1 + delta t) / delta^2, with delta = a_c - a_l.
// Equals e^{-a_l t} t^2 phi(delta t) where phi(x) = (e^{-x} - 1 + x) / x^2.
double coupling_term(const SojournDistribution& dist, double t) {
    const double delta = dist.degenerate ? 0.0 : dist.a_controller - dist.a_switch;
    const double x = delta * t;
    if (std::abs(x) < 0.5) {
        // phi(x) = sum_{k>=0} (-x)^k / (k+2)!
        double term = 0.5;
        double phi = term;
        for (int k = 1; k < 20; ++k) {
            term *= -x / (k + 2);
            phi += term;
        }
        return std::exp(-dist.a_switch * t) * t * t * phi;
    }
    return (std::exp(-dist.a_controller * t) - std::exp(-dist.a_switch * t) * (1.0 - x)) / (delta * delta);
}

} // namespace

double SojournDistribution::mean() const noexcept {
    if (degenerate) return (1.0 - q_nf) / a_switch + q_nf * 3.0 / a_switch;
    return b1 / a_switch + 2.0 * b2 / a_switch + d / a_controller;
}

SojournDistribution distribution_from_rates(double a_switch, double a_controller, double q_nf) {
    if (!(q_nf >= 0.0 && q_nf <= 1.0)) throw DomainError("q_nf must lie in [0, 1]");
    if (!(a_switch > 0.0)) throw UnstableError("switch", 1.0);
    if (!(a_controller > 0.0)) throw UnstableError("controller", 1.0);

    SojournDistribution dist;
    dist.a_switch = a_switch;
    dist.a_controller = a_controller;
    dist.q_nf = q_nf;
    const double gap = a_controller - a_switch;
    dist.degenerate = std::abs(gap) <= kDegenerateTolerance * std::max(a_switch, a_controller);
    if (dist.degenerate) {
        dist.b1 = 1.0 - q_nf;
        dist.b2 = 0.0;
        dist.d = 0.0;
        return dist;
    }
    const double gap2 = gap * gap;
    dist.b1 = 1.0 - q_nf - q_nf * a_switch * a_controller / gap2;
    dist.b2 = q_nf * a_controller / gap;
    dist.d = q_nf * a_switch * a_switch / gap2;
    return dist;
}

SojournDistribution build_distribution(const NodeParams& node, const ControllerParams& ctrl,
                                       const SolvedRates& rates) {
    validate(node);
    validate(ctrl);
    rates.require_stable();
    return distribution_from_rates(node.mu_switch - rates.gamma_switch,
                                   ctrl.mu_controller - rates.gamma_controller, node.q_nf);
}

double pdf(const SojournDistribution& dist, double t) {
    require_time(t, "t");
    const double al = dist.a_switch;
    const double q = dist.q_nf;
    const double ac = dist.degenerate ? al : dist.a_controller;
    return (1.0 - q) * al * std::exp(-al * t) + q * al * al * ac * coupling_term(dist, t);
}

double ccdf(const SojournDistribution& dist, double t) {
    require_time(t, "t");
    const double al = dist.a_switch;
    const double q = dist.q_nf;
    return (1.0 + q * al * t) * std::exp(-al * t) + q * al * al * coupling_term(dist, t);
}

double prob_within_deadline(const SojournDistribution& dist, double deadline) {
    require_time(deadline, "deadline");
    return 1.0 - ccdf(dist, deadline);
}

double quantile(const SojournDistribution& dist, double p) {
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in [0, 1)");
    if (p == 0.0) return 0.0;

    double lo = 0.0;
    double hi = dist.mean();
    while (1.0 - ccdf(dist, hi) < p) {
        lo = hi;
        hi *= 2.0;
    }
    for (;;) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (1.0 - ccdf(dist, mid) >= p)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

Table distribution_table(const SojournDistribution& dist, std::size_t points, double t_max) {
    if (points < 2) throw DomainError("distribution table needs at least 2 points");
    if (!(t_max > 0.0)) throw DomainError("t_max must be positive");
    Table table;
    table.columns = {"t", "pdf", "ccdf", "cdf"};
    for (std::size_t i = 0; i < points; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(points - 1);
        const double tail = ccdf(dist, t);
        table.add_row({t, pdf(dist, t), tail, 1.0 - tail});
    }
    return table;
}

Table quantile_table(const SojournDistribution& dist, const std::vector<double>& probabilities) {
    Table table;
    table.columns = {"p", "t"};
    for (double p : probabilities) table.add_row({p, quantile(dist, p)});
    return table;
}

} // namespace ofqn
