#pragma once

// Exact sojourn-time distribution of a single OpenFlow node.
//
// The Laplace transform (1-q) a_l/(a_l+s) + q (a_l/(a_l+s))^2 a_c/(a_c+s)
// splits into partial fractions
//     b1 a_l/(a_l+s) + b2 (a_l/(a_l+s))^2 + d a_c/(a_c+s)
// with a signed set of coefficients. Evaluation uses a rearrangement that
// stays accurate as a_c -> a_l and reduces to the Erlang-3 limit there.

#include <vector>

#include "ofqn/analytic.hpp"
#include "ofqn/table.hpp"

namespace ofqn {

/// |a_c - a_l| <= kDegenerateTolerance * max(a_l, a_c) selects the limit form.
inline constexpr double kDegenerateTolerance = 1e-9;

struct SojournDistribution {
    double a_switch = 0.0;      // mu_l - Gamma_l
    double a_controller = 0.0;  // mu_c - Gamma_c
    double b1 = 0.0;
    double b2 = 0.0;
    double d = 0.0;
    double q_nf = 0.0;
    bool degenerate = false;  // b1 = 1-q, b2 = d = 0; the q-weighted part is Erlang-3(a_switch)

    double mean() const noexcept;
};

SojournDistribution build_distribution(const NodeParams& node, const ControllerParams& ctrl,
                                       const SolvedRates& rates);

/// Builds directly from the two effective rates; used by tests that need to
/// place a_c relative to a_l exactly.
SojournDistribution distribution_from_rates(double a_switch, double a_controller, double q_nf);

double pdf(const SojournDistribution& dist, double t);
double ccdf(const SojournDistribution& dist, double t);
double prob_within_deadline(const SojournDistribution& dist, double deadline);

/// Smallest t with P(W <= t) >= p, by bisection down to adjacent doubles.
double quantile(const SojournDistribution& dist, double p);

/// Columns t, pdf, ccdf, cdf on `points` evenly spaced times in [0, t_max].
Table distribution_table(const SojournDistribution& dist, std::size_t points, double t_max);

/// Columns p, t.
Table quantile_table(const SojournDistribution& dist, const std::vector<double>& probabilities);

} // namespace ofqn
