#pragma once

// Dimensioning questions answered with the closed-form model: how much
// external traffic fits under a mean-delay bound, and parameter sweeps that
// tabulate mean sojourn, deadline probability and throughput.

#include <cstdint>
#include <string>
#include <vector>

#include "ofqn/analytic.hpp"
#include "ofqn/simulator.hpp"
#include "ofqn/table.hpp"

namespace ofqn {

/// Node parameters with the arrival rate left open.
struct NodeTemplate {
    double mu_switch = 0.0;
    double q_nf = 0.0;
};

struct ThroughputResult {
    double lambda = 0.0;      // largest admissible external rate
    double lambda_sup = 0.0;  // stability supremum
    bool feasible = false;    // false when the bound is below the zero-load delay
};

/// min(mu_l / (1 + q_nf), mu_c / q_nf); the second term is absent for q_nf = 0.
double stability_supremum(const NodeTemplate& node, const ControllerParams& ctrl);

/// Mean sojourn as lambda -> 0+: (1 + q_nf)/mu_l + q_nf/mu_c.
double zero_load_sojourn(const NodeTemplate& node, const ControllerParams& ctrl);

ThroughputResult max_throughput(double delay_bound, const NodeTemplate& node, const ControllerParams& ctrl);

/// Logarithmic grid of `points` values over [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Evenly spaced grid first, first+step, ... up to last (inclusive within 1e-9).
std::vector<double> linear_grid(double first, double last, double step);

enum class SweepVariable { Lambda, RhoController, QNf, MuController, DelayBound };

enum SweepOutput : unsigned {
    kAnalyticMean = 1u << 0,
    kNaiveMean = 1u << 1,
    kSimulatedMean = 1u << 2,
    kDeadlineProb = 1u << 3,
    kThroughput = 1u << 4,
};

struct SweepFixed {
    double lambda = 0.0;         // unused when lambda is back-solved from rho_controller
    double mu_switch = 0.0;
    double q_nf = 0.0;
    double mu_controller = 0.0;
    double delay_bound = 0.0;    // for throughput when the bound is not swept
    double deadline = 0.5e-3;    // for deadline_prob

    bool operator==(const SweepFixed&) const = default;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::RhoController;
    std::vector<double> grid;
    SweepFixed fixed;
    unsigned outputs = kAnalyticMean;
    SimConfig sim;

    bool operator==(const SweepSpec&) const = default;
};

std::string to_string(SweepVariable v);
SweepVariable parse_sweep_variable(const std::string& name);
unsigned parse_sweep_output(const std::string& name);
std::vector<std::string> sweep_output_names(unsigned outputs);

void validate(const SweepSpec& spec);

/// One row per grid point, in grid order. Columns: the swept variable,
/// lambda, rho_controller, status, then the requested outputs
/// (analytic_mean, naive_mean, sim_mean, sim_ci, deadline_prob, throughput)
/// and a notes column. Rows that cannot be evaluated keep their place with
/// empty cells and a status or note saying why.
///
/// When rho_controller is swept, lambda = rho_c mu_c / q_nf, and the naive
/// model is evaluated at its own controller load rho_c, i.e. at
/// lambda = rho_c mu_c (1 - q_nf) / q_nf.
Table sweep(const SweepSpec& spec);

} // namespace ofqn
