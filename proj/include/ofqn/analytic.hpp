#pragma once

// Rate balance and mean sojourn times for an OpenFlow switch (or a chain of
// switches) sharing one controller, modelled as a Jackson network whose
// feedback probability is corrected so that every station sees the same
// input rate as in the real OpenFlow system.
//
// Units: seconds and events per second throughout.

#include <cstddef>
#include <string>
#include <vector>

namespace ofqn {

/// Loads at or above 1 - kStabilityMargin are treated as unstable.
inline constexpr double kStabilityMargin = 1e-9;

inline bool is_stable_load(double rho) noexcept { return rho < 1.0 - kStabilityMargin; }

struct NodeParams {
    double lambda = 0.0;     // external arrival rate
    double mu_switch = 0.0;  // switch service rate
    double q_nf = 0.0;       // probability an arriving packet starts a new flow

    bool operator==(const NodeParams&) const = default;
};

struct ControllerParams {
    double mu_controller = 0.0;  // service rate; includes switch->controller transmission

    bool operator==(const ControllerParams&) const = default;
};

struct SolvedRates {
    double gamma_switch = 0.0;
    double gamma_controller = 0.0;
    double q_jack = 0.0;
    double rho_switch = 0.0;
    double rho_controller = 0.0;

    bool stable() const noexcept { return is_stable_load(rho_switch) && is_stable_load(rho_controller); }

    /// Throws UnstableError naming the first saturated station.
    void require_stable(const std::string& switch_name = "switch") const;

    bool operator==(const SolvedRates&) const = default;
};

struct ChainModel {
    std::vector<NodeParams> nodes;  // node i forwards everything it serves to node i+1
    ControllerParams controller;

    bool operator==(const ChainModel&) const = default;
};

struct ChainRates {
    // Per node: gamma_controller is the controller traffic generated at that
    // node (q_i * lambda_i); rho_controller is the shared controller load.
    std::vector<SolvedRates> nodes;
    double gamma_controller = 0.0;
    double rho_controller = 0.0;

    bool stable() const noexcept;
    void require_stable() const;
};

struct ChainSojourn {
    std::vector<double> per_class;  // class i = traffic entering at node i
    double aggregate = 0.0;         // arrival-rate weighted mean over classes
};

void validate(const NodeParams& node);
void validate(const ControllerParams& ctrl);
void validate(const ChainModel& chain);

/// Feedback probability that makes a Jackson network reproduce the OpenFlow
/// rates: q_nf / (1 + q_nf).
double derive_q_jack(double q_nf);

/// OpenFlow rates: Gamma_l = lambda (1 + q_nf), Gamma_c = q_nf lambda.
/// Stability is reported, not enforced.
SolvedRates solve_rates(const NodeParams& node, const ControllerParams& ctrl);

/// Solves the plain Jackson balance Gamma_l = lambda + q * Gamma_l for an
/// arbitrary feedback probability q in [0, 1).
SolvedRates jackson_balance(double lambda, double feedback_probability, double mu_switch,
                            double mu_controller);

/// Product-form mean: (1/lambda) (rho_l/(1-rho_l) + rho_c/(1-rho_c)).
double mean_sojourn_jackson(const SolvedRates& rates, const NodeParams& node);

/// Path-based mean: (1+q_nf)/(mu_l - Gamma_l) + q_nf/(mu_c - Gamma_c).
double mean_sojourn_openflow(const NodeParams& node, const ControllerParams& ctrl,
                             const SolvedRates& rates);

/// Uncorrected Jackson model (feedback probability taken as q_nf itself).
/// Throws UndefinedError for q_nf = 1.
double mean_sojourn_naive_jackson(const NodeParams& node, const ControllerParams& ctrl);

ChainRates solve_chain(const ChainModel& chain);

/// Per-class and aggregate mean sojourn in a chain. Extension of the single
/// node result using per-station M/M/1 sojourns of the product-form network.
ChainSojourn chain_sojourn(const ChainModel& chain, const ChainRates& rates);

/// Path-form mean sojourn without the stability check; +inf once a station
/// saturates. Used by bisection searches.
double mean_sojourn_openflow_unchecked(double lambda, double q_nf, double mu_switch,
                                       double mu_controller) noexcept;

} // namespace ofqn
