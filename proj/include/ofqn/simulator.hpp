#pragma once

// Discrete-event simulation of OpenFlow switches and their shared controller.
//
// Each packet arrives at its entry switch, is marked "new flow" with the
// node's q_nf, receives FIFO exponential service at the switch and, if it is
// a new flow, one FIFO exponential service at the controller followed by a
// fresh service at the same switch. It then transits every downstream switch
// once. Replications are independent; all randomness comes from named
// streams derived from the master seed, so results depend only on
// (seed, config, params).

#include <cstdint>
#include <vector>

#include "ofqn/analytic.hpp"

namespace ofqn {

/// Two-sided 95% normal quantile used for replication confidence intervals.
inline constexpr double kNormalQuantile95 = 1.96;

struct SimConfig {
    std::uint64_t seed = 1;
    std::uint64_t packets_per_replication = 200000;
    std::uint32_t replications = 5;
    double warmup_fraction = 0.1;
    std::uint64_t sample_cap = 1000000;  // retained sojourn samples per run
    bool parallel = true;                // run replications on separate threads

    bool operator==(const SimConfig&) const = default;
};

void validate(const SimConfig& cfg);

struct ClassStatistics {
    double mean_sojourn = 0.0;
    double ci_halfwidth = 0.0;
    std::vector<double> per_replication_means;
    std::uint64_t packets = 0;  // post-warmup departures
    double controller_visit_fraction = 0.0;
};

struct SimResult {
    double mean_sojourn = 0.0;
    double ci_halfwidth = 0.0;
    std::vector<double> per_replication_means;
    std::vector<double> empirical_samples;  // sorted; uniform reservoir when capped
    double controller_visit_fraction = 0.0;

    std::uint64_t packets_counted = 0;
    std::uint64_t samples_seen = 0;
    int max_controller_visits = 0;
    std::vector<ClassStatistics> classes;  // one per entry node
};

SimResult run_single_node(const NodeParams& node, const ControllerParams& ctrl, const SimConfig& cfg);

/// classes[i] holds traffic entering at node i; the top-level fields aggregate
/// over all classes.
SimResult run_chain(const ChainModel& chain, const SimConfig& cfg);

/// Fraction of retained samples strictly greater than t.
double empirical_ccdf(const SimResult& result, double t);

struct ConfidenceInterval {
    double mean = 0.0;
    double halfwidth = 0.0;

    bool contains(double x) const noexcept { return x >= mean - halfwidth && x <= mean + halfwidth; }
};
/// Mean +- 1.96 s / sqrt(R) over replication means.
ConfidenceInterval normal_confidence_interval(const std::vector<double>& replication_means);

} // namespace ofqn
