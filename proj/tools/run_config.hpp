#pragma once

// Run configuration for the ofqn command line: one JSON document with
// sections node|chain, controller, sim, sweep and output. Command-line flags
// are applied on top of the parsed document by the CLI.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace ofqn_cli {

/// Malformed configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A service rate given either per second or as a mean service time in
/// microseconds (keys `mu_switch` / `mu_switch_us`, short forms `mu_l` / `mu_l_us`;
/// likewise `mu_controller` / `mu_c`). The original form is kept so emitted
/// JSON round-trips.
struct ServiceRate {
    enum class Unit { PerSecond, MicrosecondServiceTime };
    Unit unit = Unit::MicrosecondServiceTime;
    double value = 0.0;

    double per_second() const { return unit == Unit::PerSecond ? value : 1e6 / value; }

    static ServiceRate per_second(double v) { return {Unit::PerSecond, v}; }
    static ServiceRate service_time_us(double v) { return {Unit::MicrosecondServiceTime, v}; }

    bool operator==(const ServiceRate&) const = default;
};

struct NodeConfig {
    std::optional<double> lambda;
    double q_nf = 0.0;
    ServiceRate mu_switch = ServiceRate::service_time_us(9.8);

    bool operator==(const NodeConfig&) const = default;
};

struct ControllerConfig {
    ServiceRate mu_controller = ServiceRate::service_time_us(240.0);

    bool operator==(const ControllerConfig&) const = default;
};

struct SimSection {
    std::uint64_t seed = 1;
    std::uint64_t packets_per_replication = 200000;
    std::uint32_t replications = 5;
    double warmup_fraction = 0.1;
    std::uint64_t sample_cap = 1000000;

    bool operator==(const SimSection&) const = default;
};

struct SweepSection {
    std::string variable = "rho_controller";
    std::vector<double> grid;
    std::vector<std::string> outputs{"analytic_mean"};
    std::optional<double> delay_bound;
    double deadline = 0.5e-3;

    bool operator==(const SweepSection&) const = default;
};

struct OutputSection {
    std::string path = "-";  // "-" is stdout
    std::string format = "csv";

    bool operator==(const OutputSection&) const = default;
};

struct RunConfig {
    NodeConfig node;
    std::vector<NodeConfig> chain;  // non-empty selects the chain model
    ControllerConfig controller;
    SimSection sim;
    SweepSection sweep;
    OutputSection output;

    bool operator==(const RunConfig&) const = default;
};

/// Seed taken from OFQN_SEED when set, otherwise 1.
std::uint64_t default_seed();

RunConfig default_config();

RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const RunConfig& cfg);

RunConfig load_config_file(const std::string& path);

/// "0.1,0.2,0.5" -> values; throws ConfigError naming `field`.
std::vector<double> parse_number_list(const std::string& text, const std::string& field);

/// Expands from/to/step into an inclusive grid.
std::vector<double> expand_range(double from, double to, double step, const std::string& field);

} // namespace ofqn_cli
