#pragma once

#include <stdexcept>
#include <string>

namespace ofqn {

/// Argument outside the domain of an operation (negative time, probability
/// outside [0,1], malformed configuration value).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A station's load is at or beyond the stability margin.
class UnstableError : public std::domain_error {
public:
    UnstableError(std::string station, double rho)
        : std::domain_error("unstable: " + station + " (rho = " + std::to_string(rho) + ")"),
          station_(std::move(station)), rho_(rho) {}

    const std::string& station() const noexcept { return station_; }
    double rho() const noexcept { return rho_; }

private:
    std::string station_;
    double rho_;
};

/// The requested model is not defined for these inputs (naive Jackson model
/// at q_nf = 1).
class UndefinedError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace ofqn
