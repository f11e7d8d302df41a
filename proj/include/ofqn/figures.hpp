#pragma once

// Data behind the standard plots: delay versus controller load for the naive
// and corrected models (fig2), corrected model versus simulation (fig3),
// admissible throughput versus delay bound (fig4), delay versus controller
// load for several controller speeds (fig5) and deadline probability versus
// controller load (fig6).

#include <string>
#include <vector>

#include "ofqn/simulator.hpp"
#include "ofqn/table.hpp"

namespace ofqn {

inline constexpr double kDefaultSwitchServiceTime = 9.8e-6;     // seconds
inline constexpr double kDefaultControllerServiceTime = 240e-6;  // seconds

struct FigureOptions {
    double mu_switch = 1.0 / kDefaultSwitchServiceTime;
    double mu_controller = 1.0 / kDefaultControllerServiceTime;
    std::vector<double> q_values;       // empty: figure default
    std::vector<double> rho_grid;       // empty: 0.1, 0.2, ..., 0.9
    std::vector<double> controller_service_times;  // fig5, seconds; empty: 120, 240, 480 us
    double deadline = 0.5e-3;
    std::size_t delay_points = 50;      // fig4 grid size
    bool simulate = true;               // fig2/fig3 simulation columns
    SimConfig sim;
};

const std::vector<std::string>& figure_names();

/// Throws DomainError for unknown names.
Table figure(const std::string& name, const FigureOptions& opts);

} // namespace ofqn
