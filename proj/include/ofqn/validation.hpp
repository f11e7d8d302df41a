#pragma once

// End-to-end checks of the toolkit: closed-form identities, the
// distribution against quadrature, and the analytic model against the
// simulator. Each criterion reports its measured values and runtime.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace ofqn {

struct ValidationOptions {
    bool quick = false;                 // reduced packet counts, looser simulation tolerances
    std::uint64_t seed = 1;
    double q_jack_perturbation = 0.0;   // relative; fault injection for the identity checks
    std::vector<int> only;              // criterion ids to run; empty runs all
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit = 0.0;
};

struct ValidationReport {
    std::vector<CriterionResult> criteria;

    bool all_passed() const;
};

inline constexpr int kCriterionCount = 10;

ValidationReport run_validation(const ValidationOptions& opts,
                                const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS  3 distribution-consistency  (0.02 s / 10 s)  detail..."
std::string format_result_line(const CriterionResult& r);

} // namespace ofqn
