#ifndef MAGOPT_HARNESS_HPP
#define MAGOPT_HARNESS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "magopt/config.hpp"

namespace magopt {

struct InvariantResult {
    std::string name;
    bool passed = false;
    double worst_violation = 0.0;  // signed; <= 0 means within slack
};

struct Report {
    std::optional<double> rate_slope;
    std::optional<std::pair<std::int64_t, std::int64_t>> rate_window;
    std::vector<InvariantResult> invariants;
    std::string termination;  // eps_reached | k_max_reached | aborted: <reason>
    double wall_time = 0.0;   // seconds
    RunPlan config_echo;

    bool aborted() const { return termination.rfind("aborted", 0) == 0; }
    bool all_passed() const;
};

/// Executes a plan: writes config_echo.ini, config.json, the diagnostics or
/// trajectory CSV, the optional iterates file and report.json into the plan's
/// output directory. The run's final iterate is always appended as the last
/// reference point. Never throws for solver failures; those are recorded in the
/// returned report (termination "aborted: ...").
Report run_plan(const RunPlan& plan);

/// Recomputes every invariant and the rate fit from the persisted CSV (plus the
/// config echo), independent of any in-run bookkeeping, and rewrites
/// report.json.
Report emit_report(const std::string& run_dir);

/// Runs plans in parallel subdirectories run_000, run_001, ... of out_root.
/// Returns the number of failed runs.
int run_sweep(std::vector<RunPlan> plans, const std::string& out_root, int workers);

std::string report_to_json(const Report& report);

}  // namespace magopt

#endif
