#ifndef MAGOPT_CONFIG_HPP
#define MAGOPT_CONFIG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "magopt/errors.hpp"
#include "magopt/problem.hpp"

namespace magopt {

enum class RunMode { mag_gm, msd, mavd };

std::string to_string(RunMode mode);

/// A fully validated experiment description, parsed from the key = value
/// config grammar (sections [problem], [solver], [output]).
struct RunPlan {
    // [problem]
    std::string problem_name;
    int n = 0;
    int m = 2;
    std::uint64_t seed = 0;
    bool x0_auto = true;
    Eigen::VectorXd x0_explicit;  // used when !x0_auto

    // [solver]
    RunMode mode = RunMode::mag_gm;
    double a = 0.0;
    double b = 0.25;
    double s = 0.0;  // 0 = auto (1/L)
    double eps = 1e-10;
    std::int64_t k_max = 100000;
    double subproblem_tol = 1e-10;
    double alpha = 3.0;   // mavd
    double dt = 1e-3;     // mavd
    double t_end = 1000;  // mavd
    int sample_every = 100;

    // [output]
    std::string out_dir = "magopt_run";
    bool store_iterates = false;
    int refs_count = 64;

    ObjectiveBundle build_problem() const;
    Eigen::VectorXd resolve_x0() const;
    double resolve_s(const ObjectiveBundle& problem) const;

    bool equivalent(const RunPlan& other) const;
};

/// Parses one plan; comma lists in sweepable keys are rejected.
RunPlan parse_config(const std::string& text);

/// Parses a sweep: keys a, b, s, alpha, n, m, seed, t_end, k_max may hold comma
/// lists; the cartesian product is returned in deterministic order.
std::vector<RunPlan> parse_sweep(const std::string& text);

/// Normalized config text; parse_config(render_config(p)) is equivalent to p.
/// Auto values (x0, s) are rendered resolved when resolve is true.
std::string render_config(const RunPlan& plan, bool resolve = true);

}  // namespace magopt

#endif
