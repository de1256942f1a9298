#ifndef MAGOPT_SOLVER_HPP
#define MAGOPT_SOLVER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "magopt/diagnostics.hpp"
#include "magopt/problem.hpp"
#include "magopt/schedule.hpp"

namespace magopt {

struct SolverConfig {
    double a = 0.0;
    double b = 0.25;
    double s = 0.0;  // step size in (0, 1/L]
    double eps = 1e-10;
    std::int64_t k_max = 100000;
    double subproblem_tol = 1e-10;

    void validate(const ObjectiveBundle& problem) const;
};

struct StepInfo {
    double step_norm = 0.0;  // ||x_{k+1} - y_k||
    Eigen::VectorXd y;
    SimplexWeights theta;
    double kkt_residual = 0.0;
};

enum class Termination { eps_reached, k_max_reached };

struct RunResult {
    std::optional<std::vector<Eigen::VectorXd>> iterates;  // x_1..x_K when stored
    SolverState final_state;
    Termination termination = Termination::k_max_reached;
    std::int64_t rows_emitted = 0;
};

using RowSink = std::function<void(const DiagnosticsRow&)>;

/// One iteration: advance t, extrapolate, solve the subproblem at y_k with
/// v = y_k - x_k, then x_{k+1} = y_k - s * sum theta_i grad f_i(y_k).
std::pair<SolverState, StepInfo> step(const SolverState& state,
                                      const SolverConfig& config,
                                      const ObjectiveBundle& problem);

/// Full accelerated run from x_0 = x_1 = x0. Emits one DiagnosticsRow per
/// iteration (for the pre-step state) when a sink is given; rows carry the
/// reference-set columns. Deterministic for fixed inputs.
RunResult run(const ObjectiveBundle& problem, const SolverConfig& config,
              const Eigen::VectorXd& x0, const ReferenceSet& refs,
              const RowSink& sink = nullptr, bool store_iterates = false);

/// Steepest-descent baseline x_{k+1} = x_k - s*proj_{C(x_k)}(0).
RunResult run_msd(const ObjectiveBundle& problem, double s, double eps,
                  std::int64_t k_max, const Eigen::VectorXd& x0,
                  const ReferenceSet& refs, const RowSink& sink = nullptr,
                  bool store_iterates = false, double subproblem_tol = 1e-10);

}  // namespace magopt

#endif
