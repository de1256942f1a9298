#include "magopt/solver.hpp"

#include <cmath>

namespace magopt {

void SolverConfig::validate(const ObjectiveBundle& problem) const {
    validate_momentum_params(a, b);
    if (!(s > 0.0 && s <= 1.0 / problem.lipschitz_L))
        throw input_error("step size s must lie in (0, 1/L]");
    if (!(eps >= 0.0)) throw input_error("eps must be >= 0");
    if (k_max < 1) throw input_error("k_max must be >= 1");
    if (!(subproblem_tol > 0.0)) throw input_error("subproblem_tol must be > 0");
}

std::pair<SolverState, StepInfo> step(const SolverState& state,
                                      const SolverConfig& config,
                                      const ObjectiveBundle& problem) {
    const StepSchedule next_schedule = advance_schedule(state.schedule);
    const Eigen::VectorXd y = momentum_point(state, next_schedule.t_current);
    const GradientHull hull(problem.gradients(y), y);
    const Eigen::VectorXd v = y - state.x_cur;

    const SubproblemResult sub =
        solve_subproblem(hull, v, config.s, config.subproblem_tol);
    const Eigen::VectorXd x_next = y - config.s * sub.direction;

    SolverState out;
    out.k = state.k + 1;
    out.x_prev = state.x_cur;
    out.x_cur = x_next;
    out.y_cur = y;
    out.theta_last = sub.theta;
    out.schedule = next_schedule;

    StepInfo info;
    info.step_norm = (x_next - y).norm();
    info.y = y;
    info.theta = sub.theta;
    info.kkt_residual = sub.kkt_residual;
    return {std::move(out), std::move(info)};
}

RunResult run(const ObjectiveBundle& problem, const SolverConfig& config,
              const Eigen::VectorXd& x0, const ReferenceSet& refs, const RowSink& sink,
              bool store_iterates) {
    config.validate(problem);
    problem.validate_point(x0, "run");

    RunResult result;
    if (store_iterates) result.iterates.emplace();

    SolverState state = SolverState::initial(x0, config.a, config.b);
    std::optional<RowBuilder> rows;
    if (sink)
        rows.emplace(problem, refs, config.s, config.a, config.b, /*scheduled=*/true,
                     config.subproblem_tol);

    result.termination = Termination::k_max_reached;
    while (state.k <= config.k_max) {
        if (sink) {
            sink(rows->build(state));
            ++result.rows_emitted;
        }
        if (store_iterates) result.iterates->push_back(state.x_cur);

        auto [next, info] = step(state, config, problem);
        state = std::move(next);
        if (info.step_norm < config.eps) {
            result.termination = Termination::eps_reached;
            break;
        }
    }
    if (store_iterates) result.iterates->push_back(state.x_cur);
    result.final_state = std::move(state);
    return result;
}

RunResult run_msd(const ObjectiveBundle& problem, double s, double eps,
                  std::int64_t k_max, const Eigen::VectorXd& x0,
                  const ReferenceSet& refs, const RowSink& sink, bool store_iterates,
                  double subproblem_tol) {
    if (!(s > 0.0 && s <= 1.0 / problem.lipschitz_L))
        throw input_error("run_msd: step size s must lie in (0, 1/L]");
    if (!(eps >= 0.0)) throw input_error("run_msd: eps must be >= 0");
    if (k_max < 1) throw input_error("run_msd: k_max must be >= 1");
    problem.validate_point(x0, "run_msd");

    RunResult result;
    if (store_iterates) result.iterates.emplace();

    SolverState state;
    state.k = 1;
    state.x_prev = x0;
    state.x_cur = x0;

    std::optional<RowBuilder> rows;
    if (sink)
        rows.emplace(problem, refs, s, 0.0, 0.25, /*scheduled=*/false, subproblem_tol);

    result.termination = Termination::k_max_reached;
    while (state.k <= k_max) {
        if (sink) {
            sink(rows->build(state));
            ++result.rows_emitted;
        }
        if (store_iterates) result.iterates->push_back(state.x_cur);

        const GradientHull hull(problem.gradients(state.x_cur), state.x_cur);
        const Eigen::VectorXd direction = min_norm_element(hull, subproblem_tol);
        const Eigen::VectorXd x_next = state.x_cur - s * direction;
        const double step_norm = (x_next - state.x_cur).norm();

        state.x_prev = state.x_cur;
        state.x_cur = x_next;
        state.k += 1;
        if (step_norm < eps) {
            result.termination = Termination::eps_reached;
            break;
        }
    }
    if (store_iterates) result.iterates->push_back(state.x_cur);
    result.final_state = std::move(state);
    return result;
}

}  // namespace magopt
