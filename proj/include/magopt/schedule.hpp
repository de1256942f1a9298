#ifndef MAGOPT_SCHEDULE_HPP
#define MAGOPT_SCHEDULE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "magopt/errors.hpp"
#include "magopt/simplex.hpp"

namespace magopt {

/// Generalized momentum sequence t_{k+1} = sqrt(t_k^2 - a*t_k + b) + 1/2 with
/// t_1 = 1, a in [0,1), b in [a^2/4, 1/4]. The extrapolation coefficient is
/// (t_k - 1)/t_{k+1}.
struct StepSchedule {
    double a = 0.0;
    double b = 0.25;
    double t_current = 1.0;
    std::int64_t k = 1;

    StepSchedule() = default;
    StepSchedule(double a_in, double b_in);
};

/// Checks a in [0,1), b in [a^2/4, 1/4]; throws input_error otherwise.
void validate_momentum_params(double a, double b);

StepSchedule advance_schedule(const StepSchedule& schedule);

/// The iterate pair (x_{k-1}, x_k) plus the schedule; y and theta from the most
/// recent step are kept for diagnostics.
struct SolverState {
    std::int64_t k = 1;
    Eigen::VectorXd x_prev;
    Eigen::VectorXd x_cur;
    std::optional<Eigen::VectorXd> y_cur;
    std::optional<SimplexWeights> theta_last;
    StepSchedule schedule;

    static SolverState initial(const Eigen::VectorXd& x0, double a, double b);
};

/// y_k = x_k + (t_k - 1)/t_{k+1} * (x_k - x_{k-1}); t_next is t_{k+1}, already
/// advanced per the algorithm's line order. At k = 1 (t_1 = 1) this is x_1.
Eigen::VectorXd momentum_point(const SolverState& state, double t_next);

}  // namespace magopt

#endif
