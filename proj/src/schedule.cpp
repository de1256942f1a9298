#include "magopt/schedule.hpp"

#include <cmath>

namespace magopt {

void validate_momentum_params(double a, double b) {
    if (!(a >= 0.0 && a < 1.0))
        throw input_error("momentum parameter a must lie in [0, 1)");
    if (!(b >= a * a / 4.0 && b <= 0.25))
        throw input_error("momentum parameter b must lie in [a^2/4, 1/4]");
}

StepSchedule::StepSchedule(double a_in, double b_in) : a(a_in), b(b_in) {
    validate_momentum_params(a, b);
}

StepSchedule advance_schedule(const StepSchedule& schedule) {
    const double t = schedule.t_current;
    const double radicand = t * t - schedule.a * t + schedule.b;
    if (!(radicand >= 0.0))
        throw std::logic_error("advance_schedule: negative radicand");
    StepSchedule next = schedule;
    next.t_current = std::sqrt(radicand) + 0.5;
    next.k = schedule.k + 1;
    return next;
}

SolverState SolverState::initial(const Eigen::VectorXd& x0, double a, double b) {
    SolverState s;
    s.k = 1;
    s.x_prev = x0;
    s.x_cur = x0;
    s.schedule = StepSchedule(a, b);
    return s;
}

Eigen::VectorXd momentum_point(const SolverState& state, double t_next) {
    const double coeff = (state.schedule.t_current - 1.0) / t_next;
    return state.x_cur + coeff * (state.x_cur - state.x_prev);
}

}  // namespace magopt
