#include "magopt/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace magopt {

double sigma(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
             const Eigen::VectorXd& z) {
    problem.validate_point(x, "sigma");
    problem.validate_point(z, "sigma");
    return problem.gap(x, z).minCoeff();
}

double merit_surrogate(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
                       const ReferenceSet& refs) {
    if (refs.points.empty())
        throw input_error("merit_surrogate: reference set is empty");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : refs.points) best = std::max(best, sigma(problem, x, z));
    return best;
}

Eigen::VectorXd energy_W(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_prev, double s) {
    if (s <= 0.0) throw input_error("energy_W: s must be positive");
    const double kinetic = (x - x_prev).squaredNorm() / (2.0 * s);
    return problem.value(x).array() + kinetic;
}

double lyapunov_E(const ObjectiveBundle& problem, const SolverState& state, double s,
                  const Eigen::VectorXd& z) {
    const double t = state.schedule.t_current;
    const Eigen::VectorXd eta = state.x_cur + (t - 1.0) * (state.x_cur - state.x_prev);
    return t * t * sigma(problem, state.x_cur, z) + (eta - z).squaredNorm() / (2.0 * s);
}

double zeta(const StepSchedule& schedule) {
    return schedule.a * schedule.t_current - schedule.b + 0.25;
}

double summability_Q(double a, double b) {
    return (0.25 - b) * (0.25 - b) / (2.0 * (1.0 - a));
}

double criticality_residual(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
                            double tol) {
    problem.validate_point(x, "criticality_residual");
    return min_norm_element(GradientHull(problem.gradients(x), x), tol).norm();
}

RateFit rate_fit(const std::vector<std::pair<std::int64_t, double>>& series,
                 std::int64_t k_lo, std::int64_t k_hi) {
    RateFit fit;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [k, v] : series) {
        if (k < k_lo || k > k_hi) continue;
        if (!(v > 1e-300)) {
            ++fit.excluded;
            continue;
        }
        const double lx = std::log(static_cast<double>(k)), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++fit.used;
    }
    if (fit.used < 10)
        throw insufficient_data_error("rate_fit: fewer than 10 usable points in window");
    const double denom = fit.used * sxx - sx * sx;
    fit.slope = (fit.used * sxy - sx * sy) / denom;
    return fit;
}

SummabilityResult summability_check(const std::vector<DiagnosticsRow>& rows, double a,
                                    double b, double s,
                                    std::optional<double> radius_hint) {
    SummabilityResult out;
    out.partial_sums.reserve(rows.size());
    double sum = 0.0;
    for (const auto& row : rows) {
        sum += (a * static_cast<double>(row.k) - b + 0.25) * row.step_norm_sq;
        out.partial_sums.push_back(sum);
    }

    if (radius_hint && !rows.empty() && std::isfinite(rows.front().merit)) {
        const double B = s * rows.front().merit + *radius_hint * *radius_hint;
        double bound = 0.0;
        if (a > 0.0) bound += 4.0 / a * B;
        if (b < 0.25) bound += (0.25 - b) * B / summability_Q(a, b);
        out.bound_estimate = bound;
        for (double ps : out.partial_sums)
            if (ps > bound * 1.01 + 1e-300) out.bound_violated = true;
    }
    return out;
}

RowBuilder::RowBuilder(const ObjectiveBundle& problem, ReferenceSet refs, double s,
                       double a, double b, bool scheduled, double subproblem_tol)
    : problem_(problem),
      refs_(std::move(refs)),
      s_(s),
      a_(a),
      b_(b),
      scheduled_(scheduled),
      subproblem_tol_(subproblem_tol) {}

DiagnosticsRow RowBuilder::build(const SolverState& state) {
    DiagnosticsRow row;
    row.k = state.k;
    row.t = scheduled_ ? state.schedule.t_current : 1.0;
    row.step_norm_sq = (state.x_cur - state.x_prev).squaredNorm();
    row.f = problem_.value(state.x_cur);
    row.W = row.f.array() + row.step_norm_sq / (2.0 * s_);
    row.crit_residual = criticality_residual(problem_, state.x_cur, subproblem_tol_);

    const auto j = static_cast<Eigen::Index>(refs_.points.size());
    row.sigma_refs.resize(j);
    row.E_refs.resize(j);
    const double t = row.t;
    const Eigen::VectorXd eta =
        state.x_cur + (t - 1.0) * (state.x_cur - state.x_prev);
    double merit = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < j; ++i) {
        const Eigen::VectorXd& z = refs_.points[i];
        const double sig = problem_.gap(state.x_cur, z).minCoeff();
        row.sigma_refs[i] = sig;
        row.E_refs[i] = t * t * sig + (eta - z).squaredNorm() / (2.0 * s_);
        merit = std::max(merit, sig);
    }
    row.merit = j > 0 ? merit : std::numeric_limits<double>::quiet_NaN();

    if (scheduled_) {
        row.zeta = a_ * t - b_ + 0.25;
        sum_partial_ +=
            (a_ * static_cast<double>(state.k) - b_ + 0.25) * row.step_norm_sq;
        row.sum_partial = sum_partial_;
    } else {
        row.zeta = 0.0;
        row.sum_partial = 0.0;
    }
    return row;
}

}  // namespace magopt
