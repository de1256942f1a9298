#ifndef MAGOPT_DIAGNOSTICS_HPP
#define MAGOPT_DIAGNOSTICS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "magopt/problem.hpp"
#include "magopt/schedule.hpp"

namespace magopt {

/// One record per iteration: everything the convergence analysis tracks.
struct DiagnosticsRow {
    std::int64_t k = 0;
    double t = 1.0;
    double step_norm_sq = 0.0;          // ||x_k - x_{k-1}||^2
    double zeta = 0.0;                  // a*t_k - b + 1/4
    double merit = 0.0;                 // merit surrogate over the reference set
    double crit_residual = 0.0;         // ||proj_{C(x_k)}(0)||
    double sum_partial = 0.0;           // sum_{p<=k} (a*p - b + 1/4)*||x_p - x_{p-1}||^2
    Eigen::VectorXd f;                  // m
    Eigen::VectorXd W;                  // m, f_i + step_norm_sq/(2s)
    Eigen::VectorXd sigma_refs;         // per reference point
    Eigen::VectorXd E_refs;             // per reference point
};

/// min_i (f_i(x) - f_i(z)).
double sigma(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
             const Eigen::VectorXd& z);

/// Finite-reference merit surrogate: max over z in refs of min_i (f_i(x) - f_i(z)).
/// A lower bound of the true merit function.
double merit_surrogate(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
                       const ReferenceSet& refs);

/// Per-objective energy f_i(x) + ||x - x_prev||^2 / (2s).
Eigen::VectorXd energy_W(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& x_prev, double s);

/// Discrete Lyapunov value t_k^2 sigma_k(z) + ||eta_k - z||^2/(2s) with
/// eta_k = x_k + (t_k - 1)(x_k - x_{k-1}).
double lyapunov_E(const ObjectiveBundle& problem, const SolverState& state, double s,
                  const Eigen::VectorXd& z);

/// zeta_k(a,b) = a*t_k - b + 1/4.
double zeta(const StepSchedule& schedule);

/// Q(a,b) = (1/4 - b)^2 / (2(1-a)), the constant step-weight in the summability bound.
double summability_Q(double a, double b);

/// ||proj_{C(x)}(0)||; zero exactly at Pareto critical points.
double criticality_residual(const ObjectiveBundle& problem, const Eigen::VectorXd& x,
                            double tol = 1e-10);

struct RateFit {
    double slope = 0.0;
    int used = 0;
    int excluded = 0;  // values <= 1e-300 clipped out of the fit
};

/// Least-squares slope of log(value) against log(k) over k in [k_lo, k_hi].
RateFit rate_fit(const std::vector<std::pair<std::int64_t, double>>& series,
                 std::int64_t k_lo, std::int64_t k_hi);

struct SummabilityResult {
    std::vector<double> partial_sums;
    std::optional<double> bound_estimate;  // absent when no radius hint was given
    bool bound_violated = false;           // some partial sum exceeded the bound by > 1%
};

/// Running partial sums of (a*k - b + 1/4)*||x_k - x_{k-1}||^2 plus the bound
/// estimate derived from the first row's merit and the level-radius hint.
SummabilityResult summability_check(const std::vector<DiagnosticsRow>& rows, double a,
                                    double b, double s,
                                    std::optional<double> radius_hint);

/// Builds rows during a run; keeps the running summability sum.
class RowBuilder {
public:
    RowBuilder(const ObjectiveBundle& problem, ReferenceSet refs, double s, double a,
               double b, bool scheduled, double subproblem_tol = 1e-10);

    DiagnosticsRow build(const SolverState& state);
    const ReferenceSet& refs() const { return refs_; }

private:
    const ObjectiveBundle& problem_;
    ReferenceSet refs_;
    double s_, a_, b_;
    bool scheduled_;  // false for the steepest-descent baseline: t=1, zeta/sums 0
    double subproblem_tol_;
    double sum_partial_ = 0.0;
};

}  // namespace magopt

#endif
