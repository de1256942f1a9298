#ifndef MAGOPT_MAVD_HPP
#define MAGOPT_MAVD_HPP

#include <Eigen/Dense>
#include <vector>

#include "magopt/problem.hpp"
#include "magopt/simplex.hpp"

namespace magopt {

/// State of the inertial system at time t: position, velocity, damping alpha.
struct OdeState {
    double t = 1.0;
    Eigen::VectorXd x;
    Eigen::VectorXd v;
    double alpha = 3.0;

    static OdeState initial(const Eigen::VectorXd& x0, double alpha);
};

struct SelectionResult {
    Eigen::VectorXd c;       // the selected hull element
    SimplexWeights weights;  // its simplex coordinates
    double residual = 0.0;   // ||c - proj_C(damping*v + c)||
};

/// Resolves the implicit projection: the fixed points of
/// c = proj_C(damping*v + c) are exactly the maximizers of <v, .> over the
/// hull. The fast path takes the min-norm point of the maximizing face; a
/// 1/2-averaged fixed-point iteration backs it up. v = 0 returns the hull's
/// min-norm element by convention.
SelectionResult selection(const GradientHull& hull, const Eigen::VectorXd& v,
                          double damping, double tol = 1e-10);

struct RhsResult {
    Eigen::VectorXd dx;  // = v
    Eigen::VectorXd dv;  // = -(alpha/t)*v - c
    SelectionResult sel;
};

/// step_hint > 0 widens near-tied maximizing faces to the band one step of
/// that size cannot resolve, turning vertex chattering across the tie manifold
/// into the sliding combination. The integrator passes its current step.
RhsResult rhs(const OdeState& state, const ObjectiveBundle& problem,
              double tol = 1e-10, double step_hint = 0.0);

struct TrajectorySample {
    double t = 1.0;
    Eigen::VectorXd x;
    Eigen::VectorXd v;
    Eigen::VectorXd accel;
    SimplexWeights selection_weights;
    Eigen::VectorXd W;           // f_i + ||v||^2/2
    Eigen::VectorXd theta_refs;  // Theta_z per reference point
    Eigen::VectorXd E_refs;      // continuous Lyapunov per reference point
    double merit = 0.0;          // max Theta_z over the reference set
};

/// Fills W, Theta_z, E_z and the merit surrogate for a sample that already
/// carries consistent (t, x, v).
void continuous_diagnostics(const ObjectiveBundle& problem, TrajectorySample& sample,
                            double alpha, const ReferenceSet& refs);

/// Classical fixed-step RK4 from t = 1 (x(1) = x0, v(1) = 0) to t_end. The base
/// step dt doubles each decade of t, capped at 0.1. Samples every sample_every
/// accepted steps plus the first and last point.
std::vector<TrajectorySample> integrate(const ObjectiveBundle& problem, double alpha,
                                        const Eigen::VectorXd& x0, double t_end,
                                        double dt, int sample_every,
                                        const ReferenceSet& refs,
                                        double tol = 1e-10);

/// The step size in effect at time t for a given base dt.
double mavd_step_size(double t, double dt_base);

}  // namespace magopt

#endif
