#ifndef MAGOPT_SIMPLEX_HPP
#define MAGOPT_SIMPLEX_HPP

#include <Eigen/Dense>

#include "magopt/errors.hpp"

namespace magopt {

/// The m objective gradients at one point; column i is grad f_i(anchor).
/// conv{columns} is the set C(x) all subproblems work on.
struct GradientHull {
    Eigen::MatrixXd columns;  // n x m
    Eigen::VectorXd anchor;   // n

    GradientHull() = default;
    GradientHull(Eigen::MatrixXd cols, Eigen::VectorXd anchor_pt);

    int n() const { return static_cast<int>(columns.rows()); }
    int m() const { return static_cast<int>(columns.cols()); }
};

/// A point of the unit simplex: theta_i >= 0, |sum theta - 1| <= 1e-12.
struct SimplexWeights {
    Eigen::VectorXd theta;

    SimplexWeights() = default;
    explicit SimplexWeights(Eigen::VectorXd t);

    int m() const { return static_cast<int>(theta.size()); }
};

struct SubproblemResult {
    SimplexWeights theta;
    Eigen::VectorXd direction;  // G * theta
    double objective = 0.0;     // ||s*G*theta - v||^2
    double kkt_residual = 0.0;
    bool degenerate = false;    // all-zero hull, theta fixed to uniform
};

/// Euclidean projection onto the unit simplex (sort-and-threshold).
SimplexWeights project_simplex(const Eigen::VectorXd& w);

/// Minimizes ||s*(sum theta_i g_i) - v||^2 over the unit simplex.
/// Exhaustive support enumeration for m <= 8, projected gradient above that.
SubproblemResult solve_subproblem(const GradientHull& hull, const Eigen::VectorXd& v,
                                  double s, double tol = 1e-10);

/// proj_{C(x)}(0): the minimum-norm element of the gradient hull.
Eigen::VectorXd min_norm_element(const GradientHull& hull, double tol = 1e-10);

/// proj_{C(x)}(w) for an arbitrary point w.
Eigen::VectorXd project_hull(const GradientHull& hull, const Eigen::VectorXd& w,
                             double tol = 1e-10);

/// Grid-enumeration oracle: best theta with coordinates that are multiples of
/// 1/grid. Only for m <= 4.
SimplexWeights brute_force_subproblem(const GradientHull& hull, const Eigen::VectorXd& v,
                                      double s, int grid);

}  // namespace magopt

#endif
