#ifndef MAGOPT_PROBLEM_HPP
#define MAGOPT_PROBLEM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "magopt/errors.hpp"
#include "magopt/simplex.hpp"

namespace magopt {

/// A smooth convex multiobjective problem: F and its gradients, the gradient
/// Lipschitz bound L, and optional extras the diagnostics rely on.
struct ObjectiveBundle {
    int n = 0;
    int m = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value;      // R^n -> R^m
    std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> gradients;  // n x m
    double lipschitz_L = 0.0;

    // Optional: sample points on the analytic Pareto set.
    std::function<std::vector<Eigen::VectorXd>(int)> pareto_sampler;
    // Optional: upper bound on sup{||x|| : F(x) <= F(x0)} for a given x0.
    std::function<double(const Eigen::VectorXd&)> level_radius;
    // Optional: F(x) - F(z) evaluated without cancellation (exact for quadratics
    // through the midpoint-gradient identity). Diagnostics prefer this path.
    std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> value_gap;

    std::string name;

    void validate_point(const Eigen::VectorXd& x, const char* where) const;
    Eigen::VectorXd gap(const Eigen::VectorXd& x, const Eigen::VectorXd& z) const;
};

enum class RefOrigin { pareto_analytic, trajectory_tail, user_supplied };

/// Comparison points z for the merit surrogate and the Lyapunov diagnostics.
struct ReferenceSet {
    std::vector<Eigen::VectorXd> points;
    RefOrigin origin = RefOrigin::user_supplied;

    size_t size() const { return points.size(); }
};

std::pair<Eigen::VectorXd, GradientHull> evaluate(const ObjectiveBundle& problem,
                                                  const Eigen::VectorXd& x);

/// Max over objectives and coordinates of the relative gap between the analytic
/// gradient and central finite differences, h = eps^(1/3)*(1+||x||).
double check_gradients(const ObjectiveBundle& problem, const Eigen::VectorXd& x);

/// f1 = ||x||^2/n, f2 = ||x - 2e||^2/n; Pareto set is the segment {2t*e, t in [0,1]}.
ObjectiveBundle make_jos1(int n);

/// m seeded strictly convex quadratics f_i = x'A_i x/2 + b_i'x with A_i positive
/// definite; deterministic in the seed.
ObjectiveBundle make_quadratic_ensemble(int n, int m, std::uint64_t seed);

/// Build a problem by name ("jos1" or "quadratic_ensemble").
ObjectiveBundle make_problem(const std::string& name, int n, int m, std::uint64_t seed);

ReferenceSet pareto_reference(const ObjectiveBundle& problem, int count,
                              const std::vector<Eigen::VectorXd>* run_tail = nullptr);

}  // namespace magopt

#endif
