#include "magopt/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace magopt {

GradientHull::GradientHull(Eigen::MatrixXd cols, Eigen::VectorXd anchor_pt)
    : columns(std::move(cols)), anchor(std::move(anchor_pt)) {
    if (columns.cols() < 1)
        throw input_error("GradientHull: need at least one gradient column");
    if (anchor.size() != columns.rows())
        throw input_error("GradientHull: anchor dimension does not match columns");
}

SimplexWeights::SimplexWeights(Eigen::VectorXd t) : theta(std::move(t)) {
    if (theta.size() < 1) throw input_error("SimplexWeights: empty weight vector");
    if (theta.minCoeff() < 0.0)
        throw input_error("SimplexWeights: negative component");
    if (std::abs(theta.sum() - 1.0) > 1e-12)
        throw input_error("SimplexWeights: components do not sum to 1");
}

SimplexWeights project_simplex(const Eigen::VectorXd& w) {
    if (!w.allFinite()) throw input_error("project_simplex: non-finite input");
    const int m = static_cast<int>(w.size());
    if (m < 1) throw input_error("project_simplex: empty input");

    std::vector<double> u(w.data(), w.data() + m);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    int support = 0;
    for (int j = 0; j < m; ++j) {
        cum += u[j];
        const double cand = (cum - 1.0) / (j + 1);
        if (u[j] - cand > 0.0) {
            tau = cand;
            support = j + 1;
        }
    }
    (void)support;
    Eigen::VectorXd theta = (w.array() - tau).cwiseMax(0.0);
    // Renormalize so the sum-to-one invariant holds exactly to 1e-12.
    const double sum = theta.sum();
    if (sum > 0.0) theta /= sum;
    return SimplexWeights(theta);
}

namespace {

// q(theta) = theta' M theta - 2 c' theta + ||v||^2, with M = s^2 G'G, c = s G'v.
struct QuadForm {
    Eigen::MatrixXd M;
    Eigen::VectorXd c;
    double v2;

    double value(const Eigen::VectorXd& theta) const {
        return theta.dot(M * theta) - 2.0 * c.dot(theta) + v2;
    }
    Eigen::VectorXd grad(const Eigen::VectorXd& theta) const {
        return 2.0 * (M * theta - c);
    }
};

QuadForm make_quadform(const GradientHull& hull, const Eigen::VectorXd& v, double s) {
    QuadForm q;
    const Eigen::MatrixXd sG = s * hull.columns;
    q.M = sG.transpose() * sG;
    q.c = sG.transpose() * v;
    q.v2 = v.squaredNorm();
    return q;
}

// max over i with theta_i > 0 of grad_i - min_j grad_j.
double kkt_residual(const QuadForm& q, const Eigen::VectorXd& theta) {
    const Eigen::VectorXd g = q.grad(theta);
    const double gmin = g.minCoeff();
    double res = 0.0;
    for (int i = 0; i < theta.size(); ++i)
        if (theta[i] > 0.0) res = std::max(res, g[i] - gmin);
    return res;
}

// Equality-constrained minimizer on a support: stationarity plus sum(theta)=1.
// Solved through a bordered KKT system; rank-deficient faces (duplicated or
// affinely dependent gradients) fall back to the minimum-norm least-squares
// solution, which keeps the enumeration deterministic.
bool solve_on_support(const QuadForm& q, const std::vector<int>& support,
                      Eigen::VectorXd& theta_out) {
    const int r = static_cast<int>(support.size());
    Eigen::MatrixXd K(r + 1, r + 1);
    Eigen::VectorXd rhs(r + 1);
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) K(i, j) = 2.0 * q.M(support[i], support[j]);
        K(i, r) = 1.0;
        K(r, i) = 1.0;
        rhs(i) = 2.0 * q.c(support[i]);
    }
    K(r, r) = 0.0;
    rhs(r) = 1.0;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    Eigen::VectorXd sol;
    if (lu.isInvertible()) {
        sol = lu.solve(rhs);
    } else {
        sol = K.completeOrthogonalDecomposition().solve(rhs);
    }
    if (!sol.allFinite()) return false;
    theta_out = sol.head(r);
    return true;
}

SubproblemResult finish(const GradientHull& hull, const QuadForm& q,
                        const Eigen::VectorXd& theta) {
    SubproblemResult out;
    out.theta = SimplexWeights(theta);
    out.direction = hull.columns * theta;
    out.objective = q.value(theta);
    out.kkt_residual = kkt_residual(q, theta);
    return out;
}

SubproblemResult solve_by_enumeration(const GradientHull& hull, const QuadForm& q,
                                      int m) {
    double best_obj = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_theta;
    std::vector<int> support;
    Eigen::VectorXd theta_s;

    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        support.clear();
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) support.push_back(i);

        if (!solve_on_support(q, support, theta_s)) continue;
        if (theta_s.minCoeff() < -1e-12) continue;

        Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < static_cast<int>(support.size()); ++i)
            theta[support[i]] = std::max(theta_s[i], 0.0);
        const double sum = theta.sum();
        if (sum <= 0.0) continue;
        theta /= sum;

        const double obj = q.value(theta);
        if (obj < best_obj) {
            best_obj = obj;
            best_theta = theta;
        }
    }
    return finish(hull, q, best_theta);
}

SubproblemResult solve_by_projected_gradient(const GradientHull& hull, const QuadForm& q,
                                             int m, double s, double tol) {
    // Fixed step 1/(2 * upper bound on s^2 ||G||_op^2); Frobenius norm bounds
    // the operator norm.
    const double bound = std::max(s * s * hull.columns.squaredNorm(),
                                  std::numeric_limits<double>::min());
    const double step = 1.0 / (2.0 * bound);
    const long cap = 10L * m * 1000L;

    Eigen::VectorXd theta = Eigen::VectorXd::Constant(m, 1.0 / m);
    double best_res = std::numeric_limits<double>::infinity();
    for (long it = 0; it < cap; ++it) {
        const double res = kkt_residual(q, theta);
        best_res = std::min(best_res, res);
        if (res <= tol) return finish(hull, q, theta);
        theta = project_simplex(theta - step * q.grad(theta)).theta;
    }
    if (kkt_residual(q, theta) <= tol) return finish(hull, q, theta);
    throw solver_error("solve_subproblem: projected gradient did not reach tolerance",
                       best_res);
}

}  // namespace

SubproblemResult solve_subproblem(const GradientHull& hull, const Eigen::VectorXd& v,
                                  double s, double tol) {
    if (s <= 0.0) throw input_error("solve_subproblem: s must be positive");
    if (v.size() != hull.n())
        throw input_error("solve_subproblem: v dimension does not match hull");
    if (!v.allFinite() || !hull.columns.allFinite())
        throw input_error("solve_subproblem: non-finite input");

    const int m = hull.m();
    if (m == 1) {
        SubproblemResult out;
        out.theta = SimplexWeights(Eigen::VectorXd::Ones(1));
        out.direction = hull.columns.col(0);
        out.objective = (s * out.direction - v).squaredNorm();
        out.kkt_residual = 0.0;
        return out;
    }
    if (hull.columns.isZero(0.0)) {
        // Any theta is optimal; pick the symmetric one and flag criticality.
        SubproblemResult out;
        out.theta = SimplexWeights(Eigen::VectorXd::Constant(m, 1.0 / m));
        out.direction = Eigen::VectorXd::Zero(hull.n());
        out.objective = v.squaredNorm();
        out.kkt_residual = 0.0;
        out.degenerate = true;
        return out;
    }

    const QuadForm q = make_quadform(hull, v, s);
    if (m <= 8) return solve_by_enumeration(hull, q, m);
    return solve_by_projected_gradient(hull, q, m, s, tol);
}

Eigen::VectorXd min_norm_element(const GradientHull& hull, double tol) {
    return solve_subproblem(hull, Eigen::VectorXd::Zero(hull.n()), 1.0, tol).direction;
}

Eigen::VectorXd project_hull(const GradientHull& hull, const Eigen::VectorXd& w,
                             double tol) {
    return solve_subproblem(hull, w, 1.0, tol).direction;
}

SimplexWeights brute_force_subproblem(const GradientHull& hull, const Eigen::VectorXd& v,
                                      double s, int grid) {
    const int m = hull.m();
    if (m > 4) throw unsupported_error("brute_force_subproblem: m > 4");
    if (grid < 10) throw input_error("brute_force_subproblem: grid must be >= 10");
    if (v.size() != hull.n())
        throw input_error("brute_force_subproblem: v dimension does not match hull");

    const QuadForm q = make_quadform(hull, v, s);
    double theta[4] = {0, 0, 0, 0};
    double best[4] = {0, 0, 0, 0};
    double best_obj = std::numeric_limits<double>::infinity();

    const auto evaluate = [&]() {
        double obj = q.v2;
        for (int i = 0; i < m; ++i) {
            double row = 0.0;
            for (int j = 0; j < m; ++j) row += q.M(i, j) * theta[j];
            obj += theta[i] * (row - 2.0 * q.c(i));
        }
        if (obj < best_obj) {
            best_obj = obj;
            for (int i = 0; i < m; ++i) best[i] = theta[i];
        }
    };

    // Enumerate integer compositions k_1 + ... + k_m = grid.
    const auto rec = [&](auto&& self, int coord, int remaining) -> void {
        if (coord == m - 1) {
            theta[coord] = static_cast<double>(remaining) / grid;
            evaluate();
            return;
        }
        for (int k = 0; k <= remaining; ++k) {
            theta[coord] = static_cast<double>(k) / grid;
            self(self, coord + 1, remaining - k);
        }
    };
    rec(rec, 0, grid);

    Eigen::VectorXd out(m);
    for (int i = 0; i < m; ++i) out[i] = best[i];
    return SimplexWeights(out);
}

}  // namespace magopt
