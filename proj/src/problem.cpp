#include "magopt/problem.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace magopt {

void ObjectiveBundle::validate_point(const Eigen::VectorXd& x, const char* where) const {
    if (x.size() != n)
        throw input_error(std::string(where) + ": point has dimension " +
                          std::to_string(x.size()) + ", problem expects " +
                          std::to_string(n));
}

Eigen::VectorXd ObjectiveBundle::gap(const Eigen::VectorXd& x,
                                     const Eigen::VectorXd& z) const {
    if (value_gap) return value_gap(x, z);
    return value(x) - value(z);
}

std::pair<Eigen::VectorXd, GradientHull> evaluate(const ObjectiveBundle& problem,
                                                  const Eigen::VectorXd& x) {
    problem.validate_point(x, "evaluate");
    return {problem.value(x), GradientHull(problem.gradients(x), x)};
}

double check_gradients(const ObjectiveBundle& problem, const Eigen::VectorXd& x) {
    problem.validate_point(x, "check_gradients");
    const double h =
        std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
    const Eigen::MatrixXd g = problem.gradients(x);

    double worst = 0.0;
    Eigen::VectorXd probe = x;
    for (int j = 0; j < problem.n; ++j) {
        probe[j] = x[j] + h;
        const Eigen::VectorXd fp = problem.value(probe);
        probe[j] = x[j] - h;
        const Eigen::VectorXd fm = problem.value(probe);
        probe[j] = x[j];
        if (!fp.allFinite() || !fm.allFinite())
            throw evaluation_error("check_gradients: non-finite objective at probe point");
        for (int i = 0; i < problem.m; ++i) {
            const double fd = (fp[i] - fm[i]) / (2.0 * h);
            const double err =
                std::abs(g(j, i) - fd) / (1.0 + std::max(std::abs(g(j, i)), std::abs(fd)));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

ObjectiveBundle make_jos1(int n) {
    if (n < 1) throw input_error("make_jos1: n must be >= 1");

    ObjectiveBundle p;
    p.n = n;
    p.m = 2;
    p.lipschitz_L = 2.0 / n;
    p.name = "jos1";

    const Eigen::VectorXd shift = Eigen::VectorXd::Constant(n, 2.0);
    p.value = [n, shift](const Eigen::VectorXd& x) {
        Eigen::VectorXd f(2);
        f[0] = x.squaredNorm() / n;
        f[1] = (x - shift).squaredNorm() / n;
        return f;
    };
    p.gradients = [n, shift](const Eigen::VectorXd& x) {
        Eigen::MatrixXd g(x.size(), 2);
        g.col(0) = (2.0 / n) * x;
        g.col(1) = (2.0 / n) * (x - shift);
        return g;
    };
    // f quadratic: f(x) - f(z) = <grad f((x+z)/2), x - z>, no cancellation.
    p.value_gap = [n, shift](const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
        const Eigen::VectorXd mid = 0.5 * (x + z), d = x - z;
        Eigen::VectorXd out(2);
        out[0] = (2.0 / n) * mid.dot(d);
        out[1] = (2.0 / n) * (mid - shift).dot(d);
        return out;
    };
    p.pareto_sampler = [n](int count) {
        if (count < 1) throw input_error("pareto_sampler: count must be >= 1");
        std::vector<Eigen::VectorXd> pts;
        pts.reserve(count);
        for (int j = 0; j < count; ++j) {
            const double t = count == 1 ? 0.0 : static_cast<double>(j) / (count - 1);
            pts.push_back(Eigen::VectorXd::Constant(n, 2.0 * t));
        }
        return pts;
    };
    // Both objectives are (2/n)-strongly convex; the level set of F sits inside
    // the smaller of the two per-objective level balls.
    p.level_radius = [n, shift, value = p.value](const Eigen::VectorXd& x0) {
        const Eigen::VectorXd f0 = value(x0);
        const double mu = 2.0 / n;
        const double r1 = std::sqrt(2.0 * f0[0] / mu);               // center 0
        const double r2 = shift.norm() + std::sqrt(2.0 * f0[1] / mu);  // center 2e
        return std::min(r1, r2);
    };
    return p;
}

namespace {

struct QuadraticData {
    std::vector<Eigen::MatrixXd> A;
    std::vector<Eigen::VectorXd> b;
    std::vector<Eigen::VectorXd> minimizer;  // -A^{-1} b
    std::vector<double> f_min;
    std::vector<double> mu;  // smallest eigenvalue of A_i
};

}  // namespace

ObjectiveBundle make_quadratic_ensemble(int n, int m, std::uint64_t seed) {
    if (n < 1) throw input_error("make_quadratic_ensemble: n must be >= 1");
    if (m < 1) throw input_error("make_quadratic_ensemble: m must be >= 1");

    auto data = std::make_shared<QuadraticData>();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.5, 1.5);

    double L = 0.0;
    for (int i = 0; i < m; ++i) {
        Eigen::MatrixXd M(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) M(r, c) = normal(rng);
        const double ridge = unif(rng);
        Eigen::MatrixXd A = M.transpose() * M / n + ridge * Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd b(n);
        for (int r = 0; r < n; ++r) b[r] = normal(rng);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
        L = std::max(L, eig.eigenvalues().maxCoeff());

        Eigen::VectorXd xstar = -A.ldlt().solve(b);
        data->A.push_back(std::move(A));
        data->b.push_back(std::move(b));
        data->f_min.push_back(0.5 * xstar.dot(data->A.back() * xstar) +
                              data->b.back().dot(xstar));
        data->minimizer.push_back(std::move(xstar));
        data->mu.push_back(eig.eigenvalues().minCoeff());
    }

    ObjectiveBundle p;
    p.n = n;
    p.m = m;
    p.lipschitz_L = L;
    p.name = "quadratic_ensemble";
    p.value = [m, data](const Eigen::VectorXd& x) {
        Eigen::VectorXd f(m);
        for (int i = 0; i < m; ++i)
            f[i] = 0.5 * x.dot(data->A[i] * x) + data->b[i].dot(x);
        return f;
    };
    p.gradients = [m, data](const Eigen::VectorXd& x) {
        Eigen::MatrixXd g(x.size(), m);
        for (int i = 0; i < m; ++i) g.col(i) = data->A[i] * x + data->b[i];
        return g;
    };
    p.value_gap = [m, data](const Eigen::VectorXd& x, const Eigen::VectorXd& z) {
        const Eigen::VectorXd mid = 0.5 * (x + z), d = x - z;
        Eigen::VectorXd out(m);
        for (int i = 0; i < m; ++i) out[i] = (data->A[i] * mid + data->b[i]).dot(d);
        return out;
    };
    p.level_radius = [m, data, value = p.value](const Eigen::VectorXd& x0) {
        const Eigen::VectorXd f0 = value(x0);
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double gap = std::max(f0[i] - data->f_min[i], 0.0);
            best = std::min(best, data->minimizer[i].norm() +
                                      std::sqrt(2.0 * gap / data->mu[i]));
        }
        return best;
    };
    return p;
}

ObjectiveBundle make_problem(const std::string& name, int n, int m, std::uint64_t seed) {
    if (name == "jos1") return make_jos1(n);
    if (name == "quadratic_ensemble") return make_quadratic_ensemble(n, m, seed);
    throw input_error("make_problem: unknown problem name '" + name + "'");
}

ReferenceSet pareto_reference(const ObjectiveBundle& problem, int count,
                              const std::vector<Eigen::VectorXd>* run_tail) {
    if (problem.pareto_sampler) {
        ReferenceSet refs;
        refs.points = problem.pareto_sampler(count);
        refs.origin = RefOrigin::pareto_analytic;
        return refs;
    }
    if (run_tail && !run_tail->empty()) {
        ReferenceSet refs;
        refs.points = {run_tail->back()};
        refs.origin = RefOrigin::trajectory_tail;
        return refs;
    }
    throw unsupported_error(
        "pareto_reference: problem has no Pareto sampler and no run tail was supplied");
}

}  // namespace magopt
