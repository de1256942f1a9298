#include <doctest.h>

#include <cmath>

#include "magopt/diagnostics.hpp"
#include "magopt/solver.hpp"

using namespace magopt;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

ObjectiveBundle half_square() {
    // f(x) = x^2/2 in one dimension: gradient step with s = 1 jumps to zero.
    ObjectiveBundle p;
    p.n = 1;
    p.m = 1;
    p.lipschitz_L = 1.0;
    p.name = "half_square";
    p.value = [](const VectorXd& x) { return VectorXd::Constant(1, 0.5 * x[0] * x[0]); };
    p.gradients = [](const VectorXd& x) {
        MatrixXd g(1, 1);
        g(0, 0) = x[0];
        return g;
    };
    return p;
}

VectorXd constant_vec(int n, double v) { return VectorXd::Constant(n, v); }

}  // namespace

TEST_CASE("SolverConfig validation") {
    const ObjectiveBundle p = half_square();
    SolverConfig cfg{0.0, 0.25, 1.0, 1e-10, 100, 1e-10};
    CHECK_NOTHROW(cfg.validate(p));
    cfg.s = 1.5;  // above 1/L
    CHECK_THROWS_AS(cfg.validate(p), input_error);
    cfg.s = 1.0;
    cfg.b = 0.3;
    CHECK_THROWS_AS(cfg.validate(p), input_error);
}

TEST_CASE("step: single-objective gradient step, v=0 reduction, critical fixed point") {
    const ObjectiveBundle p = half_square();
    SolverConfig cfg{0.0, 0.25, 1.0, 0.0, 10, 1e-10};
    SolverState s0 = SolverState::initial(constant_vec(1, 1.0), cfg.a, cfg.b);
    const auto [s1, info1] = step(s0, cfg, p);
    CHECK(*s1.y_cur == s0.x_cur);  // y_1 = x_1 at k = 1
    CHECK(s1.x_cur[0] == 0.0);     // 1 - 1*grad(1) = 0
    CHECK(info1.step_norm == doctest::Approx(1.0));
    CHECK(s1.k == 2);

    // k = 1 always solves the v = 0 subproblem, i.e. a steepest-descent step.
    const ObjectiveBundle jos = make_jos1(2);
    SolverConfig jcfg{0.5, 0.25, 1.0 / jos.lipschitz_L, 0.0, 10, 1e-10};
    VectorXd x0(2);
    x0 << 4.0, 1.0;
    SolverState j0 = SolverState::initial(x0, jcfg.a, jcfg.b);
    const auto [j1, jinfo] = step(j0, jcfg, jos);
    const VectorXd msd_step =
        x0 - jcfg.s * min_norm_element(GradientHull(jos.gradients(x0), x0));
    CHECK(j1.x_cur.isApprox(msd_step, 1e-14));

    // Starting at a critical point: the direction is zero and x stays put.
    const ObjectiveBundle jos1 = make_jos1(1);
    SolverConfig ccfg{0.0, 0.25, 0.5, 0.0, 10, 1e-10};
    SolverState c0 = SolverState::initial(constant_vec(1, 1.0), ccfg.a, ccfg.b);
    const auto [c1, cinfo] = step(c0, ccfg, jos1);
    CHECK(c1.x_cur == c0.x_cur);
    CHECK(cinfo.step_norm == 0.0);
}

TEST_CASE("run: termination semantics and row counts") {
    const ObjectiveBundle jos = make_jos1(50);
    VectorXd x0(50);
    for (int j = 0; j < 50; ++j) x0[j] = 3.0 + 2.0 * j / 49.0;
    ReferenceSet refs = pareto_reference(jos, 4);

    // eps = 0 never triggers the tolerance stop: exactly k_max rows.
    SolverConfig cfg{0.0, 0.25, 1.0 / jos.lipschitz_L, 0.0, 100, 1e-10};
    std::vector<DiagnosticsRow> rows;
    const RunResult r =
        run(jos, cfg, x0, refs, [&](const DiagnosticsRow& row) { rows.push_back(row); });
    CHECK(r.termination == Termination::k_max_reached);
    CHECK(rows.size() == 100);
    CHECK(rows.front().k == 1);
    CHECK(rows.front().step_norm_sq == 0.0);  // x_1 = x_0

    // A critical start terminates at k = 1 with a zero step.
    const ObjectiveBundle jos1 = make_jos1(1);
    SolverConfig ecfg{0.0, 0.25, 0.5, 1e-10, 100, 1e-10};
    ReferenceSet refs1 = pareto_reference(jos1, 3);
    std::vector<DiagnosticsRow> rows1;
    const RunResult r1 = run(jos1, ecfg, constant_vec(1, 1.0), refs1,
                             [&](const DiagnosticsRow& row) { rows1.push_back(row); });
    CHECK(r1.termination == Termination::eps_reached);
    CHECK(rows1.size() == 1);
    CHECK(r1.final_state.k == 2);
}

TEST_CASE("run: m=1 matches the classic accelerated method per iterate") {
    // Diagonal strongly convex quadratic, independent scalar reference coded
    // with the t_{k+1} = (1 + sqrt(1+4t^2))/2 recurrence.
    const int n = 4;
    VectorXd diag(n);
    diag << 1.0, 1.7, 2.4, 3.0;
    ObjectiveBundle p;
    p.n = n;
    p.m = 1;
    p.lipschitz_L = 3.0;
    p.value = [diag](const VectorXd& x) {
        return VectorXd::Constant(1, 0.5 * x.dot(diag.asDiagonal() * x));
    };
    p.gradients = [diag, n](const VectorXd& x) {
        MatrixXd g(n, 1);
        g.col(0) = diag.asDiagonal() * x;
        return g;
    };

    const double s = 1.0 / 3.0;
    VectorXd x0(n);
    x0 << 2.0, -1.0, 0.5, 3.0;

    VectorXd rx_prev = x0, rx = x0;
    double t = 1.0;
    SolverConfig cfg{0.0, 0.25, s, 0.0, 1000, 1e-10};
    ReferenceSet refs;
    refs.points.push_back(VectorXd::Zero(n));
    const RunResult r = run(p, cfg, x0, refs, nullptr, true);
    const auto& iterates = *r.iterates;

    double worst = 0.0;
    for (int k = 1; k <= 1000; ++k) {
        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        const VectorXd y = rx + ((t - 1.0) / t_next) * (rx - rx_prev);
        const VectorXd x_next = y - s * (diag.asDiagonal() * y);
        rx_prev = rx;
        rx = x_next;
        t = t_next;
        worst = std::max(worst, (iterates[k] - rx).norm());
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("run invariants: energy, level set, one-step sigma inequality") {
    const ObjectiveBundle ens = make_quadratic_ensemble(6, 3, 13);
    const double s = 1.0 / ens.lipschitz_L;
    SolverConfig cfg{0.5, 0.0625, s, 0.0, 2000, 1e-10};
    VectorXd x0(6);
    for (int j = 0; j < 6; ++j) x0[j] = 1.0 + 0.5 * j;

    // Drive step() directly so y_k is visible for the sigma inequality.
    std::vector<VectorXd> zs = {VectorXd::Zero(6), x0, VectorXd::Constant(6, -0.5)};
    SolverState state = SolverState::initial(x0, cfg.a, cfg.b);
    const VectorXd f0 = ens.value(x0);
    VectorXd W_prev = energy_W(ens, state.x_cur, state.x_prev, s);
    for (int k = 1; k <= 2000; ++k) {
        const auto [next, info] = step(state, cfg, ens);
        // Lemma-style one-step bound for every reference point.
        for (const auto& z : zs) {
            const double lhs = ens.gap(next.x_cur, z).minCoeff();
            const double rhs = -(next.x_cur - info.y).dot(info.y - z) / s -
                               (next.x_cur - info.y).squaredNorm() / (2.0 * s);
            CHECK(lhs <= rhs + 1e-9);
        }
        const VectorXd W = energy_W(ens, next.x_cur, next.x_prev, s);
        for (int i = 0; i < ens.m; ++i) {
            CHECK(W[i] <= W_prev[i] + 1e-9 * (1.0 + std::abs(W_prev[i])));
            CHECK(ens.value(next.x_cur)[i] <= f0[i] + 1e-9 * (1.0 + std::abs(f0[i])));
        }
        W_prev = W;
        state = next;
    }
}

TEST_CASE("run: determinism is bitwise") {
    const ObjectiveBundle ens = make_quadratic_ensemble(5, 2, 29);
    SolverConfig cfg{0.0, 0.25, 1.0 / ens.lipschitz_L, 0.0, 500, 1e-10};
    VectorXd x0 = VectorXd::LinSpaced(5, -1.0, 2.0);
    ReferenceSet refs;
    refs.points.push_back(VectorXd::Zero(5));

    const RunResult a = run(ens, cfg, x0, refs, nullptr, true);
    const RunResult b = run(ens, cfg, x0, refs, nullptr, true);
    REQUIRE(a.iterates->size() == b.iterates->size());
    for (size_t i = 0; i < a.iterates->size(); ++i)
        CHECK((*a.iterates)[i] == (*b.iterates)[i]);
}

TEST_CASE("run_msd: one-step quadratic, critical start, monotone objectives") {
    const ObjectiveBundle p = half_square();
    ReferenceSet refs;
    refs.points.push_back(VectorXd::Zero(1));
    const RunResult r =
        run_msd(p, 1.0, 1e-12, 10, constant_vec(1, 1.0), refs, nullptr, true);
    CHECK((*r.iterates)[1][0] == 0.0);  // x_1 = 0 after one step

    const ObjectiveBundle jos1 = make_jos1(1);
    const RunResult rc =
        run_msd(jos1, 0.5, 1e-12, 10, constant_vec(1, 1.0), refs, nullptr, true);
    for (const auto& x : *rc.iterates) CHECK(x[0] == 1.0);

    const ObjectiveBundle jos2 = make_jos1(2);
    VectorXd x0(2);
    x0 << 5.0, 5.0;
    ReferenceSet refs2 = pareto_reference(jos2, 4);
    std::vector<DiagnosticsRow> rows;
    run_msd(jos2, 1.0 / jos2.lipschitz_L, 0.0, 200, x0, refs2,
            [&](const DiagnosticsRow& row) { rows.push_back(row); });
    for (size_t r2 = 0; r2 + 1 < rows.size(); ++r2)
        for (int i = 0; i < 2; ++i)
            CHECK(rows[r2 + 1].f[i] <= rows[r2].f[i] + 1e-12);
    // Baseline rows carry no schedule quantities.
    CHECK(rows.back().t == 1.0);
    CHECK(rows.back().zeta == 0.0);
    CHECK(rows.back().sum_partial == 0.0);
}
