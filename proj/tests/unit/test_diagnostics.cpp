#include <doctest.h>

#include <cmath>
#include <random>

#include "magopt/diagnostics.hpp"
#include "magopt/solver.hpp"

using namespace magopt;
using Eigen::VectorXd;

namespace {

VectorXd scalar(double v) { return VectorXd::Constant(1, v); }

}  // namespace

TEST_CASE("sigma: zero at itself, componentwise min, sign") {
    const ObjectiveBundle jos = make_jos1(1);
    CHECK(sigma(jos, scalar(1.3), scalar(1.3)) == 0.0);
    // f(3) = (9, 1), f(2) = (4, 0): min(5, 1) = 1.
    CHECK(sigma(jos, scalar(3.0), scalar(2.0)) == doctest::Approx(1.0));
    // A point dominated in every objective gives a negative value.
    CHECK(sigma(jos, scalar(1.0), scalar(3.0)) < 0.0);
}

TEST_CASE("merit_surrogate: membership floor, Pareto zeros, hand-computed value") {
    const ObjectiveBundle jos = make_jos1(1);
    ReferenceSet refs;
    refs.points = {scalar(0.0), scalar(1.0), scalar(2.0)};

    // x = 3: max over z of min(9 - z^2, 1 - (z-2)^2) = 1 attained at z = 2.
    CHECK(merit_surrogate(jos, scalar(3.0), refs) == doctest::Approx(1.0));

    // x inside the set: the z = x term contributes exactly zero.
    ReferenceSet with_self = refs;
    with_self.points.push_back(scalar(3.0));
    CHECK(merit_surrogate(jos, scalar(3.0), with_self) >= 0.0);

    // Weakly Pareto optimal x with references on the Pareto set: exactly zero.
    CHECK(merit_surrogate(jos, scalar(1.0), refs) == 0.0);

    ReferenceSet empty;
    CHECK_THROWS_AS(merit_surrogate(jos, scalar(1.0), empty), input_error);
}

TEST_CASE("merit_surrogate is monotone in the reference set") {
    const ObjectiveBundle jos = make_jos1(3);
    std::mt19937_64 rng(17);
    std::normal_distribution<double> normal(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        VectorXd x(3);
        for (int j = 0; j < 3; ++j) x[j] = normal(rng);
        ReferenceSet small = pareto_reference(jos, 4);
        ReferenceSet big = small;
        for (int extra = 0; extra < 3; ++extra) {
            VectorXd z(3);
            for (int j = 0; j < 3; ++j) z[j] = normal(rng);
            big.points.push_back(z);
        }
        CHECK(merit_surrogate(jos, x, big) >= merit_surrogate(jos, x, small));
    }
}

TEST_CASE("energy_W: collapse at equal pair, kinetic scaling, k=1 identity") {
    const ObjectiveBundle jos = make_jos1(2);
    VectorXd x(2), xp(2);
    x << 1.0, 3.0;
    xp << 0.0, 1.0;
    CHECK(energy_W(jos, x, x, 0.7) == jos.value(x));

    const VectorXd w1 = energy_W(jos, x, xp, 0.5);
    const VectorXd w2 = energy_W(jos, x, xp, 1.0);
    const VectorXd kinetic1 = w1 - jos.value(x);
    const VectorXd kinetic2 = w2 - jos.value(x);
    CHECK(kinetic1.isApprox(2.0 * kinetic2, 1e-14));  // doubling s halves the term

    // W_1 = f(x_0) since x_1 = x_0.
    SolverState init = SolverState::initial(x, 0.0, 0.25);
    CHECK(energy_W(jos, init.x_cur, init.x_prev, 0.5) == jos.value(x));
    CHECK_THROWS_AS(energy_W(jos, x, xp, 0.0), input_error);
}

TEST_CASE("lyapunov_E: t=1 collapses eta to x") {
    const ObjectiveBundle jos = make_jos1(2);
    VectorXd x0(2);
    x0 << 2.0, 0.0;
    SolverState s = SolverState::initial(x0, 0.0, 0.25);
    CHECK(lyapunov_E(jos, s, 0.5, x0) == 0.0);

    VectorXd z(2);
    z << 1.0, 1.0;
    const double expected = sigma(jos, x0, z) + (x0 - z).squaredNorm() / (2.0 * 0.5);
    CHECK(lyapunov_E(jos, s, 0.5, z) == doctest::Approx(expected).epsilon(1e-15));

    // x_k = x_{k-1} and z = x_k: both terms vanish at any t.
    s.schedule.t_current = 13.0;
    CHECK(lyapunov_E(jos, s, 0.5, x0) == 0.0);
}

TEST_CASE("zeta and the summability constant") {
    StepSchedule flat(0.0, 0.25);
    CHECK(zeta(flat) == 0.0);
    flat = advance_schedule(flat);
    CHECK(zeta(flat) == 0.0);

    StepSchedule mid(0.5, 0.25);
    CHECK(zeta(mid) == doctest::Approx(0.5));  // 0.5*1 - 0.25 + 0.25

    StepSchedule zero(0.0, 0.0);
    CHECK(zeta(zero) == doctest::Approx(0.25));
    zero = advance_schedule(zero);
    CHECK(zeta(zero) == doctest::Approx(0.25));

    CHECK(summability_Q(0.0, 0.0) == doctest::Approx(0.03125));
    CHECK(summability_Q(0.5, 0.25) == 0.0);
}

TEST_CASE("criticality_residual: symmetric hull, m=1 norm, clamped hull") {
    const ObjectiveBundle jos = make_jos1(1);
    CHECK(criticality_residual(jos, scalar(1.0)) <= 1e-12);
    // Hull at x=3 is [2, 6]; the closest point to zero is 2.
    CHECK(criticality_residual(jos, scalar(3.0)) == doctest::Approx(2.0).epsilon(1e-12));

    ObjectiveBundle single;
    single.n = 2;
    single.m = 1;
    single.lipschitz_L = 1.0;
    single.value = [](const VectorXd& x) {
        return VectorXd::Constant(1, 0.5 * x.squaredNorm());
    };
    single.gradients = [](const VectorXd& x) {
        Eigen::MatrixXd g(2, 1);
        g.col(0) = x;
        return g;
    };
    VectorXd x(2);
    x << 3.0, 4.0;
    CHECK(criticality_residual(single, x) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("rate_fit: exact power laws, constants, clipping, data floor") {
    std::vector<std::pair<std::int64_t, double>> series;
    for (std::int64_t k = 1; k <= 500; ++k) series.emplace_back(k, 1.0 / (k * k));
    CHECK(rate_fit(series, 1, 500).slope == doctest::Approx(-2.0).epsilon(1e-6));

    series.clear();
    for (std::int64_t k = 1; k <= 500; ++k) series.emplace_back(k, 0.125);
    CHECK(rate_fit(series, 1, 500).slope == doctest::Approx(0.0).epsilon(1e-9));

    series.clear();
    for (std::int64_t k = 1; k <= 500; ++k) series.emplace_back(k, 1.0 / k);
    CHECK(rate_fit(series, 1, 500).slope == doctest::Approx(-1.0).epsilon(1e-6));

    // Values at or below 1e-300 are excluded and counted.
    series.clear();
    for (std::int64_t k = 1; k <= 30; ++k)
        series.emplace_back(k, k <= 20 ? 1.0 / k : 1e-301);
    const RateFit fit = rate_fit(series, 1, 30);
    CHECK(fit.used == 20);
    CHECK(fit.excluded == 10);

    series.clear();
    for (std::int64_t k = 1; k <= 9; ++k) series.emplace_back(k, 1.0 / k);
    CHECK_THROWS_AS(rate_fit(series, 1, 9), insufficient_data_error);
}

TEST_CASE("summability_check: vanishing weights, critical start, bound wiring") {
    // a = 0, b = 1/4: the weight a*k - b + 1/4 is exactly zero.
    std::vector<DiagnosticsRow> rows(50);
    for (int k = 0; k < 50; ++k) {
        rows[k].k = k + 1;
        rows[k].step_norm_sq = 0.3;
        rows[k].merit = 2.0;
    }
    const SummabilityResult flat = summability_check(rows, 0.0, 0.25, 1.0, 10.0);
    for (double ps : flat.partial_sums) CHECK(ps == 0.0);
    CHECK(flat.bound_estimate.has_value());
    CHECK(!flat.bound_violated);

    // Constant iterates: zero steps, zero sums under any weights.
    for (auto& row : rows) row.step_norm_sq = 0.0;
    const SummabilityResult still = summability_check(rows, 0.5, 0.1, 1.0, 10.0);
    for (double ps : still.partial_sums) CHECK(ps == 0.0);

    // No radius hint: sums returned, bound absent.
    const SummabilityResult nohint = summability_check(rows, 0.5, 0.1, 1.0, std::nullopt);
    CHECK(!nohint.bound_estimate.has_value());
    CHECK(nohint.partial_sums.size() == rows.size());

    // An obviously too-large step stream violates the bound.
    for (auto& row : rows) row.step_norm_sq = 1e6;
    CHECK(summability_check(rows, 0.5, 0.1, 1.0, 0.1).bound_violated);
}

TEST_CASE("summability on a real run: monotone partial sums within the bound") {
    const ObjectiveBundle ens = make_quadratic_ensemble(8, 2, 3);
    const double s = 1.0 / ens.lipschitz_L;
    SolverConfig cfg{0.5, 0.25, s, 0.0, 5000, 1e-10};
    VectorXd x0 = VectorXd::LinSpaced(8, 1.0, 3.0);
    ReferenceSet refs;
    refs.points.push_back(x0);

    std::vector<DiagnosticsRow> rows;
    RunResult pass1 = run(ens, cfg, x0, refs);
    refs.points = {pass1.final_state.x_cur};
    run(ens, cfg, x0, refs, [&](const DiagnosticsRow& row) { rows.push_back(row); });

    const SummabilityResult sum =
        summability_check(rows, cfg.a, cfg.b, s, ens.level_radius(x0));
    for (size_t i = 1; i < sum.partial_sums.size(); ++i)
        CHECK(sum.partial_sums[i] >= sum.partial_sums[i - 1] - 1e-15);
    CHECK(!sum.bound_violated);
    // Convergent tail: the last decade contributes next to nothing.
    const double tail =
        sum.partial_sums.back() - sum.partial_sums[sum.partial_sums.size() / 10];
    CHECK(tail < 1e-8);
}

TEST_CASE("row Lyapunov and cluster-point inequalities on a real run") {
    const ObjectiveBundle ens = make_quadratic_ensemble(6, 3, 41);
    const double s = 1.0 / ens.lipschitz_L;
    SolverConfig cfg{0.0, 0.0, s, 0.0, 3000, 1e-10};
    VectorXd x0 = VectorXd::LinSpaced(6, -2.0, 2.0);

    ReferenceSet seed;
    RunResult pass1 = run(ens, cfg, x0, seed);
    ReferenceSet refs;
    refs.points = {x0, VectorXd::Zero(6), pass1.final_state.x_cur};

    std::vector<DiagnosticsRow> rows;
    run(ens, cfg, x0, refs, [&](const DiagnosticsRow& row) { rows.push_back(row); });

    for (size_t r = 0; r + 1 < rows.size(); ++r) {
        for (int j = 0; j < 3; ++j) {
            const double lhs = rows[r + 1].E_refs[j] - rows[r].E_refs[j] +
                               rows[r].zeta * rows[r].sigma_refs[j];
            CHECK(lhs <= 1e-8 * (1.0 + std::abs(rows[r].E_refs[j])));
        }
        // Cluster-point inequality against the tail reference (index 2).
        CHECK(-rows[r].sigma_refs[2] <= rows[r].step_norm_sq / (2.0 * s) + 1e-8);
    }
    CHECK(rows.back().merit >= -1e-12);
}
