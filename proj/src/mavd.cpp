#include "magopt/mavd.hpp"

#include <cmath>
#include <limits>

namespace magopt {

OdeState OdeState::initial(const Eigen::VectorXd& x0, double alpha) {
    if (!(alpha > 0.0)) throw input_error("OdeState: alpha must be > 0");
    OdeState s;
    s.t = 1.0;
    s.x = x0;
    s.v = Eigen::VectorXd::Zero(x0.size());
    s.alpha = alpha;
    return s;
}

namespace {

// Shared by the exact selection and the integrator's regularized field.
// tie_width > 0 widens the maximizing face to vertices whose <v, g_i> gap is
// not resolvable within one integrator step; the min-norm point of that face
// is the sliding (Filippov) combination. tie_width = 0 is the exact contract
// with residual enforcement.
SelectionResult select_face(const GradientHull& hull, const Eigen::VectorXd& v,
                            double damping, double tol, double tie_width) {
    if (v.size() != hull.n())
        throw input_error("selection: v dimension does not match hull");
    if (!(damping > 0.0)) throw input_error("selection: damping must be > 0");

    const int m = hull.m();
    if (v.isZero(0.0)) {
        // Every hull point is a fixed point; take the min-norm element, matching
        // the steepest-descent system.
        const SubproblemResult sub =
            solve_subproblem(hull, Eigen::VectorXd::Zero(hull.n()), 1.0, tol);
        return {sub.direction, sub.theta, 0.0};
    }

    Eigen::VectorXd p = hull.columns.transpose() * v;
    const double pmax = p.maxCoeff();
    double gmax = 0.0;
    for (int i = 0; i < m; ++i) gmax = std::max(gmax, hull.columns.col(i).norm());
    const double tie = std::max(tie_width, 1e-13 * (1.0 + v.norm()) * (1.0 + gmax));

    std::vector<int> face;
    for (int i = 0; i < m; ++i)
        if (p[i] >= pmax - tie) face.push_back(i);
    const bool widened = tie_width > 0.0 && face.size() > 1;

    Eigen::MatrixXd face_cols(hull.n(), face.size());
    for (size_t i = 0; i < face.size(); ++i) face_cols.col(i) = hull.columns.col(face[i]);
    const SubproblemResult face_sub = solve_subproblem(
        GradientHull(std::move(face_cols), hull.anchor),
        Eigen::VectorXd::Zero(hull.n()), 1.0, tol);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(m);
    for (size_t i = 0; i < face.size(); ++i) theta[face[i]] = face_sub.theta.theta[i];
    Eigen::VectorXd c = face_sub.direction;

    double residual = (c - project_hull(hull, damping * v + c, tol)).norm();
    if (widened || residual <= tol)
        return {std::move(c), SimplexWeights(theta), residual};

    // Averaged fixed-point iteration fallback: c <- (c + proj(d*v + c))/2.
    double best = residual;
    for (int it = 0; it < 10000; ++it) {
        const SubproblemResult proj = solve_subproblem(hull, damping * v + c, 1.0, tol);
        residual = (c - proj.direction).norm();
        if (residual <= tol) return {std::move(c), SimplexWeights(theta), residual};
        best = std::min(best, residual);
        c = 0.5 * (c + proj.direction);
        theta = 0.5 * (theta + proj.theta.theta);
    }
    throw solver_error("selection: fixed-point iteration did not reach tolerance", best);
}

// Width of the <v, g_i> band that one step of size h cannot resolve.
double step_tie_width(const GradientHull& hull, const Eigen::VectorXd& v,
                      double damping, double h) {
    double gmax = 0.0;
    for (int i = 0; i < hull.m(); ++i)
        gmax = std::max(gmax, hull.columns.col(i).norm());
    return h * gmax * (gmax + damping * v.norm());
}

}  // namespace

SelectionResult selection(const GradientHull& hull, const Eigen::VectorXd& v,
                          double damping, double tol) {
    return select_face(hull, v, damping, tol, 0.0);
}

RhsResult rhs(const OdeState& state, const ObjectiveBundle& problem, double tol,
              double step_hint) {
    if (state.t < 1.0) throw input_error("rhs: t must be >= 1");
    const double damping = state.alpha / state.t;
    const GradientHull hull(problem.gradients(state.x), state.x);
    const double width =
        step_hint > 0.0 ? step_tie_width(hull, state.v, damping, step_hint) : 0.0;
    SelectionResult sel = select_face(hull, state.v, damping, tol, width);
    RhsResult out;
    out.dx = state.v;
    out.dv = -damping * state.v - sel.c;
    out.sel = std::move(sel);
    return out;
}

void continuous_diagnostics(const ObjectiveBundle& problem, TrajectorySample& sample,
                            double alpha, const ReferenceSet& refs) {
    const double half_v2 = 0.5 * sample.v.squaredNorm();
    sample.W = problem.value(sample.x).array() + half_v2;

    const auto j = static_cast<Eigen::Index>(refs.points.size());
    sample.theta_refs.resize(j);
    sample.E_refs.resize(j);
    const double t = sample.t;
    const double p = 2.0 * alpha / 3.0;
    const double tp = std::pow(t, p);
    const double tp2 = std::pow(t, p - 2.0);
    double merit = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < j; ++i) {
        const Eigen::VectorXd& z = refs.points[i];
        const double theta_z = problem.gap(sample.x, z).minCoeff();
        const Eigen::VectorXd d = sample.x - z;
        sample.theta_refs[i] = theta_z;
        sample.E_refs[i] = tp * theta_z +
                           0.5 * tp2 * (t * sample.v + p * d).squaredNorm() +
                           alpha * (3.0 - alpha) / 9.0 * tp2 * d.squaredNorm();
        merit = std::max(merit, theta_z);
    }
    sample.merit = j > 0 ? merit : std::numeric_limits<double>::quiet_NaN();
}

double mavd_step_size(double t, double dt_base) {
    double dt = dt_base;
    double boundary = 10.0;
    while (t >= boundary && dt < 0.1) {
        dt *= 2.0;
        boundary *= 10.0;
    }
    return std::min(dt, 0.1);
}

namespace {

struct Derivative {
    Eigen::VectorXd dx, dv;
};

Derivative eval(const ObjectiveBundle& problem, double alpha, double t,
                const Eigen::VectorXd& x, const Eigen::VectorXd& v, double tol,
                double h) {
    OdeState s;
    s.t = t;
    s.x = x;
    s.v = v;
    s.alpha = alpha;
    RhsResult r = rhs(s, problem, tol, h);
    return {std::move(r.dx), std::move(r.dv)};
}

}  // namespace

std::vector<TrajectorySample> integrate(const ObjectiveBundle& problem, double alpha,
                                        const Eigen::VectorXd& x0, double t_end,
                                        double dt, int sample_every,
                                        const ReferenceSet& refs, double tol) {
    if (!(alpha > 0.0)) throw input_error("integrate: alpha must be > 0");
    if (!(t_end > 1.0)) throw input_error("integrate: t_end must be > 1");
    if (!(dt > 0.0)) throw input_error("integrate: dt must be > 0");
    if (sample_every < 1) throw input_error("integrate: sample_every must be >= 1");
    problem.validate_point(x0, "integrate");

    std::vector<TrajectorySample> samples;
    OdeState state = OdeState::initial(x0, alpha);

    const auto take_sample = [&]() {
        RhsResult r = rhs(state, problem, tol, mavd_step_size(state.t, dt));
        TrajectorySample s;
        s.t = state.t;
        s.x = state.x;
        s.v = state.v;
        s.accel = std::move(r.dv);
        s.selection_weights = std::move(r.sel.weights);
        continuous_diagnostics(problem, s, alpha, refs);
        samples.push_back(std::move(s));
    };

    take_sample();

    std::int64_t steps = 0;
    double boundary = 10.0;
    double dt_decade = std::min(dt, 0.1);
    while (state.t < t_end) {
        while (state.t >= boundary) {
            boundary *= 10.0;
            dt_decade = std::min(dt_decade * 2.0, 0.1);
        }
        const double target = std::min(boundary, t_end);
        const double h = std::min(dt_decade, target - state.t);

        const double t = state.t;
        const Eigen::VectorXd &x = state.x, &v = state.v;
        const Derivative k1 = eval(problem, alpha, t, x, v, tol, h);
        const Derivative k2 = eval(problem, alpha, t + 0.5 * h, x + 0.5 * h * k1.dx,
                                   v + 0.5 * h * k1.dv, tol, h);
        const Derivative k3 = eval(problem, alpha, t + 0.5 * h, x + 0.5 * h * k2.dx,
                                   v + 0.5 * h * k2.dv, tol, h);
        const Derivative k4 =
            eval(problem, alpha, t + h, x + h * k3.dx, v + h * k3.dv, tol, h);

        state.x += h / 6.0 * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
        state.v += h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        state.t = (h == target - t) ? target : t + h;
        ++steps;

        if (!state.x.allFinite() || !state.v.allFinite())
            throw solver_error("integrate: state diverged (non-finite) at t = " +
                                   std::to_string(t),
                               std::numeric_limits<double>::infinity());

        if (state.t >= t_end || steps % sample_every == 0) take_sample();
    }
    return samples;
}

}  // namespace magopt
