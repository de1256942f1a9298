#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magopt/acceptance.hpp"
#include "magopt/diagnostics.hpp"
#include "magopt/harness.hpp"
#include "magopt/mavd.hpp"
#include "magopt/problem.hpp"
#include "magopt/solver.hpp"

#include <sstream>

namespace py = pybind11;
using namespace magopt;

namespace {

GradientHull hull_from_matrix(const Eigen::MatrixXd& columns) {
    return GradientHull(columns, Eigen::VectorXd::Zero(columns.rows()));
}

ReferenceSet refs_from_list(const std::vector<Eigen::VectorXd>& points) {
    ReferenceSet refs;
    refs.points = points;
    return refs;
}

ReferenceSet default_refs(const ObjectiveBundle& problem,
                          const std::optional<std::vector<Eigen::VectorXd>>& refs,
                          int count) {
    if (refs) return refs_from_list(*refs);
    if (problem.pareto_sampler) return pareto_reference(problem, count);
    return {};
}

py::dict rows_to_dict(const std::vector<DiagnosticsRow>& rows, int m) {
    const auto K = static_cast<Eigen::Index>(rows.size());
    Eigen::VectorXd k(K), t(K), step(K), zeta(K), merit(K), crit(K), sum(K);
    Eigen::MatrixXd f(K, m), W(K, m);
    for (Eigen::Index i = 0; i < K; ++i) {
        k[i] = static_cast<double>(rows[i].k);
        t[i] = rows[i].t;
        step[i] = rows[i].step_norm_sq;
        zeta[i] = rows[i].zeta;
        merit[i] = rows[i].merit;
        crit[i] = rows[i].crit_residual;
        sum[i] = rows[i].sum_partial;
        f.row(i) = rows[i].f.transpose();
        W.row(i) = rows[i].W.transpose();
    }
    py::dict d;
    d["k"] = k;
    d["t"] = t;
    d["step_norm_sq"] = step;
    d["zeta"] = zeta;
    d["merit"] = merit;
    d["crit_residual"] = crit;
    d["sum_partial"] = sum;
    d["f"] = f;
    d["W"] = W;
    return d;
}

py::dict run_to_dict(const RunResult& result, const std::vector<DiagnosticsRow>& rows,
                     int m, bool store_iterates) {
    py::dict d = rows_to_dict(rows, m);
    d["final_x"] = result.final_state.x_cur;
    d["termination"] = result.termination == Termination::eps_reached
                           ? "eps_reached"
                           : "k_max_reached";
    if (store_iterates && result.iterates) {
        const auto K = static_cast<Eigen::Index>(result.iterates->size());
        Eigen::MatrixXd it(K, result.final_state.x_cur.size());
        for (Eigen::Index i = 0; i < K; ++i) it.row(i) = (*result.iterates)[i].transpose();
        d["iterates"] = it;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Multiobjective accelerated gradient toolkit (C++ core)";

    py::register_exception<solver_error>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<data_error>(m, "DataError", PyExc_ValueError);
    py::register_exception<unsupported_error>(m, "UnsupportedError", PyExc_ValueError);
    py::register_exception<insufficient_data_error>(m, "InsufficientDataError",
                                                    PyExc_ValueError);

    py::class_<ObjectiveBundle>(m, "ObjectiveBundle")
        .def_readonly("n", &ObjectiveBundle::n)
        .def_readonly("m", &ObjectiveBundle::m)
        .def_readonly("lipschitz_L", &ObjectiveBundle::lipschitz_L)
        .def_readonly("name", &ObjectiveBundle::name)
        .def("value", [](const ObjectiveBundle& p, const Eigen::VectorXd& x) {
            p.validate_point(x, "value");
            return p.value(x);
        })
        .def("gradients", [](const ObjectiveBundle& p, const Eigen::VectorXd& x) {
            p.validate_point(x, "gradients");
            return p.gradients(x);
        })
        .def("level_radius", [](const ObjectiveBundle& p, const Eigen::VectorXd& x0) {
            p.validate_point(x0, "level_radius");
            if (!p.level_radius) throw unsupported_error("no level radius hint");
            return p.level_radius(x0);
        })
        .def("__repr__", [](const ObjectiveBundle& p) {
            std::ostringstream ss;
            ss << "ObjectiveBundle(" << p.name << ", n=" << p.n << ", m=" << p.m << ")";
            return ss.str();
        });

    m.def("make_jos1", &make_jos1, py::arg("n"));
    m.def("make_quadratic_ensemble", &make_quadratic_ensemble, py::arg("n"),
          py::arg("m"), py::arg("seed"));

    m.def("evaluate", [](const ObjectiveBundle& p, const Eigen::VectorXd& x) {
        auto [values, hull] = evaluate(p, x);
        return py::make_tuple(values, hull.columns);
    });
    m.def("check_gradients", &check_gradients, py::arg("problem"), py::arg("x"));
    m.def("pareto_reference",
          [](const ObjectiveBundle& p, int count) {
              return pareto_reference(p, count).points;
          },
          py::arg("problem"), py::arg("count"));

    m.def("project_simplex",
          [](const Eigen::VectorXd& w) { return project_simplex(w).theta; });
    m.def("solve_subproblem",
          [](const Eigen::MatrixXd& G, const Eigen::VectorXd& v, double s, double tol) {
              const SubproblemResult r = solve_subproblem(hull_from_matrix(G), v, s, tol);
              py::dict d;
              d["theta"] = r.theta.theta;
              d["direction"] = r.direction;
              d["objective"] = r.objective;
              d["kkt_residual"] = r.kkt_residual;
              return d;
          },
          py::arg("gradients"), py::arg("v"), py::arg("s"), py::arg("tol") = 1e-10);
    m.def("min_norm_element",
          [](const Eigen::MatrixXd& G, double tol) {
              return min_norm_element(hull_from_matrix(G), tol);
          },
          py::arg("gradients"), py::arg("tol") = 1e-10);
    m.def("project_hull",
          [](const Eigen::MatrixXd& G, const Eigen::VectorXd& w, double tol) {
              return project_hull(hull_from_matrix(G), w, tol);
          },
          py::arg("gradients"), py::arg("w"), py::arg("tol") = 1e-10);
    m.def("brute_force_subproblem",
          [](const Eigen::MatrixXd& G, const Eigen::VectorXd& v, double s, int grid) {
              return brute_force_subproblem(hull_from_matrix(G), v, s, grid).theta;
          },
          py::arg("gradients"), py::arg("v"), py::arg("s"), py::arg("grid"));

    m.def("sigma", &sigma, py::arg("problem"), py::arg("x"), py::arg("z"));
    m.def("merit_surrogate",
          [](const ObjectiveBundle& p, const Eigen::VectorXd& x,
             const std::vector<Eigen::VectorXd>& refs) {
              return merit_surrogate(p, x, refs_from_list(refs));
          },
          py::arg("problem"), py::arg("x"), py::arg("refs"));
    m.def("criticality_residual", &criticality_residual, py::arg("problem"),
          py::arg("x"), py::arg("tol") = 1e-10);
    m.def("rate_fit",
          [](const std::vector<std::int64_t>& ks, const std::vector<double>& values,
             std::int64_t k_lo, std::int64_t k_hi) {
              if (ks.size() != values.size())
                  throw input_error("rate_fit: k and value lengths differ");
              std::vector<std::pair<std::int64_t, double>> series;
              for (size_t i = 0; i < ks.size(); ++i)
                  series.emplace_back(ks[i], values[i]);
              const RateFit fit = rate_fit(series, k_lo, k_hi);
              return py::make_tuple(fit.slope, fit.used, fit.excluded);
          },
          py::arg("k"), py::arg("value"), py::arg("k_lo"), py::arg("k_hi"));

    m.def("run_mag_gm",
          [](const ObjectiveBundle& problem, const Eigen::VectorXd& x0, double a,
             double b, std::optional<double> s, double eps, std::int64_t k_max,
             std::optional<std::vector<Eigen::VectorXd>> refs, int ref_count,
             bool store_iterates) {
              SolverConfig cfg{a, b, s ? *s : 1.0 / problem.lipschitz_L, eps, k_max,
                               1e-10};
              ReferenceSet rset = default_refs(problem, refs, ref_count);
              if (!refs) {
                  RunResult pass1 = run(problem, cfg, x0, rset);
                  rset.points.push_back(pass1.final_state.x_cur);
              }
              std::vector<DiagnosticsRow> rows;
              RunResult result =
                  run(problem, cfg, x0, rset,
                      [&](const DiagnosticsRow& r) { rows.push_back(r); },
                      store_iterates);
              return run_to_dict(result, rows, problem.m, store_iterates);
          },
          py::arg("problem"), py::arg("x0"), py::arg("a") = 0.0, py::arg("b") = 0.25,
          py::arg("s") = py::none(), py::arg("eps") = 1e-10,
          py::arg("k_max") = 100000, py::arg("refs") = py::none(),
          py::arg("ref_count") = 64, py::arg("store_iterates") = false);

    m.def("run_msd",
          [](const ObjectiveBundle& problem, const Eigen::VectorXd& x0,
             std::optional<double> s, double eps, std::int64_t k_max,
             std::optional<std::vector<Eigen::VectorXd>> refs, int ref_count,
             bool store_iterates) {
              const double step = s ? *s : 1.0 / problem.lipschitz_L;
              ReferenceSet rset = default_refs(problem, refs, ref_count);
              if (!refs) {
                  RunResult pass1 = run_msd(problem, step, eps, k_max, x0, rset);
                  rset.points.push_back(pass1.final_state.x_cur);
              }
              std::vector<DiagnosticsRow> rows;
              RunResult result = run_msd(
                  problem, step, eps, k_max, x0, rset,
                  [&](const DiagnosticsRow& r) { rows.push_back(r); }, store_iterates);
              return run_to_dict(result, rows, problem.m, store_iterates);
          },
          py::arg("problem"), py::arg("x0"), py::arg("s") = py::none(),
          py::arg("eps") = 1e-10, py::arg("k_max") = 100000,
          py::arg("refs") = py::none(), py::arg("ref_count") = 64,
          py::arg("store_iterates") = false);

    m.def("integrate_mavd",
          [](const ObjectiveBundle& problem, const Eigen::VectorXd& x0, double alpha,
             double t_end, double dt, int sample_every,
             std::optional<std::vector<Eigen::VectorXd>> refs, int ref_count) {
              ReferenceSet empty;
              auto samples =
                  integrate(problem, alpha, x0, t_end, dt, sample_every, empty);
              ReferenceSet rset = default_refs(problem, refs, ref_count);
              rset.points.push_back(samples.back().x);
              for (auto& sp : samples)
                  continuous_diagnostics(problem, sp, alpha, rset);

              const auto K = static_cast<Eigen::Index>(samples.size());
              const int n = problem.n, mm = problem.m;
              Eigen::VectorXd t(K), vnorm(K), merit(K);
              Eigen::MatrixXd x(K, n), W(K, mm);
              Eigen::MatrixXd E(K, static_cast<Eigen::Index>(rset.points.size()));
              for (Eigen::Index i = 0; i < K; ++i) {
                  t[i] = samples[i].t;
                  vnorm[i] = samples[i].v.norm();
                  merit[i] = samples[i].merit;
                  x.row(i) = samples[i].x.transpose();
                  W.row(i) = samples[i].W.transpose();
                  E.row(i) = samples[i].E_refs.transpose();
              }
              py::dict d;
              d["t"] = t;
              d["x"] = x;
              d["v_norm"] = vnorm;
              d["merit"] = merit;
              d["W"] = W;
              d["E"] = E;
              return d;
          },
          py::arg("problem"), py::arg("x0"), py::arg("alpha") = 3.0,
          py::arg("t_end") = 1000.0, py::arg("dt") = 1e-3,
          py::arg("sample_every") = 100, py::arg("refs") = py::none(),
          py::arg("ref_count") = 64);

    m.def("run_plan_from_text",
          [](const std::string& config_text, std::optional<std::string> out_dir) {
              RunPlan plan = parse_config(config_text);
              if (out_dir) plan.out_dir = *out_dir;
              const Report report = run_plan(plan);
              return report_to_json(report);
          },
          py::arg("config_text"), py::arg("out_dir") = py::none(),
          "Execute a config document through the file harness; returns report JSON.");
    m.def("emit_report",
          [](const std::string& run_dir) { return report_to_json(emit_report(run_dir)); },
          py::arg("run_dir"));
    m.def("parse_config_echo", [](const std::string& text) {
        return render_config(parse_config(text));
    });
}
