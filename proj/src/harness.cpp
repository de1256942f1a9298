#include "magopt/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "magopt/csv.hpp"
#include "magopt/mavd.hpp"
#include "magopt/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace magopt {

bool Report::all_passed() const {
    if (aborted()) return false;
    for (const auto& inv : invariants)
        if (!inv.passed) return false;
    return true;
}

namespace {

json plan_to_json(const RunPlan& p) {
    json problem = {{"name", p.problem_name},
                    {"n", p.n},
                    {"m", p.m},
                    {"seed", p.seed}};
    json x0 = json::array();
    const Eigen::VectorXd x0v = p.resolve_x0();
    for (int i = 0; i < x0v.size(); ++i) x0.push_back(format17(x0v[i]));
    problem["x0"] = x0;

    json solver = {{"mode", to_string(p.mode)},
                   {"subproblem_tol", format17(p.subproblem_tol)}};
    if (p.mode == RunMode::mag_gm) {
        solver["a"] = format17(p.a);
        solver["b"] = format17(p.b);
    }
    if (p.mode != RunMode::mavd) {
        solver["s"] = format17(p.s == 0.0 ? p.resolve_s(p.build_problem()) : p.s);
        solver["eps"] = format17(p.eps);
        solver["k_max"] = p.k_max;
    } else {
        solver["alpha"] = format17(p.alpha);
        solver["dt"] = format17(p.dt);
        solver["t_end"] = format17(p.t_end);
        solver["sample_every"] = p.sample_every;
    }
    return {{"problem", problem},
            {"solver", solver},
            {"output", {{"dir", p.out_dir},
                        {"store_iterates", p.store_iterates},
                        {"refs", p.refs_count}}}};
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw data_error("write failed: " + path.string());
}

void write_report_file(const fs::path& dir, const Report& report) {
    write_text(dir / "report.json", report_to_json(report));
}

// --- streaming CSV writer for solver runs -----------------------------------

class DiagnosticsCsvWriter {
public:
    DiagnosticsCsvWriter(const fs::path& path, int m, int refs)
        : path_(path.string()), m_(m), refs_(refs) {
        file_ = std::fopen(path_.c_str(), "w");
        if (!file_) throw data_error("cannot open for writing: " + path_);
        std::fprintf(file_, "k,t_k,step_norm_sq,zeta,merit,crit_residual,sum_partial");
        for (int i = 1; i <= m_; ++i) std::fprintf(file_, ",f_%d", i);
        for (int i = 1; i <= m_; ++i) std::fprintf(file_, ",W_%d", i);
        for (int j = 0; j < refs_; ++j) std::fprintf(file_, ",sigma_ref%d", j);
        for (int j = 0; j < refs_; ++j) std::fprintf(file_, ",E_ref%d", j);
        std::fprintf(file_, "\n");
    }
    ~DiagnosticsCsvWriter() {
        if (file_) std::fclose(file_);
    }

    void operator()(const DiagnosticsRow& row) {
        std::fprintf(file_, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                     static_cast<long long>(row.k), row.t, row.step_norm_sq, row.zeta,
                     row.merit, row.crit_residual, row.sum_partial);
        for (int i = 0; i < m_; ++i) std::fprintf(file_, ",%.17g", row.f[i]);
        for (int i = 0; i < m_; ++i) std::fprintf(file_, ",%.17g", row.W[i]);
        for (int j = 0; j < refs_; ++j) std::fprintf(file_, ",%.17g", row.sigma_refs[j]);
        for (int j = 0; j < refs_; ++j) std::fprintf(file_, ",%.17g", row.E_refs[j]);
        std::fprintf(file_, "\n");
    }

    void close() {
        if (file_ && std::fclose(file_) != 0)
            throw data_error("write failed: " + path_);
        file_ = nullptr;
    }

private:
    std::string path_;
    std::FILE* file_ = nullptr;
    int m_, refs_;
};

ReferenceSet analytic_refs(const ObjectiveBundle& problem, int count) {
    ReferenceSet refs;
    if (count > 0 && problem.pareto_sampler) refs = pareto_reference(problem, count);
    return refs;
}

void write_iterates(const fs::path& path, const std::vector<Eigen::VectorXd>& iterates) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw data_error("cannot open for writing: " + path.string());
    std::fprintf(f, "k");
    const int n = iterates.empty() ? 0 : static_cast<int>(iterates.front().size());
    for (int j = 0; j < n; ++j) std::fprintf(f, ",x_%d", j);
    std::fprintf(f, "\n");
    for (size_t k = 0; k < iterates.size(); ++k) {
        std::fprintf(f, "%zu", k + 1);
        for (int j = 0; j < n; ++j) std::fprintf(f, ",%.17g", iterates[k][j]);
        std::fprintf(f, "\n");
    }
    if (std::fclose(f) != 0) throw data_error("write failed: " + path.string());
}

std::string termination_name(Termination t) {
    return t == Termination::eps_reached ? "eps_reached" : "k_max_reached";
}

void execute_solver_plan(const RunPlan& plan, const fs::path& dir, Report& report) {
    const ObjectiveBundle problem = plan.build_problem();
    const Eigen::VectorXd x0 = plan.resolve_x0();
    const double s = plan.resolve_s(problem);

    ReferenceSet refs = analytic_refs(problem, plan.refs_count);

    RunResult pass1;
    if (plan.mode == RunMode::mag_gm) {
        SolverConfig cfg{plan.a, plan.b, s, plan.eps, plan.k_max, plan.subproblem_tol};
        pass1 = run(problem, cfg, x0, refs);
    } else {
        pass1 = run_msd(problem, s, plan.eps, plan.k_max, x0, refs, nullptr, false,
                        plan.subproblem_tol);
    }
    // The final iterate joins the reference set as its last point; rerunning the
    // deterministic iteration fills the per-reference columns for every k.
    refs.points.push_back(pass1.final_state.x_cur);

    DiagnosticsCsvWriter writer(dir / "diagnostics.csv", problem.m,
                                static_cast<int>(refs.points.size()));
    RunResult result;
    if (plan.mode == RunMode::mag_gm) {
        SolverConfig cfg{plan.a, plan.b, s, plan.eps, plan.k_max, plan.subproblem_tol};
        result = run(problem, cfg, x0, refs, std::ref(writer), plan.store_iterates);
    } else {
        result = run_msd(problem, s, plan.eps, plan.k_max, x0, refs, std::ref(writer),
                         plan.store_iterates, plan.subproblem_tol);
    }
    writer.close();

    if (plan.store_iterates && result.iterates)
        write_iterates(dir / "iterates.csv", *result.iterates);
    report.termination = termination_name(result.termination);
}

void execute_mavd_plan(const RunPlan& plan, const fs::path& dir, Report& report) {
    const ObjectiveBundle problem = plan.build_problem();
    const Eigen::VectorXd x0 = plan.resolve_x0();

    ReferenceSet empty;
    std::vector<TrajectorySample> samples =
        integrate(problem, plan.alpha, x0, plan.t_end, plan.dt, plan.sample_every,
                  empty, plan.subproblem_tol);

    ReferenceSet refs = analytic_refs(problem, plan.refs_count);
    refs.points.push_back(samples.back().x);
    for (auto& sample : samples)
        continuous_diagnostics(problem, sample, plan.alpha, refs);

    const int n = problem.n, m = problem.m;
    const int J = static_cast<int>(refs.points.size());
    std::FILE* f = std::fopen((dir / "trajectory.csv").string().c_str(), "w");
    if (!f) throw data_error("cannot open for writing: " + (dir / "trajectory.csv").string());
    std::fprintf(f, "t");
    for (int j = 0; j < n; ++j) std::fprintf(f, ",x_%d", j);
    std::fprintf(f, ",v_norm,accel_norm");
    for (int i = 1; i <= m; ++i) std::fprintf(f, ",W_%d", i);
    std::fprintf(f, ",merit");
    for (int j = 0; j < J; ++j) std::fprintf(f, ",E_ref%d", j);
    std::fprintf(f, "\n");
    for (const auto& sp : samples) {
        std::fprintf(f, "%.17g", sp.t);
        for (int j = 0; j < n; ++j) std::fprintf(f, ",%.17g", sp.x[j]);
        std::fprintf(f, ",%.17g,%.17g", sp.v.norm(), sp.accel.norm());
        for (int i = 0; i < m; ++i) std::fprintf(f, ",%.17g", sp.W[i]);
        std::fprintf(f, ",%.17g", sp.merit);
        for (int j = 0; j < J; ++j) std::fprintf(f, ",%.17g", sp.E_refs[j]);
        std::fprintf(f, "\n");
    }
    if (std::fclose(f) != 0)
        throw data_error("write failed: " + (dir / "trajectory.csv").string());
    report.termination = "t_end_reached";
}

}  // namespace

Report run_plan(const RunPlan& plan) {
    const fs::path dir(plan.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw data_error("cannot create output directory " + dir.string() + ": " +
                         ec.message());

    Report report;
    report.config_echo = plan;
    write_text(dir / "config_echo.ini", render_config(plan));
    write_text(dir / "config.json", plan_to_json(plan).dump(2) + "\n");

    const auto start = std::chrono::steady_clock::now();
    try {
        if (plan.mode == RunMode::mavd)
            execute_mavd_plan(plan, dir, report);
        else
            execute_solver_plan(plan, dir, report);
    } catch (const std::exception& err) {
        report.termination = std::string("aborted: ") + err.what();
        report.wall_time = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        write_report_file(dir, report);
        return report;
    }
    report.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_report_file(dir, report);

    return emit_report(dir.string());
}

// --- report recomputation ----------------------------------------------------

namespace {

struct Checker {
    Report* report;
    void add(const std::string& name, double worst, double allowance = 0.0) {
        report->invariants.push_back({name, worst <= allowance, worst});
    }
};

double rel(double x, double y) { return std::abs(x - y) / (1.0 + std::abs(y)); }

void report_solver_run(const RunPlan& plan, const CsvTable& csv, Report& report) {
    const ObjectiveBundle problem = plan.build_problem();
    const Eigen::VectorXd x0 = plan.resolve_x0();
    const double s = plan.resolve_s(problem);
    const double a = plan.mode == RunMode::mag_gm ? plan.a : 0.0;
    const double b = plan.mode == RunMode::mag_gm ? plan.b : 0.25;

    const int m = problem.m;
    const int J = (static_cast<int>(csv.col_count()) - 7 - 2 * m) / 2;
    if (static_cast<int>(csv.col_count()) != 7 + 2 * m + 2 * J || J < 1)
        throw data_error("diagnostics.csv: unexpected column count");
    const int c_f = 7, c_W = 7 + m, c_sig = 7 + 2 * m, c_E = 7 + 2 * m + J;
    const auto& rows = csv.rows;
    const size_t K = rows.size();
    if (K == 0) throw data_error("diagnostics.csv: no data rows");

    Checker chk{&report};

    // Recompute the derived columns from the base ones.
    double consistency = 0.0;
    double sum = 0.0;
    for (size_t r = 0; r < K; ++r) {
        const double k = rows[r][0], t = rows[r][1], step = rows[r][2];
        for (int i = 0; i < m; ++i)
            consistency = std::max(
                consistency, rel(rows[r][c_f + i] + step / (2.0 * s), rows[r][c_W + i]));
        if (plan.mode == RunMode::mag_gm) {
            consistency = std::max(consistency, rel(a * t - b + 0.25, rows[r][3]));
            sum += (a * k - b + 0.25) * step;
            consistency = std::max(consistency, rel(sum, rows[r][6]));
        }
        double merit = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < J; ++j) merit = std::max(merit, rows[r][c_sig + j]);
        consistency = std::max(consistency, rel(merit, rows[r][4]));
    }
    chk.add("csv_consistency", consistency - 1e-15);

    if (plan.mode == RunMode::mag_gm) {
        double worst = std::abs(rows[0][1] - 1.0);
        for (size_t r = 0; r + 1 < K; ++r) {
            const double t = rows[r][1];
            const double next = std::sqrt(t * t - a * t + b) + 0.5;
            worst = std::max(worst,
                             std::abs(rows[r + 1][1] - next) - 1e-12 * (1.0 + t));
        }
        chk.add("schedule_recurrence", worst);
    }

    if (plan.mode == RunMode::mag_gm) {
        double worst = -std::numeric_limits<double>::infinity();
        for (size_t r = 0; r + 1 < K; ++r)
            for (int i = 0; i < m; ++i) {
                const double w = rows[r][c_W + i];
                worst = std::max(worst,
                                 rows[r + 1][c_W + i] - w - 1e-9 * (1.0 + std::abs(w)));
            }
        chk.add("energy_monotone", worst);
    }
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (size_t r = 0; r < K; ++r)
            for (int i = 0; i < m; ++i) {
                const double f0 = rows[0][c_f + i];
                worst = std::max(worst,
                                 rows[r][c_f + i] - f0 - 1e-9 * (1.0 + std::abs(f0)));
            }
        chk.add("level_containment", worst);
    }

    if (plan.mode == RunMode::mag_gm) {
        double worst = -std::numeric_limits<double>::infinity();
        for (size_t r = 0; r + 1 < K; ++r) {
            const double zeta_k = rows[r][3];
            for (int j = 0; j < J; ++j) {
                const double e = rows[r][c_E + j];
                worst = std::max(worst, rows[r + 1][c_E + j] - e +
                                            zeta_k * rows[r][c_sig + j] -
                                            1e-8 * (1.0 + std::abs(e)));
            }
        }
        chk.add("lyapunov_one_step", worst);

        const double radius = problem.level_radius ? problem.level_radius(x0) : -1.0;
        if (radius >= 0.0) {
            const double rhs = s * rows[0][4] + radius * radius;
            double bworst = -std::numeric_limits<double>::infinity();
            for (size_t r = 1; r < K; ++r) {
                const double k = rows[r][0];
                bworst = std::max(bworst, rows[r][4] * s * (1.0 - a) * (1.0 - a) * k * k -
                                              rhs - 1e-12 * (1.0 + std::abs(rhs)));
            }
            chk.add("rate_bound", bworst);
        } else {
            chk.add("rate_bound(skipped: no radius hint)", 0.0);
        }

        // Summability with the level-radius bound, for a > 0 or b < 1/4.
        if (a > 0.0 || b < 0.25) {
            if (radius >= 0.0) {
                const double B = s * rows[0][4] + radius * radius;
                double bound = 0.0;
                if (a > 0.0) bound += 4.0 / a * B;
                if (b < 0.25) bound += (0.25 - b) * B / summability_Q(a, b);
                double worst2 = -std::numeric_limits<double>::infinity();
                for (size_t r = 0; r < K; ++r)
                    worst2 = std::max(worst2, rows[r][6] - 1.01 * bound);
                chk.add("summability_bound", worst2);
            } else {
                chk.add("summability_bound(skipped: no radius hint)", 0.0);
            }
        }

        // Cluster-point inequality against the tail reference (last column).
        double cworst = -std::numeric_limits<double>::infinity();
        for (size_t r = 0; r < K; ++r)
            cworst = std::max(cworst, -rows[r][c_sig + J - 1] -
                                          rows[r][2] / (2.0 * s) - 1e-8);
        chk.add("cluster_point_sigma", cworst);
    } else {
        // Steepest descent: per-objective values are non-increasing.
        double worst = -std::numeric_limits<double>::infinity();
        for (size_t r = 0; r + 1 < K; ++r)
            for (int i = 0; i < m; ++i) {
                const double fv = rows[r][c_f + i];
                worst = std::max(worst,
                                 rows[r + 1][c_f + i] - fv - 1e-9 * (1.0 + std::abs(fv)));
            }
        chk.add("f_monotone", worst);
    }

    chk.add("merit_final_nonneg", -(rows[K - 1][4] + 1e-12));

    // Rate fit of the merit surrogate.
    std::vector<std::pair<std::int64_t, double>> series;
    series.reserve(K);
    for (size_t r = 0; r < K; ++r)
        series.emplace_back(static_cast<std::int64_t>(rows[r][0]), rows[r][4]);
    try {
        const RateFit fit = rate_fit(series, 100, 10000);
        report.rate_slope = fit.slope;
        report.rate_window = {100, 10000};
    } catch (const insufficient_data_error&) {
    }
}

void report_mavd_run(const RunPlan& plan, const CsvTable& csv, Report& report) {
    const ObjectiveBundle problem = plan.build_problem();
    const Eigen::VectorXd x0 = plan.resolve_x0();
    const double alpha = plan.alpha;
    const int n = problem.n, m = problem.m;
    const int J = static_cast<int>(csv.col_count()) - 4 - n - m;
    if (J < 1) throw data_error("trajectory.csv: unexpected column count");
    const int c_x = 1, c_vn = 1 + n, c_W = 3 + n, c_merit = 3 + n + m,
              c_E = 4 + n + m;
    const auto& rows = csv.rows;
    const size_t K = rows.size();
    if (K == 0) throw data_error("trajectory.csv: no data rows");

    ReferenceSet refs = analytic_refs(problem, plan.refs_count);
    {
        Eigen::VectorXd tail(n);
        for (int j = 0; j < n; ++j) tail[j] = rows[K - 1][c_x + j];
        refs.points.push_back(tail);
    }

    Checker chk{&report};
    double consistency = 0.0;
    double w_worst = -std::numeric_limits<double>::infinity();
    double e_worst = -std::numeric_limits<double>::infinity();
    double lvl_worst = -std::numeric_limits<double>::infinity();
    double bound_worst = -std::numeric_limits<double>::infinity();

    Eigen::VectorXd f0;
    const double radius = problem.level_radius ? problem.level_radius(x0) : 0.0;
    const double merit0 = rows[0][c_merit];
    const double bound_rhs = merit0 + 2.0 * alpha * (alpha + 3.0) / 9.0 * radius * radius;
    const double dt_max = mavd_step_size(plan.t_end, plan.dt);
    const double bound_slack = 10.0 * dt_max * dt_max * (1.0 + std::abs(bound_rhs));

    Eigen::VectorXd x(n);
    for (size_t r = 0; r < K; ++r) {
        const double t = rows[r][0];
        for (int j = 0; j < n; ++j) x[j] = rows[r][c_x + j];
        const Eigen::VectorXd f = problem.value(x);
        if (r == 0) f0 = f;
        const double vn = rows[r][c_vn];

        double merit = -std::numeric_limits<double>::infinity();
        for (const auto& z : refs.points)
            merit = std::max(merit, problem.gap(x, z).minCoeff());
        consistency = std::max(consistency, rel(merit, rows[r][c_merit]));

        const double dt_here = mavd_step_size(t, plan.dt);
        double gmax = 0.0;
        const Eigen::MatrixXd grads = problem.gradients(x);
        for (int i = 0; i < m; ++i) gmax = std::max(gmax, grads.col(i).norm());
        // Base integrator slack plus the sliding band's O(dt) creep allowance
        // accumulated over the whole horizon (level set) or one pair (decay).
        const double lvl_slack = 10.0 * dt_here * dt_here +
                                 plan.dt * (rows[K - 1][0] - rows[0][0]) * 0.1;
        for (int i = 0; i < m; ++i) {
            consistency =
                std::max(consistency, rel(f[i] + 0.5 * vn * vn, rows[r][c_W + i]));
            lvl_worst = std::max(lvl_worst,
                                 f[i] - f0[i] - lvl_slack * (1.0 + std::abs(f0[i])));
        }
        if (r + 1 < K) {
            const double slack_scale = 10.0 * dt_here * dt_here +
                                       dt_here * (rows[r + 1][0] - t) * gmax * gmax;
            for (int i = 0; i < m; ++i) {
                const double w = rows[r][c_W + i];
                w_worst = std::max(w_worst, rows[r + 1][c_W + i] - w -
                                                slack_scale * (1.0 + std::abs(w)));
            }
            for (int j = 0; j < J; ++j) {
                const double e = rows[r][c_E + j];
                e_worst = std::max(e_worst, rows[r + 1][c_E + j] - e -
                                                slack_scale * (1.0 + std::abs(e)));
            }
        }
        bound_worst = std::max(bound_worst, std::pow(t, 2.0 * alpha / 3.0) * merit -
                                                bound_rhs - bound_slack);
    }
    chk.add("csv_consistency", consistency - 1e-15);
    chk.add("energy_monotone", w_worst);
    chk.add("lyapunov_monotone", e_worst);
    chk.add("level_containment", lvl_worst);
    chk.add("merit_rate_bound", bound_worst);

    // Slope of the boundedness series t^(2a/3) * merit over t in [10, t_end].
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int used = 0;
    for (size_t r = 0; r < K; ++r) {
        const double t = rows[r][0];
        const double v = std::pow(t, 2.0 * alpha / 3.0) * rows[r][c_merit];
        if (t < 10.0 || !(v > 1e-300)) continue;
        const double lx = std::log(t), ly = std::log(v);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++used;
    }
    if (used >= 10) {
        report.rate_slope = (used * sxy - sx * sy) / (used * sxx - sx * sx);
        report.rate_window = {10, static_cast<std::int64_t>(plan.t_end)};
    }
}

}  // namespace

Report emit_report(const std::string& run_dir) {
    const fs::path dir(run_dir);
    std::ifstream echo(dir / "config_echo.ini");
    if (!echo) throw data_error("emit_report: missing config_echo.ini in " + run_dir);
    std::string text((std::istreambuf_iterator<char>(echo)),
                     std::istreambuf_iterator<char>());
    const RunPlan plan = parse_config(text);

    Report report;
    report.config_echo = plan;
    report.termination = "unknown";

    // Keep the in-run metadata (termination, wall time) when available.
    if (fs::exists(dir / "report.json")) {
        std::ifstream in(dir / "report.json");
        json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (!j.is_discarded()) {
            if (j.contains("termination")) report.termination = j["termination"];
            if (j.contains("wall_time"))
                report.wall_time = std::stod(j["wall_time"].get<std::string>());
        }
    }
    if (report.aborted()) {
        write_report_file(dir, report);
        return report;
    }

    if (plan.mode == RunMode::mavd) {
        report_mavd_run(plan, read_csv((dir / "trajectory.csv").string()), report);
    } else {
        report_solver_run(plan, read_csv((dir / "diagnostics.csv").string()), report);
    }
    write_report_file(dir, report);
    return report;
}

std::string report_to_json(const Report& report) {
    json j;
    j["rate_slope"] = report.rate_slope ? json(format17(*report.rate_slope)) : json();
    j["rate_window"] = report.rate_window
                           ? json::array({report.rate_window->first,
                                          report.rate_window->second})
                           : json();
    json invs = json::array();
    for (const auto& inv : report.invariants)
        invs.push_back({{"name", inv.name},
                        {"passed", inv.passed},
                        {"worst_violation", format17(inv.worst_violation)}});
    j["invariant_results"] = invs;
    j["termination"] = report.termination;
    j["wall_time"] = format17(report.wall_time);
    j["config_echo"] = plan_to_json(report.config_echo);
    return j.dump(2) + "\n";
}

int run_sweep(std::vector<RunPlan> plans, const std::string& out_root, int workers) {
    const fs::path root(out_root);
    fs::create_directories(root);
    for (size_t i = 0; i < plans.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "run_%03zu", i);
        plans[i].out_dir = (root / name).string();
    }

    std::atomic<size_t> next{0};
    std::atomic<int> failed{0};
    const int pool = std::max(1, std::min<int>(workers, static_cast<int>(plans.size())));
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int w = 0; w < pool; ++w) {
        threads.emplace_back([&]() {
            for (size_t i = next.fetch_add(1); i < plans.size(); i = next.fetch_add(1)) {
                const Report report = run_plan(plans[i]);
                if (!report.all_passed()) failed.fetch_add(1);
            }
        });
    }
    for (auto& t : threads) t.join();
    return failed.load();
}

}  // namespace magopt
