#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "magopt/acceptance.hpp"
#include "magopt/harness.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw magopt::data_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_report(const magopt::Report& report) {
    std::cout << "termination: " << report.termination << "\n";
    if (report.rate_slope)
        std::cout << "rate_slope: " << *report.rate_slope << " over k in ["
                  << report.rate_window->first << ", " << report.rate_window->second
                  << "]\n";
    for (const auto& inv : report.invariants)
        std::cout << (inv.passed ? "  [ok]   " : "  [FAIL] ") << inv.name
                  << " (worst " << inv.worst_violation << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiobjective accelerated gradient toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir, report_dir;
    bool store_iterates = false;
    int workers = 1;
    std::vector<int> criteria;

    auto* cmd_run = app.add_subcommand("run", "execute one experiment plan");
    cmd_run->add_option("--config", config_path, "config file")->required();
    cmd_run->add_option("--out", out_dir, "output directory (overrides [output] dir)");
    cmd_run->add_flag("--store-iterates", store_iterates, "persist the full trajectory");

    auto* cmd_sweep = app.add_subcommand("sweep", "run the cartesian product of a sweep config");
    cmd_sweep->add_option("--config", config_path, "sweep config file")->required();
    cmd_sweep->add_option("--out", out_dir, "root output directory")->required();
    cmd_sweep->add_option("--workers", workers, "parallel runs")->default_val(1);
    cmd_sweep->add_flag("--store-iterates", store_iterates, "persist full trajectories");

    auto* cmd_check = app.add_subcommand("check", "run the built-in acceptance suite");
    cmd_check->add_option("--criterion", criteria, "criterion id(s), default all");

    auto* cmd_report = app.add_subcommand("report", "recompute the report for a run directory");
    cmd_report->add_option("run_dir", report_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            magopt::RunPlan plan = magopt::parse_config(read_file(config_path));
            if (!out_dir.empty()) plan.out_dir = out_dir;
            if (store_iterates) plan.store_iterates = true;
            const magopt::Report report = magopt::run_plan(plan);
            print_report(report);
            std::cout << "run dir: " << plan.out_dir << "\n";
            return report.all_passed() ? 0 : 1;
        }
        if (cmd_sweep->parsed()) {
            std::vector<magopt::RunPlan> plans = magopt::parse_sweep(read_file(config_path));
            if (store_iterates)
                for (auto& p : plans) p.store_iterates = true;
            std::cout << "sweep: " << plans.size() << " runs -> " << out_dir << "\n";
            const int failed = magopt::run_sweep(std::move(plans), out_dir, workers);
            std::cout << (failed ? "failed runs: " + std::to_string(failed) : "all runs passed")
                      << "\n";
            return failed == 0 ? 0 : 1;
        }
        if (cmd_check->parsed()) {
            const int failed = magopt::acceptance::run_suite(std::cout, criteria);
            return failed == 0 ? 0 : 1;
        }
        if (cmd_report->parsed()) {
            const magopt::Report report = magopt::emit_report(report_dir);
            print_report(report);
            return report.all_passed() ? 0 : 1;
        }
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return 0;
}
