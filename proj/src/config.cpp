#include "magopt/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "magopt/schedule.hpp"

namespace magopt {

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::mag_gm: return "mag_gm";
        case RunMode::msd: return "msd";
        case RunMode::mavd: return "mavd";
    }
    return "?";
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct RawEntry {
    std::string section, key, value;
    int line;
};

std::vector<RawEntry> tokenize(const std::string& text) {
    static const std::set<std::string> known_sections = {"problem", "solver", "output"};
    std::vector<RawEntry> entries;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw data_error("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!known_sections.count(section))
                throw data_error("config line " + std::to_string(lineno) +
                                 ": unknown section [" + section + "]");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw data_error("config line " + std::to_string(lineno) +
                             ": expected key = value");
        if (section.empty())
            throw data_error("config line " + std::to_string(lineno) +
                             ": key outside any section");
        RawEntry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
        if (e.key.empty() || e.value.empty())
            throw data_error("config line " + std::to_string(lineno) +
                             ": empty key or value");
        if (!seen.insert(section + "." + e.key).second)
            throw data_error("config line " + std::to_string(lineno) + ": duplicate key '" +
                             e.key + "'");
        entries.push_back(std::move(e));
    }
    return entries;
}

double parse_double(const RawEntry& e) {
    try {
        size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw data_error("config line " + std::to_string(e.line) + ": key '" + e.key +
                         "': not a number: '" + e.value + "'");
    }
}

std::int64_t parse_int(const RawEntry& e) {
    const double v = parse_double(e);
    if (v != std::floor(v) || std::abs(v) > 9e15)
        throw data_error("config line " + std::to_string(e.line) + ": key '" + e.key +
                         "': expected an integer");
    return static_cast<std::int64_t>(v);
}

bool parse_bool(const RawEntry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    throw data_error("config line " + std::to_string(e.line) + ": key '" + e.key +
                     "': expected true/false");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : v) {
        if (c == ',') {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

// Keys the sweep grammar may expand into cartesian products.
const std::set<std::string> kSweepable = {"a", "b", "s", "alpha", "n", "m",
                                          "seed", "t_end", "k_max"};

void apply_entry(RunPlan& p, const RawEntry& e, bool* mode_seen,
                 std::vector<RawEntry>* solver_deferred) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    if (s == "problem") {
        if (k == "name") {
            p.problem_name = e.value;
        } else if (k == "n") {
            p.n = static_cast<int>(parse_int(e));
        } else if (k == "m") {
            p.m = static_cast<int>(parse_int(e));
        } else if (k == "seed") {
            p.seed = static_cast<std::uint64_t>(parse_int(e));
        } else if (k == "x0") {
            if (e.value == "auto") {
                p.x0_auto = true;
            } else {
                const auto parts = split_list(e.value);
                p.x0_auto = false;
                p.x0_explicit.resize(static_cast<Eigen::Index>(parts.size()));
                for (size_t i = 0; i < parts.size(); ++i) {
                    RawEntry sub = e;
                    sub.value = parts[i];
                    p.x0_explicit[static_cast<Eigen::Index>(i)] = parse_double(sub);
                }
            }
        } else {
            throw data_error("config line " + std::to_string(e.line) +
                             ": unknown key '" + k + "' in [problem]");
        }
    } else if (s == "solver") {
        if (k == "mode") {
            if (e.value == "mag_gm") p.mode = RunMode::mag_gm;
            else if (e.value == "msd") p.mode = RunMode::msd;
            else if (e.value == "mavd") p.mode = RunMode::mavd;
            else
                throw data_error("config line " + std::to_string(e.line) +
                                 ": mode must be mag_gm, msd or mavd");
            *mode_seen = true;
        } else {
            // Mode-dependent keys are validated once the whole file is read.
            solver_deferred->push_back(e);
        }
    } else if (s == "output") {
        if (k == "dir") p.out_dir = e.value;
        else if (k == "store_iterates") p.store_iterates = parse_bool(e);
        else if (k == "refs") p.refs_count = static_cast<int>(parse_int(e));
        else
            throw data_error("config line " + std::to_string(e.line) +
                             ": unknown key '" + k + "' in [output]");
    }
}

void apply_solver_key(RunPlan& p, const RawEntry& e) {
    static const std::set<std::string> known = {"a",     "b",   "s",     "eps",
                                                "k_max", "subproblem_tol", "alpha",
                                                "dt",    "t_end", "sample_every"};
    static const std::map<RunMode, std::set<std::string>> allowed = {
        {RunMode::mag_gm, {"a", "b", "s", "eps", "k_max", "subproblem_tol"}},
        {RunMode::msd, {"s", "eps", "k_max", "subproblem_tol"}},
        {RunMode::mavd, {"alpha", "dt", "t_end", "sample_every", "subproblem_tol"}},
    };
    const std::string& k = e.key;
    if (!known.count(k))
        throw data_error("config line " + std::to_string(e.line) + ": unknown key '" +
                         k + "' in [solver]");
    if (!allowed.at(p.mode).count(k))
        throw data_error("config line " + std::to_string(e.line) + ": key '" + k +
                         "' is not valid for mode " + to_string(p.mode));
    if (k == "a") p.a = parse_double(e);
    else if (k == "b") p.b = parse_double(e);
    else if (k == "s") p.s = e.value == "auto" ? 0.0 : parse_double(e);
    else if (k == "eps") p.eps = parse_double(e);
    else if (k == "k_max") p.k_max = parse_int(e);
    else if (k == "subproblem_tol") p.subproblem_tol = parse_double(e);
    else if (k == "alpha") p.alpha = parse_double(e);
    else if (k == "dt") p.dt = parse_double(e);
    else if (k == "t_end") p.t_end = parse_double(e);
    else if (k == "sample_every") p.sample_every = static_cast<int>(parse_int(e));
}

void validate_plan(const RunPlan& p) {
    if (p.problem_name.empty()) throw input_error("config: [problem] name is required");
    if (p.problem_name != "jos1" && p.problem_name != "quadratic_ensemble")
        throw input_error("config: unknown problem '" + p.problem_name + "'");
    if (p.n < 1) throw input_error("config: n must be >= 1");
    if (p.m < 1) throw input_error("config: m must be >= 1");
    if (p.problem_name == "jos1" && p.m != 2)
        throw input_error("config: jos1 has m = 2");
    if (!p.x0_auto && p.x0_explicit.size() != p.n)
        throw input_error("config: x0 has " + std::to_string(p.x0_explicit.size()) +
                          " components, n = " + std::to_string(p.n));

    if (p.mode == RunMode::mag_gm) {
        if (!(p.a >= 0.0 && p.a < 1.0)) throw input_error("config: a must lie in [0, 1)");
        if (!(p.b >= p.a * p.a / 4.0 && p.b <= 0.25))
            throw input_error("config: b must lie in [a^2/4, 1/4]");
    }
    if (p.mode != RunMode::mavd) {
        if (p.s != 0.0 && !(p.s > 0.0))
            throw input_error("config: s must be positive or auto");
        if (!(p.eps >= 0.0)) throw input_error("config: eps must be >= 0");
        if (p.k_max < 1) throw input_error("config: k_max must be >= 1");
    } else {
        if (!(p.alpha > 0.0)) throw input_error("config: alpha must be > 0");
        if (!(p.dt > 0.0)) throw input_error("config: dt must be > 0");
        if (!(p.t_end > 1.0)) throw input_error("config: t_end must be > 1");
        if (p.sample_every < 1) throw input_error("config: sample_every must be >= 1");
    }
    if (!(p.subproblem_tol > 0.0))
        throw input_error("config: subproblem_tol must be > 0");
    if (p.refs_count < 0) throw input_error("config: refs must be >= 0");
}

}  // namespace

ObjectiveBundle RunPlan::build_problem() const {
    return make_problem(problem_name, n, m, seed);
}

Eigen::VectorXd RunPlan::resolve_x0() const {
    if (!x0_auto) return x0_explicit;
    // Deterministic generic start: coordinates spread over [3, 5].
    Eigen::VectorXd x0(n);
    for (int j = 0; j < n; ++j)
        x0[j] = n == 1 ? 4.0 : 3.0 + 2.0 * j / (n - 1.0);
    return x0;
}

double RunPlan::resolve_s(const ObjectiveBundle& problem) const {
    return s == 0.0 ? 1.0 / problem.lipschitz_L : s;
}

bool RunPlan::equivalent(const RunPlan& other) const {
    const auto resolved_s = [](const RunPlan& p) {
        return p.s == 0.0 && p.mode != RunMode::mavd ? p.resolve_s(p.build_problem())
                                                     : p.s;
    };
    return problem_name == other.problem_name && n == other.n && m == other.m &&
           seed == other.seed && resolve_x0() == other.resolve_x0() &&
           mode == other.mode && a == other.a && b == other.b &&
           resolved_s(*this) == resolved_s(other) &&
           eps == other.eps && k_max == other.k_max &&
           subproblem_tol == other.subproblem_tol && alpha == other.alpha &&
           dt == other.dt && t_end == other.t_end &&
           sample_every == other.sample_every && out_dir == other.out_dir &&
           store_iterates == other.store_iterates && refs_count == other.refs_count;
}

std::vector<RunPlan> parse_sweep(const std::string& text) {
    const std::vector<RawEntry> entries = tokenize(text);

    // Expand list-valued sweepable keys into a cartesian product of documents.
    std::vector<std::vector<RawEntry>> docs = {{}};
    for (const auto& e : entries) {
        const auto parts = split_list(e.value);
        if (parts.size() > 1 && e.key != "x0") {
            if (!kSweepable.count(e.key))
                throw data_error("config line " + std::to_string(e.line) + ": key '" +
                                 e.key + "' cannot hold a comma list");
            std::vector<std::vector<RawEntry>> expanded;
            expanded.reserve(docs.size() * parts.size());
            for (const auto& doc : docs) {
                for (const auto& part : parts) {
                    auto copy = doc;
                    RawEntry sub = e;
                    sub.value = part;
                    copy.push_back(sub);
                    expanded.push_back(std::move(copy));
                }
            }
            docs = std::move(expanded);
        } else {
            for (auto& doc : docs) doc.push_back(e);
        }
    }

    std::vector<RunPlan> plans;
    plans.reserve(docs.size());
    for (const auto& doc : docs) {
        RunPlan p;
        bool mode_seen = false;
        std::vector<RawEntry> solver_keys;
        for (const auto& e : doc) apply_entry(p, e, &mode_seen, &solver_keys);
        for (const auto& e : solver_keys) apply_solver_key(p, e);
        validate_plan(p);
        plans.push_back(std::move(p));
    }
    return plans;
}

RunPlan parse_config(const std::string& text) {
    for (const auto& e : tokenize(text))
        if (split_list(e.value).size() > 1 && e.key != "x0")
            throw data_error("config line " + std::to_string(e.line) + ": key '" + e.key +
                             "': comma lists are only valid in sweep configs");
    auto plans = parse_sweep(text);
    return plans.front();
}

std::string render_config(const RunPlan& plan, bool resolve) {
    std::ostringstream out;
    out << "[problem]\n";
    out << "name = " << plan.problem_name << "\n";
    out << "n = " << plan.n << "\n";
    out << "m = " << plan.m << "\n";
    out << "seed = " << plan.seed << "\n";
    if (!resolve && plan.x0_auto) {
        out << "x0 = auto\n";
    } else {
        const Eigen::VectorXd x0 = plan.resolve_x0();
        out << "x0 = ";
        for (int j = 0; j < x0.size(); ++j)
            out << (j ? "," : "") << fmt17(x0[j]);
        out << "\n";
    }

    out << "\n[solver]\n";
    out << "mode = " << to_string(plan.mode) << "\n";
    if (plan.mode == RunMode::mag_gm) {
        out << "a = " << fmt17(plan.a) << "\n";
        out << "b = " << fmt17(plan.b) << "\n";
    }
    if (plan.mode != RunMode::mavd) {
        double s = plan.s;
        if (resolve && s == 0.0) s = plan.resolve_s(plan.build_problem());
        if (s == 0.0) out << "s = auto\n";
        else out << "s = " << fmt17(s) << "\n";
        out << "eps = " << fmt17(plan.eps) << "\n";
        out << "k_max = " << plan.k_max << "\n";
    } else {
        out << "alpha = " << fmt17(plan.alpha) << "\n";
        out << "dt = " << fmt17(plan.dt) << "\n";
        out << "t_end = " << fmt17(plan.t_end) << "\n";
        out << "sample_every = " << plan.sample_every << "\n";
    }
    out << "subproblem_tol = " << fmt17(plan.subproblem_tol) << "\n";

    out << "\n[output]\n";
    out << "dir = " << plan.out_dir << "\n";
    out << "store_iterates = " << (plan.store_iterates ? "true" : "false") << "\n";
    out << "refs = " << plan.refs_count << "\n";
    return out.str();
}

}  // namespace magopt
