#pragma once
// Config-driven front end: turns a Config into a ready-to-run experiment,
// runs it, and writes report.txt, assertions.csv, series_*.csv, field.csv.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "warplab/catalog.hpp"
#include "warplab/config.hpp"
#include "warplab/experiments.hpp"

namespace warplab::cli {

namespace fs = std::filesystem;
namespace cat = warplab::catalog;

enum ExitStatus : int { kPass = 0, kFailure = 1, kConfigError = 2 };

struct ExperimentInfo {
    std::string name;
    std::string citation;
};

inline const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> reg = {
        {"liouville", "Liouville barrier w = u - delta h - M(u;R1) under a curvature comparison"},
        {"greene_wu", "Greene-Wu corollary: take z(r) = r log(r/r0), K >= -1/(r^2 log r)"},
        {"three_circles", "three circles theorem: M_r <= phi(r), log log interpolation"},
        {"parabolicity", "parabolicity via harmonic measure of receding circles (Milnor criterion)"},
        {"gap", "gap theorem: growth below r^(1+delta) for all delta forces |u| <= C r"},
        {"bochner", "Bochner identity and its log(1+|grad u|^2) variant for harmonic u"},
        {"yau", "Yau gradient estimate |grad log u| <= C/r (diagnostic)"},
    };
    return reg;
}

inline std::string list_catalog() {
    std::ostringstream os;
    auto block = [&os](const char* title, const std::vector<cat::Entry>& entries) {
        os << title << ":\n";
        for (const auto& e : entries) os << "  " << e.name << " : " << e.description << '\n';
        os << '\n';
    };
    block("metrics", cat::metric_entries());
    block("profiles", cat::profile_entries());
    block("boundary presets", cat::boundary_entries());
    block("fields", cat::field_entries());
    os << "experiments:\n";
    for (const auto& e : experiment_registry()) os << "  " << e.name << " : " << e.citation << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Catalog lookups from config sections.

struct MetricChoice {
    WarpMetric metric;
    double cone_c = 1.0;
};

inline MetricChoice read_metric(ConfigReader& rd) {
    const std::string name = rd.text("metric", "name");
    if (name == "flat") return {cat::flat(), 1.0};
    if (name == "sinh") return {cat::sinh_metric(), 1.0};
    if (name == "sin") return {cat::sin_metric(), 1.0};
    if (name == "cone") {
        const double c = rd.number("metric", "c");
        if (!(c > 0.0 && c <= 1.0)) throw ConfigError("metric.c", "cone parameter must lie in (0, 1]");
        return {cat::cone(c), c};
    }
    if (name == "milnor") {
        const double r0 = rd.number("metric", "r0", 1.0);
        if (!(r0 > 0.0)) throw ConfigError("metric.r0", "must be positive");
        return {cat::milnor(r0), 1.0};
    }
    if (name == "custom") {
        const std::string expr = rd.text("metric", "expr");
        const double r_min = rd.number("metric", "r_min", 0.0);
        try {
            return {cat::custom_metric(expr, r_min), 1.0};
        } catch (const ExpressionError& e) {
            throw ConfigError("metric.expr", e.what());
        }
    }
    throw ConfigError("metric.name", "unknown metric '" + name + "'");
}

inline RadialProfile read_profile(ConfigReader& rd) {
    const std::string name = rd.text("profile", "name");
    if (name == "linear") return cat::linear_profile();
    if (name == "sinh") return cat::sinh_profile();
    if (name == "milnor") {
        const double r0 = rd.number("profile", "r0", 1.0);
        if (!(r0 > 0.0)) throw ConfigError("profile.r0", "must be positive");
        return cat::milnor_profile(r0);
    }
    if (name == "custom") {
        const std::string expr = rd.text("profile", "expr");
        const double a = rd.number("profile", "a", 0.0);
        try {
            return cat::custom_profile(expr, a);
        } catch (const ExpressionError& e) {
            throw ConfigError("profile.expr", e.what());
        }
    }
    throw ConfigError("profile.name", "unknown profile '" + name + "'");
}

inline FieldSampler read_field(ConfigReader& rd, double cone_c) {
    const std::string name = rd.text("field", "name");
    if (name == "x") return cat::x_field();
    if (name == "x2-y2") return cat::x2_minus_y2();
    if (name == "re-z3") return cat::re_z3();
    if (name == "logr") return cat::log_r();
    if (name == "logtanh") return cat::log_tanh_half();
    if (name == "cos-over-r") return cat::cos_over_r();
    if (name == "separated") {
        const double k = rd.number("field", "k", 1.0);
        return cat::separated(k / cone_c, k, "separated");
    }
    if (name == "const") return cat::constant(rd.number("field", "value", 1.0));
    if (name == "affine") return cat::affine(rd.number("field", "A"));
    throw ConfigError("field.name", "unknown field '" + name + "'");
}

inline AnnulusGrid read_grid(ConfigReader& rd) {
    const double r1 = rd.number("grid", "r1");
    const double r2 = rd.number("grid", "r2");
    const int n_r = rd.integer("grid", "n_r", 64);
    const int n_theta = rd.integer("grid", "n_theta", 128);
    if (!(r1 > 0.0)) throw ConfigError("grid.r1", "must be positive");
    if (!(r2 > r1)) throw ConfigError("grid.r2", "must exceed r1");
    if (n_r < 3) throw ConfigError("grid.n_r", "n_r must be at least 3");
    if (n_theta < 8) throw ConfigError("grid.n_theta", "n_theta must be at least 8");
    return AnnulusGrid(r1, r2, n_r, n_theta);
}

inline void read_resolution(ConfigReader& rd, int& n_r, int& n_theta) {
    n_r = rd.integer("grid", "n_r", n_r);
    n_theta = rd.integer("grid", "n_theta", n_theta);
    if (n_r < 3) throw ConfigError("grid.n_r", "n_r must be at least 3");
    if (n_theta < 8) throw ConfigError("grid.n_theta", "n_theta must be at least 8");
}

// Preset or expression for one boundary circle of radius r.
inline std::function<double(double)> boundary_side(const std::string& key, const std::string& spec,
                                                   double r, double cone_c) {
    std::istringstream words(spec);
    std::string head, arg, extra;
    words >> head >> arg >> extra;
    auto number_arg = [&](const char* preset) {
        if (arg.empty() || !extra.empty())
            throw ConfigError(key, std::string("preset '") + preset + "' takes one number");
        try {
            return evaluate_constant(arg);
        } catch (const ExpressionError& e) {
            throw ConfigError(key, e.what());
        }
    };
    if (head == "const") {
        const double v = number_arg("const");
        return [v](double) { return v; };
    }
    if (head == "cos" && arg.empty()) return [](double t) { return std::cos(t); };
    if (head == "sin3" && arg.empty()) return [](double t) { return std::sin(3.0 * t); };
    if (head == "separated") {
        const double k = number_arg("separated");
        const double amp = std::pow(r, k / cone_c);
        return [amp, k](double t) { return amp * std::cos(k * t); };
    }
    try {
        const auto e = Expression::parse(spec);
        return [e, r](double t) { return e(r, t); };
    } catch (const ExpressionError& err) {
        throw ConfigError(key, err.what());
    }
}

inline BoundaryData read_boundary(ConfigReader& rd, const AnnulusGrid& g, double cone_c) {
    return {boundary_side("boundary.inner", rd.text("boundary", "inner"), g.r1(), cone_c),
            boundary_side("boundary.outer", rd.text("boundary", "outer"), g.r2(), cone_c)};
}

inline void require_increasing(const std::string& key, const std::vector<double>& v,
                               std::size_t min_size) {
    if (v.size() < min_size)
        throw ConfigError(key, "need at least " + std::to_string(min_size) + " values");
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k] > v[k - 1])) throw ConfigError(key, "values must increase");
}

// ---------------------------------------------------------------------------

struct PreparedRun {
    std::string experiment;
    std::string label;  // output subdirectory
    fs::path outdir;
    std::function<ExperimentReport()> body;
};

// Validates every key and precondition that can be checked without running.
inline PreparedRun prepare(const Config& cfg) {
    ConfigReader rd(cfg);
    PreparedRun run;
    run.experiment = rd.text("experiment", "name");
    run.label = rd.text("experiment", "label", run.experiment);
    run.outdir = rd.text("experiment", "outdir", "out");
    if (run.label.empty() || run.label.find('/') != std::string::npos || run.label == "." ||
        run.label == "..")
        throw ConfigError("experiment.label", "must be a plain directory name");
    const std::string& ex = run.experiment;

    if (ex == "liouville") {
        const auto mc = read_metric(rd);
        const auto profile = read_profile(rd);
        const auto u = read_field(rd, mc.cone_c);
        const auto g = read_grid(rd);
        const auto deltas = rd.numbers("params", "deltas");
        for (double d : deltas)
            if (!(d > 0.0)) throw ConfigError("params.deltas", "deltas must be positive");
        if (!(g.r1() > profile.a)) throw ConfigError("grid.r1", "must exceed the profile start a");
        LiouvilleOptions opt;
        opt.n_r = g.n_r();
        opt.n_theta = g.n_theta();
        opt.expect_barrier_failure = rd.flag("params", "expect_barrier_failure", false);
        opt.slack = rd.number("tolerances", "slack", opt.slack);
        opt.subharmonic_tol = rd.number("tolerances", "subharmonic_tol", opt.subharmonic_tol);
        run.body = [=] {
            return liouville_barrier_experiment(mc.metric, profile, u, g.r1(), g.r2(), deltas, opt);
        };
    } else if (ex == "greene_wu") {
        const double r0 = rd.number("params", "r0");
        if (!(r0 >= 1.0)) throw ConfigError("params.r0", "requires r0 >= 1");
        const auto radii = rd.numbers("params", "radii", {});
        for (double r : radii)
            if (!(r > r0) || !(r > 1.0)) throw ConfigError("params.radii", "radii must exceed r0 and 1");
        GreeneWuOptions opt;
        opt.R_eval = rd.number("params", "R_eval", opt.R_eval);
        if (!(opt.R_eval > std::numbers::e * r0)) throw ConfigError("params.R_eval", "must exceed e r0");
        opt.quadrature_tol = rd.number("tolerances", "quadrature_tol", opt.quadrature_tol);
        opt.ratio_tol = rd.number("tolerances", "ratio_tol", opt.ratio_tol);
        run.body = [=] { return greene_wu_experiment(r0, radii, opt); };
    } else if (ex == "three_circles") {
        const auto mc = read_metric(rd);
        const auto g = read_grid(rd);
        if (!(g.r1() > 1.0)) throw ConfigError("grid.r1", "three circles requires r1 > 1");
        const auto bc = read_boundary(rd, g, mc.cone_c);
        ThreeCirclesOptions opt;
        opt.solver_tol = rd.number("tolerances", "solver_tol", opt.solver_tol);
        opt.slack = rd.number("tolerances", "slack", opt.slack);
        run.body = [=] { return three_circles_experiment(mc.metric, g, bc, opt); };
    } else if (ex == "parabolicity") {
        const auto profile = read_profile(rd);
        const double r_probe = rd.number("params", "r_probe");
        const double R1 = rd.number("params", "R1");
        const auto R2s = rd.numbers("params", "R2_list");
        require_increasing("params.R2_list", R2s, 2);
        if (!(R1 > profile.a)) throw ConfigError("params.R1", "must exceed the profile start a");
        if (!(r_probe >= R1)) throw ConfigError("params.r_probe", "must be at least R1");
        if (!(R2s.front() >= r_probe)) throw ConfigError("params.R2_list", "must be at least r_probe");
        ParabolicityOptions opt;
        opt.threshold = rd.number("params", "threshold", opt.threshold);
        opt.window = rd.number("params", "window", opt.window);
        if (rd.has("params", "expect")) {
            const std::string e = rd.text("params", "expect");
            bool matched = false;
            for (Trend t : {Trend::parabolic, Trend::non_parabolic, Trend::inconclusive})
                if (e == to_string(t)) {
                    opt.expected = t;
                    matched = true;
                }
            if (!matched) throw ConfigError("params.expect", "unknown classification '" + e + "'");
        }
        run.body = [=] { return parabolicity_experiment(profile, r_probe, R1, R2s, opt); };
    } else if (ex == "gap") {
        const double c = rd.number("params", "c");
        if (!(c > 0.0 && c <= 1.0)) throw ConfigError("params.c", "cone parameter must lie in (0, 1]");
        const auto R_list = rd.numbers("params", "R_list");
        require_increasing("params.R_list", R_list, 3);
        if (!(R_list.front() > 1.0)) throw ConfigError("params.R_list", "radii must exceed 1");
        GapOptions opt;
        read_resolution(rd, opt.n_r, opt.n_theta);
        opt.solver_tol = rd.number("tolerances", "solver_tol", opt.solver_tol);
        opt.exponent_tol = rd.number("tolerances", "exponent_tol", opt.exponent_tol);
        run.body = [=] { return gap_experiment(c, R_list, opt); };
    } else if (ex == "bochner") {
        const auto mc = read_metric(rd);
        const auto u = read_field(rd, mc.cone_c);
        const auto rs = rd.numbers("params", "points_r");
        const auto ts = rd.numbers("params", "points_theta", {0.0, 0.7, 2.1, 4.0});
        std::vector<Point> pts;
        for (double r : rs) {
            if (!(r > 0.0) || !mc.metric.contains(r))
                throw ConfigError("params.points_r", "radius outside the metric domain");
            for (double t : ts) pts.emplace_back(r, t);
        }
        DerivativeOptions opt;
        const std::string mode = rd.text("params", "mode", "automatic");
        if (mode == "automatic") opt.mode = DerivativeMode::automatic;
        else if (mode == "analytic") opt.mode = DerivativeMode::analytic;
        else if (mode == "nested_fd") opt.mode = DerivativeMode::nested_fd;
        else throw ConfigError("params.mode", "expected automatic, analytic or nested_fd");
        opt.step_scale = rd.number("params", "step_scale", opt.step_scale);
        run.body = [=] { return bochner_experiment(mc.metric, u, pts, opt); };
    } else if (ex == "yau") {
        const auto mc = read_metric(rd);
        const double R = rd.number("params", "R");
        if (!(R > 0.0)) throw ConfigError("params.R", "ball radius must be positive");
        const auto As = rd.numbers("params", "A_list");
        for (double A : As)
            if (!(A > R)) throw ConfigError("params.A_list", "A must exceed R so u stays positive");
        const bool with_const = rd.flag("params", "include_constant", true);
        YauOptions opt;
        read_resolution(rd, opt.n_r, opt.n_theta);
        if (opt.n_theta % 2 != 0) throw ConfigError("grid.n_theta", "must be even");
        opt.tol = rd.number("tolerances", "tol", opt.tol);
        const bool flat = mc.metric.name == "flat";
        std::vector<YauMember> fam;
        for (double A : As) {
            YauMember m{"A" + short_number(A), cat::affine(A), R, std::nullopt};
            if (flat) m.expected = 1.0 / (A - R / 2.0);
            fam.push_back(std::move(m));
        }
        if (with_const) fam.push_back({"const", cat::constant(1.0), R, 0.0});
        run.body = [=] { return yau_experiment(mc.metric, fam, opt); };
    } else {
        throw ConfigError("experiment.name", "unknown experiment '" + ex + "'");
    }
    rd.reject_unused();
    return run;
}

inline std::string sanitize(std::string s) {
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
    return s;
}

struct RunOutcome {
    int status = kPass;
    fs::path dir;
    std::string message;
};

inline void write_file(const fs::path& p, const std::function<void(std::ostream&)>& body) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + p.string());
    body(os);
}

inline RunOutcome execute(const PreparedRun& run) {
    RunOutcome out;
    out.dir = run.outdir / run.label;
    fs::remove_all(out.dir);
    fs::create_directories(out.dir);
    try {
        const ExperimentReport rep = run.body();
        write_file(out.dir / "report.txt", [&](std::ostream& os) { write_report_text(os, rep); });
        write_file(out.dir / "assertions.csv",
                   [&](std::ostream& os) { write_assertions_csv(os, rep); });
        for (const auto& s : rep.series)
            write_file(out.dir / ("series_" + sanitize(s.name) + ".csv"),
                       [&](std::ostream& os) { write_xy_csv(os, s.points); });
        if (rep.field)
            write_file(out.dir / "field.csv", [&](std::ostream& os) { write_field_csv(os, *rep.field); });
        if (!rep.verdict()) {
            out.status = kFailure;
            std::string failed;
            for (const auto& a : rep.assertions)
                if (!a.pass) failed += a.name + '\n';
            write_file(out.dir / "FAILED", [&](std::ostream& os) { os << failed; });
            out.message = "assertion failure";
        }
    } catch (const std::exception& e) {
        out.status = kFailure;
        out.message = e.what();
        write_file(out.dir / "report.txt", [&](std::ostream& os) {
            os << "experiment: " << run.experiment << "\nverdict: ERROR\nerror: " << e.what() << '\n';
        });
        write_file(out.dir / "FAILED", [&](std::ostream& os) { os << e.what() << '\n'; });
    }
    return out;
}

// Expands directories into their *.cfg files, sorted by name.
inline std::vector<fs::path> collect_configs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".cfg") found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

struct RunRequest {
    std::vector<std::string> inputs;
    std::string outdir_override;
    int jobs = 1;
};

// Every config is validated before anything runs; then runs go out on up to
// `jobs` threads and results are printed in input order.
inline int run_configs(const RunRequest& req, std::ostream& out, std::ostream& err) {
    const auto paths = collect_configs(req.inputs);
    if (paths.empty()) {
        err << "no config files given\n";
        return kConfigError;
    }
    std::vector<PreparedRun> runs;
    for (const auto& p : paths) {
        try {
            runs.push_back(prepare(load_config(p.string())));
            if (!req.outdir_override.empty()) runs.back().outdir = req.outdir_override;
        } catch (const ConfigError& e) {
            err << p.string() << ": config error: " << e.what() << '\n';
            return kConfigError;
        }
    }
    for (std::size_t a = 0; a < runs.size(); ++a)
        for (std::size_t b = a + 1; b < runs.size(); ++b)
            if (runs[a].outdir / runs[a].label == runs[b].outdir / runs[b].label) {
                err << paths[b].string() << ": config error: experiment.label: output directory "
                    << (runs[b].outdir / runs[b].label).string() << " already used by "
                    << paths[a].string() << '\n';
                return kConfigError;
            }

    std::vector<RunOutcome> results(runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < runs.size(); k = next++) results[k] = execute(runs[k]);
    };
    const int n = std::clamp(req.jobs, 1, static_cast<int>(runs.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int status = kPass;
    for (std::size_t k = 0; k < runs.size(); ++k) {
        const auto& r = results[k];
        out << (r.status == kPass ? "PASS " : "FAIL ") << runs[k].label << " -> " << r.dir.string();
        if (!r.message.empty()) out << " (" << r.message << ')';
        out << '\n';
        if (r.status != kPass) status = kFailure;
    }
    return status;
}

inline int validate_configs(const std::vector<std::string>& inputs, std::ostream& out,
                            std::ostream& err) {
    const auto paths = collect_configs(inputs);
    if (paths.empty()) {
        err << "no config files given\n";
        return kConfigError;
    }
    int status = kPass;
    for (const auto& p : paths) {
        try {
            const auto cfg = load_config(p.string());
            const auto run = prepare(cfg);
            out << "ok " << p.string() << " (" << run.experiment << ")\n";
        } catch (const ConfigError& e) {
            err << p.string() << ": config error: " << e.what() << '\n';
            status = kConfigError;
        }
    }
    return status;
}

}  // namespace warplab::cli
