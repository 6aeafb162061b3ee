#pragma once
// Reproducible numerical experiments, one per Liouville/parabolicity/gap
// phenomenon. Each returns an ExperimentReport whose verdict is the
// conjunction of its assertions.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "warplab/catalog.hpp"
#include "warplab/csv.hpp"
#include "warplab/geometry.hpp"
#include "warplab/pde.hpp"
#include "warplab/radialcomp.hpp"

namespace warplab {

enum class Comparison { near, at_most, at_least };

struct Assertion {
    std::string name;        // identifier, no commas
    std::string description;
    std::string provenance;  // the result this assertion exercises
    Comparison kind = Comparison::near;
    double expected = 0.0;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::deque<Series> series;
    std::vector<Assertion> assertions;
    std::vector<std::string> notes;
    std::optional<ScalarField> field;
    double runtime_seconds = 0.0;

    bool verdict() const {
        return std::all_of(assertions.begin(), assertions.end(),
                           [](const Assertion& a) { return a.pass; });
    }

    void param(std::string key, std::string value) {
        parameters.emplace_back(std::move(key), std::move(value));
    }
    void param(std::string key, double value) { param(std::move(key), format_g17(value)); }

    Series& add_series(std::string n) {
        series.push_back({std::move(n), {}});
        return series.back();
    }
    const Series* find_series(const std::string& n) const {
        for (const auto& s : series)
            if (s.name == n) return &s;
        return nullptr;
    }
    const Assertion* find_assertion(const std::string& n) const {
        for (const auto& a : assertions)
            if (a.name == n) return &a;
        return nullptr;
    }

    const Assertion& check(std::string name, std::string description, std::string provenance,
                           Comparison kind, double expected, double observed, double tolerance) {
        bool pass = false;
        switch (kind) {
            case Comparison::near: pass = std::fabs(observed - expected) <= tolerance; break;
            case Comparison::at_most: pass = observed <= expected + tolerance; break;
            case Comparison::at_least: pass = observed >= expected - tolerance; break;
        }
        assertions.push_back({std::move(name), std::move(description), std::move(provenance), kind,
                              expected, observed, tolerance, pass});
        return assertions.back();
    }
};

inline const char* to_string(Comparison c) {
    switch (c) {
        case Comparison::near: return "~=";
        case Comparison::at_most: return "<=";
        case Comparison::at_least: return ">=";
    }
    return "?";
}

inline std::string short_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// Human-readable summary. Runtime is the only nondeterministic line.
inline void write_report_text(std::ostream& os, const ExperimentReport& rep,
                              bool include_runtime = true) {
    os << "experiment: " << rep.name << '\n';
    os << "verdict: " << (rep.verdict() ? "PASS" : "FAIL") << '\n';
    if (include_runtime) os << "runtime_s: " << short_number(rep.runtime_seconds) << '\n';
    os << "\nparameters:\n";
    for (const auto& [k, v] : rep.parameters) os << "  " << k << " = " << v << '\n';
    os << "\nassertions:\n";
    for (const auto& a : rep.assertions) {
        os << "  [" << (a.pass ? "pass" : "FAIL") << "] " << a.name << ": observed "
           << format_g17(a.observed) << ' ' << to_string(a.kind) << ' ' << format_g17(a.expected)
           << " (tol " << format_g17(a.tolerance) << ")\n";
        os << "         " << a.description << '\n';
        os << "         via " << a.provenance << '\n';
    }
    if (!rep.series.empty()) {
        os << "\nseries:\n";
        for (const auto& s : rep.series) os << "  " << s.name << " (" << s.points.size() << " points)\n";
    }
    if (!rep.notes.empty()) {
        os << "\nnotes:\n";
        for (const auto& n : rep.notes) os << "  " << n << '\n';
    }
}

// name,expected,observed,tolerance,pass
inline void write_assertions_csv(std::ostream& os, const ExperimentReport& rep) {
    os << "name,expected,observed,tolerance,pass\n";
    for (const auto& a : rep.assertions)
        os << a.name << ',' << format_g17(a.expected) << ',' << format_g17(a.observed) << ','
           << format_g17(a.tolerance) << ',' << (a.pass ? "true" : "false") << '\n';
}

namespace detail {

template <class Fn>
ExperimentReport timed(Fn&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep = body();
    rep.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// h(r_i) - h(r_0) at every radius of the grid, accumulated row by row.
inline std::vector<double> harmonic_on_rows(const RadialProfile& profile, const AnnulusGrid& g,
                                            double tol) {
    std::vector<double> h(static_cast<std::size_t>(g.n_r()), 0.0);
    for (int i = 1; i < g.n_r(); ++i)
        h[static_cast<std::size_t>(i)] =
            h[static_cast<std::size_t>(i - 1)] +
            integrate([&profile](double s) { return 1.0 / profile.value(s); }, g.radius(i - 1),
                      g.radius(i), tol / g.n_r());
    return h;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Liouville barrier: w = u - delta h - M(u; R1) <= 0 on the annulus when u is
// subharmonic and h is the (superharmonic) comparison harmonic.

struct LiouvilleOptions {
    int n_r = 64;
    int n_theta = 128;
    double slack = 1e-9;
    double subharmonic_tol = 1e-8;
    int certificate_rays = 8;
    int certificate_samples = 64;
    // The field grows like h itself, so the barrier must fail.
    bool expect_barrier_failure = false;
};

inline ExperimentReport liouville_barrier_experiment(const WarpMetric& metric,
                                                     const RadialProfile& profile,
                                                     const FieldSampler& u, double R1, double R2,
                                                     const std::vector<double>& deltas,
                                                     const LiouvilleOptions& opt = {}) {
    return detail::timed([&] {
        if (deltas.empty()) throw DomainError("liouville: need at least one delta");
        for (double d : deltas)
            if (!(d > 0.0)) throw DomainError("liouville: deltas must be positive");
        const AnnulusGrid g(R1, R2, opt.n_r, opt.n_theta);
        g.require_inside(metric);

        ExperimentReport rep;
        rep.name = "liouville";
        rep.param("metric", metric.name);
        rep.param("profile", profile.label);
        rep.param("field", u.name);
        rep.param("R1", R1);
        rep.param("R2", R2);
        rep.param("n_r", static_cast<double>(opt.n_r));
        rep.param("n_theta", static_cast<double>(opt.n_theta));

        double worst_sub = 0.0;
        for (int i = 0; i < g.n_r(); ++i)
            for (int j = 0; j < g.n_theta(); ++j)
                worst_sub = std::min(worst_sub,
                                     laplace_beltrami(metric, u, Point(g.radius(i), g.angle(j))));
        if (worst_sub < -opt.subharmonic_tol)
            throw PreconditionError("liouville: field '" + u.name +
                                    "' is not subharmonic (min Lap u = " +
                                    std::to_string(worst_sub) + ")");

        const auto cert = subharmonic_h_certificate(metric, profile, R1, R2, opt.certificate_rays,
                                                    opt.certificate_samples);
        rep.param("certificate_verdict", to_string(cert.verdict));
        rep.param("certificate_curvature_margin", cert.curvature_margin);
        rep.param("certificate_max_laplacian_h", cert.laplacian_h_max);
        if (cert.verdict != Verdict::holds)
            throw PreconditionError(std::string("liouville: comparison certificate ") +
                                    to_string(cert.verdict) + " (curvature margin " +
                                    std::to_string(cert.curvature_margin) + ", initial margin " +
                                    std::to_string(cert.initial_margin) + ")");

        const auto sampled = ScalarField::sample(g, u.value);
        const double M1 = circle_max_abs(sampled, 0);
        rep.param("M_u_R1", M1);
        const auto h = detail::harmonic_on_rows(profile, g, 1e-12);

        auto& s = rep.add_series("max_w");
        for (double delta : deltas) {
            double max_w = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < g.n_r(); ++i)
                for (int j = 0; j < g.n_theta(); ++j)
                    max_w = std::max(
                        max_w, sampled(i, j) - delta * h[static_cast<std::size_t>(i)] - M1);
            s.points.emplace_back(delta, max_w);
            if (opt.expect_barrier_failure)
                rep.check("barrier_positive_delta_" + short_number(delta),
                          "u - delta h - M(u;R1) exceeds 0 somewhere: u grows like h",
                          "Liouville barrier (hypothesis liminf M/h = 0 is necessary)",
                          Comparison::at_least, opt.slack, max_w, 0.0);
            else
                rep.check("barrier_nonpositive_delta_" + short_number(delta),
                          "max over the annulus of u - delta h - M(u;R1)",
                          "Liouville barrier with comparison harmonic h", Comparison::at_most,
                          0.0, max_w, opt.slack);
        }
        rep.notes.push_back("max_w vs delta on a finite annulus: a trend toward the delta -> 0 "
                            "squeeze, not a proof of the liminf hypothesis");
        return rep;
    });
}

// ---------------------------------------------------------------------------
// Greene-Wu corollary with z = r log(r/r0).

struct GreeneWuOptions {
    double R_eval = std::exp(std::exp(2.0));
    double quadrature_tol = 1e-3;
    double ratio_tol = 0.15;
};

inline ExperimentReport greene_wu_experiment(double r0, const std::vector<double>& radii,
                                             const GreeneWuOptions& opt = {}) {
    return detail::timed([&] {
        if (!(r0 >= 1.0)) throw DomainError("greene_wu: requires r0 >= 1");
        for (double r : radii)
            if (!(r > r0) || !(r > 1.0)) throw DomainError("greene_wu: radii must exceed r0 and 1");
        const double start = std::numbers::e * r0;
        if (!(opt.R_eval > start)) throw DomainError("greene_wu: R_eval must exceed e r0");

        ExperimentReport rep;
        rep.name = "greene_wu";
        rep.param("r0", r0);
        rep.param("R_eval", opt.R_eval);

        auto& lhs = rep.add_series("minus_z2_over_z");
        auto& rhs = rep.add_series("critical_curvature");
        double worst = -std::numeric_limits<double>::infinity();
        for (double r : radii) {
            const double a = -1.0 / (r * r * std::log(r / r0));
            const double b = -1.0 / (r * r * std::log(r));
            lhs.points.emplace_back(r, a);
            rhs.points.emplace_back(r, b);
            worst = std::max(worst, a - b);
        }
        if (!radii.empty())
            rep.check("curvature_chain", "max over radii of -1/(r^2 log(r/r0)) + 1/(r^2 log r)",
                      "Greene-Wu corollary: -z''/z <= -1/(r^2 log r)", Comparison::at_most, 0.0,
                      worst, 1e-15);

        const auto profile = catalog::milnor_profile(r0);
        auto h_of = [&](double R) { return comparison_harmonic(profile, start, R, 1e-10); };
        const double h = h_of(opt.R_eval);
        const double closed = std::log(std::log(opt.R_eval / r0));
        const double loglog = std::log(std::log(opt.R_eval));
        rep.check("h_quadrature", "h(R) from e r0 against log log(R/r0)",
                  "comparison harmonic h = int dr/z", Comparison::near, closed, h,
                  opt.quadrature_tol);
        rep.check("h_over_loglog", "h(R) / log log R at R_eval (finite-R trend)",
                  "Greene-Wu corollary: growth o(log log r) forces constancy", Comparison::near,
                  1.0, h / loglog, opt.ratio_tol);

        auto& ratio = rep.add_series("h_over_loglog");
        for (double k = 1.0; k <= 3.0 + 1e-12; k += 0.25) {
            const double R = std::exp(std::exp(k));
            if (R <= start) continue;
            ratio.points.emplace_back(R, h_of(R) / std::log(std::log(R)));
        }
        return rep;
    });
}

// ---------------------------------------------------------------------------
// Three circles: M_r <= phi(r) for a solved harmonic field.

struct ThreeCirclesOptions {
    double solver_tol = 1e-10;
    double slack = 1e-6;
};

inline ExperimentReport three_circles_experiment(const WarpMetric& metric, const AnnulusGrid& g,
                                                 const BoundaryData& bc,
                                                 const ThreeCirclesOptions& opt = {}) {
    return detail::timed([&] {
        if (!(g.r1() > 1.0)) throw DomainError("three_circles: requires r1 > 1");
        ExperimentReport rep;
        rep.name = "three_circles";
        rep.param("metric", metric.name);
        rep.param("r1", g.r1());
        rep.param("r2", g.r2());
        rep.param("n_r", static_cast<double>(g.n_r()));
        rep.param("n_theta", static_cast<double>(g.n_theta()));

        const auto op = assemble(metric, g);
        const auto u = solve_dirichlet(op, bc, opt.solver_tol);
        const int last = g.n_r() - 1;
        const double M1 = circle_max_signed(u, 0), M2 = circle_max_signed(u, last);
        rep.param("M_r1", M1);
        rep.param("M_r2", M2);
        auto& sm = rep.add_series("M_r");
        auto& sp = rep.add_series("phi");
        auto& sd = rep.add_series("M_minus_phi");
        double worst = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= last; ++i) {
            const double r = g.radius(i);
            const double M = circle_max_signed(u, i);
            const double phi = three_circles_barrier(M1, M2, g.r1(), g.r2(), r);
            sm.points.emplace_back(r, M);
            sp.points.emplace_back(r, phi);
            sd.points.emplace_back(r, M - phi);
            if (i > 0 && i < last) worst = std::max(worst, M - phi);
        }
        rep.check("M_r_below_phi", "max over interior rows of M_r - phi(r)",
                  "three circles theorem (log log interpolation of circle maxima)",
                  Comparison::at_most, 0.0, worst, opt.slack);
        const double res_tol = 10.0 * opt.solver_tol *
                               (1.0 + std::max(circle_max_abs(u, 0), circle_max_abs(u, last)));
        const auto mp = max_principle_check(op, u, res_tol);
        rep.check("max_principle", "interior extrema minus boundary extrema",
                  "strong maximum principle (discrete)", Comparison::at_most, 0.0,
                  mp.worst_violation, mp.slack);
        if (op.warning().flagged)
            rep.notes.push_back("stencil loses diagonal dominance at some node");
        rep.field = u;
        return rep;
    });
}

// ---------------------------------------------------------------------------
// Parabolicity via harmonic measure of receding outer circles.

enum class Trend { parabolic, non_parabolic, inconclusive };

inline const char* to_string(Trend t) {
    switch (t) {
        case Trend::parabolic: return "parabolic-trend";
        case Trend::non_parabolic: return "non-parabolic-trend";
        case Trend::inconclusive: return "inconclusive";
    }
    return "?";
}

// Parabolic: strictly decreasing and below threshold at the end. Non-parabolic:
// last two values within `window` of each other and above threshold.
inline Trend classify_parabolicity(const std::vector<double>& measures, double threshold,
                                   double window) {
    if (measures.size() < 2) return Trend::inconclusive;
    const double last = measures.back(), prev = measures[measures.size() - 2];
    if (last > threshold && std::fabs(last - prev) <= window) return Trend::non_parabolic;
    bool decreasing = true;
    for (std::size_t k = 1; k < measures.size(); ++k)
        if (!(measures[k] < measures[k - 1])) decreasing = false;
    if (decreasing && last < threshold) return Trend::parabolic;
    return Trend::inconclusive;
}

struct ParabolicityOptions {
    double threshold = 0.05;
    double window = 1e-4;
    std::optional<Trend> expected;
};

inline ExperimentReport parabolicity_experiment(const RadialProfile& profile, double r_probe,
                                                double R1, const std::vector<double>& R2_sequence,
                                                const ParabolicityOptions& opt = {}) {
    return detail::timed([&] {
        if (R2_sequence.size() < 2) throw DomainError("parabolicity: need at least two R2 values");
        for (std::size_t k = 0; k < R2_sequence.size(); ++k) {
            if (!(R2_sequence[k] > r_probe)) throw DomainError("parabolicity: R2 must exceed r_probe");
            if (k > 0 && !(R2_sequence[k] > R2_sequence[k - 1]))
                throw DomainError("parabolicity: R2 sequence must increase");
        }
        ExperimentReport rep;
        rep.name = "parabolicity";
        rep.param("profile", profile.label);
        rep.param("r_probe", r_probe);
        rep.param("R1", R1);
        rep.param("threshold", opt.threshold);
        rep.param("window", opt.window);
        auto& s = rep.add_series("harmonic_measure");
        std::vector<double> values;
        double worst_increase = -std::numeric_limits<double>::infinity();
        for (double R2 : R2_sequence) {
            const double v = harmonic_measure(profile, r_probe, R1, R2);
            if (!values.empty()) worst_increase = std::max(worst_increase, v - values.back());
            values.push_back(v);
            s.points.emplace_back(R2, v);
        }
        const Trend trend = classify_parabolicity(values, opt.threshold, opt.window);
        rep.param("classification", to_string(trend));
        rep.check("nonincreasing_in_R2", "largest increase of the harmonic measure along R2",
                  "harmonic measure monotonicity (maximum principle)", Comparison::at_most, 0.0,
                  worst_increase, 1e-12);
        if (opt.expected)
            rep.check(std::string("classified_") + to_string(*opt.expected),
                      std::string("classification is ") + to_string(*opt.expected) + " (got " +
                          to_string(trend) + ")",
                      "parabolicity criterion (receding harmonic measure)", Comparison::near, 1.0,
                      trend == *opt.expected ? 1.0 : 0.0, 0.0);
        rep.notes.push_back("finite R2 sequence: classification is a trend, not a proof");
        return rep;
    });
}

// ---------------------------------------------------------------------------
// Gap witness on the cone f = c r: u = r^(1/c) cos(theta) is the slowest
// superlinear harmonic, so no growth strictly between r and r^(1/c).

struct GapOptions {
    int n_r = 64;
    int n_theta = 128;
    double solver_tol = 1e-10;
    double exponent_tol = 0.05;
};

inline ExperimentReport gap_experiment(double c, const std::vector<double>& R_list,
                                       const GapOptions& opt = {}) {
    return detail::timed([&] {
        if (!(c > 0.0 && c <= 1.0)) throw DomainError("gap: cone parameter must lie in (0, 1]");
        if (R_list.size() < 3) throw DomainError("gap: need at least 3 radii");
        for (std::size_t k = 0; k < R_list.size(); ++k) {
            if (!(R_list[k] > 1.0)) throw DomainError("gap: radii must exceed 1");
            if (k > 0 && !(R_list[k] > R_list[k - 1])) throw DomainError("gap: radii must increase");
        }
        const double p = 1.0 / c;
        const double R_max = R_list.back();
        const auto metric = catalog::cone(c);
        const AnnulusGrid g(1.0, R_max, opt.n_r, opt.n_theta);
        auto exact = [p](double r, double t) { return std::pow(r, p) * std::cos(t); };
        const BoundaryData bc{std::function<double(double)>([&](double t) { return exact(1.0, t); }),
                              std::function<double(double)>([&](double t) { return exact(R_max, t); })};
        const auto op = assemble(metric, g);
        const auto u = solve_dirichlet(op, bc, opt.solver_tol);

        ExperimentReport rep;
        rep.name = "gap";
        rep.param("c", c);
        rep.param("n_r", static_cast<double>(opt.n_r));
        rep.param("n_theta", static_cast<double>(opt.n_theta));
        rep.param("R_max", R_max);

        auto& s = rep.add_series("M_r");
        std::vector<std::pair<double, double>> samples;
        for (double R : R_list) {
            double M = -std::numeric_limits<double>::infinity();
            for (int j = 0; j < g.n_theta(); ++j) M = std::max(M, radial_interpolate(u, R, j));
            samples.emplace_back(R, M);
            s.points.emplace_back(R, M);
        }
        const double exponent = growth_exponent(samples);
        rep.param("growth_exponent", exponent);
        rep.check("growth_exponent", "least-squares slope of log M_r against log r",
                  "gap theorem witness: separated harmonic r^(1/c) cos(theta) on the cone",
                  Comparison::near, p, exponent, opt.exponent_tol);
        const auto mp = max_principle_check(op, u, 10.0 * opt.solver_tol * (1.0 + std::pow(R_max, p)));
        rep.check("max_principle", "interior extrema minus boundary extrema",
                  "strong maximum principle (discrete)", Comparison::at_most, 0.0,
                  mp.worst_violation, mp.slack);
        rep.notes.push_back("the cone is flat (K = 0) on the annulus; its slowest superlinear "
                            "harmonic grows like r^(1/c), exhibiting the gap above linear growth");
        rep.field = u;
        return rep;
    });
}

// ---------------------------------------------------------------------------
// Bochner identities at sample points.

inline ExperimentReport bochner_experiment(const WarpMetric& metric, const FieldSampler& u,
                                           const std::vector<Point>& points,
                                           const DerivativeOptions& opt = {}) {
    return detail::timed([&] {
        if (points.empty()) throw DomainError("bochner: need sample points");
        const bool analytic = detail::use_analytic(u, opt);
        const double tol = analytic ? 1e-8 : 1e-5;
        ExperimentReport rep;
        rep.name = "bochner";
        rep.param("metric", metric.name);
        rep.param("field", u.name);
        rep.param("derivatives", analytic ? "analytic" : "nested_fd");
        if (!analytic) rep.param("step_scale", opt.step_scale);

        auto& l2 = rep.add_series("bochner2_lhs");
        auto& r2 = rep.add_series("bochner2_rhs");
        auto& l1 = rep.add_series("bochner_lhs");
        double worst1 = 0.0, worst2 = 0.0;
        double min_lhs2 = std::numeric_limits<double>::infinity();
        double min_K = std::numeric_limits<double>::infinity();
        for (const auto& p : points) {
            const auto t1 = bochner_terms(metric, u, p, opt);
            const auto t2 = bochner2_terms(metric, u, p, opt);
            worst1 = std::max(worst1, std::fabs(t1.residual()));
            worst2 = std::max(worst2, std::fabs(t2.residual()));
            min_lhs2 = std::min(min_lhs2, t2.lhs);
            min_K = std::min(min_K, gaussian_curvature(metric, p));
            l1.points.emplace_back(p.r(), t1.lhs);
            l2.points.emplace_back(p.r(), t2.lhs);
            r2.points.emplace_back(p.r(), t2.rhs);
        }
        rep.check("bochner_residual", "max |(1/2) Lap |grad u|^2 - |Hess u|^2 - K |grad u|^2|",
                  "Bochner identity for harmonic u", Comparison::at_most, 0.0, worst1, tol);
        rep.check("bochner2_residual",
                  "max |Lap log(1+|grad u|^2) - (2|Hess u|^2 + 2K|grad u|^2(1+|grad u|^2))/(1+|grad u|^2)^2|",
                  "log-gradient Bochner identity for harmonic u on a surface", Comparison::at_most,
                  0.0, worst2, tol);
        rep.param("min_curvature", min_K);
        if (min_K >= 0.0)
            rep.check("log_grad_subharmonic", "min Lap log(1+|grad u|^2) over samples",
                      "log-gradient identity with K >= 0: log(1+|grad u|^2) is subharmonic",
                      Comparison::at_least, 0.0, min_lhs2, tol);
        else
            rep.notes.push_back("negative curvature at some sample: subharmonicity of "
                                "log(1+|grad u|^2) not asserted");
        return rep;
    });
}

// ---------------------------------------------------------------------------
// Yau gradient estimate diagnostic: s = R sup_{B_{R/2}} |grad log u|.

struct YauMember {
    std::string label;
    FieldSampler u;
    double R = 1.0;
    std::optional<double> expected;  // closed-form s, when known
};

struct YauOptions {
    int n_r = 64;
    int n_theta = 128;  // even, so theta = pi is sampled
    double tol = 1e-6;
};

inline ExperimentReport yau_experiment(const WarpMetric& metric,
                                       const std::vector<YauMember>& family,
                                       const YauOptions& opt = {}) {
    return detail::timed([&] {
        if (family.empty()) throw DomainError("yau: empty family");
        if (opt.n_r < 1 || opt.n_theta < 8 || opt.n_theta % 2 != 0)
            throw DomainError("yau: need n_r >= 1 and even n_theta >= 8");
        ExperimentReport rep;
        rep.name = "yau";
        rep.param("metric", metric.name);
        auto& s = rep.add_series("s_by_member");
        double max_s = 0.0;
        for (std::size_t k = 0; k < family.size(); ++k) {
            const auto& m = family[k];
            if (!(m.R > 0.0)) throw DomainError("yau: ball radius must be positive");
            double sup = 0.0;
            for (int i = 1; i <= opt.n_r; ++i) {
                const double r = 0.5 * m.R * i / opt.n_r;
                for (int j = 0; j < opt.n_theta; ++j) {
                    const Point p(r, kTwoPi * j / opt.n_theta);
                    if (gaussian_curvature(metric, p) < -1e-12)
                        throw PreconditionError("yau: metric has negative curvature on the ball");
                    const double v = m.u.value(r, p.theta());
                    if (!(v > 0.0))
                        throw PreconditionError("yau: '" + m.label + "' not positive on the ball");
                    sup = std::max(sup, std::sqrt(gradient_norm_sq(metric, m.u, p)) / v);
                }
            }
            const double value = m.R * sup;
            max_s = std::max(max_s, value);
            s.points.emplace_back(static_cast<double>(k), value);
            rep.param("s_" + m.label, value);
            if (m.expected)
                rep.check("s_" + m.label, "R sup over B_{R/2} of |grad log u|",
                          "Yau gradient estimate (closed-form family member)", Comparison::near,
                          *m.expected, value, opt.tol);
        }
        rep.param("empirical_constant", max_s);
        rep.notes.push_back("empirical_constant is reported only; no absolute C is asserted");
        return rep;
    });
}

}  // namespace warplab
