#pragma once
// Radial comparison tools: the comparison harmonic h(r) = int dr/z, the
// Riccati equation v' = -v^2 + q satisfied by logarithmic derivatives,
// Sturm comparison of f'/f against z'/z, and the three-circles barrier.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warplab/errors.hpp"
#include "warplab/geometry.hpp"

namespace warplab {

using RadialFn = std::function<double(double)>;

// A positive radial function z on (a, inf) with its first two derivatives.
struct RadialProfile {
    std::string label;
    RadialFn z, z_dr, z_drr;
    double a = 0.0;
    // z'/z -> +inf as r -> a+.
    bool blows_up_at_a = false;

    double value(double r) const { return checked(r); }
    // z'/z
    double log_derivative(double r) const { return z_dr(r) / checked(r); }
    // z''/z
    double second_ratio(double r) const { return z_drr(r) / checked(r); }

    static RadialProfile numeric(std::string label, RadialFn z, double a,
                                 bool blows_up_at_a = false) {
        RadialProfile p;
        p.label = std::move(label);
        p.a = a;
        p.blows_up_at_a = blows_up_at_a;
        p.z = z;
        auto step = [a](double r) { return std::min(fd_step(r), 0.5 * (r - a)); };
        p.z_dr = [z, step](double r) {
            const double h = step(r);
            return (z(r + h) - z(r - h)) / (2.0 * h);
        };
        p.z_drr = [z, step](double r) {
            const double h = step(r);
            return (z(r + h) - 2.0 * z(r) + z(r - h)) / (h * h);
        };
        return p;
    }

private:
    double checked(double r) const {
        if (!(r > a)) throw DomainError("profile '" + label + "' evaluated at r=" +
                                        std::to_string(r) + " <= a=" + std::to_string(a));
        const double v = z(r);
        if (!(v > 0.0) || !std::isfinite(v))
            throw DomainError("profile '" + label + "' non-positive at r=" + std::to_string(r));
        return v;
    }
};

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature with an absolute error target.

namespace detail {

struct SimpsonPanel {
    double a, b, fa, fm, fb, whole;
};

inline double adaptive_simpson(const RadialFn& g, const SimpsonPanel& p, double tol, int depth,
                               int max_depth) {
    const double m = 0.5 * (p.a + p.b);
    const double lm = 0.5 * (p.a + m), rm = 0.5 * (m + p.b);
    const double flm = g(lm), frm = g(rm);
    const double left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
    const double right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
    const double delta = left + right - p.whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth)
        throw NumericalError("adaptive Simpson did not converge on [" + std::to_string(p.a) +
                             ", " + std::to_string(p.b) + "]");
    return adaptive_simpson(g, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth + 1, max_depth) +
           adaptive_simpson(g, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth + 1, max_depth);
}

}  // namespace detail

// int_a^b g with |error| <= tol (estimated). Long positive intervals are first
// cut into geometric panels of ratio <= 2 so the refinement stays local.
inline double integrate(const RadialFn& g, double a, double b, double tol,
                        int max_depth = 50) {
    if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
    if (a == b) return 0.0;
    if (b < a) return -integrate(g, b, a, tol, max_depth);
    std::vector<double> cuts{a};
    if (a > 0.0 && b / a > 2.0) {
        const int n = std::min(4096, static_cast<int>(std::ceil(std::log2(b / a))));
        const double ratio = std::pow(b / a, 1.0 / n);
        for (int k = 1; k < n; ++k) cuts.push_back(a * std::pow(ratio, k));
    }
    cuts.push_back(b);
    double sum = 0.0;
    const double panel_tol = tol / static_cast<double>(cuts.size() - 1);
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const double lo = cuts[k], hi = cuts[k + 1];
        const double flo = g(lo), fhi = g(hi), fmid = g(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        sum += detail::adaptive_simpson(g, {lo, hi, flo, fmid, fhi, whole}, panel_tol, 0,
                                        max_depth);
    }
    return sum;
}

// h(r) = int_{r_start}^{r} dsigma / z(sigma).
inline double comparison_harmonic(const RadialProfile& profile, double r_start, double r,
                                  double tol = 1e-10) {
    if (!(r_start > profile.a))
        throw DomainError("comparison_harmonic: r_start must exceed profile start a=" +
                          std::to_string(profile.a));
    if (!(r >= r_start)) throw DomainError("comparison_harmonic: requires r >= r_start");
    if (!(tol > 0.0)) throw DomainError("comparison_harmonic: tol must be positive");
    return integrate([&profile](double s) { return 1.0 / profile.value(s); }, r_start, r, tol);
}

// h' = 1/z and h'' = -z'/z^2, independent of the starting radius.
inline double comparison_harmonic_d1(const RadialProfile& profile, double r) {
    return 1.0 / profile.value(r);
}
inline double comparison_harmonic_d2(const RadialProfile& profile, double r) {
    const double z = profile.value(r);
    return -profile.z_dr(r) / (z * z);
}

// ---------------------------------------------------------------------------
// Riccati equation for logarithmic derivatives: if v = w'/w then v' = -v^2 + w''/w.

struct RiccatiSolution {
    std::vector<double> r;
    std::vector<double> v;
    bool blew_up = false;

    double at_end() const { return v.back(); }
};

inline constexpr double kRiccatiBlowUp = 1e12;

// Classical RK4 with fixed step; the last step is shortened to land on b.
inline RiccatiSolution riccati_integrate(const RadialFn& q, double v0, double a, double b,
                                         double step) {
    if (!(step > 0.0)) throw DomainError("riccati_integrate: step must be positive");
    if (!(b >= a)) throw DomainError("riccati_integrate: requires b >= a");
    if (!std::isfinite(v0) || std::fabs(v0) > kRiccatiBlowUp)
        throw NumericalError("riccati_integrate: initial value blows up at a");
    auto rhs = [&q](double r, double v) { return -v * v + q(r); };
    RiccatiSolution sol;
    const auto n = static_cast<long>(std::ceil((b - a) / step - 1e-9));
    sol.r.reserve(static_cast<std::size_t>(n) + 1);
    sol.v.reserve(static_cast<std::size_t>(n) + 1);
    sol.r.push_back(a);
    sol.v.push_back(v0);
    double v = v0;
    for (long k = 0; k < n; ++k) {
        const double r = a + static_cast<double>(k) * step;
        const double r_next = (k + 1 == n) ? b : a + static_cast<double>(k + 1) * step;
        const double h = r_next - r;
        const double k1 = rhs(r, v);
        const double k2 = rhs(r + 0.5 * h, v + 0.5 * h * k1);
        const double k3 = rhs(r + 0.5 * h, v + 0.5 * h * k2);
        const double k4 = rhs(r + h, v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(v) || std::fabs(v) > kRiccatiBlowUp) {
            if (k == 0) throw NumericalError("riccati_integrate: immediate blow-up at a");
            sol.blew_up = true;
            break;
        }
        sol.r.push_back(r_next);
        sol.v.push_back(v);
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Sturm comparison.

enum class Verdict { holds, hypothesis_violated, conclusion_violated };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::hypothesis_violated: return "hypothesis_violated";
        case Verdict::conclusion_violated: return "conclusion_violated";
    }
    return "?";
}

struct ConclusionSample {
    double r;
    double ratio_f;  // f'/f
    double ratio_z;  // z'/z
    double margin;   // z'/z - f'/f
};

struct ComparisonReport {
    bool hypothesis_curvature_ok = true;
    double curvature_margin = 0.0;  // worst over samples
    bool hypothesis_initial_ok = true;
    double initial_margin = 0.0;
    std::vector<ConclusionSample> conclusion_samples;
    Verdict verdict = Verdict::holds;
    // Certificate only: largest Lap_g h over all rays and samples, and the ray
    // that produced the reported conclusion samples.
    double laplacian_h_max = 0.0;
    double worst_theta = 0.0;

    double worst_conclusion_margin() const {
        double m = 0.0;
        bool first = true;
        for (const auto& s : conclusion_samples) {
            m = first ? s.margin : std::min(m, s.margin);
            first = false;
        }
        return m;
    }
};

// Inequality margin threshold: margin >= -tol * (1 + |scale|).
inline bool within_tie(double margin, double scale, double tol) {
    return margin >= -tol * (1.0 + std::fabs(scale));
}

inline std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        x[static_cast<std::size_t>(k)] = (k + 1 == n) ? b : a + (b - a) * k / (n - 1);
    return x;
}

// Raw comparison: f''/f <= z''/z on (a,b] and f'/f(a) <= z'/z(a) should give
// f'/f <= z'/z on [a,b]. ratio_f = f'/f, curv_f = f''/f along a ray.
inline ComparisonReport sturm_verify(const RadialFn& ratio_f, const RadialFn& curv_f,
                                     const RadialProfile& profile, double a, double b,
                                     int n_samples, double tol = 1e-9) {
    if (n_samples < 2) throw DomainError("sturm_verify: n_samples must be >= 2");
    if (!(b > a)) throw DomainError("sturm_verify: empty interval");
    ComparisonReport rep;
    const auto rs = linspace(a, b, n_samples);
    bool first = true;
    for (double r : rs) {
        const double zf = profile.second_ratio(r), ff = curv_f(r);
        const double m = zf - ff;
        rep.curvature_margin = first ? m : std::min(rep.curvature_margin, m);
        first = false;
        if (!within_tie(m, std::max(std::fabs(zf), std::fabs(ff)), tol))
            rep.hypothesis_curvature_ok = false;
    }
    {
        const double zr = profile.log_derivative(a), fr = ratio_f(a);
        rep.initial_margin = zr - fr;
        rep.hypothesis_initial_ok =
            within_tie(rep.initial_margin, std::max(std::fabs(zr), std::fabs(fr)), tol);
    }
    bool conclusion_ok = true;
    for (double r : rs) {
        const double zr = profile.log_derivative(r), fr = ratio_f(r);
        rep.conclusion_samples.push_back({r, fr, zr, zr - fr});
        if (!within_tie(zr - fr, std::max(std::fabs(zr), std::fabs(fr)), tol))
            conclusion_ok = false;
    }
    if (!rep.hypothesis_curvature_ok || !rep.hypothesis_initial_ok)
        rep.verdict = Verdict::hypothesis_violated;
    else if (!conclusion_ok)
        rep.verdict = Verdict::conclusion_violated;
    return rep;
}

struct CertificateOptions {
    // Radius where f'/f <= z'/z is checked; defaults to the interval start.
    std::optional<double> initial_radius;
    double tol = 1e-9;
};

// Curvature-oriented comparison along `rays` fixed angles: checks
// K_g >= -z''/z and the initial ratio ordering, then the conclusion
// f'/f <= z'/z and its consequence Lap_g h = (f'/f - z'/z)/z <= 0 for the
// radial comparison harmonic h. The aggregated verdict is the worst ray.
inline ComparisonReport subharmonic_h_certificate(const WarpMetric& metric,
                                                  const RadialProfile& profile, double a,
                                                  double b, int rays, int n_samples,
                                                  const CertificateOptions& opt = {}) {
    if (rays < 1) throw DomainError("subharmonic_h_certificate: rays must be >= 1");
    if (n_samples < 2) throw DomainError("subharmonic_h_certificate: n_samples must be >= 2");
    if (!(b > a)) throw DomainError("subharmonic_h_certificate: empty interval");
    const double r_init = opt.initial_radius.value_or(a);
    if (!(r_init > profile.a) || r_init > a)
        throw DomainError("subharmonic_h_certificate: initial radius must lie in (profile.a, a]");

    ComparisonReport agg;
    agg.laplacian_h_max = -std::numeric_limits<double>::infinity();
    bool conclusion_ok = true;
    bool first_ray = true;
    auto curvature_radii = linspace(a, b, n_samples);
    if (r_init < a) curvature_radii.insert(curvature_radii.begin(), r_init);
    const auto rs = linspace(a, b, n_samples);

    for (int k = 0; k < rays; ++k) {
        const double theta = kTwoPi * k / rays;
        double curv_margin = std::numeric_limits<double>::infinity();
        for (double r : curvature_radii) {
            const Point p(r, theta);
            const double K = gaussian_curvature(metric, p);
            const double zf = profile.second_ratio(r);
            const double m = K + zf;
            curv_margin = std::min(curv_margin, m);
            if (!within_tie(m, std::max(std::fabs(K), std::fabs(zf)), opt.tol))
                agg.hypothesis_curvature_ok = false;
        }
        const double zr0 = profile.log_derivative(r_init);
        const double fr0 = mean_curvature_ratio(metric, Point(r_init, theta));
        const double init_margin = zr0 - fr0;
        if (!within_tie(init_margin, std::max(std::fabs(zr0), std::fabs(fr0)), opt.tol))
            agg.hypothesis_initial_ok = false;

        std::vector<ConclusionSample> samples;
        for (double r : rs) {
            const Point p(r, theta);
            const double fr = mean_curvature_ratio(metric, p);
            const double zr = profile.log_derivative(r);
            samples.push_back({r, fr, zr, zr - fr});
            if (!within_tie(zr - fr, std::max(std::fabs(zr), std::fabs(fr)), opt.tol))
                conclusion_ok = false;
            const double h1 = comparison_harmonic_d1(profile, r);
            const double h2 = comparison_harmonic_d2(profile, r);
            const double lap_h = h2 + fr * h1;
            agg.laplacian_h_max = std::max(agg.laplacian_h_max, lap_h);
            if (!within_tie(-lap_h, std::fabs(h2), opt.tol)) conclusion_ok = false;
        }
        double worst_here = samples.front().margin;
        for (const auto& s : samples) worst_here = std::min(worst_here, s.margin);

        if (first_ray) {
            agg.curvature_margin = curv_margin;
            agg.initial_margin = init_margin;
        } else {
            agg.curvature_margin = std::min(agg.curvature_margin, curv_margin);
            agg.initial_margin = std::min(agg.initial_margin, init_margin);
        }
        if (first_ray || worst_here < agg.worst_conclusion_margin()) {
            agg.conclusion_samples = std::move(samples);
            agg.worst_theta = theta;
        }
        first_ray = false;
    }
    if (!agg.hypothesis_curvature_ok || !agg.hypothesis_initial_ok)
        agg.verdict = Verdict::hypothesis_violated;
    else if (!conclusion_ok)
        agg.verdict = Verdict::conclusion_violated;
    return agg;
}

// ---------------------------------------------------------------------------
// Barriers.

// Interpolates circle maxima linearly in log log r between r1 and r2; this is
// superharmonic for the flat metric on r > 1 when M2 >= M1.
inline double three_circles_barrier(double M1, double M2, double r1, double r2, double r) {
    if (!(r1 > 1.0)) throw DomainError("three_circles_barrier: requires r1 > 1");
    if (!(r2 > r1)) throw DomainError("three_circles_barrier: requires r2 > r1");
    if (!(r >= r1 && r <= r2)) throw DomainError("three_circles_barrier: r outside [r1, r2]");
    if (!within_tie(M2 - M1, std::max(std::fabs(M1), std::fabs(M2)), 1e-9))
        throw DomainError("three_circles_barrier: requires M2 >= M1");
    const double l1 = std::log(r1), l2 = std::log(r2), l = std::log(r);
    return (M1 * std::log(l2 / l) + M2 * std::log(l / l1)) / std::log(l2 / l1);
}

// Linear interpolation in the comparison harmonic h of `profile`; reduces to
// three_circles_barrier for z = r log r.
inline double generalized_barrier(const RadialProfile& profile, double M1, double M2,
                                  double r1, double r2, double r, double tol = 1e-12) {
    if (!(r1 > profile.a)) throw DomainError("generalized_barrier: requires r1 > a");
    if (!(r2 > r1)) throw DomainError("generalized_barrier: requires r2 > r1");
    if (!(r >= r1 && r <= r2)) throw DomainError("generalized_barrier: r outside [r1, r2]");
    if (!within_tie(M2 - M1, std::max(std::fabs(M1), std::fabs(M2)), 1e-9))
        throw DomainError("generalized_barrier: requires M2 >= M1");
    const double num = comparison_harmonic(profile, r1, r, tol);
    const double den = comparison_harmonic(profile, r1, r2, tol);
    return M1 + (M2 - M1) * num / den;
}

}  // namespace warplab
