#pragma once
// Named metrics, radial profiles and harmonic test fields.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "warplab/expression.hpp"
#include "warplab/geometry.hpp"
#include "warplab/radialcomp.hpp"

namespace warplab::catalog {

// ---------------------------------------------------------------------------
// Metrics

inline WarpMetric flat() {
    WarpMetric m;
    m.name = "flat";
    m.warp = [](double r, double) { return r; };
    m.warp_dr = [](double, double) { return 1.0; };
    m.warp_drr = [](double, double) { return 0.0; };
    m.warp_dtheta = [](double, double) { return 0.0; };
    m.warp_dthetatheta = [](double, double) { return 0.0; };
    m.curvature = [](double, double) { return 0.0; };
    m.has_pole = true;
    return m;
}

// f = c r, 0 < c <= 1. Flat away from the vertex; total angle 2 pi c.
inline WarpMetric cone(double c) {
    if (!(c > 0.0 && c <= 1.0)) throw DomainError("cone: parameter must lie in (0, 1]");
    WarpMetric m;
    m.name = "cone";
    m.warp = [c](double r, double) { return c * r; };
    m.warp_dr = [c](double, double) { return c; };
    m.warp_drr = [](double, double) { return 0.0; };
    m.warp_dtheta = [](double, double) { return 0.0; };
    m.warp_dthetatheta = [](double, double) { return 0.0; };
    m.curvature = [](double, double) { return 0.0; };
    m.has_pole = (c == 1.0);
    return m;
}

// Hyperbolic plane, K = -1.
inline WarpMetric sinh_metric() {
    WarpMetric m;
    m.name = "sinh";
    m.warp = [](double r, double) { return std::sinh(r); };
    m.warp_dr = [](double r, double) { return std::cosh(r); };
    m.warp_drr = [](double r, double) { return std::sinh(r); };
    m.warp_dtheta = [](double, double) { return 0.0; };
    m.warp_dthetatheta = [](double, double) { return 0.0; };
    m.curvature = [](double, double) { return -1.0; };
    m.has_pole = true;
    return m;
}

// Round sphere minus the antipode, K = +1 on r < pi.
inline WarpMetric sin_metric() {
    WarpMetric m;
    m.name = "sin";
    m.warp = [](double r, double) { return std::sin(r); };
    m.warp_dr = [](double r, double) { return std::cos(r); };
    m.warp_drr = [](double r, double) { return -std::sin(r); };
    m.warp_dtheta = [](double, double) { return 0.0; };
    m.warp_dthetatheta = [](double, double) { return 0.0; };
    m.curvature = [](double, double) { return 1.0; };
    m.r_max = std::numbers::pi;
    m.has_pole = true;
    return m;
}

namespace detail {

// f = r psi(r) with psi = 1 below r0 sqrt(e), psi = log(r/r0) above e r0 and a
// quintic smoothstep blend in between (C^2, psi >= 1/2 throughout).
struct MilnorWarp {
    double r0;

    struct Jet {
        double psi, psi_r, psi_rr;
    };

    Jet psi(double r) const {
        const double ra = r0 * std::sqrt(std::numbers::e), rb = r0 * std::numbers::e;
        if (r <= ra) return {1.0, 0.0, 0.0};
        const double L = std::log(r / r0) - 1.0, L1 = 1.0 / r, L2 = -1.0 / (r * r);
        if (r >= rb) return {L + 1.0, L1, L2};
        const double w = rb - ra, t = (r - ra) / w;
        const double s = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
        const double s1 = 30.0 * t * t * (1.0 - t) * (1.0 - t) / w;
        const double s2 = 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t) / (w * w);
        return {1.0 + s * L, s1 * L + s * L1, s2 * L + 2.0 * s1 * L1 + s * L2};
    }
};

}  // namespace detail

// Equal to r log(r/r0) for r >= e r0; the critical Milnor growth.
inline WarpMetric milnor(double r0) {
    if (!(r0 > 0.0)) throw DomainError("milnor: r0 must be positive");
    const detail::MilnorWarp w{r0};
    WarpMetric m;
    m.name = "milnor";
    m.warp = [w](double r, double) { return r * w.psi(r).psi; };
    m.warp_dr = [w](double r, double) {
        const auto j = w.psi(r);
        return j.psi + r * j.psi_r;
    };
    m.warp_drr = [w](double r, double) {
        const auto j = w.psi(r);
        return 2.0 * j.psi_r + r * j.psi_rr;
    };
    m.warp_dtheta = [](double, double) { return 0.0; };
    m.warp_dthetatheta = [](double, double) { return 0.0; };
    m.has_pole = true;
    return m;
}

// Expression-defined warp in r and theta; derivatives by centered differences.
inline WarpMetric custom_metric(const std::string& expr, double r_min = 0.0) {
    const auto e = Expression::parse(expr);
    auto m = WarpMetric::from_warp("custom", [e](double r, double t) { return e(r, t); }, r_min);
    return m;
}

// ---------------------------------------------------------------------------
// Radial profiles

inline RadialProfile linear_profile() {
    RadialProfile p;
    p.label = "linear";
    p.z = [](double r) { return r; };
    p.z_dr = [](double) { return 1.0; };
    p.z_drr = [](double) { return 0.0; };
    p.a = 0.0;
    p.blows_up_at_a = true;
    return p;
}

// z = r log(r/r0) on (r0, inf).
inline RadialProfile milnor_profile(double r0) {
    if (!(r0 > 0.0)) throw DomainError("milnor profile: r0 must be positive");
    RadialProfile p;
    p.label = "milnor";
    p.z = [r0](double r) { return r * std::log(r / r0); };
    p.z_dr = [r0](double r) { return std::log(r / r0) + 1.0; };
    p.z_drr = [](double r) { return 1.0 / r; };
    p.a = r0;
    p.blows_up_at_a = true;
    return p;
}

inline RadialProfile sinh_profile() {
    RadialProfile p;
    p.label = "sinh";
    p.z = [](double r) { return std::sinh(r); };
    p.z_dr = [](double r) { return std::cosh(r); };
    p.z_drr = [](double r) { return std::sinh(r); };
    p.a = 0.0;
    p.blows_up_at_a = true;
    return p;
}

inline RadialProfile custom_profile(const std::string& expr, double a) {
    const auto e = Expression::parse(expr);
    return RadialProfile::numeric("custom", [e](double r) { return e(r, 0.0); }, a);
}

// The warp of a rotationally symmetric metric read as a profile.
inline RadialProfile profile_from_metric(const WarpMetric& m) {
    RadialProfile p;
    p.label = m.name;
    p.z = [w = m.warp](double r) { return w(r, 0.0); };
    p.z_dr = [w = m.warp_dr](double r) { return w(r, 0.0); };
    p.z_drr = [w = m.warp_drr](double r) { return w(r, 0.0); };
    p.a = m.r_min;
    return p;
}

// ---------------------------------------------------------------------------
// Fields with analytic derivatives through third order.

// r^p cos(k theta); harmonic for the cone of parameter c when p = k/c.
inline FieldSampler separated(double p, double k, std::string name = "separated") {
    FieldSampler s;
    s.name = std::move(name);
    auto pw = [p](double r, double q) { return std::pow(r, p - q); };
    s.value = [=](double r, double t) { return pw(r, 0) * std::cos(k * t); };
    s.d_r = [=](double r, double t) { return p * pw(r, 1) * std::cos(k * t); };
    s.d_rr = [=](double r, double t) { return p * (p - 1) * pw(r, 2) * std::cos(k * t); };
    s.d_rrr = [=](double r, double t) {
        return p * (p - 1) * (p - 2) * pw(r, 3) * std::cos(k * t);
    };
    s.d_theta = [=](double r, double t) { return -k * pw(r, 0) * std::sin(k * t); };
    s.d_thetatheta = [=](double r, double t) { return -k * k * pw(r, 0) * std::cos(k * t); };
    s.d_thetathetatheta = [=](double r, double t) {
        return k * k * k * pw(r, 0) * std::sin(k * t);
    };
    s.d_rtheta = [=](double r, double t) { return -k * p * pw(r, 1) * std::sin(k * t); };
    s.d_rrtheta = [=](double r, double t) {
        return -k * p * (p - 1) * pw(r, 2) * std::sin(k * t);
    };
    s.d_rthetatheta = [=](double r, double t) {
        return -k * k * p * pw(r, 1) * std::cos(k * t);
    };
    return s;
}

// A function of r alone from its value and three derivatives.
inline FieldSampler radial(std::string name, RadialFn v, RadialFn d1, RadialFn d2, RadialFn d3) {
    FieldSampler s;
    s.name = std::move(name);
    auto zero = [](double, double) { return 0.0; };
    s.value = [v](double r, double) { return v(r); };
    s.d_r = [d1](double r, double) { return d1(r); };
    s.d_rr = [d2](double r, double) { return d2(r); };
    s.d_rrr = [d3](double r, double) { return d3(r); };
    s.d_theta = s.d_thetatheta = s.d_thetathetatheta = zero;
    s.d_rtheta = s.d_rrtheta = s.d_rthetatheta = zero;
    return s;
}

inline FieldSampler constant(double c) {
    return radial(
        "const", [c](double) { return c; }, [](double) { return 0.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; });
}

inline FieldSampler log_r() {
    return radial(
        "logr", [](double r) { return std::log(r); }, [](double r) { return 1.0 / r; },
        [](double r) { return -1.0 / (r * r); }, [](double r) { return 2.0 / (r * r * r); });
}

// log tanh(r/2): radial harmonic of the hyperbolic plane, u' = 1/sinh r.
inline FieldSampler log_tanh_half() {
    return radial(
        "logtanh", [](double r) { return std::log(std::tanh(0.5 * r)); },
        [](double r) { return 1.0 / std::sinh(r); },
        [](double r) {
            const double s = std::sinh(r);
            return -std::cosh(r) / (s * s);
        },
        [](double r) {
            const double s = std::sinh(r), c = std::cosh(r);
            return -1.0 / s + 2.0 * c * c / (s * s * s);
        });
}

// c + u
inline FieldSampler shifted(FieldSampler u, double c, std::string name) {
    u.name = std::move(name);
    u.value = [v = u.value, c](double r, double t) { return c + v(r, t); };
    return u;
}

inline FieldSampler x_field() { return separated(1.0, 1.0, "x"); }
inline FieldSampler x2_minus_y2() { return separated(2.0, 2.0, "x2-y2"); }
inline FieldSampler re_z3() { return separated(3.0, 3.0, "re-z3"); }
inline FieldSampler cos_over_r() { return separated(-1.0, 1.0, "cos-over-r"); }
// A + r cos(theta), positive on r < A.
inline FieldSampler affine(double A) { return shifted(x_field(), A, "affine"); }

// ---------------------------------------------------------------------------

struct Entry {
    std::string name;
    std::string description;
};

inline std::vector<Entry> metric_entries() {
    return {
        {"flat", "f = r, Euclidean plane, K = 0"},
        {"cone c", "f = c r with 0 < c <= 1, K = 0 away from the vertex"},
        {"sinh", "f = sinh r, hyperbolic plane, K = -1"},
        {"sin", "f = sin r on r < pi, round sphere, K = +1"},
        {"milnor r0", "f = r log(r/r0) for r >= e r0, smoothly capped to f = r near the pole"},
        {"custom expr", "f given by an expression in r and theta; finite-difference derivatives"},
    };
}

inline std::vector<Entry> profile_entries() {
    return {
        {"linear", "z = r, h = log r"},
        {"milnor r0", "take z(r) = r log(r/r0); h = log log(r/r0), the critical parabolic growth"},
        {"sinh", "z = sinh r, h = log tanh(r/2) bounded: non-parabolic"},
        {"custom expr a", "z given by an expression in r on (a, inf)"},
    };
}

inline std::vector<Entry> boundary_entries() {
    return {
        {"const v", "constant value v on the circle"},
        {"cos", "cos(theta)"},
        {"sin3", "sin(3 theta)"},
        {"separated k", "r^(k/c) cos(k theta) at the circle radius (c = cone parameter, 1 if flat)"},
        {"expression", "any expression in theta and r, e.g. 2 + cos(theta)"},
    };
}

inline std::vector<Entry> field_entries() {
    return {
        {"x", "r cos(theta)"},
        {"x2-y2", "r^2 cos(2 theta)"},
        {"re-z3", "r^3 cos(3 theta)"},
        {"logr", "log r"},
        {"logtanh", "log tanh(r/2)"},
        {"cos-over-r", "cos(theta) / r"},
        {"separated k", "r^(k/c) cos(k theta), harmonic on the cone c"},
        {"const v", "constant v"},
        {"affine A", "A + r cos(theta)"},
    };
}

}  // namespace warplab::catalog
