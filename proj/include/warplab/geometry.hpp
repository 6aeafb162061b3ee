#pragma once
// Warped metrics g = dr^2 + f(r,theta)^2 dtheta^2 on the punctured plane and
// the pointwise geometric operators they induce.
//
// Conventions: f' and f'' are radial derivatives, f_theta the angular one.
// The Laplace-Beltrami operator carries 1/f^2 on the angular second
// derivative; this is the coefficient that reduces to the polar Laplacian
// for f = r and that is consistent with the gradient 1/f^2 u_theta d_theta.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "warplab/errors.hpp"

namespace warplab {

using ScalarFn = std::function<double(double, double)>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Centered-difference step for first/second derivatives of a supplied function.
inline double fd_step(double r) { return 1e-4 * std::max(1.0, std::fabs(r)); }
// Step for the nested stencils used by the Bochner checks.
inline double nested_fd_step(double r) { return 1e-3 * std::max(1.0, std::fabs(r)); }

inline double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t -= kTwoPi;
    return t;
}

// A point in polar coordinates; the angle is reduced into [0, 2pi).
class Point {
public:
    Point(double r, double theta) : r_(r), theta_(normalize_angle(theta)) {
        if (!(r > 0.0) || !std::isfinite(r))
            throw DomainError("Point: radius must be positive and finite, got " +
                              std::to_string(r));
        if (!std::isfinite(theta)) throw DomainError("Point: angle must be finite");
    }
    double r() const noexcept { return r_; }
    double theta() const noexcept { return theta_; }

private:
    double r_;
    double theta_;
};

// a d/dr + b d/dtheta
struct TangentVector {
    double a = 0.0;
    double b = 0.0;
};

struct WarpMetric {
    std::string name;
    ScalarFn warp;
    ScalarFn warp_dr;
    ScalarFn warp_drr;
    ScalarFn warp_dtheta;
    // Optional; only needed by the analytic Bochner path for theta-dependent warps.
    ScalarFn warp_dthetatheta;
    // Optional closed form; otherwise -warp_drr / warp.
    ScalarFn curvature;
    double r_min = 0.0;
    double r_max = std::numeric_limits<double>::infinity();
    bool has_pole = false;

    bool contains(double r) const { return r > r_min && r < r_max; }

    double f(const Point& p) const { return warp(p.r(), p.theta()); }
    double f_r(const Point& p) const { return warp_dr(p.r(), p.theta()); }
    double f_rr(const Point& p) const { return warp_drr(p.r(), p.theta()); }
    double f_theta(const Point& p) const { return warp_dtheta(p.r(), p.theta()); }
    double f_thetatheta(const Point& p) const {
        if (warp_dthetatheta) return warp_dthetatheta(p.r(), p.theta());
        const double h = 1e-4;
        return (warp_dtheta(p.r(), p.theta() + h) - warp_dtheta(p.r(), p.theta() - h)) /
               (2.0 * h);
    }

    // Radial step that stays inside (r_min, r_max).
    double radial_step(double r, double base) const {
        double h = base;
        if (std::isfinite(r_min)) h = std::min(h, 0.5 * (r - r_min));
        if (std::isfinite(r_max)) h = std::min(h, 0.5 * (r_max - r));
        return h;
    }

    // Builds a metric whose derivative suppliers are centered differences of `f`.
    static WarpMetric from_warp(std::string name, ScalarFn f, double r_min = 0.0,
                                double r_max = std::numeric_limits<double>::infinity(),
                                bool has_pole = false) {
        WarpMetric m;
        m.name = std::move(name);
        m.r_min = r_min;
        m.r_max = r_max;
        m.has_pole = has_pole;
        m.warp = f;
        auto step = [r_min, r_max](double r) {
            double h = fd_step(r);
            if (std::isfinite(r_min)) h = std::min(h, 0.5 * (r - r_min));
            if (std::isfinite(r_max)) h = std::min(h, 0.5 * (r_max - r));
            return h;
        };
        m.warp_dr = [f, step](double r, double t) {
            const double h = step(r);
            return (f(r + h, t) - f(r - h, t)) / (2.0 * h);
        };
        m.warp_drr = [f, step](double r, double t) {
            const double h = step(r);
            return (f(r + h, t) - 2.0 * f(r, t) + f(r - h, t)) / (h * h);
        };
        m.warp_dtheta = [f](double r, double t) {
            const double h = 1e-4;
            return (f(r, t + h) - f(r, t - h)) / (2.0 * h);
        };
        m.warp_dthetatheta = [f](double r, double t) {
            const double h = 1e-4;
            return (f(r, t + h) - 2.0 * f(r, t) + f(r, t - h)) / (h * h);
        };
        return m;
    }
};

// Throws unless p lies in the metric's domain with a positive warp; returns f(p).
inline double checked_warp(const WarpMetric& metric, const Point& p) {
    if (!metric.contains(p.r()))
        throw DomainError("radius " + std::to_string(p.r()) + " outside metric '" +
                          metric.name + "' domain (" + std::to_string(metric.r_min) + ", " +
                          std::to_string(metric.r_max) + ")");
    const double f = metric.f(p);
    if (!(f > 0.0) || !std::isfinite(f))
        throw DomainError("non-positive warp " + std::to_string(f) + " at r=" +
                          std::to_string(p.r()) + " theta=" + std::to_string(p.theta()));
    return f;
}

// u and its partial derivatives. Third derivatives are optional and only used
// by the analytic path of the Bochner residuals.
struct FieldSampler {
    std::string name;
    ScalarFn value;
    ScalarFn d_r, d_theta;
    ScalarFn d_rr, d_rtheta, d_thetatheta;
    ScalarFn d_rrr, d_rrtheta, d_rthetatheta, d_thetathetatheta;

    bool has_third() const {
        return d_rrr && d_rrtheta && d_rthetatheta && d_thetathetatheta;
    }

    // Derivatives by centered differences of `v`. Radial step is
    // step_scale * max(1, r); angular step is step_scale.
    static FieldSampler numeric(std::string name, ScalarFn v, double step_scale = 1e-4) {
        FieldSampler s;
        s.name = std::move(name);
        s.value = v;
        auto hr = [step_scale](double r) { return step_scale * std::max(1.0, std::fabs(r)); };
        const double ht = step_scale;
        s.d_r = [v, hr](double r, double t) {
            const double h = hr(r);
            return (v(r + h, t) - v(r - h, t)) / (2.0 * h);
        };
        s.d_theta = [v, ht](double r, double t) {
            return (v(r, t + ht) - v(r, t - ht)) / (2.0 * ht);
        };
        s.d_rr = [v, hr](double r, double t) {
            const double h = hr(r);
            return (v(r + h, t) - 2.0 * v(r, t) + v(r - h, t)) / (h * h);
        };
        s.d_thetatheta = [v, ht](double r, double t) {
            return (v(r, t + ht) - 2.0 * v(r, t) + v(r, t - ht)) / (ht * ht);
        };
        s.d_rtheta = [v, hr, ht](double r, double t) {
            const double h = hr(r);
            return (v(r + h, t + ht) - v(r + h, t - ht) - v(r - h, t + ht) +
                    v(r - h, t - ht)) /
                   (4.0 * h * ht);
        };
        return s;
    }
};

// All partials of u at one point.
struct FieldJet {
    double v = 0, r = 0, t = 0, rr = 0, rt = 0, tt = 0;
    double rrr = 0, rrt = 0, rtt = 0, ttt = 0;
};

inline FieldJet evaluate_jet(const FieldSampler& u, const Point& p, bool third = false) {
    const double r = p.r(), t = p.theta();
    FieldJet j;
    j.v = u.value(r, t);
    j.r = u.d_r(r, t);
    j.t = u.d_theta(r, t);
    j.rr = u.d_rr(r, t);
    j.rt = u.d_rtheta(r, t);
    j.tt = u.d_thetatheta(r, t);
    if (third) {
        j.rrr = u.d_rrr(r, t);
        j.rrt = u.d_rrtheta(r, t);
        j.rtt = u.d_rthetatheta(r, t);
        j.ttt = u.d_thetathetatheta(r, t);
    }
    return j;
}

// The three coordinate symbols that can be nonzero for dr^2 + f^2 dtheta^2.
struct ChristoffelSymbols {
    double r_thetatheta = 0.0;      // Gamma^r_{theta theta} = -f f'
    double theta_rtheta = 0.0;      // Gamma^theta_{r theta} = f'/f
    double theta_thetatheta = 0.0;  // Gamma^theta_{theta theta} = f_theta/f
};

// Coordinate components u_{;ij} of the covariant Hessian.
struct CovariantHessian {
    double rr = 0.0;
    double rtheta = 0.0;
    double thetatheta = 0.0;
};

inline double inner_product(const WarpMetric& metric, const Point& p, const TangentVector& v1,
                            const TangentVector& v2) {
    const double f = checked_warp(metric, p);
    return v1.a * v2.a + v1.b * v2.b * f * f;
}

inline double gaussian_curvature(const WarpMetric& metric, const Point& p) {
    const double f = checked_warp(metric, p);
    if (metric.curvature) return metric.curvature(p.r(), p.theta());
    return -metric.f_rr(p) / f;
}

inline TangentVector gradient(const WarpMetric& metric, const FieldSampler& u, const Point& p) {
    const double f = checked_warp(metric, p);
    return {u.d_r(p.r(), p.theta()), u.d_theta(p.r(), p.theta()) / (f * f)};
}

inline double gradient_norm_sq(const WarpMetric& metric, const FieldSampler& u,
                               const Point& p) {
    const double f = checked_warp(metric, p);
    const double ur = u.d_r(p.r(), p.theta());
    const double ut = u.d_theta(p.r(), p.theta());
    return ur * ur + ut * ut / (f * f);
}

inline double laplace_beltrami(const WarpMetric& metric, const FieldSampler& u,
                               const Point& p) {
    const double f = checked_warp(metric, p);
    const double r = p.r(), t = p.theta();
    return u.d_rr(r, t) + metric.f_r(p) / f * u.d_r(r, t) + u.d_thetatheta(r, t) / (f * f) -
           metric.f_theta(p) / (f * f * f) * u.d_theta(r, t);
}

// h_g = f'/f, the geodesic curvature of the coordinate circle through p.
inline double mean_curvature_ratio(const WarpMetric& metric, const Point& p) {
    const double f = checked_warp(metric, p);
    return metric.f_r(p) / f;
}

inline ChristoffelSymbols christoffel(const WarpMetric& metric, const Point& p) {
    const double f = checked_warp(metric, p);
    const double fr = metric.f_r(p);
    return {-f * fr, fr / f, metric.f_theta(p) / f};
}

inline CovariantHessian covariant_hessian(const WarpMetric& metric, const FieldSampler& u,
                                          const Point& p) {
    const auto gam = christoffel(metric, p);
    const double r = p.r(), t = p.theta();
    const double ur = u.d_r(r, t), ut = u.d_theta(r, t);
    return {u.d_rr(r, t), u.d_rtheta(r, t) - gam.theta_rtheta * ut,
            u.d_thetatheta(r, t) - gam.r_thetatheta * ur - gam.theta_thetatheta * ut};
}

// g^{ij} u_{;ij}; equals laplace_beltrami.
inline double hessian_trace(const WarpMetric& metric, const FieldSampler& u, const Point& p) {
    const double f = checked_warp(metric, p);
    const auto h = covariant_hessian(metric, u, p);
    return h.rr + h.thetatheta / (f * f);
}

// |Hess u|^2 with both indices raised by g (the orthonormal-frame sum u_ij u_ij).
inline double hessian_norm_sq(const WarpMetric& metric, const FieldSampler& u,
                              const Point& p) {
    const double f = checked_warp(metric, p);
    const auto h = covariant_hessian(metric, u, p);
    const double f2 = f * f;
    return h.rr * h.rr + 2.0 * h.rtheta * h.rtheta / f2 + h.thetatheta * h.thetatheta / (f2 * f2);
}

// ---------------------------------------------------------------------------
// Bochner identities for harmonic u:
//   (1/2) Lap |grad u|^2 = |Hess u|^2 + K |grad u|^2
//   Lap log(1+|grad u|^2) = (2|Hess u|^2 + 2K|grad u|^2 (1+|grad u|^2)) / (1+|grad u|^2)^2

enum class DerivativeMode {
    automatic,  // analytic when u supplies third derivatives, nested otherwise
    analytic,
    nested_fd,
};

struct DerivativeOptions {
    DerivativeMode mode = DerivativeMode::automatic;
    // Nested stencils use radial step step_scale*max(1,r) and angular step step_scale.
    double step_scale = 1e-3;
    // Harmonicity precondition: |Lap u| <= harmonic_tol * (1 + |grad u|^2).
    double harmonic_tol = 1e-6;
};

struct IdentityTerms {
    double lhs = 0.0;
    double rhs = 0.0;
    double residual() const { return lhs - rhs; }
};

namespace detail {

inline void require_harmonic(const WarpMetric& metric, const FieldSampler& u, const Point& p,
                             double tol) {
    const double lap = laplace_beltrami(metric, u, p);
    const double g2 = gradient_norm_sq(metric, u, p);
    if (!(std::fabs(lap) <= tol * (1.0 + g2)))
        throw PreconditionError("field '" + u.name + "' is not harmonic at r=" +
                                std::to_string(p.r()) + " theta=" + std::to_string(p.theta()) +
                                " (|Lap u| = " + std::to_string(std::fabs(lap)) + ")");
}

inline bool use_analytic(const FieldSampler& u, const DerivativeOptions& opt) {
    switch (opt.mode) {
        case DerivativeMode::analytic:
            if (!u.has_third())
                throw PreconditionError("analytic Bochner check needs third derivatives of '" +
                                        u.name + "'");
            return true;
        case DerivativeMode::nested_fd: return false;
        case DerivativeMode::automatic: return u.has_third();
    }
    return false;
}

// q = |grad u|^2 with first and second partials in r and theta.
struct GradSqJet {
    double q, q_r, q_t, q_rr, q_tt;
};

inline GradSqJet grad_sq_jet(const WarpMetric& metric, const FieldJet& u, const Point& p) {
    const double f = checked_warp(metric, p);
    const double fr = metric.f_r(p), frr = metric.f_rr(p);
    const double ft = metric.f_theta(p), ftt = metric.f_thetatheta(p);
    const double f2 = f * f, f3 = f2 * f, f4 = f2 * f2;
    const double F = 1.0 / f2;
    const double F_r = -2.0 * fr / f3;
    const double F_t = -2.0 * ft / f3;
    const double F_rr = -2.0 * frr / f3 + 6.0 * fr * fr / f4;
    const double F_tt = -2.0 * ftt / f3 + 6.0 * ft * ft / f4;
    GradSqJet j{};
    j.q = u.r * u.r + u.t * u.t * F;
    j.q_r = 2.0 * u.r * u.rr + 2.0 * u.t * u.rt * F + u.t * u.t * F_r;
    j.q_t = 2.0 * u.r * u.rt + 2.0 * u.t * u.tt * F + u.t * u.t * F_t;
    j.q_rr = 2.0 * u.rr * u.rr + 2.0 * u.r * u.rrr + 2.0 * (u.rt * u.rt + u.t * u.rrt) * F +
             4.0 * u.t * u.rt * F_r + u.t * u.t * F_rr;
    j.q_tt = 2.0 * u.rt * u.rt + 2.0 * u.r * u.rtt + 2.0 * (u.tt * u.tt + u.t * u.ttt) * F +
             4.0 * u.t * u.tt * F_t + u.t * u.t * F_tt;
    return j;
}

inline double laplacian_from_partials(const WarpMetric& metric, const Point& p, double v_r,
                                      double v_t, double v_rr, double v_tt) {
    const double f = checked_warp(metric, p);
    return v_rr + metric.f_r(p) / f * v_r + v_tt / (f * f) - metric.f_theta(p) / (f * f * f) * v_t;
}

// Scalar built pointwise from u's first derivatives, differentiated by centered stencils.
inline double nested_laplacian(const WarpMetric& metric, const Point& p, double step_scale,
                               const std::function<double(double)>& of_grad_sq,
                               const FieldSampler& u) {
    auto scalar = [&metric, &u, &of_grad_sq](double r, double t) {
        return of_grad_sq(gradient_norm_sq(metric, u, Point(r, t)));
    };
    const double r = p.r(), t = p.theta();
    const double hr = metric.radial_step(r, step_scale * std::max(1.0, r));
    const double ht = step_scale;
    const double c = scalar(r, t);
    const double rp = scalar(r + hr, t), rm = scalar(r - hr, t);
    const double tp = scalar(r, t + ht), tm = scalar(r, t - ht);
    return laplacian_from_partials(metric, p, (rp - rm) / (2.0 * hr), (tp - tm) / (2.0 * ht),
                                   (rp - 2.0 * c + rm) / (hr * hr), (tp - 2.0 * c + tm) / (ht * ht));
}

}  // namespace detail

inline IdentityTerms bochner_terms(const WarpMetric& metric, const FieldSampler& u,
                                   const Point& p, const DerivativeOptions& opt = {}) {
    detail::require_harmonic(metric, u, p, opt.harmonic_tol);
    const double K = gaussian_curvature(metric, p);
    const double g2 = gradient_norm_sq(metric, u, p);
    double lap_q = 0.0;
    if (detail::use_analytic(u, opt)) {
        const auto q = detail::grad_sq_jet(metric, evaluate_jet(u, p, true), p);
        lap_q = detail::laplacian_from_partials(metric, p, q.q_r, q.q_t, q.q_rr, q.q_tt);
    } else {
        lap_q = detail::nested_laplacian(metric, p, opt.step_scale, [](double q) { return q; }, u);
    }
    return {0.5 * lap_q, hessian_norm_sq(metric, u, p) + K * g2};
}

inline double bochner_residual(const WarpMetric& metric, const FieldSampler& u, const Point& p,
                               const DerivativeOptions& opt = {}) {
    return bochner_terms(metric, u, p, opt).residual();
}

inline IdentityTerms bochner2_terms(const WarpMetric& metric, const FieldSampler& u,
                                    const Point& p, const DerivativeOptions& opt = {}) {
    detail::require_harmonic(metric, u, p, opt.harmonic_tol);
    const double K = gaussian_curvature(metric, p);
    const double g2 = gradient_norm_sq(metric, u, p);
    const double one_plus = 1.0 + g2;
    double lhs = 0.0;
    if (detail::use_analytic(u, opt)) {
        const auto q = detail::grad_sq_jet(metric, evaluate_jet(u, p, true), p);
        const double L_r = q.q_r / one_plus, L_t = q.q_t / one_plus;
        const double L_rr = q.q_rr / one_plus - L_r * L_r;
        const double L_tt = q.q_tt / one_plus - L_t * L_t;
        lhs = detail::laplacian_from_partials(metric, p, L_r, L_t, L_rr, L_tt);
    } else {
        lhs = detail::nested_laplacian(metric, p, opt.step_scale,
                                       [](double q) { return std::log1p(q); }, u);
    }
    const double rhs =
        (2.0 * hessian_norm_sq(metric, u, p) + 2.0 * K * g2 * one_plus) / (one_plus * one_plus);
    return {lhs, rhs};
}

inline double bochner2_residual(const WarpMetric& metric, const FieldSampler& u,
                                const Point& p, const DerivativeOptions& opt = {}) {
    return bochner2_terms(metric, u, p, opt).residual();
}

// ---------------------------------------------------------------------------
// Invariant checks on sample grids.

struct InvariantCheck {
    bool ok = true;
    double worst = 0.0;

    void record(double deviation, double tol) {
        worst = std::max(worst, deviation);
        if (!(deviation <= tol)) ok = false;
    }
};

// warp and its derivative suppliers agree at theta = 0 and theta = 2pi.
inline InvariantCheck check_periodicity(const WarpMetric& m, const std::vector<double>& radii,
                                        double tol = 1e-10) {
    InvariantCheck c;
    for (double r : radii) {
        for (const ScalarFn* fn : {&m.warp, &m.warp_dr, &m.warp_drr, &m.warp_dtheta})
            c.record(std::fabs((*fn)(r, 0.0) - (*fn)(r, kTwoPi)), tol);
    }
    return c;
}

// f -> 0 and f' -> 1 as r -> 0+, probed at r = 1e-3 and 1e-4.
inline InvariantCheck check_pole(const WarpMetric& m, double tol = 1e-2, int n_theta = 16) {
    InvariantCheck c;
    for (double r : {1e-3, 1e-4}) {
        for (int j = 0; j < n_theta; ++j) {
            const double t = kTwoPi * j / n_theta;
            c.record(std::fabs(m.warp(r, t)), tol);
            c.record(std::fabs(m.warp_dr(r, t) - 1.0), tol);
        }
    }
    return c;
}

// Supplied derivatives against centered differences of warp; tol is absolute
// after scaling by 1 + |value|.
inline InvariantCheck check_derivative_consistency(const WarpMetric& m,
                                                   const std::vector<double>& radii,
                                                   int n_theta = 8, double tol = 1e-6) {
    InvariantCheck c;
    for (double r : radii) {
        const double h = m.radial_step(r, fd_step(r));
        const double ht = 1e-4;
        for (int j = 0; j < n_theta; ++j) {
            const double t = kTwoPi * j / n_theta;
            const double f0 = m.warp(r, t), fp = m.warp(r + h, t), fm = m.warp(r - h, t);
            const double d1 = (fp - fm) / (2.0 * h);
            const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
            const double dt = (m.warp(r, t + ht) - m.warp(r, t - ht)) / (2.0 * ht);
            c.record(std::fabs(m.warp_dr(r, t) - d1) / (1.0 + std::fabs(d1)), tol);
            c.record(std::fabs(m.warp_drr(r, t) - d2) / (1.0 + std::fabs(d2)), tol);
            c.record(std::fabs(m.warp_dtheta(r, t) - dt) / (1.0 + std::fabs(dt)), tol);
        }
    }
    return c;
}

// Closed-form curvature against -f''/f.
inline InvariantCheck check_curvature_consistency(const WarpMetric& m,
                                                  const std::vector<double>& radii,
                                                  int n_theta = 8, double tol = 1e-8) {
    InvariantCheck c;
    if (!m.curvature) return c;
    for (double r : radii)
        for (int j = 0; j < n_theta; ++j) {
            const double t = kTwoPi * j / n_theta;
            c.record(std::fabs(m.curvature(r, t) + m.warp_drr(r, t) / m.warp(r, t)), tol);
        }
    return c;
}

// Angular periodicity and finite-difference agreement of a field sampler.
inline InvariantCheck check_field_consistency(const FieldSampler& u,
                                              const std::vector<double>& radii,
                                              int n_theta = 8, double tol = 1e-5) {
    InvariantCheck c;
    const auto fd = FieldSampler::numeric("fd", u.value, 1e-4);
    for (double r : radii)
        for (int j = 0; j < n_theta; ++j) {
            const double t = kTwoPi * j / n_theta;
            c.record(std::fabs(u.value(r, t) - u.value(r, t + kTwoPi)), tol);
            for (auto pair : {std::pair{&u.d_r, &fd.d_r}, std::pair{&u.d_theta, &fd.d_theta},
                              std::pair{&u.d_rr, &fd.d_rr}, std::pair{&u.d_rtheta, &fd.d_rtheta},
                              std::pair{&u.d_thetatheta, &fd.d_thetatheta}}) {
                const double exact = (*pair.first)(r, t);
                c.record(std::fabs(exact - (*pair.second)(r, t)) / (1.0 + std::fabs(exact)), tol);
            }
        }
    return c;
}

}  // namespace warplab
