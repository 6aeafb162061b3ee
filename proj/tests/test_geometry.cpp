#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "warplab/catalog.hpp"
#include "warplab/geometry.hpp"

namespace {

using namespace warplab;
namespace cat = warplab::catalog;
constexpr double kPi = std::numbers::pi;

TEST(Point, NormalizesAngle) {
    EXPECT_DOUBLE_EQ(Point(1.0, -kPi / 2).theta(), 3 * kPi / 2);
    EXPECT_DOUBLE_EQ(Point(1.0, 2 * kPi).theta(), 0.0);
    const Point p(2.0, 7.0);
    EXPECT_DOUBLE_EQ(Point(2.0, p.theta()).theta(), p.theta());
    EXPECT_THROW(Point(0.0, 0.0), DomainError);
    EXPECT_THROW(Point(-1.0, 0.0), DomainError);
}

TEST(InnerProduct, Examples) {
    const auto flat = cat::flat();
    EXPECT_EQ(inner_product(flat, Point(2, 0), {1, 0}, {0, 1}), 0.0);
    EXPECT_DOUBLE_EQ(inner_product(flat, Point(2, 0), {0, 1}, {0, 1}), 4.0);
    const double s = std::sinh(1.0);
    EXPECT_NEAR(inner_product(cat::sinh_metric(), Point(1, 0), {0, 1}, {0, 1}), s * s, 1e-14);
    EXPECT_NEAR(s * s, 1.38109, 1e-5);
}

TEST(InnerProduct, RejectsOutsideDomain) {
    auto m = cat::flat();
    m.r_min = 1.0;
    EXPECT_THROW(inner_product(m, Point(1.0, 0), {1, 0}, {1, 0}), DomainError);
    EXPECT_THROW(gaussian_curvature(cat::sin_metric(), Point(4.0, 0)), DomainError);
}

TEST(Curvature, AnalyticAndFallback) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> R(0.2, 3.0), T(0.0, 2 * kPi);
    const auto fd_flat = WarpMetric::from_warp("fd-flat", [](double r, double) { return r; });
    const auto fd_sinh =
        WarpMetric::from_warp("fd-sinh", [](double r, double) { return std::sinh(r); });
    const auto fd_sin = WarpMetric::from_warp(
        "fd-sin", [](double r, double) { return std::sin(r); }, 0.0, kPi);
    for (int k = 0; k < 50; ++k) {
        const Point p(R(rng), T(rng));
        EXPECT_NEAR(gaussian_curvature(cat::flat(), p), 0.0, 1e-9);
        EXPECT_NEAR(gaussian_curvature(cat::sinh_metric(), p), -1.0, 1e-9);
        EXPECT_NEAR(gaussian_curvature(cat::sin_metric(), p), 1.0, 1e-9);
        EXPECT_NEAR(gaussian_curvature(fd_flat, p), 0.0, 1e-5);
        EXPECT_NEAR(gaussian_curvature(fd_sinh, p), -1.0, 1e-5);
        EXPECT_NEAR(gaussian_curvature(fd_sin, p), 1.0, 1e-5);
    }
}

TEST(Curvature, ClosureAgreesWithWarp) {
    const std::vector<double> radii{0.3, 1.0, 2.0, 3.0};
    for (const auto& m : {cat::flat(), cat::cone(0.5), cat::sinh_metric(), cat::sin_metric()}) {
        const auto c = check_curvature_consistency(m, radii);
        EXPECT_TRUE(c.ok) << m.name << " worst " << c.worst;
    }
}

TEST(WarpMetricInvariants, CatalogMetrics) {
    const std::vector<double> radii{0.5, 1.0, 1.7, 2.5, 3.0, 5.0, 9.0};
    for (const auto& m : {cat::flat(), cat::cone(2.0 / 3.0), cat::sinh_metric(), cat::milnor(1.0),
                          cat::milnor(2.0), cat::custom_metric("r * (1 + 0.1 * cos(theta))")}) {
        EXPECT_TRUE(check_periodicity(m, radii).ok) << m.name;
        EXPECT_TRUE(check_derivative_consistency(m, radii).ok)
            << m.name << " worst " << check_derivative_consistency(m, radii).worst;
        std::vector<double> rs = radii;
        for (double r : rs) EXPECT_GT(m.warp(r, 1.0), 0.0);
    }
    for (const auto& m : {cat::flat(), cat::sinh_metric(), cat::sin_metric(), cat::milnor(1.0)}) {
        EXPECT_TRUE(m.has_pole);
        EXPECT_TRUE(check_pole(m).ok) << m.name;
    }
    EXPECT_FALSE(cat::cone(0.5).has_pole);
    EXPECT_FALSE(check_pole(cat::cone(0.5)).ok);
}

TEST(WarpMetricInvariants, MilnorMatchesRLogRAboveCap) {
    const auto m = cat::milnor(2.0);
    for (double r : {2 * std::numbers::e, 6.0, 20.0, 100.0}) {
        EXPECT_NEAR(m.warp(r, 0), r * std::log(r / 2.0), 1e-12 * r);
        EXPECT_NEAR(m.warp_dr(r, 0), std::log(r / 2.0) + 1.0, 1e-12);
        EXPECT_NEAR(m.warp_drr(r, 0), 1.0 / r, 1e-12);
    }
    EXPECT_DOUBLE_EQ(m.warp(1.0, 0), 1.0);
}

TEST(Gradient, Examples) {
    const auto flat = cat::flat();
    const auto g = gradient(flat, cat::x_field(), Point(2, kPi / 2));
    EXPECT_NEAR(g.a, 0.0, 1e-15);
    EXPECT_NEAR(g.b, -0.5, 1e-15);  // u_theta = -2, f^2 = 4
    const auto gl = gradient(flat, cat::log_r(), Point(3, 1.0));
    EXPECT_DOUBLE_EQ(gl.a, 1.0 / 3.0);
    EXPECT_EQ(gl.b, 0.0);
    const auto gc = gradient(cat::cone(2.0 / 3.0), cat::separated(1.5, 1.0), Point(1, 0));
    EXPECT_DOUBLE_EQ(gc.a, 1.5);
    EXPECT_NEAR(gc.b, 0.0, 1e-15);
}

TEST(GradientNormSq, Examples) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> R(0.5, 4.0), T(0.0, 2 * kPi);
    const auto flat = cat::flat();
    const auto cone = cat::cone(2.0 / 3.0);
    const auto u = cat::separated(1.5, 1.0);
    for (int k = 0; k < 20; ++k) {
        const Point p(R(rng), T(rng));
        EXPECT_NEAR(gradient_norm_sq(flat, cat::x_field(), p), 1.0, 1e-13);
        EXPECT_NEAR(gradient_norm_sq(flat, cat::log_r(), p), 1.0 / (p.r() * p.r()), 1e-13);
        EXPECT_NEAR(gradient_norm_sq(cone, u, p), 2.25 * p.r(), 1e-12);
    }
}

TEST(LaplaceBeltrami, AnnihilatesHarmonics) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> R(0.3, 5.0), T(0.0, 2 * kPi);
    const auto flat = cat::flat();
    const auto cone = cat::cone(2.0 / 3.0);
    const auto hyp = cat::sinh_metric();
    for (int k = 0; k < 20; ++k) {
        const Point p(R(rng), T(rng));
        EXPECT_NEAR(laplace_beltrami(flat, cat::log_r(), p), 0.0, 1e-8);
        EXPECT_NEAR(laplace_beltrami(flat, cat::x2_minus_y2(), p), 0.0, 1e-8);
        EXPECT_NEAR(laplace_beltrami(flat, cat::re_z3(), p), 0.0, 1e-8);
        EXPECT_NEAR(laplace_beltrami(cone, cat::separated(1.5, 1.0), p), 0.0, 1e-8);
        EXPECT_NEAR(laplace_beltrami(hyp, cat::log_tanh_half(), p), 0.0, 1e-8);
    }
}

TEST(LaplaceBeltrami, AngularCoefficientIsInverseWarpSquared) {
    // u = cos(theta) on the flat plane: Lap = -cos(theta)/r^2.
    const auto u = cat::separated(0.0, 1.0);
    const Point p(3.0, 0.0);
    EXPECT_NEAR(laplace_beltrami(cat::flat(), u, p), -1.0 / 9.0, 1e-15);
}

TEST(LaplaceBeltrami, ThetaDependentWarpDriftTerm) {
    // u = theta-only function; Lap u = u_tt/f^2 - f_t/f^3 u_t.
    const auto m = cat::custom_metric("r * (1 + 0.2 * cos(theta))");
    const auto u = cat::separated(0.0, 1.0);  // cos(theta)
    const double r = 1.5, t = 0.7;
    const double f = r * (1 + 0.2 * std::cos(t)), ft = -0.2 * r * std::sin(t);
    const double expect = -std::cos(t) / (f * f) - ft / (f * f * f) * (-std::sin(t));
    EXPECT_NEAR(laplace_beltrami(m, u, Point(r, t)), expect, 1e-7);
}

TEST(MeanCurvatureRatio, Examples) {
    EXPECT_DOUBLE_EQ(mean_curvature_ratio(cat::flat(), Point(2, 0)), 0.5);
    EXPECT_NEAR(mean_curvature_ratio(cat::sinh_metric(), Point(1, 0)), 1.0 / std::tanh(1.0),
                1e-14);
    EXPECT_NEAR(1.0 / std::tanh(1.0), 1.31304, 1e-5);
    const auto rlogr = WarpMetric::from_warp("rlogr", [](double r, double) {
        return r * std::log(r);
    }, 1.0);
    EXPECT_NEAR(mean_curvature_ratio(rlogr, Point(std::numbers::e, 0)), 2.0 / std::numbers::e, 1e-8);
    EXPECT_NEAR(2.0 / std::numbers::e, 0.73576, 1e-5);
}

TEST(Christoffel, Examples) {
    const auto g = christoffel(cat::flat(), Point(2, 0));
    EXPECT_DOUBLE_EQ(g.r_thetatheta, -2.0);
    EXPECT_DOUBLE_EQ(g.theta_rtheta, 0.5);
    EXPECT_EQ(g.theta_thetatheta, 0.0);
    const auto h = christoffel(cat::sinh_metric(), Point(1, 0));
    EXPECT_NEAR(h.r_thetatheta, -std::sinh(1.0) * std::cosh(1.0), 1e-14);
    EXPECT_NEAR(h.r_thetatheta, -1.81343, 1e-5);
    EXPECT_NEAR(h.theta_rtheta, 1.31304, 1e-5);
    const auto c = christoffel(cat::cone(2.0 / 3.0), Point(3, 0));
    EXPECT_NEAR(c.r_thetatheta, -4.0 / 3.0, 1e-14);
    EXPECT_NEAR(c.theta_rtheta, 1.0 / 3.0, 1e-15);
}

TEST(Christoffel, MatchesIndependentWarpEvaluation) {
    const auto m = cat::custom_metric("r * (1 + 0.3 * sin(theta))");
    const double r = 1.2, t = 2.1;
    const double f = r * (1 + 0.3 * std::sin(t)), fr = 1 + 0.3 * std::sin(t),
                 ft = 0.3 * r * std::cos(t);
    const auto g = christoffel(m, Point(r, t));
    EXPECT_NEAR(g.r_thetatheta, -f * fr, 1e-7);
    EXPECT_NEAR(g.theta_rtheta, fr / f, 1e-7);
    EXPECT_NEAR(g.theta_thetatheta, ft / f, 1e-7);
}

TEST(CovariantHessian, Examples) {
    const auto flat = cat::flat();
    const auto hx = covariant_hessian(flat, cat::x_field(), Point(1.7, 0.9));
    EXPECT_NEAR(hx.rr, 0.0, 1e-14);
    EXPECT_NEAR(hx.rtheta, 0.0, 1e-14);
    EXPECT_NEAR(hx.thetatheta, 0.0, 1e-14);
    const auto h2 = covariant_hessian(flat, cat::x2_minus_y2(), Point(1, 0));
    EXPECT_DOUBLE_EQ(h2.rr, 2.0);
    EXPECT_NEAR(h2.rtheta, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(h2.thetatheta, -2.0);
    const auto hc = covariant_hessian(cat::sinh_metric(), cat::constant(4.0), Point(1, 1));
    EXPECT_EQ(hc.rr, 0.0);
    EXPECT_EQ(hc.rtheta, 0.0);
    EXPECT_EQ(hc.thetatheta, 0.0);
}

TEST(HessianNormSq, Examples) {
    const auto flat = cat::flat();
    EXPECT_NEAR(hessian_norm_sq(flat, cat::x2_minus_y2(), Point(1.3, 0.4)), 8.0, 1e-12);
    EXPECT_EQ(hessian_norm_sq(flat, cat::constant(1.0), Point(1.3, 0.4)), 0.0);
    EXPECT_NEAR(hessian_norm_sq(flat, cat::log_r(), Point(2, 0)), 0.125, 1e-15);
    EXPECT_NEAR(2.0 / 16.0, 0.125, 0.0);
}

// Rectangular oracle: Hessians of x, x^2-y^2, x^3-3xy^2 by direct second partials.
TEST(HessianNormSq, FrameInvarianceFlat) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> R(0.2, 3.0), T(0.0, 2 * kPi);
    const auto flat = cat::flat();
    for (int k = 0; k < 40; ++k) {
        const Point p(R(rng), T(rng));
        const double x = p.r() * std::cos(p.theta()), y = p.r() * std::sin(p.theta());
        const double quad = 2 * 2 + 2 * 2;                           // diag(2,-2)
        const double cub = 2 * 36 * x * x + 2 * 36 * y * y;          // [[6x,-6y],[-6y,-6x]]
        EXPECT_NEAR(hessian_norm_sq(flat, cat::x_field(), p), 0.0, 1e-9);
        EXPECT_NEAR(hessian_norm_sq(flat, cat::x2_minus_y2(), p), quad, 1e-9);
        EXPECT_NEAR(hessian_norm_sq(flat, cat::re_z3(), p), cub, 1e-9 * (1 + cub));
    }
}

TEST(HessianTrace, EqualsLaplaceBeltrami) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> R(0.4, 2.5), T(0.0, 2 * kPi);
    const std::vector<WarpMetric> metrics{cat::flat(), cat::cone(0.5), cat::sinh_metric(),
                                          cat::sin_metric(), cat::milnor(1.0)};
    const std::vector<FieldSampler> fields{cat::x_field(), cat::x2_minus_y2(), cat::log_r(),
                                           cat::separated(2.3, 2.0), cat::log_tanh_half()};
    for (const auto& m : metrics)
        for (const auto& u : fields)
            for (int k = 0; k < 10; ++k) {
                const Point p(R(rng), T(rng));
                EXPECT_NEAR(hessian_trace(m, u, p), laplace_beltrami(m, u, p),
                            1e-9 * (1 + std::fabs(laplace_beltrami(m, u, p))))
                    << m.name << " " << u.name;
            }
}

TEST(FieldSampler, PresetsConsistentWithFiniteDifferences) {
    const std::vector<double> radii{0.7, 1.3, 2.2};
    for (const auto& u : {cat::x_field(), cat::x2_minus_y2(), cat::re_z3(), cat::log_r(),
                          cat::log_tanh_half(), cat::cos_over_r(), cat::separated(1.5, 1.0),
                          cat::affine(3.0)}) {
        const auto c = check_field_consistency(u, radii);
        EXPECT_TRUE(c.ok) << u.name << " worst " << c.worst;
    }
}

TEST(FieldSampler, ThirdDerivativesMatchFiniteDifferences) {
    const double h = 1e-4;
    for (const auto& u : {cat::re_z3(), cat::separated(1.5, 1.0), cat::log_tanh_half()}) {
        const double r = 1.4, t = 0.8;
        EXPECT_NEAR(u.d_rrr(r, t), (u.d_rr(r + h, t) - u.d_rr(r - h, t)) / (2 * h), 1e-6);
        EXPECT_NEAR(u.d_rrtheta(r, t), (u.d_rr(r, t + h) - u.d_rr(r, t - h)) / (2 * h), 1e-6);
        EXPECT_NEAR(u.d_rthetatheta(r, t),
                    (u.d_thetatheta(r + h, t) - u.d_thetatheta(r - h, t)) / (2 * h), 1e-6);
        EXPECT_NEAR(u.d_thetathetatheta(r, t),
                    (u.d_thetatheta(r, t + h) - u.d_thetatheta(r, t - h)) / (2 * h), 1e-6);
    }
}

// ---------------------------------------------------------------------------
// Bochner identities

const DerivativeOptions kAnalytic{DerivativeMode::analytic};
const DerivativeOptions kNested{DerivativeMode::nested_fd, 1e-3};

TEST(Bochner, FlatLinear) {
    const Point p(1.4, 0.3);
    EXPECT_NEAR(bochner_residual(cat::flat(), cat::x_field(), p, kAnalytic), 0.0, 1e-14);
    EXPECT_NEAR(bochner2_residual(cat::flat(), cat::x_field(), p, kAnalytic), 0.0, 1e-14);
    EXPECT_NEAR(bochner_residual(cat::flat(), cat::x_field(), p, kNested), 0.0, 1e-8);
}

// Lap(4r^2) = 16 in the plane; |Hess|^2 = 8.
TEST(Bochner, FlatQuadratic) {
    const auto t = bochner_terms(cat::flat(), cat::x2_minus_y2(), Point(1, 0), kAnalytic);
    EXPECT_NEAR(t.lhs, 8.0, 1e-12);
    EXPECT_NEAR(t.rhs, 8.0, 1e-12);
    for (double r : {0.5, 1.0, 2.0}) {
        const auto t2 = bochner2_terms(cat::flat(), cat::x2_minus_y2(), Point(r, 0.6), kAnalytic);
        const double oracle = 16.0 / std::pow(1 + 4 * r * r, 2);  // Lap log(1+4r^2)
        EXPECT_NEAR(t2.lhs, oracle, 1e-12);
        EXPECT_NEAR(t2.rhs, oracle, 1e-12);
    }
    const auto at1 = bochner2_terms(cat::flat(), cat::x2_minus_y2(), Point(1, 0), kAnalytic);
    EXPECT_NEAR(at1.lhs, 0.64, 1e-12);
}

TEST(Bochner, ConeSeparated) {
    const auto cone = cat::cone(2.0 / 3.0);
    const auto u = cat::separated(1.5, 1.0);
    for (double r : {0.5, 1.0, 2.0, 3.5})
        for (double t : {0.0, 1.0, 2.5}) {
            const Point p(r, t);
            const auto terms = bochner_terms(cone, u, p, kAnalytic);
            EXPECT_NEAR(terms.lhs, 1.125 / r, 1e-10);  // (1/2) Lap(2.25 r)
            EXPECT_NEAR(hessian_norm_sq(cone, u, p), 1.125 / r, 1e-10);
            EXPECT_LE(std::fabs(terms.residual()), 1e-8);
            EXPECT_LE(std::fabs(bochner2_residual(cone, u, p, kAnalytic)), 1e-8);
        }
}

TEST(Bochner, HyperbolicLogTanh) {
    const auto hyp = cat::sinh_metric();
    const auto u = cat::log_tanh_half();
    for (double r : {0.7, 1.0, 2.0}) {
        const Point p(r, 0.2);
        EXPECT_LE(std::fabs(bochner_residual(hyp, u, p, kAnalytic)), 1e-8);
        EXPECT_LE(std::fabs(bochner2_residual(hyp, u, p, kAnalytic)), 1e-8);
        EXPECT_LE(std::fabs(bochner2_residual(hyp, u, p, kNested)), 1e-5);
    }
    // q = 1/sinh^2 r steepens toward the pole; the nested route for the
    // first identity meets 1e-5 from r = 1 outward.
    for (double r : {1.0, 1.5, 2.0, 3.0})
        EXPECT_LE(std::fabs(bochner_residual(hyp, u, Point(r, 0.2), kNested)), 1e-5);
}

// f = r (1 + 0.2 cos theta) is flat with f'/f = 1/r, so log r stays harmonic.
TEST(Bochner, ThetaDependentWarp) {
    WarpMetric m;
    m.name = "wobbly-cone";
    m.warp = [](double r, double t) { return r * (1 + 0.2 * std::cos(t)); };
    m.warp_dr = [](double, double t) { return 1 + 0.2 * std::cos(t); };
    m.warp_drr = [](double, double) { return 0.0; };
    m.warp_dtheta = [](double r, double t) { return -0.2 * r * std::sin(t); };
    m.warp_dthetatheta = [](double r, double t) { return -0.2 * r * std::cos(t); };
    const auto u = cat::log_r();
    for (double t : {0.0, 0.9, 2.4, 4.0}) {
        const Point p(1.6, t);
        EXPECT_NEAR(laplace_beltrami(m, u, p), 0.0, 1e-14);
        EXPECT_LE(std::fabs(bochner_residual(m, u, p, kAnalytic)), 1e-8);
        EXPECT_LE(std::fabs(bochner2_residual(m, u, p, kAnalytic)), 1e-8);
        EXPECT_LE(std::fabs(bochner2_residual(m, u, p, kNested)), 1e-5);
    }
}

TEST(Bochner, NestedConvergesAtSecondOrder) {
    const auto flat = cat::flat();
    const auto u = cat::x2_minus_y2();
    const Point p(1.0, 0.3);
    const double h = 2e-2;
    const double e1 = std::fabs(bochner2_residual(flat, u, p, {DerivativeMode::nested_fd, h}));
    const double e2 = std::fabs(bochner2_residual(flat, u, p, {DerivativeMode::nested_fd, h / 2}));
    const double ratio = e1 / e2;
    EXPECT_GE(ratio, 3.4);
    EXPECT_LE(ratio, 4.6);

    const auto hyp = cat::sinh_metric();
    const auto v = cat::log_tanh_half();
    const double f1 = std::fabs(bochner2_residual(hyp, v, Point(1.0, 0), {DerivativeMode::nested_fd, h}));
    const double f2 =
        std::fabs(bochner2_residual(hyp, v, Point(1.0, 0), {DerivativeMode::nested_fd, h / 2}));
    EXPECT_GE(f1 / f2, 3.4);
    EXPECT_LE(f1 / f2, 4.6);
}

TEST(Bochner, RejectsNonHarmonic) {
    const auto u = cat::separated(2.0, 0.0);  // r^2, Lap = 4
    EXPECT_THROW(bochner_residual(cat::flat(), u, Point(1, 0)), PreconditionError);
    EXPECT_THROW(bochner2_residual(cat::flat(), u, Point(1, 0)), PreconditionError);
}

TEST(Bochner, AnalyticModeNeedsThirdDerivatives) {
    const auto u = FieldSampler::numeric("x", [](double r, double t) { return r * std::cos(t); });
    EXPECT_THROW(bochner_residual(cat::flat(), u, Point(1, 0), kAnalytic), PreconditionError);
    EXPECT_NEAR(bochner_residual(cat::flat(), u, Point(1, 0), kNested), 0.0, 1e-5);
}

}  // namespace
