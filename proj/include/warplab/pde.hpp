#pragma once
// Finite-difference Laplace-Beltrami on polar annulus grids, Dirichlet solves
// and discrete diagnostics (circle maxima, maximum principle, growth rates,
// harmonic measure).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "warplab/csv.hpp"
#include "warplab/errors.hpp"
#include "warplab/geometry.hpp"
#include "warplab/radialcomp.hpp"

namespace warplab {

// Node (i, j) sits at (r1 + i dr, j dtheta); rows i = 0 and i = n_r - 1 are
// the Dirichlet circles and j wraps modulo n_theta.
class AnnulusGrid {
public:
    AnnulusGrid(double r1, double r2, int n_r, int n_theta)
        : r1_(r1), r2_(r2), n_r_(n_r), n_theta_(n_theta) {
        if (!(r1 > 0.0) || !(r2 > r1) || !std::isfinite(r2))
            throw DomainError("AnnulusGrid: requires 0 < r1 < r2");
        if (n_r < 3) throw DomainError("AnnulusGrid: n_r must be >= 3");
        if (n_theta < 8) throw DomainError("AnnulusGrid: n_theta must be >= 8");
    }

    double r1() const { return r1_; }
    double r2() const { return r2_; }
    int n_r() const { return n_r_; }
    int n_theta() const { return n_theta_; }
    double dr() const { return (r2_ - r1_) / (n_r_ - 1); }
    double dtheta() const { return kTwoPi / n_theta_; }
    double radius(int i) const { return i == n_r_ - 1 ? r2_ : r1_ + i * dr(); }
    double angle(int j) const { return j * dtheta(); }
    std::size_t size() const { return static_cast<std::size_t>(n_r_) * n_theta_; }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * n_theta_ + static_cast<std::size_t>(wrap(j));
    }
    int wrap(int j) const { return ((j % n_theta_) + n_theta_) % n_theta_; }

    void require_inside(const WarpMetric& m) const {
        if (!(r1_ > m.r_min) || !(r2_ < m.r_max))
            throw DomainError("AnnulusGrid [" + std::to_string(r1_) + ", " + std::to_string(r2_) +
                              "] leaves the domain of metric '" + m.name + "'");
    }

    bool operator==(const AnnulusGrid&) const = default;

private:
    double r1_, r2_;
    int n_r_, n_theta_;
};

class ScalarField {
public:
    explicit ScalarField(AnnulusGrid grid, double fill = 0.0)
        : grid_(grid), values_(grid.size(), fill) {}
    ScalarField(AnnulusGrid grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) throw DomainError("ScalarField: size mismatch");
    }

    static ScalarField sample(const AnnulusGrid& g, const ScalarFn& fn) {
        ScalarField f(g);
        for (int i = 0; i < g.n_r(); ++i)
            for (int j = 0; j < g.n_theta(); ++j)
                f.values_[g.index(i, j)] = fn(g.radius(i), g.angle(j));
        return f;
    }

    const AnnulusGrid& grid() const { return grid_; }
    double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
    double& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
    const std::vector<double>& values() const { return values_; }

    bool all_finite() const {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

private:
    AnnulusGrid grid_;
    std::vector<double> values_;
};

// CSV with header r,theta,value; radial-major, 17 significant digits.
inline void write_field_csv(std::ostream& os, const ScalarField& field) {
    const auto& g = field.grid();
    os << "r,theta,value\n";
    for (int i = 0; i < g.n_r(); ++i)
        for (int j = 0; j < g.n_theta(); ++j)
            os << format_g17(g.radius(i)) << ',' << format_g17(g.angle(j)) << ','
               << format_g17(field(i, j)) << '\n';
}

// Dirichlet data on one circle: a function of theta or n_theta samples.
using BoundarySide = std::variant<std::function<double(double)>, std::vector<double>>;

struct BoundaryData {
    BoundarySide inner;
    BoundarySide outer;

    static std::vector<double> sample(const BoundarySide& side, const AnnulusGrid& g) {
        if (const auto* v = std::get_if<std::vector<double>>(&side)) {
            if (static_cast<int>(v->size()) != g.n_theta())
                throw DomainError("BoundaryData: array length must equal n_theta");
            return *v;
        }
        const auto& fn = std::get<std::function<double(double)>>(side);
        std::vector<double> out(static_cast<std::size_t>(g.n_theta()));
        for (int j = 0; j < g.n_theta(); ++j) out[static_cast<std::size_t>(j)] = fn(g.angle(j));
        return out;
    }
};

// Five-point stencil weights at an interior node, acting on neighbour
// differences so that constants are annihilated exactly.
struct StencilRow {
    double r_minus, r_plus, t_minus, t_plus;
};

struct DominanceWarning {
    bool flagged = false;
    int i = -1, j = -1;
    double worst_ratio = 0.0;  // max of |drift| h/2 over diffusion, radial and angular
};

class DiscreteOperator {
public:
    DiscreteOperator(AnnulusGrid grid, std::vector<StencilRow> rows, DominanceWarning warning)
        : grid_(grid), rows_(std::move(rows)), warning_(warning) {}

    const AnnulusGrid& grid() const { return grid_; }
    const DominanceWarning& warning() const { return warning_; }
    const StencilRow& row(int i, int j) const { return rows_[interior_index(i, j)]; }

    std::size_t interior_count() const {
        return static_cast<std::size_t>(grid_.n_r() - 2) * grid_.n_theta();
    }
    std::size_t interior_index(int i, int j) const {
        return static_cast<std::size_t>(i - 1) * grid_.n_theta() +
               static_cast<std::size_t>(grid_.wrap(j));
    }

    // Discrete Laplacian at interior node (i, j).
    double apply_at(const ScalarField& u, int i, int j) const {
        const auto& s = row(i, j);
        const double c = u(i, j);
        return s.r_minus * (u(i - 1, j) - c) + s.r_plus * (u(i + 1, j) - c) +
               s.t_minus * (u(i, j - 1) - c) + s.t_plus * (u(i, j + 1) - c);
    }

    // Interior values of the discrete Laplacian, boundary rows zero.
    ScalarField apply(const ScalarField& u) const {
        require_same_grid(u);
        ScalarField out(grid_);
        for (int i = 1; i + 1 < grid_.n_r(); ++i)
            for (int j = 0; j < grid_.n_theta(); ++j) out(i, j) = apply_at(u, i, j);
        return out;
    }

    double max_abs_residual(const ScalarField& u) const {
        require_same_grid(u);
        double m = 0.0;
        for (int i = 1; i + 1 < grid_.n_r(); ++i)
            for (int j = 0; j < grid_.n_theta(); ++j) m = std::max(m, std::fabs(apply_at(u, i, j)));
        return m;
    }

    // Interior-unknown matrix; boundary couplings go to the right-hand side.
    Eigen::SparseMatrix<double> matrix() const {
        const int nt = grid_.n_theta();
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(interior_count() * 5);
        for (int i = 1; i + 1 < grid_.n_r(); ++i)
            for (int j = 0; j < nt; ++j) {
                const auto& s = row(i, j);
                const auto k = static_cast<int>(interior_index(i, j));
                trip.emplace_back(k, k, -(s.r_minus + s.r_plus + s.t_minus + s.t_plus));
                if (i > 1) trip.emplace_back(k, static_cast<int>(interior_index(i - 1, j)), s.r_minus);
                if (i + 2 < grid_.n_r())
                    trip.emplace_back(k, static_cast<int>(interior_index(i + 1, j)), s.r_plus);
                trip.emplace_back(k, static_cast<int>(interior_index(i, j - 1)), s.t_minus);
                trip.emplace_back(k, static_cast<int>(interior_index(i, j + 1)), s.t_plus);
            }
        const auto n = static_cast<Eigen::Index>(interior_count());
        Eigen::SparseMatrix<double> A(n, n);
        A.setFromTriplets(trip.begin(), trip.end());
        A.makeCompressed();
        return A;
    }

private:
    void require_same_grid(const ScalarField& u) const {
        if (!(u.grid() == grid_)) throw DomainError("DiscreteOperator: field on a different grid");
    }

    AnnulusGrid grid_;
    std::vector<StencilRow> rows_;
    DominanceWarning warning_;
};

// Centered second-order differences for
//   u_rr + (f'/f) u_r + (1/f^2) u_thetatheta - (f_theta/f^3) u_theta.
inline DiscreteOperator assemble(const WarpMetric& metric, const AnnulusGrid& grid) {
    grid.require_inside(metric);
    const double dr = grid.dr(), dt = grid.dtheta();
    std::vector<StencilRow> rows;
    rows.reserve(static_cast<std::size_t>(grid.n_r() - 2) * grid.n_theta());
    DominanceWarning warn;
    for (int i = 1; i + 1 < grid.n_r(); ++i)
        for (int j = 0; j < grid.n_theta(); ++j) {
            const Point p(grid.radius(i), grid.angle(j));
            const double f = checked_warp(metric, p);
            const double radial_drift = metric.f_r(p) / f;
            const double angular_diff = 1.0 / (f * f);
            const double angular_drift = -metric.f_theta(p) / (f * f * f);
            rows.push_back({1.0 / (dr * dr) - radial_drift / (2.0 * dr),
                            1.0 / (dr * dr) + radial_drift / (2.0 * dr),
                            angular_diff / (dt * dt) - angular_drift / (2.0 * dt),
                            angular_diff / (dt * dt) + angular_drift / (2.0 * dt)});
            const double ratio = std::max(std::fabs(radial_drift) * dr / 2.0,
                                          std::fabs(angular_drift) * dt / 2.0 / angular_diff);
            if (ratio > warn.worst_ratio) {
                warn.worst_ratio = ratio;
                warn.i = i;
                warn.j = j;
            }
        }
    warn.flagged = warn.worst_ratio >= 1.0;
    return {grid, std::move(rows), warn};
}

// Sparse LU followed by at most three refinement sweeps; the solution meets
// max |L u| <= tol (1 + max|bc|) on the interior or NumericalError is thrown.
inline ScalarField solve_dirichlet(const DiscreteOperator& op, const BoundaryData& bc,
                                   double tol = 1e-10) {
    if (!(tol > 0.0)) throw DomainError("solve_dirichlet: tol must be positive");
    const auto& g = op.grid();
    const int nt = g.n_theta(), last = g.n_r() - 1;
    const auto inner = BoundaryData::sample(bc.inner, g);
    const auto outer = BoundaryData::sample(bc.outer, g);
    ScalarField u(g);
    double bc_max = 0.0;
    for (int j = 0; j < nt; ++j) {
        u(0, j) = inner[static_cast<std::size_t>(j)];
        u(last, j) = outer[static_cast<std::size_t>(j)];
        bc_max = std::max({bc_max, std::fabs(u(0, j)), std::fabs(u(last, j))});
    }
    if (!u.all_finite()) throw DomainError("solve_dirichlet: boundary data not finite");

    const auto A = op.matrix();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success) throw NumericalError("solve_dirichlet: factorization failed");

    const double target = tol * (1.0 + bc_max);
    const auto n = static_cast<Eigen::Index>(op.interior_count());
    Eigen::VectorXd residual(n);
    auto compute_residual = [&]() {
        double m = 0.0;
        for (int i = 1; i < last; ++i)
            for (int j = 0; j < nt; ++j) {
                const double r = op.apply_at(u, i, j);
                residual(static_cast<Eigen::Index>(op.interior_index(i, j))) = r;
                m = std::max(m, std::fabs(r));
            }
        return m;
    };
    double achieved = compute_residual();
    for (int sweep = 0; sweep < 4 && achieved > target; ++sweep) {
        const Eigen::VectorXd du = lu.solve(-residual);
        if (lu.info() != Eigen::Success) throw NumericalError("solve_dirichlet: solve failed");
        for (int i = 1; i < last; ++i)
            for (int j = 0; j < nt; ++j)
                u(i, j) += du(static_cast<Eigen::Index>(op.interior_index(i, j)));
        achieved = compute_residual();
    }
    if (!(achieved <= target))
        throw NumericalError("solve_dirichlet: residual " + std::to_string(achieved) +
                             " above target " + std::to_string(target));
    return u;
}

inline ScalarField solve_dirichlet(const WarpMetric& metric, const AnnulusGrid& grid,
                                   const BoundaryData& bc, double tol = 1e-10) {
    return solve_dirichlet(assemble(metric, grid), bc, tol);
}

// ---------------------------------------------------------------------------
// Circle maxima. The absolute variant is sup |v| over the circle, the signed
// one is max v.

inline void require_row(const ScalarField& f, int i) {
    if (i < 0 || i >= f.grid().n_r()) throw DomainError("radial index out of range");
}

inline double circle_max_abs(const ScalarField& f, int i) {
    require_row(f, i);
    double m = 0.0;
    for (int j = 0; j < f.grid().n_theta(); ++j) m = std::max(m, std::fabs(f(i, j)));
    return m;
}

inline double circle_max_signed(const ScalarField& f, int i) {
    require_row(f, i);
    double m = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < f.grid().n_theta(); ++j) m = std::max(m, f(i, j));
    return m;
}

inline double circle_min_signed(const ScalarField& f, int i) {
    require_row(f, i);
    double m = std::numeric_limits<double>::infinity();
    for (int j = 0; j < f.grid().n_theta(); ++j) m = std::min(m, f(i, j));
    return m;
}

// Quadratic Lagrange interpolation along the ray j at radius r.
inline double radial_interpolate(const ScalarField& f, double r, int j) {
    const auto& g = f.grid();
    if (!(r >= g.r1() && r <= g.r2())) throw DomainError("radial_interpolate: r outside grid");
    const double x = (r - g.r1()) / g.dr();
    int i0 = static_cast<int>(std::lround(x)) - 1;
    i0 = std::clamp(i0, 0, g.n_r() - 3);
    double sum = 0.0;
    for (int a = 0; a < 3; ++a) {
        double w = 1.0;
        for (int b = 0; b < 3; ++b)
            if (b != a) w *= (x - (i0 + b)) / static_cast<double>(a - b);
        sum += w * f(i0 + a, j);
    }
    return sum;
}

struct MaxPrincipleResult {
    bool holds = true;
    double interior_max = 0.0, interior_min = 0.0;
    double boundary_max = 0.0, boundary_min = 0.0;
    double slack = 0.0;
    double worst_violation = 0.0;  // positive when an interior extremum escapes the boundary range
};

// Interior extrema of a numerically harmonic field lie within the boundary
// extrema up to slack = 10 residual_tol (r2 - r1)^2.
inline MaxPrincipleResult max_principle_check(const DiscreteOperator& op, const ScalarField& u,
                                              double residual_tol) {
    const double res = op.max_abs_residual(u);
    if (!(res <= residual_tol))
        throw PreconditionError("max_principle_check: field is not discretely harmonic (residual " +
                                std::to_string(res) + " > " + std::to_string(residual_tol) + ")");
    const auto& g = u.grid();
    MaxPrincipleResult out;
    out.boundary_max = std::max(circle_max_signed(u, 0), circle_max_signed(u, g.n_r() - 1));
    out.boundary_min = std::min(circle_min_signed(u, 0), circle_min_signed(u, g.n_r() - 1));
    out.interior_max = -std::numeric_limits<double>::infinity();
    out.interior_min = std::numeric_limits<double>::infinity();
    for (int i = 1; i + 1 < g.n_r(); ++i) {
        out.interior_max = std::max(out.interior_max, circle_max_signed(u, i));
        out.interior_min = std::min(out.interior_min, circle_min_signed(u, i));
    }
    const double width = g.r2() - g.r1();
    out.slack = 10.0 * residual_tol * width * width;
    out.worst_violation = std::max(out.interior_max - out.boundary_max,
                                   out.boundary_min - out.interior_min);
    out.holds = out.worst_violation <= out.slack;
    return out;
}

// Least-squares slope of log M against log r.
inline double growth_exponent(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 3) throw DomainError("growth_exponent: need at least 3 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double prev_r = 0.0;
    for (const auto& [r, M] : samples) {
        if (!(M > 0.0)) throw DomainError("growth_exponent: non-positive M");
        if (!(r > prev_r)) throw DomainError("growth_exponent: radii must increase");
        prev_r = r;
        const double x = std::log(r), y = std::log(M);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(samples.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Value at radius r of the solution equal to 0 on r = R1 and 1 on r = R2 for
// the rotationally symmetric metric dr^2 + z^2 dtheta^2.
inline double harmonic_measure(const RadialProfile& profile, double r, double R1, double R2,
                               double tol = 1e-12) {
    if (!(R1 > profile.a) || !(R2 > R1) || !(r >= R1 && r <= R2))
        throw DomainError("harmonic_measure: requires a < R1 <= r <= R2");
    const double num = comparison_harmonic(profile, R1, r, tol);
    const double den = comparison_harmonic(profile, R1, R2, tol);
    return num / den;
}

struct HarmonicMeasureCheck {
    double quadrature = 0.0;
    double pde = 0.0;
    double discrepancy() const { return std::fabs(quadrature - pde); }
};

// Same number by a 0/1 Dirichlet solve on the grid, averaged over the circle.
inline HarmonicMeasureCheck harmonic_measure_crosscheck(const WarpMetric& metric,
                                                        const RadialProfile& profile,
                                                        const AnnulusGrid& grid, double r,
                                                        double tol = 1e-10) {
    HarmonicMeasureCheck c;
    c.quadrature = harmonic_measure(profile, r, grid.r1(), grid.r2());
    const BoundaryData bc{std::function<double(double)>([](double) { return 0.0; }),
                          std::function<double(double)>([](double) { return 1.0; })};
    const auto u = solve_dirichlet(metric, grid, bc, tol);
    double sum = 0.0;
    for (int j = 0; j < grid.n_theta(); ++j) sum += radial_interpolate(u, r, j);
    c.pde = sum / grid.n_theta();
    return c;
}

}  // namespace warplab
