#pragma once

// Floating-point geometric oracles: push sample points of a horosphere through
// the Poincare extension and refit the image sphere.

#include "horocount/moebius.hpp"

#include <array>
#include <cmath>
#include <optional>

namespace horo::oracle {

/// Fitted image: either a horoball tangent at `point` with Euclidean `diameter`,
/// or (at_infinity) a horizontal horosphere at `height`.
struct FittedHoroball {
    bool at_infinity = false;
    std::complex<double> point;
    double diameter = 0;
    double height = 0;
};

inline std::array<HalfSpacePoint, 4> horosphere_samples(const Horoball& h, int dim) {
    std::array<HalfSpacePoint, 4> pts{};
    if (h.at_infinity()) {
        const double t = h.size.get_d();
        pts[0] = {{0.0, 0.0}, t};
        pts[1] = {{1.0, 0.0}, t};
        pts[2] = {{-0.7, dim == 2 ? 0.4 : 0.0}, t};
        pts[3] = {{0.3, dim == 2 ? -0.9 : 0.0}, t};
        return pts;
    }
    const std::complex<double> p = h.tangent.approx();
    const double r = h.size.get_d() / 2;
    // Points of the sphere with center (p, r) and radius r, away from the tangency.
    const double angles[4] = {0.3, 1.4, 2.5, 1.9};
    for (int k = 0; k < 4; ++k) {
        const double th = angles[k];
        const double ph = dim == 2 ? 0.8 * k : 0.0;
        std::complex<double> dir(std::cos(ph), std::sin(ph));
        pts[k] = {p + r * std::sin(th) * dir, r - r * std::cos(th)};
    }
    return pts;
}

/// Solves the 3x3 (dim 1) or 4x4 (dim 2) linear system for the sphere
/// |X|^2 + D.X + E = 0 through the sample points.
inline FittedHoroball fit_image(const MoebiusMap& m, const Horoball& h, int dim) {
    const auto samples = horosphere_samples(h, dim);
    const int n = dim == 1 ? 3 : 4;
    std::array<std::array<double, 5>, 4> a{};
    std::array<std::array<double, 3>, 4> xs{};
    for (int k = 0; k < n; ++k) {
        const HalfSpacePoint q = apply_halfspace(m, samples[k]);
        xs[k] = {q.x.real(), q.x.imag(), q.height};
    }
    // Horizontal plane check: all heights equal.
    {
        bool flat = true;
        for (int k = 1; k < n; ++k)
            if (std::abs(xs[k][2] - xs[0][2]) > 1e-9 * std::max(1.0, std::abs(xs[0][2]))) flat = false;
        if (flat) {
            FittedHoroball f;
            f.at_infinity = true;
            f.height = xs[0][2];
            return f;
        }
    }
    // Unknowns: dim 1 -> (D0, D2, E); dim 2 -> (D0, D1, D2, E).
    for (int k = 0; k < n; ++k) {
        const double sq = xs[k][0] * xs[k][0] + xs[k][1] * xs[k][1] + xs[k][2] * xs[k][2];
        int col = 0;
        a[k][col++] = xs[k][0];
        if (dim == 2) a[k][col++] = xs[k][1];
        a[k][col++] = xs[k][2];
        a[k][col++] = 1.0;
        a[k][col] = -sq;
    }
    for (int i = 0; i < n; ++i) {
        int piv = i;
        for (int r = i + 1; r < n; ++r)
            if (std::abs(a[r][i]) > std::abs(a[piv][i])) piv = r;
        std::swap(a[i], a[piv]);
        for (int r = 0; r < n; ++r) {
            if (r == i) continue;
            const double f = a[r][i] / a[i][i];
            for (int c = i; c <= n; ++c) a[r][c] -= f * a[i][c];
        }
    }
    std::array<double, 4> sol{};
    for (int i = 0; i < n; ++i) sol[i] = a[i][n] / a[i][i];
    const double d0 = sol[0];
    const double d1 = dim == 2 ? sol[1] : 0.0;
    const double d2 = dim == 2 ? sol[2] : sol[1];
    const double e = dim == 2 ? sol[3] : sol[2];
    FittedHoroball f;
    f.point = {-d0 / 2, -d1 / 2};
    const double cz = -d2 / 2;
    const double radius = std::sqrt(std::max(0.0, d0 * d0 / 4 + d1 * d1 / 4 + d2 * d2 / 4 - e));
    // For a horoball the center height equals the radius; report their mean.
    f.diameter = cz + radius;
    return f;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

/// Worst relative discrepancy between the exact image and the fitted one.
inline double image_discrepancy(const MoebiusMap& m, const Horoball& h, const Horoball& exact, int dim) {
    const FittedHoroball f = fit_image(m, h, dim);
    if (f.at_infinity != exact.at_infinity()) return HUGE_VAL;
    if (f.at_infinity) return rel_err(f.height, exact.size.get_d());
    const std::complex<double> p = exact.tangent.approx();
    const double scale = std::max(1.0, std::abs(p));
    const double e_point = std::abs(f.point - p) / scale;
    return std::max(e_point, rel_err(f.diameter, exact.size.get_d()));
}

}  // namespace horo::oracle
