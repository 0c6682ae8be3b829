#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "orlicz/convex_function.hpp"
#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

namespace detail {

/// sup_i (x_i y_j - v_i) for ascending x and ascending queries y, via the lower convex hull
/// of the points (x_i, v_i). Linear time; ties go to the lowest point index.
/// Returns -inf for every query when no point is given.
inline void conjugate_sweep(const std::vector<double>& x, const std::vector<double>& v, const std::vector<double>& y,
                            std::vector<double>& out) {
    out.assign(y.size(), -kInf);
    if (x.empty()) return;
    std::vector<std::size_t> hull;
    hull.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!hull.empty() && x[hull.back()] == x[i]) {
            if (v[i] < v[hull.back()]) hull.back() = i;
            continue;
        }
        while (hull.size() >= 2) {
            const std::size_t a = hull[hull.size() - 2], b = hull.back();
            const double cr = (x[b] - x[a]) * (v[i] - v[a]) - (v[b] - v[a]) * (x[i] - x[a]);
            if (cr <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    std::size_t j = 0;
    for (std::size_t q = 0; q < y.size(); ++q) {
        while (j + 1 < hull.size()) {
            const std::size_t a = hull[j], b = hull[j + 1];
            const double slope = (v[b] - v[a]) / (x[b] - x[a]);
            if (slope < y[q]) ++j;
            else break;
        }
        out[q] = x[hull[j]] * y[q] - v[hull[j]];
    }
}

inline std::vector<double> axis_coordinates(const Grid& g, int axis) {
    std::vector<double> c(static_cast<std::size_t>(g.points(axis)));
    for (int i = 0; i < g.points(axis); ++i) c[static_cast<std::size_t>(i)] = g.coordinate(axis, i);
    return c;
}

} // namespace detail

/// Largest |finite difference| of phi along each axis (over adjacent finite nodes).
inline std::array<double, 2> max_slopes(const SampledConvexFunction& phi) {
    std::array<double, 2> s{0, 0};
    const Grid& g = phi.grid();
    if (g.dim() == 1) {
        const auto& m = phi.model();
        for (std::size_t i = 0; i + 1 < m.xs.size(); ++i)
            if (m.xs[i + 1] > m.xs[i])
                s[0] = std::max(s[0], std::abs((m.ys[i + 1] - m.ys[i]) / (m.xs[i + 1] - m.xs[i])));
        return s;
    }
    for (int i0 = 0; i0 < g.points(0); ++i0)
        for (int i1 = 0; i1 < g.points(1); ++i1) {
            if (!phi.finite(i0, i1)) continue;
            if (i0 + 1 < g.points(0) && phi.finite(i0 + 1, i1))
                s[0] = std::max(s[0], std::abs(phi.value(i0 + 1, i1) - phi.value(i0, i1)) / g.spacing(0));
            if (i1 + 1 < g.points(1) && phi.finite(i0, i1 + 1))
                s[1] = std::max(s[1], std::abs(phi.value(i0, i1 + 1) - phi.value(i0, i1)) / g.spacing(1));
        }
    return s;
}

/// Dual grid whose half-width is the largest attained slope plus one primal spacing, with
/// the same number of nodes as the primal grid.
inline Grid auto_dual_grid(const SampledConvexFunction& phi) {
    const Grid& g = phi.grid();
    const auto s = max_slopes(phi);
    if (g.dim() == 1) return Grid(1, s[0] + g.spacing(0), g.points(0));
    return Grid(2, {s[0] + g.spacing(0), s[1] + g.spacing(1)}, {g.points(0), g.points(1)});
}

/// Discrete Legendre-Fenchel transform phi*(y) = max over finite nodes x of <x, y> - phi(x),
/// evaluated at every node of dual_grid.
///
/// Two-dimensional transforms factor over coordinates: a conjugate along axis 1 for every
/// row, followed by a conjugate along axis 0 for every dual column.
inline SampledConvexFunction legendre_transform(const SampledConvexFunction& phi, const Grid& dual_grid) {
    require(phi.has_finite(), ErrorCode::AllInfinite, "Legendre transform of an identically +inf function");
    require(phi.dim() == dual_grid.dim(), ErrorCode::GridMismatch, "dual grid dimension differs");
    const Grid& g = phi.grid();
    std::vector<double> out(dual_grid.size());
    if (g.dim() == 1) {
        const auto& m = phi.model();
        detail::conjugate_sweep(m.xs, m.ys, detail::axis_coordinates(dual_grid, 0), out);
        return SampledConvexFunction(dual_grid, std::move(out), Provenance::ConjugateOf,
                                     "conjugate_of(" + std::string(to_string(phi.provenance())) + ")");
    }
    const int m0 = g.points(0), m1 = g.points(1), p0 = dual_grid.points(0), p1 = dual_grid.points(1);
    const auto x1 = detail::axis_coordinates(g, 1), y1 = detail::axis_coordinates(dual_grid, 1);
    const auto y0 = detail::axis_coordinates(dual_grid, 0);
    // rows: A(i0, j1) = max_{i1} x1 y1 - phi(i0, i1)
    std::vector<double> a(static_cast<std::size_t>(m0) * p1, -kInf);
    std::vector<double> xs, vs, line;
    for (int i0 = 0; i0 < m0; ++i0) {
        xs.clear();
        vs.clear();
        for (int i1 = 0; i1 < m1; ++i1)
            if (phi.finite(i0, i1)) {
                xs.push_back(x1[static_cast<std::size_t>(i1)]);
                vs.push_back(phi.value(i0, i1));
            }
        detail::conjugate_sweep(xs, vs, y1, line);
        std::copy(line.begin(), line.end(), a.begin() + static_cast<std::ptrdiff_t>(i0) * p1);
    }
    // columns: phi*(j0, j1) = max_{i0} x0 y0 + A(i0, j1)
    for (int j1 = 0; j1 < p1; ++j1) {
        xs.clear();
        vs.clear();
        for (int i0 = 0; i0 < m0; ++i0) {
            const double v = a[static_cast<std::size_t>(i0) * p1 + j1];
            if (v > -kInf) {
                xs.push_back(g.coordinate(0, i0));
                vs.push_back(-v);
            }
        }
        detail::conjugate_sweep(xs, vs, y0, line);
        for (int j0 = 0; j0 < p0; ++j0) out[dual_grid.index(j0, j1)] = line[static_cast<std::size_t>(j0)];
    }
    return SampledConvexFunction(dual_grid, std::move(out), Provenance::ConjugateOf,
                                 "conjugate_of(" + std::string(to_string(phi.provenance())) + ")");
}

inline SampledConvexFunction legendre_transform(const SampledConvexFunction& phi) {
    return legendre_transform(phi, auto_dual_grid(phi));
}

/// Brute-force phi*(y) over all finite nodes (model breakpoints in one dimension).
inline double conjugate_at(const SampledConvexFunction& phi, const Vec& y) {
    double best = -kInf;
    if (phi.dim() == 1) {
        const auto& m = phi.model();
        for (std::size_t i = 0; i < m.xs.size(); ++i) best = std::max(best, m.xs[i] * y[0] - m.ys[i]);
        return best;
    }
    for (std::size_t k = 0; k < phi.values().size(); ++k)
        if (phi.finite(k)) best = std::max(best, dot(phi.grid().node(k), y) - phi.value(k));
    return best;
}

/// Marks every node outside `body` as +inf.
inline SampledConvexFunction mask_outside(const SampledConvexFunction& phi, const ConvexBody& body,
                                          double tol = 1e-9) {
    std::vector<double> v = phi.values();
    for (std::size_t k = 0; k < v.size(); ++k)
        if (!body.contains(phi.grid().node(k), tol)) v[k] = kInf;
    return SampledConvexFunction(phi.grid(), std::move(v), phi.provenance(), phi.source());
}

/// phi** by two conjugations; nodes outside the hull of phi's finite nodes stay +inf.
inline SampledConvexFunction biconjugate(const SampledConvexFunction& phi) {
    const auto star = legendre_transform(phi);
    auto back = legendre_transform(star, phi.grid());
    back = mask_outside(back, phi.domain_hull(), 1e-9 * std::max(1.0, phi.grid().spacing()));
    back.set_provenance(Provenance::ConjugateOf, "biconjugate");
    return back;
}

/// Multilinear interpolation of a finite sampled function, with linear extrapolation from the
/// boundary cells outside the grid box (conjugates are eventually affine).
inline double evaluate_extrapolated(const SampledConvexFunction& g, const Vec& y) {
    const Grid& gr = g.grid();
    int base[2] = {0, 0};
    double loc[2] = {0, 0};
    for (int a = 0; a < gr.dim(); ++a) {
        const double p = (y[a] + gr.half_width(a)) / gr.spacing(a);
        const int i = std::clamp(static_cast<int>(std::floor(p)), 0, gr.points(a) - 2);
        base[a] = i;
        loc[a] = p - i;
    }
    if (gr.dim() == 1) {
        const double v0 = g.value(base[0], 0), v1 = g.value(base[0] + 1, 0);
        return v0 + loc[0] * (v1 - v0);
    }
    const double v00 = g.value(base[0], base[1]), v10 = g.value(base[0] + 1, base[1]);
    const double v01 = g.value(base[0], base[1] + 1), v11 = g.value(base[0] + 1, base[1] + 1);
    const double s = loc[0], t = loc[1];
    return (1 - s) * (1 - t) * v00 + s * (1 - t) * v10 + (1 - s) * t * v01 + s * t * v11;
}

} // namespace orlicz
