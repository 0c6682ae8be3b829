#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "orlicz/convex_function.hpp"
#include "orlicz/error.hpp"
#include "orlicz/legendre.hpp"
#include "orlicz/log_concave.hpp"

namespace orlicz {

namespace detail {

/// Infimal convolution of two convex piecewise-linear functions: the epigraph Minkowski sum,
/// built by merging the edges of both graphs in order of slope.
inline PiecewiseLinear infimal_convolution(const PiecewiseLinear& a, const PiecewiseLinear& b) {
    struct Edge {
        double dx, dy;
        int owner;
    };
    std::vector<Edge> edges;
    for (std::size_t i = 0; i + 1 < a.xs.size(); ++i)
        if (a.xs[i + 1] > a.xs[i]) edges.push_back({a.xs[i + 1] - a.xs[i], a.ys[i + 1] - a.ys[i], 0});
    for (std::size_t i = 0; i + 1 < b.xs.size(); ++i)
        if (b.xs[i + 1] > b.xs[i]) edges.push_back({b.xs[i + 1] - b.xs[i], b.ys[i + 1] - b.ys[i], 1});
    std::stable_sort(edges.begin(), edges.end(),
                     [](const Edge& e, const Edge& f) { return e.dy * f.dx < f.dy * e.dx; });
    PiecewiseLinear out;
    double x = a.xs.front() + b.xs.front(), y = a.ys.front() + b.ys.front();
    out.xs.push_back(x);
    out.ys.push_back(y);
    for (const auto& e : edges) {
        x += e.dx;
        y += e.dy;
        out.xs.push_back(x);
        out.ys.push_back(y);
    }
    return out;
}

inline PiecewiseLinear scaled_epigraph(const PiecewiseLinear& m, double t) {
    PiecewiseLinear out;
    for (std::size_t i = 0; i < m.xs.size(); ++i) {
        out.xs.push_back(t * m.xs[i]);
        out.ys.push_back(t * m.ys[i]);
    }
    return out;
}

inline Grid shared_dual_grid(const SampledConvexFunction& phi, const SampledConvexFunction* psi) {
    auto s = max_slopes(phi);
    if (psi) {
        const auto s2 = max_slopes(*psi);
        s = {std::max(s[0], s2[0]), std::max(s[1], s2[1])};
    }
    const Grid& g = phi.grid();
    if (g.dim() == 1) return Grid(1, s[0] + g.spacing(0), g.points(0));
    // dual nodes on the primal lattice when that stays within 4x the primal node count per axis:
    // conjugates of sampled smooth potentials are then exact at the dual nodes
    std::array<double, 2> half{};
    std::array<int, 2> pts{};
    for (int a = 0; a < 2; ++a) {
        const double h = g.spacing(a);
        const int k = std::max(8, static_cast<int>(std::ceil((s[a] + h) / h)));
        if (2 * k + 1 <= 4 * (g.points(a) - 1) + 1) {
            half[a] = k * h;
            pts[a] = 2 * k + 1;
        } else {
            half[a] = s[a] + h;
            pts[a] = g.points(a);
        }
    }
    return Grid(2, half, pts);
}

} // namespace detail

/// Potential of f (+) t.g, i.e. (phi* + t psi*)*, on phi's grid.
///
/// One-dimensional inputs are combined exactly as piecewise-linear functions (the result
/// is the infimal convolution of phi with t psi(./t)). Two-dimensional inputs are
/// conjugated onto a shared dual grid, combined there and conjugated back at the primal
/// nodes; nodes outside dom(phi) + t dom(psi) are masked.
inline SampledConvexFunction asplund_sum(const SampledConvexFunction& phi, double t, const SampledConvexFunction& psi) {
    require(t > 0, ErrorCode::InvalidArgument, "Asplund sum needs t > 0");
    require(phi.grid().same_shape(psi.grid()), ErrorCode::GridMismatch, "Asplund sum operands on different grids");
    require(phi.has_finite() && psi.has_finite(), ErrorCode::EmptyEffectiveDomain, "operand identically +inf");
    if (phi.dim() == 1) {
        auto m = detail::infimal_convolution(phi.model().convexified(),
                                             detail::scaled_epigraph(psi.model().convexified(), t));
        return SampledConvexFunction::from_model(phi.grid(), std::move(m), Provenance::AsplundSum, "asplund_sum");
    }
    const Grid dual = detail::shared_dual_grid(phi, &psi);
    const auto a = legendre_transform(phi, dual);
    const auto b = legendre_transform(psi, dual);
    std::vector<double> sum(dual.size());
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = a.value(k) + t * b.value(k);
    auto back = legendre_transform(SampledConvexFunction(dual, std::move(sum)), phi.grid());
    back = mask_outside(back, minkowski_sum(phi.domain_hull(), t, psi.domain_hull()),
                        1e-9 * std::max(1.0, phi.grid().spacing()));
    back.set_provenance(Provenance::AsplundSum, "asplund_sum");
    return back;
}

/// Potential of t.f = e^{-(t phi*)*}, i.e. t phi(x/t).
inline SampledConvexFunction scalar_mult(double t, const SampledConvexFunction& phi) {
    require(t > 0, ErrorCode::InvalidArgument, "scalar multiplication needs t > 0");
    require(phi.has_finite(), ErrorCode::EmptyEffectiveDomain, "operand identically +inf");
    if (phi.dim() == 1)
        return SampledConvexFunction::from_model(phi.grid(), detail::scaled_epigraph(phi.model().convexified(), t),
                                                 Provenance::AsplundSum, "scalar_mult");
    const Grid dual = detail::shared_dual_grid(phi, nullptr);
    auto a = legendre_transform(phi, dual);
    std::vector<double> v(dual.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = t * a.value(k);
    auto back = legendre_transform(SampledConvexFunction(dual, std::move(v)), phi.grid());
    back = mask_outside(back, phi.domain_hull().scaled(t), 1e-9 * std::max(1.0, phi.grid().spacing()));
    back.set_provenance(Provenance::AsplundSum, "scalar_mult");
    return back;
}

/// Grid on which combinations of f and g are evaluated: the grid of whichever operand is
/// already sampled, else the default grid.
inline Grid working_grid(const LogConcaveFunction& f, const LogConcaveFunction* g = nullptr) {
    if (!f.is_prototype()) return f.sampled().grid();
    if (g && !g->is_prototype()) return g->sampled().grid();
    return default_grid(f.dim());
}

inline LogConcaveFunction asplund_sum(const LogConcaveFunction& f, double t, const LogConcaveFunction& g,
                                      const Grid& grid) {
    require(f.dim() == g.dim(), ErrorCode::GridMismatch, "Asplund sum of functions of different dimension");
    return LogConcaveFunction(asplund_sum(f.to_grid(grid), t, g.to_grid(grid)));
}

inline LogConcaveFunction asplund_sum(const LogConcaveFunction& f, double t, const LogConcaveFunction& g) {
    return asplund_sum(f, t, g, working_grid(f, &g));
}

inline LogConcaveFunction scalar_mult(double t, const LogConcaveFunction& f, const Grid& grid) {
    return LogConcaveFunction(scalar_mult(t, f.to_grid(grid)));
}

inline LogConcaveFunction scalar_mult(double t, const LogConcaveFunction& f) {
    return scalar_mult(t, f, working_grid(f));
}

} // namespace orlicz
