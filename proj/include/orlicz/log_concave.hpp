#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orlicz/convex_function.hpp"
#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/prototype.hpp"

namespace orlicz {

/// Default discretisation: R = 8 with 257 nodes in one dimension, 129 per axis in two.
inline Grid default_grid(int dim) { return Grid(dim, 8.0, dim == 1 ? 257 : 129); }

/// f = e^{-phi} with phi either a closed-form prototype or a sampled convex function.
class LogConcaveFunction {
public:
    LogConcaveFunction(Prototype p) : rep_(std::move(p)) {}  // NOLINT(google-explicit-constructor)
    LogConcaveFunction(SampledConvexFunction s) : rep_(std::move(s)) {
        require(sampled().has_finite(), ErrorCode::AllInfinite, "log-concave function is identically zero");
    }

    [[nodiscard]] bool is_prototype() const { return std::holds_alternative<Prototype>(rep_); }
    [[nodiscard]] const Prototype& prototype() const { return std::get<Prototype>(rep_); }
    [[nodiscard]] const SampledConvexFunction& sampled() const { return std::get<SampledConvexFunction>(rep_); }

    [[nodiscard]] int dim() const { return is_prototype() ? prototype().dim() : sampled().dim(); }

    [[nodiscard]] std::string description() const {
        if (is_prototype()) return prototype().name();
        return "grid(" + std::string(to_string(sampled().provenance())) + ")";
    }

    [[nodiscard]] double phi(const Vec& x) const {
        return is_prototype() ? prototype().phi(x) : sampled().evaluate(x);
    }
    double operator()(const Vec& x) const { return std::exp(-phi(x)); }

    /// min phi, i.e. -ln max f.
    [[nodiscard]] double min_phi() const {
        if (!is_prototype()) return sampled().min_value();
        const Prototype& p = prototype();
        switch (p.kind()) {
        case PrototypeKind::Indicator: return -std::log(p.scale());
        case PrototypeKind::RadialPower:
            if (!p.body() || p.body()->contains(Vec{0, 0}, 1e-14)) return 0.0;
            break;
        case PrototypeKind::MaxAffine:
            if (!p.body()) return -p.conjugate(Vec{0, 0});
            break;
        }
        // restricted prototypes not containing o: minimise over a fine sample of the body
        double m = kInf;
        const ConvexBody& k = *p.body();
        for (const auto& v : k.vertices()) m = std::min(m, p.phi(v));
        return m;
    }

    /// Point where f is maximal (the origin for geometric log-concave inputs).
    [[nodiscard]] Vec max_location() const {
        if (!is_prototype()) {
            const auto& s = sampled();
            double m = kInf;
            Vec at{0, 0};
            for (std::size_t k = 0; k < s.values().size(); ++k)
                if (s.finite(k) && s.value(k) < m) {
                    m = s.value(k);
                    at = s.grid().node(k);
                }
            return at;
        }
        const Prototype& p = prototype();
        if (p.kind() == PrototypeKind::Indicator) {
            if (p.body()->contains(Vec{0, 0}, 1e-14)) return {0, 0};
            return p.body()->vertices().front();
        }
        return {0, 0};
    }

    /// Compact support polytope, or nullopt when f has full support.
    [[nodiscard]] std::optional<ConvexBody> support_body() const {
        if (is_prototype()) return prototype().body();
        const auto& s = sampled();
        if (s.touches_box()) return std::nullopt;
        return s.domain_hull();
    }

    /// True when the origin is an interior point of dom(phi).
    [[nodiscard]] bool origin_interior_domain() const {
        if (is_prototype()) {
            const auto& b = prototype().body();
            return !b || b->origin_interior(1e-12);
        }
        const auto& s = sampled();
        const Grid& g = s.grid();
        const int c0 = g.origin_index(0), c1 = g.origin_index(1);
        if (g.dim() == 1) return s.model().lo() < 0 && s.model().hi() > 0;
        for (int d0 = -1; d0 <= 1; ++d0)
            for (int d1 = -1; d1 <= 1; ++d1)
                if (!s.finite(c0 + d0, c1 + d1)) return false;
        return true;
    }

    /// Samples on a grid. One-dimensional prototypes keep an exact piecewise-linear model
    /// whose breakpoints include the support endpoints and any max-affine kinks.
    [[nodiscard]] SampledConvexFunction to_grid(const Grid& grid) const {
        require(grid.dim() == dim(), ErrorCode::GridMismatch, "grid dimension differs from function dimension");
        if (!is_prototype()) {
            require(sampled().grid().same_shape(grid), ErrorCode::GridMismatch, "sampled function lives on another grid");
            return sampled();
        }
        const Prototype& p = prototype();
        if (grid.dim() == 2)
            return SampledConvexFunction::sample(grid, [&](const Vec& x) { return p.phi(x); }, Provenance::ClosedForm,
                                                 p.name());
        const double R = grid.half_width(0);
        double lo = -R, hi = R;
        if (p.body()) {
            lo = std::max(lo, p.body()->lo());
            hi = std::min(hi, p.body()->hi());
        }
        require(lo <= hi, ErrorCode::EmptyEffectiveDomain, "support does not meet the grid box");
        std::vector<double> xs{lo};
        for (int i = 0; i < grid.points(0); ++i) {
            const double x = grid.coordinate(0, i);
            if (x > lo && x < hi) xs.push_back(x);
        }
        if (hi > lo) xs.push_back(hi);
        if (p.kind() == PrototypeKind::MaxAffine) {
            for (double r : p.radial_breaks(Vec{1, 0}))
                if (r < hi) xs.push_back(r);
            for (double r : p.radial_breaks(Vec{-1, 0}))
                if (-r > lo) xs.push_back(-r);
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        }
        PiecewiseLinear model;
        for (double x : xs) {
            model.xs.push_back(x);
            model.ys.push_back(p.phi_unrestricted(Vec{x, 0}));
        }
        return SampledConvexFunction::from_model(grid, model.convexified(), Provenance::ClosedForm, p.name());
    }

private:
    std::variant<Prototype, SampledConvexFunction> rep_;
};

namespace detail {

inline ConvexBody disc_polygon(double radius, int sides = 512) {
    return ConvexBody::regular_polygon(radius, sides);
}

inline ConvexBody level_interval(const PiecewiseLinear& m, double lambda) {
    double lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < m.xs.size(); ++i)
        if (m.ys[i] <= lambda) {
            lo = std::min(lo, m.xs[i]);
            hi = std::max(hi, m.xs[i]);
        }
    for (std::size_t i = 0; i + 1 < m.xs.size(); ++i) {
        const double a = m.ys[i] - lambda, b = m.ys[i + 1] - lambda;
        if ((a < 0) != (b < 0) && a != b) {
            const double x = m.xs[i] + (a / (a - b)) * (m.xs[i + 1] - m.xs[i]);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    return ConvexBody::interval(lo, hi);
}

} // namespace detail

/// E_s(f) = {x : f(x) >= s} as a polytope.
///
/// Grid functions use the piecewise-linear interpolant: the hull of nodes inside the
/// level together with the crossing points on mesh edges. Prototypes use their exact level
/// sets (discs are represented by inscribed 512-gons).
inline ConvexBody superlevel_set(const LogConcaveFunction& f, double s) {
    require(s > 0, ErrorCode::InvalidArgument, "superlevel height must be positive");
    const double lambda = -std::log(s);
    const double floor_phi = f.min_phi();
    require(lambda >= floor_phi - 1e-12 * std::max(1.0, std::abs(floor_phi)), ErrorCode::EmptyLevel,
            "level s exceeds max f");
    if (f.is_prototype()) {
        const Prototype& p = f.prototype();
        const int n = p.dim();
        std::optional<ConvexBody> level;
        switch (p.kind()) {
        case PrototypeKind::Indicator: return *p.body();
        case PrototypeKind::RadialPower: {
            const double r = std::pow(std::max(lambda, 0.0) / p.coefficient(), 1.0 / p.exponent());
            level = n == 1 ? ConvexBody::interval(-r, r) : detail::disc_polygon(r);
            break;
        }
        case PrototypeKind::MaxAffine: {
            const double big = 1e4;
            level = n == 1 ? ConvexBody::interval(-big, big) : ConvexBody::box(big, big);
            for (std::size_t k = 0; k < p.slopes().size() && level; ++k)
                level = clip_halfspace(*level, p.slopes()[k], lambda - p.offsets()[k]);
            require(level.has_value(), ErrorCode::EmptyLevel, "empty max-affine level set");
            require(level->support(Vec{1, 0}) < big && level->support(Vec{-1, 0}) < big, ErrorCode::UnboundedSupport,
                    "max-affine level set is unbounded");
            break;
        }
        }
        if (p.body())
            for (const auto& fc : p.body()->facets()) {
                level = clip_halfspace(*level, fc.normal, fc.offset);
                require(level.has_value(), ErrorCode::EmptyLevel, "level set misses the support");
            }
        return *level;
    }

    const auto& phi = f.sampled();
    if (phi.dim() == 1) return detail::level_interval(phi.model(), lambda);
    const Grid& g = phi.grid();
    std::vector<Vec> pts;
    const int m0 = g.points(0), m1 = g.points(1);
    const double tol = 1e-12 * phi.value_scale();
    for (int i0 = 0; i0 < m0; ++i0)
        for (int i1 = 0; i1 < m1; ++i1) {
            if (!phi.finite(i0, i1)) continue;
            const double a = phi.value(i0, i1) - lambda;
            if (a <= tol) pts.push_back(g.node(i0, i1));
            // crossings on the mesh edges leaving this node (right, up, diagonal)
            for (auto [d0, d1] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
                const int j0 = i0 + d0, j1 = i1 + d1;
                if (j0 >= m0 || j1 >= m1 || !phi.finite(j0, j1)) continue;
                const double b = phi.value(j0, j1) - lambda;
                if ((a < 0) != (b < 0) && a != b) {
                    const double t = a / (a - b);
                    pts.push_back(g.node(i0, i1) + t * (g.node(j0, j1) - g.node(i0, i1)));
                }
            }
        }
    require(!pts.empty(), ErrorCode::EmptyLevel, "no grid node inside the level set");
    return ConvexBody::from_points(2, std::move(pts));
}

} // namespace orlicz
