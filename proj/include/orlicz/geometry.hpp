#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orlicz/error.hpp"

namespace orlicz {

/// Point or vector in R^1 or R^2. One-dimensional data keeps the second slot at zero.
using Vec = std::array<double, 2>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double dot(const Vec& a, const Vec& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec& a) { return std::hypot(a[0], a[1]); }
inline double cross(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }
inline Vec operator+(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double s, const Vec& a) { return {s * a[0], s * a[1]}; }
inline Vec unit_at_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Uniformly spaced unit directions; in one dimension this is {-1, +1}.
inline std::vector<Vec> uniform_directions(int dim, int count) {
    if (dim == 1) return {Vec{-1.0, 0.0}, Vec{1.0, 0.0}};
    std::vector<Vec> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k)
        dirs.push_back(unit_at_angle(2.0 * std::numbers::pi * k / count));
    return dirs;
}

/// Area of the unit sphere S^{n-1}, i.e. n V_n(B^n_2).
inline double sphere_area(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

struct Facet {
    Vec normal;      // outer unit normal
    double offset;   // h_K(normal)
    double measure;  // H^{n-1} of the facet (1 for the endpoints of an interval)
    Vec a;           // endpoints (a == b in one dimension)
    Vec b;
};

/// Compact convex polytope in R^1 or R^2 stored by its vertices.
///
/// Two-dimensional vertices are kept in counter-clockwise order with collinear
/// points removed. Lower-dimensional sets (points, segments) are allowed for the
/// perturbation bodies L; they simply have no facets.
class ConvexBody {
public:
    ConvexBody() = default;

    static ConvexBody interval(double lo, double hi) {
        require(lo <= hi, ErrorCode::InvalidArgument, "interval with lo > hi");
        ConvexBody k;
        k.dim_ = 1;
        k.vertices_ = {Vec{lo, 0.0}, Vec{hi, 0.0}};
        k.build_facets();
        return k;
    }

    static ConvexBody box(double half_x, double half_y) {
        return from_points(2, {Vec{-half_x, -half_y}, Vec{half_x, -half_y}, Vec{half_x, half_y},
                               Vec{-half_x, half_y}});
    }

    /// Regular polygon inscribed in the circle of the given radius.
    static ConvexBody regular_polygon(double radius, int sides, double phase = 0.0) {
        std::vector<Vec> pts;
        for (int k = 0; k < sides; ++k)
            pts.push_back(radius * unit_at_angle(phase + 2.0 * std::numbers::pi * k / sides));
        return from_points(2, pts);
    }

    static ConvexBody singleton(int dim) {
        ConvexBody k;
        k.dim_ = dim;
        k.vertices_ = dim == 1 ? std::vector<Vec>{Vec{0, 0}, Vec{0, 0}} : std::vector<Vec>{Vec{0, 0}};
        k.build_facets();
        return k;
    }

    /// Convex hull of a point set.
    static ConvexBody from_points(int dim, std::vector<Vec> pts) {
        require(!pts.empty(), ErrorCode::InvalidArgument, "convex hull of an empty point set");
        ConvexBody k;
        k.dim_ = dim;
        if (dim == 1) {
            auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                                [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
            k.vertices_ = {Vec{(*lo)[0], 0.0}, Vec{(*hi)[0], 0.0}};
        } else {
            k.vertices_ = hull_2d(std::move(pts));
        }
        k.build_facets();
        return k;
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<Vec>& vertices() const { return vertices_; }
    [[nodiscard]] const std::vector<Facet>& facets() const { return facets_; }
    [[nodiscard]] bool full_dimensional() const { return !facets_.empty(); }

    [[nodiscard]] double lo() const { return vertices_.front()[0]; }
    [[nodiscard]] double hi() const { return vertices_.back()[0]; }

    /// h_K(v) = max over vertices of <v, vertex>; 1-homogeneous in v.
    [[nodiscard]] double support(const Vec& v) const {
        double best = -kInf;
        for (const auto& p : vertices_) best = std::max(best, dot(v, p));
        return best;
    }

    [[nodiscard]] bool contains(const Vec& x, double tol = 1e-9) const {
        if (dim_ == 1) return x[0] >= lo() - tol && x[0] <= hi() + tol;
        if (facets_.empty()) {
            // degenerate: a point or a segment
            if (vertices_.size() == 1) return norm(x - vertices_[0]) <= tol;
            const Vec d = vertices_[1] - vertices_[0];
            const double len = norm(d);
            const double s = dot(x - vertices_[0], d) / (len * len);
            return std::abs(cross(d, x - vertices_[0])) / len <= tol && s >= -tol / len && s <= 1 + tol / len;
        }
        for (const auto& f : facets_)
            if (dot(f.normal, x) > f.offset + tol) return false;
        return true;
    }

    [[nodiscard]] bool origin_interior(double tol = 1e-12) const {
        if (facets_.empty()) return false;
        return std::all_of(facets_.begin(), facets_.end(), [tol](const Facet& f) { return f.offset > tol; });
    }

    /// rho_K(u) = max{lambda > 0 : lambda u in K}; requires the origin in the interior.
    [[nodiscard]] double radial(const Vec& u) const {
        require(origin_interior(), ErrorCode::OriginNotInterior, "radial function needs o in int K");
        double r = kInf;
        for (const auto& f : facets_) {
            const double c = dot(u, f.normal);
            if (c > 0) r = std::min(r, f.offset / c);
        }
        return r;
    }

    /// Parameter interval {r >= 0 : r u in K}; empty (first > second) when the ray misses K.
    [[nodiscard]] std::pair<double, double> ray_interval(const Vec& u) const {
        if (facets_.empty()) return {1.0, 0.0};
        double r0 = 0.0, r1 = kInf;
        for (const auto& f : facets_) {
            const double c = dot(u, f.normal);
            if (std::abs(c) < 1e-15) {
                if (f.offset < 0) return {1.0, 0.0};
            } else if (c > 0) {
                r1 = std::min(r1, f.offset / c);
            } else {
                r0 = std::max(r0, f.offset / c);
            }
        }
        return {r0, r1};
    }

    [[nodiscard]] double volume() const {
        if (dim_ == 1) return hi() - lo();
        double a = 0;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            a += cross(vertices_[i], vertices_[(i + 1) % vertices_.size()]);
        return 0.5 * std::abs(a);
    }

    [[nodiscard]] ConvexBody scaled(double s) const {
        std::vector<Vec> pts;
        for (const auto& p : vertices_) pts.push_back(s * p);
        return from_points(dim_, std::move(pts));
    }

    [[nodiscard]] ConvexBody polar() const {
        require(origin_interior(), ErrorCode::OriginNotInterior, "polar body needs o in int K");
        if (dim_ == 1) return interval(1.0 / lo(), 1.0 / hi());
        std::vector<Vec> pts;
        for (const auto& f : facets_) pts.push_back((1.0 / f.offset) * f.normal);
        return from_points(2, std::move(pts));
    }

private:
    static std::vector<Vec> hull_2d(std::vector<Vec> pts) {
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const Vec& a, const Vec& b) { return norm(a - b) < 1e-14; }),
                  pts.end());
        if (pts.size() < 3) return pts;
        double scale = 0;
        for (const auto& p : pts) scale = std::max(scale, std::max(std::abs(p[0]), std::abs(p[1])));
        const double eps = 1e-12 * std::max(scale, 1.0) * std::max(scale, 1.0);
        std::vector<Vec> h(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= eps) --k;
            h[k++] = pts[i];
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
            while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= eps) --k;
            h[k++] = pts[i];
        }
        h.resize(k - 1);
        return h;
    }

    void build_facets() {
        facets_.clear();
        if (dim_ == 1) {
            if (hi() - lo() <= 0) return;
            facets_.push_back({Vec{-1, 0}, -lo(), 1.0, vertices_.front(), vertices_.front()});
            facets_.push_back({Vec{1, 0}, hi(), 1.0, vertices_.back(), vertices_.back()});
            return;
        }
        if (vertices_.size() < 3) return;
        for (std::size_t i = 0; i < vertices_.size(); ++i) {
            const Vec& a = vertices_[i];
            const Vec& b = vertices_[(i + 1) % vertices_.size()];
            const Vec e = b - a;
            const double len = norm(e);
            const Vec n{e[1] / len, -e[0] / len};
            facets_.push_back({n, dot(n, a), len, a, b});
        }
    }

    int dim_ = 1;
    std::vector<Vec> vertices_;
    std::vector<Facet> facets_;
};

/// K + tL as a polytope.
inline ConvexBody minkowski_sum(const ConvexBody& k, double t, const ConvexBody& l) {
    require(k.dim() == l.dim(), ErrorCode::GridMismatch, "Minkowski sum of bodies of different dimension");
    if (k.dim() == 1) return ConvexBody::interval(k.lo() + t * l.lo(), k.hi() + t * l.hi());
    std::vector<Vec> pts;
    for (const auto& p : k.vertices())
        for (const auto& q : l.vertices()) pts.push_back(p + t * q);
    return ConvexBody::from_points(2, std::move(pts));
}

/// Wulff shape [g] = intersection of {x : <x, v_k> <= g_k}.
///
/// Computed as the polar of conv{v_k / g_k}, which is exact for finite direction sets
/// whose positive hull is the whole space.
inline ConvexBody wulff_shape(int dim, std::span<const Vec> directions, std::span<const double> values) {
    require(directions.size() == values.size(), ErrorCode::InvalidArgument, "directions/values size mismatch");
    for (double g : values)
        require(g > 0, ErrorCode::NonPositiveSamples, "Wulff shape needs strictly positive samples");
    if (dim == 1) {
        double lo = -kInf, hi = kInf;
        for (std::size_t k = 0; k < directions.size(); ++k) {
            const double v = directions[k][0];
            if (v > 0) hi = std::min(hi, values[k] / v);
            if (v < 0) lo = std::max(lo, values[k] / v);
        }
        require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::WulffDegenerate,
                "directions do not bound the Wulff shape");
        return ConvexBody::interval(lo, hi);
    }
    std::vector<Vec> pts;
    for (std::size_t k = 0; k < directions.size(); ++k) pts.push_back((1.0 / values[k]) * directions[k]);
    const auto dual = ConvexBody::from_points(2, std::move(pts));
    require(dual.origin_interior(1e-14), ErrorCode::WulffDegenerate,
            "directions do not positively span the plane");
    return dual.polar();
}

/// Intersection of a convex polygon (or interval) with the halfspace {x : <n, x> <= offset}.
/// Returns std::nullopt when the intersection is empty.
inline std::optional<ConvexBody> clip_halfspace(const ConvexBody& k, const Vec& n, double offset) {
    if (k.dim() == 1) {
        double lo = k.lo(), hi = k.hi();
        if (n[0] > 0) hi = std::min(hi, offset / n[0]);
        else if (n[0] < 0) lo = std::max(lo, offset / n[0]);
        else if (offset < 0) return std::nullopt;
        if (lo > hi) return std::nullopt;
        return ConvexBody::interval(lo, hi);
    }
    const auto& v = k.vertices();
    std::vector<Vec> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vec& a = v[i];
        const Vec& b = v[(i + 1) % v.size()];
        const double da = dot(n, a) - offset, db = dot(n, b) - offset;
        if (da <= 0) out.push_back(a);
        if ((da < 0 && db > 0) || (da > 0 && db < 0)) out.push_back(a + (da / (da - db)) * (b - a));
    }
    if (out.empty()) return std::nullopt;
    return ConvexBody::from_points(2, std::move(out));
}

/// Hausdorff distance sup_u |h_K(u) - h_L(u)| over a dense direction set plus all facet normals.
inline double hausdorff_distance(const ConvexBody& k, const ConvexBody& l, int directions = 2048) {
    auto dirs = uniform_directions(k.dim(), directions);
    for (const auto& f : k.facets()) dirs.push_back(f.normal);
    for (const auto& f : l.facets()) dirs.push_back(f.normal);
    double d = 0;
    for (const auto& u : dirs) d = std::max(d, std::abs(k.support(u) - l.support(u)));
    return d;
}

} // namespace orlicz
