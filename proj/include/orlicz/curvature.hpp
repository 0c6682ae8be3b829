#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/integration.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/moments.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/weight.hpp"

namespace orlicz {

/// int over a facet of g(x) dH^{n-1}: 16-point Gauss-Legendre along an edge, point evaluation
/// at the endpoint of an interval.
template <class G>
double facet_integral(int dim, const Facet& f, G&& g) {
    if (dim == 1) return g(f.a);
    const quad::Rule& rule = quad::gauss_legendre(16);
    double s = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = 0.5 * (1 + rule.nodes[i]);
        s += 0.5 * rule.weights[i] * g(f.a + t * (f.b - f.a));
    }
    return s * f.measure;
}

struct EuclideanMeasure {
    DiscreteMeasure measure;
    double total = 0;                // equals the moment of f
    double boundary_grade_mass = 0;  // mass from simplices touching the domain boundary
    bool degenerate_gradient = false;
};

/// Push-forward of f omega dx under grad phi, binned into cells of width bin_width
/// (default: the grid spacing for grid functions, 1/64 for closed forms).
inline EuclideanMeasure euclidean_curvature_measure(const LogConcaveFunction& f, const WeightFunction& w,
                                                    double bin_width = 0) {
    require_admissible(w);
    if (bin_width <= 0) bin_width = f.is_prototype() ? 1.0 / 64 : f.sampled().grid().spacing();
    EuclideanMeasure out;
    DiscreteMeasure raw(Ambient::Euclidean, f.dim());
    double interior = 0;
    for_each_sample(f, w, [&](const Sample& s) {
        raw.add(s.grad, s.mass);
        out.total += s.mass;
        if (s.boundary_grade) out.boundary_grade_mass += s.mass;
        else interior += s.mass;
    });
    out.measure = raw.binned(bin_width);
    out.degenerate_gradient = out.boundary_grade_mass > 0.05 * interior;
    return out;
}

namespace detail {

/// Value of phi on the boundary of its compact domain, using the lower semi-continuous
/// extension (radial limit towards the maximiser) at grid resolution.
inline double boundary_phi(const LogConcaveFunction& f, const Vec& x) {
    if (f.is_prototype()) return f.prototype().phi_unrestricted(x);
    const auto& phi = f.sampled();
    double v = phi.evaluate(x);
    if (std::isfinite(v)) return v;
    const Vec c = f.max_location();
    const double d = norm(x - c);
    const double h = phi.grid().spacing();
    for (int j = 1; j <= 4 && d > 0; ++j) {
        const double lam = std::min(1.0, j * h / d);
        v = phi.evaluate(x + lam * (c - x));
        if (std::isfinite(v)) return v;
    }
    return phi.min_value();
}

} // namespace detail

struct SphericalMeasure {
    DiscreteMeasure measure;
    std::string note;  // "UnboundedSupport" when f has full support (measure is zero)
};

/// One atom per facet of the support polytope K_f at its outer normal, with mass
/// int_facet e^{-phi} omega dH^{n-1}.
inline SphericalMeasure spherical_curvature_measure(const LogConcaveFunction& f, const WeightFunction& w) {
    require_admissible(w);
    SphericalMeasure out;
    out.measure = DiscreteMeasure(Ambient::Sphere, f.dim());
    const auto k = f.support_body();
    if (!k) {
        out.note = std::string(to_string(ErrorCode::UnboundedSupport));
        return out;
    }
    for (const auto& fc : k->facets()) {
        const double m = facet_integral(f.dim(), fc, [&](const Vec& x) {
            return std::exp(-detail::boundary_phi(f, x) + w.log_eval(x));
        });
        out.measure.add(fc.normal, m);
    }
    return out;
}

/// Dual Orlicz curvature measure of a body: atoms h_K(nu) int_facet omega at the facet normals.
inline DiscreteMeasure body_curvature_measure(const ConvexBody& k, const WeightFunction& w) {
    require(k.origin_interior(), ErrorCode::OriginNotInterior, "body curvature measure needs o in int K");
    require_admissible(w);
    DiscreteMeasure out(Ambient::Sphere, k.dim());
    for (const auto& fc : k.facets())
        out.add(fc.normal, fc.offset * facet_integral(k.dim(), fc, [&](const Vec& x) { return w(x); }));
    return out;
}

/// V_{1,omega}(K, L) = int h_L / h_K dC_omega(K, .).
inline double mixed_volume_V1(const ConvexBody& k, const ConvexBody& l, const WeightFunction& w) {
    const auto c = body_curvature_measure(k, w);
    return c.integrate([&](const Vec& v) { return l.support(v) / k.support(v); });
}

/// TV_{L,omega}(f) = int h_L(grad phi) f omega dx + int h_L dC^s_omega(f, .).
inline double weighted_total_variation(const LogConcaveFunction& f, const ConvexBody& l, const WeightFunction& w) {
    require(f.origin_interior_domain(), ErrorCode::OriginNotInteriorDomain, "needs o in int dom(phi)");
    double s = 0;
    for_each_sample(f, w, [&](const Sample& x) { s += x.mass * l.support(x.grad); });
    const auto sph = spherical_curvature_measure(f, w);
    return s + sph.measure.integrate([&](const Vec& v) { return l.support(v); });
}

/// Anisotropic weighted perimeter of a polytope: sum over facets of h_L(nu) int_facet omega.
inline double weighted_perimeter(const ConvexBody& e, const ConvexBody& l, const WeightFunction& w) {
    double s = 0;
    for (const auto& fc : e.facets())
        s += l.support(fc.normal) * facet_integral(e.dim(), fc, [&](const Vec& x) { return w(x); });
    return s;
}

struct CoareaReport {
    double level_integral = 0;  // int_0^{max f} Per_{L,omega}(E_s) ds
    double total_variation = 0;
    double relative_gap = 0;
    int levels = 0;
};

/// Midpoint rule in s over `levels` superlevel sets, compared to weighted_total_variation.
inline CoareaReport coarea_check(const LogConcaveFunction& f, const ConvexBody& l, const WeightFunction& w,
                                 int levels = 200) {
    require(levels > 0, ErrorCode::InvalidArgument, "need at least one level");
    CoareaReport rep;
    rep.levels = levels;
    rep.total_variation = weighted_total_variation(f, l, w);
    const double smax = std::exp(-f.min_phi());
    const double ds = smax / levels;
    for (int i = 0; i < levels; ++i) {
        const double s = (i + 0.5) * ds;
        rep.level_integral += ds * weighted_perimeter(superlevel_set(f, s), l, w);
    }
    rep.relative_gap = std::abs(rep.level_integral - rep.total_variation) / std::max(std::abs(rep.total_variation), 1e-300);
    return rep;
}

} // namespace orlicz
