#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "orlicz/asplund.hpp"
#include "orlicz/curvature.hpp"
#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/integration.hpp"
#include "orlicz/legendre.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/moments.hpp"
#include "orlicz/weight.hpp"

namespace orlicz {

inline const std::vector<double>& default_ladder() {
    static const std::vector<double> ladder{0.1, 0.05, 0.025, 0.0125};
    return ladder;
}

struct RegularityReport {
    bool pass = false;
    double alpha = 0;
    std::vector<double> shells;  // |x| = h, 2h, 4h, 8h
    std::vector<double> ratios;  // max |f(x) - f(o)| / |x|^{alpha+1} on each shell
};

/// Heuristic check of |f(x) - f(o)| = O(|x|^{1+alpha}) near the origin: passes when the ratio on
/// the innermost shell is at most twice the ratio on the outermost one.
inline RegularityReport check_origin_regularity(const LogConcaveFunction& f, double alpha, double h = 0) {
    require(alpha > 0 && alpha < 1, ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    if (h <= 0) h = f.is_prototype() ? 1.0 / 16 : f.sampled().grid().spacing();
    RegularityReport rep;
    rep.alpha = alpha;
    const double f0 = f(Vec{0, 0});
    for (int k = 0; k < 4; ++k) {
        const double r = h * (1 << k);
        double m = 0;
        for (const auto& u : uniform_directions(f.dim(), 16)) m = std::max(m, std::abs(f(r * u) - f0));
        rep.shells.push_back(r);
        rep.ratios.push_back(m / std::pow(r, alpha + 1));
    }
    rep.pass = std::isfinite(rep.ratios.front()) && rep.ratios.front() <= 2 * rep.ratios.back();
    return rep;
}

struct LadderPoint {
    double t = 0;
    double value = 0;     // V_omega(f (+) t.g)
    double quotient = 0;  // (V(t) - V(0)) / t
};

struct VariationReport {
    double numeric_derivative = 0;
    double closed_form = 0;
    double relative_gap = 0;  // |numeric - closed| / max(1, |closed|)
    double base_value = 0;    // V_omega(f)
    std::vector<LadderPoint> ladder;
    std::vector<double> richardson;  // consecutive two-point extrapolations
    bool regularity_pass = false;
    double regularity_alpha = 0.5;
    std::string note;
};

namespace detail {

/// Least-squares line through the difference quotients, evaluated at t = 0.
inline double extrapolate_to_zero(const std::vector<LadderPoint>& pts) {
    if (pts.size() == 1) return pts[0].quotient;
    double st = 0, sq = 0, stt = 0, stq = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        st += p.t;
        sq += p.quotient;
        stt += p.t * p.t;
        stq += p.t * p.quotient;
    }
    const double slope = (n * stq - st * sq) / (n * stt - st * st);
    return (sq - slope * st) / n;
}

/// phi routed through the same dual grid as asplund_sum(phi, t, psi) in two dimensions, so that
/// V(t) - V(0) does not pick up the conjugation error of the Asplund route.
inline SampledConvexFunction base_potential(const SampledConvexFunction& phi, const SampledConvexFunction& psi) {
    if (phi.dim() == 1) return phi;
    const Grid dual = shared_dual_grid(phi, &psi);
    auto back = legendre_transform(legendre_transform(phi, dual), phi.grid());
    return mask_outside(back, phi.domain_hull(), 1e-9 * std::max(1.0, phi.grid().spacing()));
}

} // namespace detail

/// One-sided difference quotients of t -> V_omega(f (+) t.g), extrapolated linearly to t = 0.
/// V(0) is evaluated on the same grids as the ladder so that discretisation errors cancel.
inline VariationReport variation_numeric(const LogConcaveFunction& f, const LogConcaveFunction& g,
                                         const WeightFunction& w, const std::vector<double>& ladder,
                                         const Grid& grid) {
    require(!ladder.empty(), ErrorCode::InvalidArgument, "empty t ladder");
    require(g.support_body().has_value(), ErrorCode::NonCompactPerturbation, "perturbation g needs compact support");
    require_admissible(w);
    VariationReport rep;
    MomentOptions opt;
    opt.check_weight = false;
    const auto phi = f.to_grid(grid);
    const auto psi = g.to_grid(grid);
    rep.base_value = moment(LogConcaveFunction(detail::base_potential(phi, psi)), w, opt).value;
    for (double t : ladder) {
        require(t > 0, ErrorCode::InvalidArgument, "ladder values must be positive");
        const double v = moment(LogConcaveFunction(asplund_sum(phi, t, psi)), w, opt).value;
        rep.ladder.push_back({t, v, (v - rep.base_value) / t});
    }
    for (std::size_t i = 0; i + 1 < rep.ladder.size(); ++i) {
        const auto& a = rep.ladder[i];
        const auto& b = rep.ladder[i + 1];
        rep.richardson.push_back((a.t * b.quotient - b.t * a.quotient) / (a.t - b.t));
    }
    rep.numeric_derivative = detail::extrapolate_to_zero(rep.ladder);
    return rep;
}

/// psi* as a callable: exact for closed forms, else the dual-grid conjugate with
/// multilinear interpolation and linear extrapolation.
inline std::function<double(const Vec&)> conjugate_evaluator(const LogConcaveFunction& g) {
    if (g.is_prototype() && g.prototype().has_conjugate()) {
        const Prototype p = g.prototype();
        return [p](const Vec& y) { return p.conjugate(y); };
    }
    const auto psi = g.is_prototype() ? g.to_grid(default_grid(g.dim())) : g.sampled();
    const auto star = legendre_transform(psi, Grid(psi.dim(), 4 * psi.grid().half_width(0), psi.grid().points(0)));
    return [star](const Vec& y) { return evaluate_extrapolated(star, y); };
}

/// int psi*(grad phi) f omega dx + int h_{K_g} dC^s_omega(f, .).
inline double variation_closed_form(const LogConcaveFunction& f, const LogConcaveFunction& g, const WeightFunction& w) {
    require_admissible(w);
    const auto kg = g.support_body();
    require(kg.has_value(), ErrorCode::NonCompactPerturbation, "perturbation g needs compact support");
    const auto psi_star = conjugate_evaluator(g);
    double euclid = 0;
    for_each_sample(f, w, [&](const Sample& s) { euclid += s.mass * psi_star(s.grad); });
    const auto sph = spherical_curvature_measure(f, w);
    return euclid + sph.measure.integrate([&](const Vec& v) { return kg->support(v); });
}

/// Runs both sides and the regularity diagnostic; pairs outside the regularity hypothesis
/// are still compared and flagged in the note.
inline VariationReport variation_check(const LogConcaveFunction& f, const LogConcaveFunction& g,
                                       const WeightFunction& w, const std::vector<double>& ladder,
                                       const Grid& grid, double alpha = 0.5) {
    auto rep = variation_numeric(f, g, w, ladder, grid);
    rep.closed_form = variation_closed_form(f, g, w);
    rep.relative_gap = std::abs(rep.numeric_derivative - rep.closed_form) / std::max(1.0, std::abs(rep.closed_form));
    const auto reg = check_origin_regularity(f, alpha);
    rep.regularity_pass = reg.pass;
    rep.regularity_alpha = alpha;
    if (!reg.pass) rep.note = "outside theorem hypotheses (origin regularity fails)";
    return rep;
}

struct PointwiseReport {
    int checked = 0;
    double max_relative_error = 0;
};

/// At `count` random finite nodes of phi with grad phi defined, compares the quotient
/// ((f (+) t.g)(x) - f(x)) / t to psi*(grad phi(x)) f(x). Nodes are chosen by a fixed-seed
/// generator; only nodes where the predicted derivative is bounded away from zero
/// (|psi*(grad phi)| >= min_level) are used.
inline PointwiseReport pointwise_variation_check(const LogConcaveFunction& f, const LogConcaveFunction& g,
                                                 const Grid& grid, int count = 100, double t = 1e-3,
                                                 double min_level = 0.5, unsigned seed = 12345) {
    const auto phi = f.to_grid(grid);
    const auto sum = asplund_sum(phi, t, g.to_grid(grid));
    const auto psi_star = conjugate_evaluator(g);
    std::vector<std::size_t> candidates;
    const Grid& gr = phi.grid();
    for (std::size_t k = 0; k < gr.size(); ++k) {
        const auto [i0, i1] = gr.multi_index(k);
        if (gr.on_boundary(i0, i1)) continue;
        const auto ng = phi.node_gradient(i0, i1);
        if (!ng.valid || ng.boundary_grade || !sum.finite(k)) continue;
        if (std::abs(psi_star(ng.g)) < min_level) continue;
        if (phi.value(k) > 20) continue;
        candidates.push_back(k);
    }
    std::mt19937 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    if (candidates.size() > static_cast<std::size_t>(count)) candidates.resize(static_cast<std::size_t>(count));
    PointwiseReport rep;
    for (auto k : candidates) {
        const auto [i0, i1] = gr.multi_index(k);
        const auto ng = phi.node_gradient(i0, i1);
        const double fx = std::exp(-phi.value(k));
        const double quotient = (std::exp(-sum.value(k)) - fx) / t;
        const double predicted = psi_star(ng.g) * fx;
        rep.max_relative_error = std::max(rep.max_relative_error, std::abs(quotient - predicted) / std::abs(predicted));
        ++rep.checked;
    }
    return rep;
}

struct GeometricVariationReport {
    double numeric_derivative = 0;
    double closed_form = 0;
    double relative_gap = 0;
    std::vector<LadderPoint> ladder;
};

/// d/dt V_omega([h_K + t g]) at 0+ against int g / h_K dC_omega(K, .).
///
/// Wulff shapes are built over 256 uniform directions plus the facet normals of K.
inline GeometricVariationReport geometric_variation(const ConvexBody& k, const std::function<double(const Vec&)>& g,
                                                    const WeightFunction& w,
                                                    const std::vector<double>& ladder = default_ladder(),
                                                    int directions = 256) {
    require(k.origin_interior(), ErrorCode::OriginNotInterior, "geometric variation needs o in int K");
    auto dirs = uniform_directions(k.dim(), directions);
    for (const auto& fc : k.facets()) dirs.push_back(fc.normal);
    GeometricVariationReport rep;
    std::vector<double> h0(dirs.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) h0[i] = k.support(dirs[i]);
    const double v0 = dual_orlicz_volume(wulff_shape(k.dim(), dirs, h0), w).value;
    for (double t : ladder) {
        std::vector<double> ht(dirs.size());
        for (std::size_t i = 0; i < dirs.size(); ++i) {
            ht[i] = h0[i] + t * g(dirs[i]);
            require(ht[i] > 0, ErrorCode::WulffDegenerate, "h_K + t g is not positive on the ladder");
        }
        const double v = dual_orlicz_volume(wulff_shape(k.dim(), dirs, ht), w).value;
        rep.ladder.push_back({t, v, (v - v0) / t});
    }
    rep.numeric_derivative = detail::extrapolate_to_zero(rep.ladder);
    const auto c = body_curvature_measure(k, w);
    rep.closed_form = c.integrate([&](const Vec& v) { return g(v) / k.support(v); });
    rep.relative_gap = std::abs(rep.numeric_derivative - rep.closed_form) / std::max(1.0, std::abs(rep.closed_form));
    return rep;
}

} // namespace orlicz
