#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/integration.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/prototype.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/weight.hpp"

namespace orlicz {

struct MomentValue {
    double value = 0;
    double truncation_estimate = 0;  // |V_R - V_{R/2}| on grids, 0 for closed forms
    double quadrature_estimate = 0;  // difference against lower-order rules / coarser grid
    double inner_value = 0;          // V_{R/2} (equals value for closed forms)
    double outer_shell_fraction = 0; // share of the value carried by the outermost 10% of the box
    bool truncation_flag = false;    // V_R and V_{R/2} disagree by more than 1%
    std::string route;               // "polar" or "grid"
};

struct MomentOptions {
    bool check_weight = true;
    bool throw_on_truncation = true;  // TruncationUnreliable when the outer shell carries > 1%
};

namespace detail {

inline double sum_mass(const LogConcaveFunction& f, const WeightFunction& w, bool coarse) {
    double s = 0;
    for_each_sample(f, w, [&](const Sample& x) { s += x.mass; }, IntegrationOptions{coarse});
    return s;
}

inline SampledConvexFunction coarsen(const SampledConvexFunction& phi) {
    const Grid c = phi.grid().coarsened();
    std::vector<double> v(c.size());
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto [i0, i1] = c.multi_index(k);
        v[k] = phi.value(2 * i0, phi.dim() == 2 ? 2 * i1 : 0);
    }
    return SampledConvexFunction(c, std::move(v), phi.provenance(), phi.source());
}

} // namespace detail

/// Orlicz moment V_omega(f) = int f omega dx.
inline MomentValue moment(const LogConcaveFunction& f, const WeightFunction& w, const MomentOptions& opt = {}) {
    if (opt.check_weight) require_admissible(w);
    MomentValue out;
    if (f.is_prototype()) {
        out.route = "polar";
        out.value = detail::sum_mass(f, w, false);
        out.quadrature_estimate = std::abs(out.value - detail::sum_mass(f, w, true));
        out.inner_value = out.value;
    } else {
        out.route = "grid";
        const Grid& g = f.sampled().grid();
        double total = 0, inner = 0, shell = 0;
        for_each_sample(f, w, [&](const Sample& s) {
            total += s.mass;
            bool in = true, outer = false;
            for (int a = 0; a < g.dim(); ++a) {
                const double r = std::abs(s.x[a]), hw = g.half_width(a);
                if (r > 0.5 * hw) in = false;
                if (r > 0.9 * hw) outer = true;
            }
            if (in) inner += s.mass;
            if (outer) shell += s.mass;
        });
        out.value = total;
        out.inner_value = inner;
        out.truncation_estimate = std::abs(total - inner);
        out.outer_shell_fraction = total > 0 ? shell / total : 0;
        out.truncation_flag = out.truncation_estimate > 0.01 * total;
        double q = std::abs(total - detail::sum_mass(f, w, true));
        if (g.dim() == 2 && g.coarsenable()) {
            const double coarse = detail::sum_mass(LogConcaveFunction(detail::coarsen(f.sampled())), w, false);
            q = std::max(q, std::abs(total - coarse) / 3);
        }
        out.quadrature_estimate = q;
        if (opt.throw_on_truncation)
            require(out.outer_shell_fraction <= 0.01, ErrorCode::TruncationUnreliable,
                    "outer grid shell carries " + std::to_string(100 * out.outer_shell_fraction) + "% of the moment");
    }
    require(std::isfinite(out.value) && out.value > 0, ErrorCode::QuadratureFailure,
            "moment is not a finite positive number");
    return out;
}

/// Dual Orlicz volume V_omega(K) = int_K omega = int_{S^{n-1}} omega_bar(rho_K(u), u) du.
inline MomentValue dual_orlicz_volume(const ConvexBody& k, const WeightFunction& w) {
    require(k.origin_interior(), ErrorCode::OriginNotInterior, "dual Orlicz volume needs o in int K");
    require(k.dim() == w.dim(), ErrorCode::GridMismatch, "body and weight dimensions differ");
    auto integrate = [&](bool coarse) {
        std::vector<double> breaks;
        for (const auto& v : k.vertices()) breaks.push_back(std::atan2(v[1], v[0]));
        double s = 0;
        for (const auto& [u, wu] : detail::angular_nodes(k.dim(), breaks, coarse, 2 * std::numbers::pi))
            s += wu * omega_bar(w, k.radial(u), u);
        return s;
    };
    MomentValue out;
    out.route = "polar";
    out.value = integrate(false);
    out.inner_value = out.value;
    out.quadrature_estimate = std::abs(out.value - integrate(true));
    return out;
}

/// ln F_omega(t), F_omega(t) = int exp(-t|x|) omega(x) dx; computed with a log-scale shift so
/// that fast-growing weights do not overflow.
inline double log_F_omega(const WeightFunction& w, double t) {
    require(t > 0, ErrorCode::InvalidArgument, "F_omega needs t > 0");
    require_admissible(w);
    const int n = w.dim();
    auto log_density = [&](double r, const Vec& u) { return -t * r + w.log_eval(r * u) + (n - 1) * std::log(r); };
    auto radial = [&](const Vec& u) {
        double shift = -kInf;
        for (double r = 1e-3; r < 1e12; r *= 1.25) shift = std::max(shift, log_density(r, u));
        quad::RayOptions opt;
        opt.singular_origin = true;
        opt.max_radius = 1e13;
        auto g = [&](double r) { return r > 0 ? std::exp(log_density(r, u) - shift) : 0.0; };
        const auto res = quad::ray(g, 0.0, kInf, {}, opt);
        require(res.converged && res.value > 0, ErrorCode::QuadratureFailure, "F_omega radial integral diverges");
        return std::pair{shift, res.value};
    };
    if (w.radial()) {
        const auto [shift, v] = radial(Vec{1, 0});
        return shift + std::log(v * sphere_area(n));
    }
    // anisotropic weights: common shift, then the angular integral
    double shift = -kInf;
    std::vector<std::pair<double, double>> parts;
    const auto dirs = detail::angular_nodes(n, {}, false);
    for (const auto& [u, wu] : dirs) {
        parts.push_back(radial(u));
        shift = std::max(shift, parts.back().first);
    }
    double s = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        s += dirs[i].second * parts[i].second * std::exp(parts[i].first - shift);
    return shift + std::log(s);
}

inline double F_omega(const WeightFunction& w, double t) { return std::exp(log_F_omega(w, t)); }

inline Growth F_growth_classification(const WeightFunction& w) {
    if (!classify_weight(w, false).admissible()) return Growth::Unknown;
    return w.F_growth();
}

struct MembershipReport {
    double integral = 0;        // int f over the truncation box (or exactly, for closed forms)
    double integral_half = 0;   // same over the half-size box
    double richardson = 0;      // (4 I_h - I_{2h}) / 3 with the coarsened grid
    double liminf_ratio = 0;    // min phi(x)/|x| on the outer shell
    bool converged = false;     // I_R and I_{R/2} agree within 10%
    bool member = false;
};

/// Numerical membership test for LC_n: 0 < int f < inf and phi grows at least linearly.
inline MembershipReport check_membership(const LogConcaveFunction& f) {
    MembershipReport rep;
    const WeightFunction one = WeightFunction::constant(f.dim());
    if (f.is_prototype()) {
        const Prototype& p = f.prototype();
        double ratio = kInf;
        for (const auto& u : uniform_directions(f.dim(), 64)) {
            const double r = 1e4;
            if (p.in_domain(r * u)) ratio = std::min(ratio, p.phi(r * u) / r);
        }
        rep.liminf_ratio = ratio;
        if (ratio > 0) {
            rep.integral = detail::sum_mass(f, one, false);
            rep.integral_half = rep.integral;
            rep.richardson = rep.integral;
            rep.converged = std::isfinite(rep.integral);
        } else {
            rep.integral = kInf;
            rep.integral_half = kInf;
            rep.richardson = kInf;
        }
        rep.member = rep.converged && rep.integral > 0 && ratio > 0;
        return rep;
    }
    const auto& phi = f.sampled();
    const Grid& g = phi.grid();
    MomentOptions opt;
    opt.check_weight = false;
    opt.throw_on_truncation = false;
    const auto m = moment(f, one, opt);
    rep.integral = m.value;
    rep.integral_half = m.inner_value;
    rep.richardson = m.value;
    if (g.coarsenable()) {
        const double coarse = detail::sum_mass(LogConcaveFunction(detail::coarsen(phi)), one, false);
        rep.richardson = (4 * m.value - coarse) / 3;
    }
    double ratio = kInf;
    for (std::size_t k = 0; k < phi.values().size(); ++k) {
        if (!phi.finite(k)) continue;
        const Vec x = g.node(k);
        bool outer = false;
        for (int a = 0; a < g.dim(); ++a)
            if (std::abs(x[a]) >= 0.9 * g.half_width(a)) outer = true;
        if (outer) ratio = std::min(ratio, phi.value(k) / norm(x));
    }
    rep.liminf_ratio = ratio;
    rep.converged = std::abs(m.value - m.inner_value) <= 0.1 * m.value;
    rep.member = rep.converged && m.value > 0 && std::isfinite(m.value) && ratio > 0;
    return rep;
}

/// int phi*(grad phi) f omega dx, using phi*(grad phi(x)) = <x, grad phi(x)> - phi(x).
inline double dual_entropy_moment(const LogConcaveFunction& f, const WeightFunction& w) {
    require(f.origin_interior_domain(), ErrorCode::OriginNotInteriorDomain, "needs o in int dom(phi)");
    require_admissible(w);
    double s = 0;
    for_each_sample(f, w, [&](const Sample& x) { s += x.mass * (dot(x.x, x.grad) - x.phi); });
    return s;
}

/// int |grad phi| f omega dx.
inline double gradient_moment(const LogConcaveFunction& f, const WeightFunction& w) {
    require(f.origin_interior_domain(), ErrorCode::OriginNotInteriorDomain, "needs o in int dom(phi)");
    require_admissible(w);
    double s = 0;
    for_each_sample(f, w, [&](const Sample& x) { s += x.mass * norm(x.grad); });
    return s;
}

} // namespace orlicz
