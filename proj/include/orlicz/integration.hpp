#pragma once

// Quadrature of f(x) omega(x) dx with access to grad phi at every quadrature point.
//
// Grid functions are integrated as e^{-phi_PL} omega where phi_PL is the piecewise-linear
// interpolant (segments in 1D, triangles in 2D); the gradient of phi_PL is constant on each
// simplex. Simplices with a vertex at the origin are integrated in collapsed coordinates
// with the apex at o and geometric refinement towards it, which keeps integrable weight
// singularities at o under control.
//
// Prototypes are integrated in polar coordinates, split at the support boundary, at the
// kinks of the potential and geometrically in r.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "orlicz/convex_function.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/prototype.hpp"
#include "orlicz/quadrature.hpp"
#include "orlicz/weight.hpp"

namespace orlicz {

struct Sample {
    Vec x;                        // quadrature point
    double mass = 0;              // f(x) omega(x) times the quadrature weight
    Vec grad{0, 0};               // grad phi(x)
    double phi = 0;               // phi(x)
    bool boundary_grade = false;  // simplex touches the boundary of dom(phi)
};

struct IntegrationOptions {
    bool coarse = false;  // lower-order rules, used for quadrature error estimates
};

namespace detail {

inline bool weight_singular_at_origin(const WeightFunction& w) {
    if (w.kind() == WeightKind::User) return true;
    return w.kind() == WeightKind::Power && w.parameter() < w.dim();
}

/// Splits [0, L] geometrically towards 0.
inline std::vector<double> geometric_knots(double L, int levels) {
    std::vector<double> k{0.0};
    for (int j = levels; j >= 1; --j) k.push_back(std::ldexp(L, -j));
    k.push_back(L);
    return k;
}

template <class Visit>
void grid_samples_1d(const SampledConvexFunction& phi, const WeightFunction& w, Visit& visit,
                     const IntegrationOptions& opt) {
    const auto& m = phi.model();
    if (m.xs.size() < 2) return;
    const quad::Rule& rule = quad::gauss_legendre(opt.coarse ? 4 : 8);
    const int levels = weight_singular_at_origin(w) ? 50 : 3;
    const double box = phi.grid().half_width(0);
    const bool lo_open = m.lo() > -box + 1e-12, hi_open = m.hi() < box - 1e-12;
    for (std::size_t i = 0; i + 1 < m.xs.size(); ++i) {
        const double a = m.xs[i], b = m.xs[i + 1];
        if (!(b > a)) continue;
        const double slope = (m.ys[i + 1] - m.ys[i]) / (b - a);
        const bool bgrade = (i == 0 && lo_open) || (i + 2 == m.xs.size() && hi_open);
        auto run = [&](double lo, double hi) {
            const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double x = mid + half * rule.nodes[q];
                const double p = m.ys[i] + slope * (x - a);
                Sample s;
                s.x = {x, 0};
                s.phi = p;
                s.grad = {slope, 0};
                s.boundary_grade = bgrade;
                s.mass = rule.weights[q] * half * std::exp(-p + w.log_eval(s.x));
                visit(s);
            }
        };
        auto towards_zero = [&](double lo, double hi, bool zero_at_lo) {
            const auto k = geometric_knots(hi - lo, levels);
            for (std::size_t j = 0; j + 1 < k.size(); ++j) {
                if (zero_at_lo) run(lo + k[j], lo + k[j + 1]);
                else run(hi - k[j + 1], hi - k[j]);
            }
        };
        if (a < 0 && b > 0) {
            towards_zero(a, 0.0, false);
            towards_zero(0.0, b, true);
        } else if (a == 0.0) {
            towards_zero(a, b, true);
        } else if (b == 0.0) {
            towards_zero(a, b, false);
        } else {
            run(a, b);
        }
    }
}

template <class Visit>
void grid_samples_2d(const SampledConvexFunction& phi, const WeightFunction& w, Visit& visit,
                     const IntegrationOptions& opt) {
    const Grid& g = phi.grid();
    const quad::Rule& rule = quad::gauss_legendre(opt.coarse ? 2 : 4);
    const int levels = weight_singular_at_origin(w) ? 50 : 1;
    const int m0 = g.points(0), m1 = g.points(1);
    const double h0 = g.spacing(0), h1 = g.spacing(1);
    const int c0 = g.origin_index(0), c1 = g.origin_index(1);

    // nodes with a masked 4-neighbour are domain-boundary nodes
    std::vector<std::uint8_t> edge(g.size(), 0);
    for (int i0 = 0; i0 < m0; ++i0)
        for (int i1 = 0; i1 < m1; ++i1) {
            if (!phi.finite(i0, i1)) continue;
            bool e = false;
            if (i0 > 0 && !phi.finite(i0 - 1, i1)) e = true;
            if (i0 + 1 < m0 && !phi.finite(i0 + 1, i1)) e = true;
            if (i1 > 0 && !phi.finite(i0, i1 - 1)) e = true;
            if (i1 + 1 < m1 && !phi.finite(i0, i1 + 1)) e = true;
            edge[g.index(i0, i1)] = e;
        }

    struct V {
        Vec x;
        double v;
        bool origin;
        bool edge;
    };
    auto vertex = [&](int i0, int i1) {
        return V{g.node(i0, i1), phi.value(i0, i1), i0 == c0 && i1 == c1, edge[g.index(i0, i1)] != 0};
    };
    auto triangle = [&](V p0, V p1, V p2, const Vec& grad) {
        // rotate so that the origin (if present) is the apex p0
        if (p1.origin) std::swap(p0, p1);
        else if (p2.origin) std::swap(p0, p2);
        const Vec e1 = p1.x - p0.x, e2 = p2.x - p1.x;
        const double jac = std::abs(cross(e1, e2));
        const bool bgrade = p0.edge || p1.edge || p2.edge;
        const auto knots = p0.origin ? geometric_knots(1.0, levels) : std::vector<double>{0.0, 1.0};
        for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
            const double sa = knots[j], sb = knots[j + 1];
            const double shalf = 0.5 * (sb - sa), smid = 0.5 * (sb + sa);
            for (std::size_t qs = 0; qs < rule.nodes.size(); ++qs) {
                const double s = smid + shalf * rule.nodes[qs];
                const double ws = rule.weights[qs] * shalf;
                for (std::size_t qt = 0; qt < rule.nodes.size(); ++qt) {
                    const double t = 0.5 + 0.5 * rule.nodes[qt];
                    const double wt = 0.5 * rule.weights[qt];
                    Sample smp;
                    smp.x = p0.x + s * e1 + (s * t) * e2;
                    smp.phi = p0.v + dot(grad, smp.x - p0.x);
                    smp.grad = grad;
                    smp.boundary_grade = bgrade;
                    smp.mass = ws * wt * s * jac * std::exp(-smp.phi + w.log_eval(smp.x));
                    visit(smp);
                }
            }
        }
    };
    for (int i0 = 0; i0 + 1 < m0; ++i0)
        for (int i1 = 0; i1 + 1 < m1; ++i1) {
            const bool f00 = phi.finite(i0, i1), f10 = phi.finite(i0 + 1, i1);
            const bool f01 = phi.finite(i0, i1 + 1), f11 = phi.finite(i0 + 1, i1 + 1);
            if (!f00 || !f11) continue;
            const V v00 = vertex(i0, i1), v11 = vertex(i0 + 1, i1 + 1);
            if (f10) {
                const V v10 = vertex(i0 + 1, i1);
                triangle(v00, v10, v11, Vec{(v10.v - v00.v) / h0, (v11.v - v10.v) / h1});
            }
            if (f01) {
                const V v01 = vertex(i0, i1 + 1);
                triangle(v00, v11, v01, Vec{(v11.v - v01.v) / h0, (v01.v - v00.v) / h1});
            }
        }
}

/// Angular nodes (direction, weight) covering S^{n-1}.
inline std::vector<std::pair<Vec, double>> angular_nodes(int dim, std::vector<double> breaks, bool coarse,
                                                         double max_width = std::numbers::pi / 16) {
    std::vector<std::pair<Vec, double>> out;
    if (dim == 1) return {{Vec{1, 0}, 1.0}, {Vec{-1, 0}, 1.0}};
    const double two_pi = 2 * std::numbers::pi;
    for (double& a : breaks) {
        a = std::fmod(a, two_pi);
        if (a < 0) a += two_pi;
    }
    breaks.push_back(0.0);
    breaks.push_back(two_pi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> knots;
    for (double a : breaks)
        if (knots.empty() || a - knots.back() > 1e-12) knots.push_back(a);
    if (two_pi - knots.back() > 1e-12) knots.push_back(two_pi);
    else knots.back() = two_pi;
    const quad::Rule& rule = quad::gauss_legendre(coarse ? 8 : 20);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const int pieces = std::max(1, static_cast<int>(std::ceil((knots[i + 1] - knots[i]) / max_width)));
        const double width = (knots[i + 1] - knots[i]) / pieces;
        for (int p = 0; p < pieces; ++p) {
            const double a = knots[i] + p * width;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                out.emplace_back(unit_at_angle(a + 0.5 * width * (1 + rule.nodes[q])), 0.5 * width * rule.weights[q]);
        }
    }
    return out;
}

template <class Visit>
void prototype_samples(const Prototype& p, const WeightFunction& w, Visit& visit, const IntegrationOptions& opt) {
    const int n = p.dim();
    const auto dirs = angular_nodes(n, p.angle_breaks(), opt.coarse,
                                    p.kind() == PrototypeKind::Indicator ? 2 * std::numbers::pi : std::numbers::pi / 16);

    if (p.kind() == PrototypeKind::Indicator) {
        // flat potential: each direction contributes c (omega_bar(r1) - omega_bar(r0)) at grad 0
        const double phi0 = -std::log(p.scale());
        for (const auto& [u, wu] : dirs) {
            const auto [r0, r1] = p.ray_range(u);
            if (!(r1 > r0)) continue;
            Sample s;
            s.x = (0.5 * (r0 + r1)) * u;
            s.phi = phi0;
            s.mass = wu * p.scale() * (omega_bar(w, r1, u) - omega_bar(w, r0, u));
            visit(s);
        }
        return;
    }

    const quad::Rule& rule = quad::gauss_legendre(opt.coarse ? 8 : 20);
    const int levels = weight_singular_at_origin(w) ? 50 : 4;
    for (const auto& [u, wu] : dirs) {
        const auto [r0, r1] = p.ray_range(u);
        if (!(r1 > r0)) continue;
        std::vector<double> knots{r0};
        for (double r : p.radial_breaks(u))
            if (r > r0 && r < r1) knots.push_back(r);
        if (std::isfinite(r1)) knots.push_back(r1);
        else if (knots.back() < 1.0) knots.push_back(1.0);
        // geometric refinement towards the origin and between far-apart knots
        std::vector<double> refined;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double a = knots[i], b = knots[i + 1];
            if (a == 0.0) {
                const auto g = geometric_knots(b, levels);
                refined.insert(refined.end(), g.begin(), g.end() - 1);
            } else {
                refined.push_back(a);
                for (double c = 2 * a; c < b * 0.75; c *= 2) refined.push_back(c);
            }
        }
        refined.push_back(knots.back());

        auto piece = [&](double a, double b, bool emit) {
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            double total = 0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double r = mid + half * rule.nodes[q];
                Sample s;
                s.x = r * u;
                s.phi = p.phi_unrestricted(s.x);
                s.grad = p.grad(s.x);
                s.mass = wu * rule.weights[q] * half * std::pow(r, n - 1) * std::exp(-s.phi + w.log_eval(s.x));
                total += s.mass;
                if (emit && s.mass > 0) visit(s);
            }
            return total;
        };
        double running = 0;
        for (std::size_t i = 0; i + 1 < refined.size(); ++i)
            if (refined[i + 1] > refined[i]) running += piece(refined[i], refined[i + 1], true);
        if (std::isfinite(r1)) continue;
        // tail: doubling pieces until two consecutive pieces are negligible and decaying
        double a = refined.back();
        int quiet = 0;
        double prev = kInf;
        while (a < 1e9) {
            const double v = piece(a, 2 * a, true);
            running += v;
            const bool small = v <= 1e-17 * running;
            quiet = (small && v <= prev) ? quiet + 1 : 0;
            prev = v;
            a *= 2;
            if (quiet >= 2) break;
        }
    }
}

} // namespace detail

/// Calls visit(Sample) for every quadrature point of int f omega dx.
template <class Visit>
void for_each_sample(const LogConcaveFunction& f, const WeightFunction& w, Visit&& visit,
                     const IntegrationOptions& opt = {}) {
    require(w.dim() == f.dim(), ErrorCode::GridMismatch, "weight and function dimensions differ");
    if (f.is_prototype()) {
        detail::prototype_samples(f.prototype(), w, visit, opt);
        return;
    }
    const auto& phi = f.sampled();
    if (phi.dim() == 1) detail::grid_samples_1d(phi, w, visit, opt);
    else detail::grid_samples_2d(phi, w, visit, opt);
}

} // namespace orlicz
