#pragma once

// Thin wrappers over Boost.Math quadrature used by every integration path:
// Gauss-Legendre node tables, adaptive Gauss-Kronrod on finite pieces, tanh-sinh on
// pieces touching a (possibly singular) endpoint, and a chunked ray integral for
// half-lines.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "orlicz/geometry.hpp"

namespace orlicz::quad {

/// Gauss-Legendre rule on [-1, 1].
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {
template <int N>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = x.size(); i-- > 0;) {
        if (x[i] == 0.0) continue;
        r.nodes.push_back(-x[i]);
        r.weights.push_back(w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.nodes.push_back(x[i]);
        r.weights.push_back(w[i]);
    }
    // keep ascending order with the zero node (odd N) in the middle
    std::vector<std::size_t> order(r.nodes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return r.nodes[a] < r.nodes[b]; });
    Rule sorted;
    for (auto i : order) {
        sorted.nodes.push_back(r.nodes[i]);
        sorted.weights.push_back(r.weights[i]);
    }
    return sorted;
}
} // namespace detail

inline const Rule& gauss_legendre(int n) {
    static const Rule r2 = detail::make_rule<2>();
    static const Rule r4 = detail::make_rule<4>();
    static const Rule r8 = detail::make_rule<8>();
    static const Rule r16 = detail::make_rule<16>();
    static const Rule r20 = detail::make_rule<20>();
    switch (n) {
    case 2: return r2;
    case 4: return r4;
    case 8: return r8;
    case 16: return r16;
    default: return r20;
    }
}

/// Fixed Gauss-Legendre sum of f over [a, b].
template <class F>
double fixed(F&& f, double a, double b, int n = 16) {
    const Rule& r = gauss_legendre(n);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double s = 0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
}

struct Result {
    double value = 0;
    double error = 0;
    bool converged = true;
};

template <class F>
Result adaptive(F&& f, double a, double b, double tol = 1e-11) {
    Result r;
    if (!(b > a)) return r;
    double err = 0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &err);
    r.error = err;
    return r;
}

/// tanh-sinh on [a, b]; tolerates integrable endpoint singularities.
template <class F>
Result endpoint_singular(F&& f, double a, double b, double tol = 1e-11) {
    thread_local boost::math::quadrature::tanh_sinh<double> integrator;
    Result r;
    if (!(b > a)) return r;
    double err = 0;
    r.value = integrator.integrate(f, a, b, tol, &err);
    r.error = err;
    return r;
}

struct RayOptions {
    bool singular_origin = false;  // integrand may blow up at r = 0
    double tolerance = 1e-11;
    double max_radius = 1e7;       // divergence cap for half-line integrals
};

/// Integral of F(r) over [r0, r1] (r1 may be +inf) split at the given breakpoints.
template <class F>
Result ray(F&& f, double r0, double r1, std::vector<double> breaks = {}, const RayOptions& opt = {}) {
    Result total;
    if (!(r1 > r0)) return total;
    std::erase_if(breaks, [&](double b) { return !(b > r0) || !(b < r1) || !std::isfinite(b); });
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<double> knots{r0};
    knots.insert(knots.end(), breaks.begin(), breaks.end());
    if (std::isfinite(r1)) knots.push_back(r1);

    auto add = [&](const Result& piece) {
        total.value += piece.value;
        total.error += piece.error;
    };
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double a = knots[i], b = knots[i + 1];
        if (i == 0 && a == 0.0 && opt.singular_origin) {
            const double c = std::min(b, 1.0);
            add(endpoint_singular(f, 0.0, c, opt.tolerance));
            if (b > c) add(adaptive(f, c, b, opt.tolerance));
        } else {
            add(adaptive(f, a, b, opt.tolerance));
        }
    }
    if (std::isfinite(r1)) return total;

    // half-line tail: doubling chunks until two consecutive chunks are negligible
    double a = knots.back();
    if (a == 0.0 && opt.singular_origin) {
        add(endpoint_singular(f, 0.0, 1.0, opt.tolerance));
        a = 1.0;
    }
    double width = std::max(1.0, a);
    int quiet = 0;
    while (true) {
        if (a > opt.max_radius) {
            total.converged = false;
            break;
        }
        const Result piece = adaptive(f, a, a + width, opt.tolerance);
        add(piece);
        a += width;
        width *= 2;
        if (std::abs(piece.value) <= 1e-16 * std::abs(total.value) || piece.value == 0.0) {
            if (++quiet >= 2) break;
        } else {
            quiet = 0;
        }
    }
    return total;
}

/// Integral over the unit sphere S^{n-1} of G(u); in one dimension S^0 = {-1, +1}.
///
/// In two dimensions the circle is split at the given angular breakpoints and each
/// sector is integrated adaptively.
template <class G>
Result sphere(int dim, G&& g, std::vector<double> angle_breaks = {}, double tol = 1e-9) {
    Result total;
    if (dim == 1) {
        total.value = g(Vec{1.0, 0.0}) + g(Vec{-1.0, 0.0});
        return total;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    for (double& a : angle_breaks) {
        a = std::fmod(a, two_pi);
        if (a < 0) a += two_pi;
    }
    angle_breaks.push_back(0.0);
    angle_breaks.push_back(two_pi);
    std::sort(angle_breaks.begin(), angle_breaks.end());
    std::vector<double> knots;
    for (double a : angle_breaks)
        if (knots.empty() || a - knots.back() > 1e-13) knots.push_back(a);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        auto piece = adaptive([&](double th) { return g(unit_at_angle(th)); }, knots[i], knots[i + 1], tol);
        total.value += piece.value;
        total.error += piece.error;
    }
    return total;
}

} // namespace orlicz::quad
