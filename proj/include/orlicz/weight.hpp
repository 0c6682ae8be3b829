#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/quadrature.hpp"

namespace orlicz {

enum class WeightKind { Constant, Power, GaussianDensity, StretchedExp, User };

enum class Verdict { Pass, Fail, Inconclusive };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

/// Growth of F_omega(t) as t -> 0+.
enum class Growth { Bounded, Polynomial, Superpolynomial, Unknown };

inline std::string_view to_string(Growth g) {
    switch (g) {
    case Growth::Bounded: return "bounded";
    case Growth::Polynomial: return "polynomial";
    case Growth::Superpolynomial: return "superpolynomial";
    case Growth::Unknown: return "unknown";
    }
    return "unknown";
}

/// Candidate weight omega on R^n \ {o}.
///
/// Builtin kinds are radial:
///   constant        omega = 1
///   power(q)        omega = |x|^{q-n}
///   gaussian        omega = exp(-|x|^2/2)   (unnormalized)
///   stretched(a)    omega = exp(|x|^a)
/// User weights wrap an arbitrary closure together with a declared evenness flag.
class WeightFunction {
public:
    using Closure = std::function<double(const Vec&)>;

    static WeightFunction constant(int dim) { return WeightFunction(WeightKind::Constant, dim, 0.0); }
    static WeightFunction power(int dim, double q) { return WeightFunction(WeightKind::Power, dim, q); }
    static WeightFunction gaussian_density(int dim) { return WeightFunction(WeightKind::GaussianDensity, dim, 0.0); }
    static WeightFunction stretched_exp(int dim, double alpha) {
        return WeightFunction(WeightKind::StretchedExp, dim, alpha);
    }
    static WeightFunction user(int dim, Closure fn, bool even, std::string name = "user") {
        WeightFunction w(WeightKind::User, dim, 0.0);
        w.fn_ = std::move(fn);
        w.even_ = even;
        w.name_ = std::move(name);
        return w;
    }

    [[nodiscard]] WeightKind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return dim_; }
    /// q for power weights, alpha for stretched exponentials.
    [[nodiscard]] double parameter() const { return param_; }
    [[nodiscard]] bool even() const { return even_; }
    [[nodiscard]] bool radial() const { return kind_ != WeightKind::User; }

    /// Same weight rebound to another dimension (power weights keep q, so |x|^{q-n} changes).
    [[nodiscard]] WeightFunction with_dim(int dim) const {
        WeightFunction w = *this;
        w.dim_ = dim;
        return w;
    }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
        case WeightKind::Constant: return "constant";
        case WeightKind::Power: return "power:q=" + format_number(param_);
        case WeightKind::GaussianDensity: return "gaussian_density";
        case WeightKind::StretchedExp: return "stretched_exp:alpha=" + format_number(param_);
        case WeightKind::User: return name_;
        }
        return name_;
    }

    /// ln omega(x); avoids overflow for fast-growing weights.
    [[nodiscard]] double log_eval(const Vec& x) const {
        const double r = norm(x);
        switch (kind_) {
        case WeightKind::Constant: return 0.0;
        case WeightKind::Power: return (param_ - dim_) * std::log(r);
        case WeightKind::GaussianDensity: return -0.5 * r * r;
        case WeightKind::StretchedExp: return std::pow(r, param_);
        case WeightKind::User: return std::log(fn_(x));
        }
        return 0.0;
    }

    double operator()(const Vec& x) const {
        if (kind_ == WeightKind::User) return fn_(x);
        if (kind_ == WeightKind::Constant) return 1.0;
        return std::exp(log_eval(x));
    }

    /// Closed-form radial antiderivative int_0^t omega(r u) r^{n-1} dr, where available.
    [[nodiscard]] std::optional<double> omega_bar_closed(double t) const {
        switch (kind_) {
        case WeightKind::Constant: return std::pow(t, dim_) / dim_;
        case WeightKind::Power:
            if (param_ <= 0) return std::nullopt;
            return std::pow(t, param_) / param_;
        case WeightKind::GaussianDensity:
            if (dim_ == 1) return std::sqrt(std::numbers::pi / 2) * std::erf(t / std::numbers::sqrt2);
            return 1.0 - std::exp(-0.5 * t * t);
        default: return std::nullopt;
        }
    }

    /// Closed form of F_omega(t) = int exp(-t|x|) omega(x) dx for power-type weights.
    [[nodiscard]] std::optional<double> F_closed(double t) const {
        const double q = kind_ == WeightKind::Constant ? dim_ : param_;
        if ((kind_ == WeightKind::Constant || kind_ == WeightKind::Power) && q > 0)
            return std::pow(t, -q) * sphere_area(dim_) * std::tgamma(q);
        return std::nullopt;
    }

    [[nodiscard]] Growth F_growth() const {
        switch (kind_) {
        case WeightKind::Constant: return Growth::Polynomial;
        case WeightKind::Power: return param_ > 0 ? Growth::Polynomial : Growth::Unknown;
        case WeightKind::GaussianDensity: return Growth::Bounded;
        case WeightKind::StretchedExp:
            return param_ > 0 && param_ < 1 ? Growth::Superpolynomial : Growth::Unknown;
        case WeightKind::User: return Growth::Unknown;
        }
        return Growth::Unknown;
    }

private:
    WeightFunction(WeightKind kind, int dim, double param) : kind_(kind), dim_(dim), param_(param) {
        require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "weight dimension must be 1 or 2");
    }

    static std::string format_number(double v) {
        std::string s = std::to_string(v);
        s.erase(s.find_last_not_of('0') + 1);
        if (!s.empty() && s.back() == '.') s.pop_back();
        return s;
    }

    WeightKind kind_ = WeightKind::Constant;
    int dim_ = 1;
    double param_ = 0.0;
    bool even_ = true;
    std::string name_;
    Closure fn_;
};

/// omega_bar(t, u) = int_0^t omega(r u) r^{n-1} dr.
///
/// Numerically this is (1/n) int_0^{t^n} omega(s^{1/n} u) ds, which removes the r^{n-1}
/// factor and leaves at worst an integrable endpoint singularity for tanh-sinh.
inline double omega_bar(const WeightFunction& w, double t, const Vec& u) {
    require(t >= 0, ErrorCode::InvalidArgument, "omega_bar needs t >= 0");
    if (t == 0) return 0.0;
    if (auto c = w.omega_bar_closed(t)) return *c;
    const int n = w.dim();
    const double top = std::pow(t, n);
    auto g = [&](double s) { return w(std::pow(s, 1.0 / n) * u); };
    auto r = quad::endpoint_singular(g, 0.0, top, 1e-12);
    require(std::isfinite(r.value), ErrorCode::QuadratureFailure, "omega_bar quadrature did not converge");
    return r.value / n;
}

struct WeightReport {
    Verdict a1 = Verdict::Inconclusive;
    Verdict a2 = Verdict::Inconclusive;
    Verdict a3 = Verdict::Inconclusive;
    std::vector<double> a1_probe;  // int_{eps<|x|<1} omega, eps = 10^-k
    std::vector<double> a2_probe;  // max over directions of |x|^n omega(x), |x| = 10^-k
    std::vector<double> a3_probe;  // max over directions of ln omega(x)/|x|, |x| = 2^k
    [[nodiscard]] bool admissible() const {
        return a1 != Verdict::Fail && a2 != Verdict::Fail && a3 != Verdict::Fail;
    }
    [[nodiscard]] bool all_pass() const {
        return a1 == Verdict::Pass && a2 == Verdict::Pass && a3 == Verdict::Pass;
    }
    [[nodiscard]] std::string failed_conditions() const {
        std::string s;
        auto add = [&](Verdict v, const char* name) {
            if (v == Verdict::Fail) s += (s.empty() ? "" : ", ") + std::string(name) + " fail";
        };
        add(a1, "A1");
        add(a2, "A2");
        add(a3, "A3");
        return s;
    }
};

namespace detail {

inline std::vector<Vec> probe_directions(int dim) { return uniform_directions(dim, 16); }

inline void run_probes(const WeightFunction& w, WeightReport& rep) {
    const int n = w.dim();
    const auto dirs = probe_directions(n);
    auto eval = [&](const Vec& x) {
        const double v = w(x);
        require(v > 0 && !std::isnan(v), ErrorCode::NonPositiveWeight, "weight probe returned a non-positive value");
        return v;
    };
    // A1: integral over the annulus eps < |x| < 1, averaged over probe directions
    for (int k = 1; k <= 8; ++k) {
        const double eps = std::pow(10.0, -k);
        double total = 0;
        for (const auto& u : dirs) {
            auto g = [&](double r) { return eval(r * u) * std::pow(r, n - 1); };
            // split geometrically so each piece sees a bounded dynamic range
            double s = 0;
            for (double a = eps; a < 1.0; a *= 10.0) s += quad::adaptive(g, a, std::min(1.0, 10 * a), 1e-10).value;
            total += s;
        }
        rep.a1_probe.push_back(total * sphere_area(n) / static_cast<double>(dirs.size()));
    }
    // A2: |x|^n omega(x) as |x| -> 0
    for (int k = 1; k <= 12; ++k) {
        const double r = std::pow(10.0, -k);
        double m = 0;
        for (const auto& u : dirs) m = std::max(m, std::pow(r, n) * eval(r * u));
        rep.a2_probe.push_back(m);
    }
    // A3: ln omega(x)/|x| as |x| -> infinity
    for (int k = 1; k <= 10; ++k) {
        const double r = std::ldexp(1.0, k);
        double m = -kInf;
        for (const auto& u : dirs) m = std::max(m, w.log_eval(r * u) / r);
        rep.a3_probe.push_back(m);
    }

    const auto& p1 = rep.a1_probe;
    const double last_inc = p1[7] - p1[6], prev_inc = p1[6] - p1[5];
    if (!std::isfinite(p1.back())) rep.a1 = Verdict::Fail;
    else if (last_inc <= 1e-6 * std::max(1.0, std::abs(p1.back())) || last_inc <= 0.5 * prev_inc) rep.a1 = Verdict::Pass;
    else if (last_inc >= 0.9 * prev_inc) rep.a1 = Verdict::Fail;
    else rep.a1 = Verdict::Inconclusive;

    const auto& p2 = rep.a2_probe;
    const double tail = p2.back(), mid = p2[5];
    if (tail <= 10.0 * std::max(p2.front(), mid)) rep.a2 = Verdict::Pass;
    else if (tail > 100.0 * mid) rep.a2 = Verdict::Fail;
    else rep.a2 = Verdict::Inconclusive;

    const auto& p3 = rep.a3_probe;
    const double r_last = p3.back(), r_prev = p3[p3.size() - 2];
    if (r_last <= 1e-2) rep.a3 = Verdict::Pass;
    else if (r_last >= 0.9 * r_prev) rep.a3 = Verdict::Fail;
    else rep.a3 = Verdict::Inconclusive;
}

} // namespace detail

/// Classification against local integrability (A1), the origin bound (A2) and
/// sub-exponential growth (A3).
///
/// Builtin kinds get analytic verdicts; user closures are probed numerically. The growth
/// condition is read as limsup ln omega / |x| <= 0 so that decaying weights such as the
/// Gaussian density are admissible.
inline WeightReport classify_weight(const WeightFunction& w, bool probe_builtins = true) {
    WeightReport rep;
    if (probe_builtins || w.kind() == WeightKind::User) detail::run_probes(w, rep);
    switch (w.kind()) {
    case WeightKind::Constant:
    case WeightKind::GaussianDensity:
        rep.a1 = rep.a2 = rep.a3 = Verdict::Pass;
        break;
    case WeightKind::Power: {
        const double q = w.parameter();
        rep.a1 = q > 0 ? Verdict::Pass : Verdict::Fail;
        rep.a2 = q >= 0 ? Verdict::Pass : Verdict::Fail;
        rep.a3 = Verdict::Pass;
        break;
    }
    case WeightKind::StretchedExp: {
        const double a = w.parameter();
        rep.a1 = rep.a2 = Verdict::Pass;
        rep.a3 = a < 1 ? Verdict::Pass : Verdict::Fail;
        break;
    }
    case WeightKind::User: break;
    }
    return rep;
}

/// Throws WeightRejected naming the failed conditions.
inline void require_admissible(const WeightFunction& w) {
    const auto rep = classify_weight(w, false);
    require(rep.admissible(), ErrorCode::WeightRejected, rep.failed_conditions());
}

/// Checks the declared evenness flag of a weight against samples.
inline bool evenness_consistent(const WeightFunction& w) {
    if (!w.even()) return true;
    for (const auto& u : uniform_directions(w.dim(), 24))
        for (double r : {0.01, 0.3, 1.0, 2.5, 7.0}) {
            const double a = w(r * u), b = w(-1.0 * (r * u));
            if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) return false;
        }
    return true;
}

} // namespace orlicz
