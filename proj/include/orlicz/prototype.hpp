#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"

namespace orlicz {

enum class PrototypeKind { RadialPower, Indicator, MaxAffine };

/// Closed-form potential phi of a log-concave function e^{-phi}.
///
///   radial_power      c|x|^p (p >= 1); exponential_cone(t) = t|x|, gaussian = |x|^2/2
///   indicator         chi_K - ln c   (c = 1 for the plain indicator)
///   max_affine        max_k <s_k, x> + c_k
///
/// Radial-power and max-affine potentials can additionally be restricted to a body K,
/// i.e. replaced by phi + chi_K.
class Prototype {
public:
    static Prototype radial_power(int dim, double c, double p) {
        require(c > 0 && p >= 1, ErrorCode::InvalidArgument, "radial power needs c > 0 and p >= 1");
        Prototype f(PrototypeKind::RadialPower, dim);
        f.c_ = c;
        f.p_ = p;
        return f;
    }
    static Prototype exponential_cone(int dim, double t = 1.0) { return radial_power(dim, t, 1.0); }
    static Prototype gaussian(int dim) { return radial_power(dim, 0.5, 2.0); }

    static Prototype indicator(const ConvexBody& k) { return scaled_indicator(1.0, k); }
    static Prototype scaled_indicator(double c, const ConvexBody& k) {
        require(c > 0, ErrorCode::InvalidArgument, "scaled indicator needs c > 0");
        Prototype f(PrototypeKind::Indicator, k.dim());
        f.scale_ = c;
        f.body_ = k;
        return f;
    }

    static Prototype max_affine(int dim, std::vector<Vec> slopes, std::vector<double> offsets) {
        require(!slopes.empty() && slopes.size() == offsets.size(), ErrorCode::InvalidArgument,
                "max_affine needs matching non-empty slopes and offsets");
        Prototype f(PrototypeKind::MaxAffine, dim);
        if (dim == 1)
            for (auto& s : slopes) s[1] = 0.0;
        f.slopes_ = std::move(slopes);
        f.offsets_ = std::move(offsets);
        return f;
    }

    [[nodiscard]] Prototype restricted_to(const ConvexBody& k) const {
        require(kind_ != PrototypeKind::Indicator, ErrorCode::InvalidArgument,
                "restrict an indicator by building the indicator of the intersection");
        require(k.dim() == dim_, ErrorCode::GridMismatch, "restriction body has the wrong dimension");
        Prototype f = *this;
        f.body_ = k;
        return f;
    }

    [[nodiscard]] PrototypeKind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] double coefficient() const { return c_; }
    [[nodiscard]] double exponent() const { return p_; }
    [[nodiscard]] double scale() const { return scale_; }
    [[nodiscard]] const std::vector<Vec>& slopes() const { return slopes_; }
    [[nodiscard]] const std::vector<double>& offsets() const { return offsets_; }
    /// Support restriction (the body itself for indicators); nullopt for full support.
    [[nodiscard]] const std::optional<ConvexBody>& body() const { return body_; }

    [[nodiscard]] std::string name() const {
        switch (kind_) {
        case PrototypeKind::RadialPower:
            if (p_ == 1.0) return body_ ? "exponential_cone_restricted" : "exponential_cone";
            if (p_ == 2.0 && c_ == 0.5) return body_ ? "gaussian_restricted" : "gaussian";
            return body_ ? "radial_power_restricted" : "radial_power";
        case PrototypeKind::Indicator: return scale_ == 1.0 ? "indicator" : "scaled_indicator";
        case PrototypeKind::MaxAffine: return body_ ? "max_affine_restricted" : "max_affine";
        }
        return "prototype";
    }

    [[nodiscard]] bool in_domain(const Vec& x, double tol = 1e-12) const {
        return !body_ || body_->contains(x, tol);
    }

    /// phi(x); +inf outside the support body.
    [[nodiscard]] double phi(const Vec& x) const {
        if (!in_domain(x)) return kInf;
        return phi_unrestricted(x);
    }

    [[nodiscard]] double phi_unrestricted(const Vec& x) const {
        switch (kind_) {
        case PrototypeKind::RadialPower: {
            const double r = norm(x);
            return p_ == 1.0 ? c_ * r : (p_ == 2.0 ? c_ * r * r : c_ * std::pow(r, p_));
        }
        case PrototypeKind::Indicator: return -std::log(scale_);
        case PrototypeKind::MaxAffine: {
            double m = -kInf;
            for (std::size_t k = 0; k < slopes_.size(); ++k) m = std::max(m, dot(slopes_[k], x) + offsets_[k]);
            return m;
        }
        }
        return kInf;
    }

    /// Index of the active affine piece (lowest index on ties); max-affine only.
    [[nodiscard]] std::size_t active_piece(const Vec& x) const {
        std::size_t best = 0;
        double m = -kInf;
        for (std::size_t k = 0; k < slopes_.size(); ++k) {
            const double v = dot(slopes_[k], x) + offsets_[k];
            if (v > m) {
                m = v;
                best = k;
            }
        }
        return best;
    }

    /// grad phi(x), defined almost everywhere (zero at the kink of the cone).
    [[nodiscard]] Vec grad(const Vec& x) const {
        switch (kind_) {
        case PrototypeKind::RadialPower: {
            const double r = norm(x);
            if (r == 0) return {0, 0};
            const double g = c_ * p_ * (p_ == 1.0 ? 1.0 : std::pow(r, p_ - 1));
            return (g / r) * x;
        }
        case PrototypeKind::Indicator: return {0, 0};
        case PrototypeKind::MaxAffine: return slopes_[active_piece(x)];
        }
        return {0, 0};
    }

    [[nodiscard]] bool has_conjugate() const { return !(kind_ == PrototypeKind::MaxAffine && body_); }

    /// phi*(y) = sup_x <x, y> - phi(x).
    [[nodiscard]] double conjugate(const Vec& y) const {
        switch (kind_) {
        case PrototypeKind::Indicator: return body_->support(y) + std::log(scale_);
        case PrototypeKind::RadialPower: return body_ ? restricted_power_conjugate(y) : power_conjugate(y);
        case PrototypeKind::MaxAffine:
            require(!body_, ErrorCode::InvalidArgument, "no closed-form conjugate for restricted max_affine");
            return max_affine_conjugate(y);
        }
        return kInf;
    }

    /// Radial extent {r >= 0 : r u in support}; [0, inf) for full support.
    [[nodiscard]] std::pair<double, double> ray_range(const Vec& u) const {
        if (!body_) return {0.0, kInf};
        return body_->ray_interval(u);
    }

    /// Radii along the ray r u where phi(r u) has a kink.
    [[nodiscard]] std::vector<double> radial_breaks(const Vec& u) const {
        std::vector<double> out;
        if (kind_ != PrototypeKind::MaxAffine) return out;
        const std::size_t n = slopes_.size();
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const double aj = dot(slopes_[j], u), ak = dot(slopes_[k], u);
                if (std::abs(aj - ak) < 1e-14) continue;
                const double r = (offsets_[j] - offsets_[k]) / (ak - aj);
                if (!(r > 0) || !std::isfinite(r)) continue;
                const double v = aj * r + offsets_[j];
                if (v >= phi_unrestricted(r * u) - 1e-12 * std::max(1.0, std::abs(v))) out.push_back(r);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Polar angles where the integrand's angular behaviour changes (two dimensions).
    [[nodiscard]] std::vector<double> angle_breaks() const {
        std::vector<double> out;
        if (dim_ != 2) return out;
        if (body_)
            for (const auto& v : body_->vertices())
                if (norm(v) > 1e-14) out.push_back(std::atan2(v[1], v[0]));
        if (kind_ == PrototypeKind::MaxAffine) {
            const std::size_t n = slopes_.size();
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    const Vec d = slopes_[j] - slopes_[k];
                    if (norm(d) < 1e-14) continue;
                    out.push_back(std::atan2(-d[0], d[1]));
                    out.push_back(std::atan2(d[0], -d[1]));
                    for (std::size_t l = k + 1; l < n; ++l) {
                        // point where pieces j, k, l tie
                        const Vec e = slopes_[j] - slopes_[l];
                        const double det = cross(d, e);
                        if (std::abs(det) < 1e-14) continue;
                        const double b1 = offsets_[k] - offsets_[j], b2 = offsets_[l] - offsets_[j];
                        const Vec x{(b1 * e[1] - b2 * d[1]) / det, (d[0] * b2 - e[0] * b1) / det};
                        const double v = dot(slopes_[j], x) + offsets_[j];
                        if (norm(x) > 1e-14 && v >= phi_unrestricted(x) - 1e-10 * std::max(1.0, std::abs(v)))
                            out.push_back(std::atan2(x[1], x[0]));
                    }
                }
        }
        return out;
    }

private:
    Prototype(PrototypeKind kind, int dim) : kind_(kind), dim_(dim) {
        require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "prototype dimension must be 1 or 2");
    }

    [[nodiscard]] double power_conjugate(const Vec& y) const {
        const double s = norm(y);
        if (p_ == 1.0) return s <= c_ * (1 + 1e-15) ? 0.0 : kInf;
        const double r = std::pow(s / (c_ * p_), 1.0 / (p_ - 1));
        return r * s * (1 - 1 / p_);
    }

    // maximise the concave function x -> <x, y> - c|x|^p over the body
    [[nodiscard]] double restricted_power_conjugate(const Vec& y) const {
        const ConvexBody& k = *body_;
        auto obj = [&](const Vec& x) { return dot(x, y) - phi_unrestricted(x); };
        const double s = norm(y);
        Vec star{0, 0};
        bool stationary = false;
        if (p_ == 1.0) {
            stationary = s <= c_;
        } else if (s > 0) {
            star = (std::pow(s / (c_ * p_), 1.0 / (p_ - 1)) / s) * y;
            stationary = true;
        } else {
            stationary = true;
        }
        if (stationary && k.contains(star, 1e-14)) return obj(star);
        double best = -kInf;
        if (dim_ == 1) {
            best = std::max(obj(Vec{k.lo(), 0}), obj(Vec{k.hi(), 0}));
            if (k.contains(Vec{0, 0}, 0)) best = std::max(best, 0.0);
            return best;
        }
        const auto& v = k.vertices();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Vec a = v[i], b = v[(i + 1) % v.size()];
            // golden-section search along the edge; the objective is concave there
            double lo = 0, hi = 1;
            const double g = (std::sqrt(5.0) - 1) / 2;
            double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
            double f1 = obj(a + x1 * (b - a)), f2 = obj(a + x2 * (b - a));
            for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + g * (hi - lo);
                    f2 = obj(a + x2 * (b - a));
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - g * (hi - lo);
                    f1 = obj(a + x1 * (b - a));
                }
            }
            best = std::max({best, obj(a), obj(b), f1, f2});
        }
        return best;
    }

    // inf { -sum lambda_k c_k : sum lambda_k s_k = y, lambda in the simplex }
    [[nodiscard]] double max_affine_conjugate(const Vec& y) const {
        const std::size_t n = slopes_.size();
        double best = kInf;
        const double tol = 1e-12 * (1 + norm(y));
        for (std::size_t j = 0; j < n; ++j) {
            if (norm(slopes_[j] - y) <= tol) best = std::min(best, -offsets_[j]);
            for (std::size_t k = j + 1; k < n; ++k) {
                const Vec d = slopes_[k] - slopes_[j];
                const double len2 = dot(d, d);
                if (len2 < 1e-28) continue;
                const double s = dot(y - slopes_[j], d) / len2;
                if (s < -1e-12 || s > 1 + 1e-12) continue;
                if (norm(slopes_[j] + s * d - y) > tol) continue;
                best = std::min(best, -(1 - s) * offsets_[j] - s * offsets_[k]);
            }
        }
        if (dim_ == 2) {
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k)
                    for (std::size_t l = k + 1; l < n; ++l) {
                        const Vec a = slopes_[k] - slopes_[j], b = slopes_[l] - slopes_[j], r = y - slopes_[j];
                        const double det = cross(a, b);
                        if (std::abs(det) < 1e-14) continue;
                        const double s = cross(r, b) / det, t = cross(a, r) / det;
                        if (s < -1e-12 || t < -1e-12 || s + t > 1 + 1e-12) continue;
                        best = std::min(best, -(1 - s - t) * offsets_[j] - s * offsets_[k] - t * offsets_[l]);
                    }
        }
        return best;
    }

    PrototypeKind kind_;
    int dim_;
    double c_ = 1.0;
    double p_ = 1.0;
    double scale_ = 1.0;
    std::optional<ConvexBody> body_;
    std::vector<Vec> slopes_;
    std::vector<double> offsets_;
};

} // namespace orlicz
