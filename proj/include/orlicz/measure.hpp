#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"

namespace orlicz {

enum class Ambient { Euclidean, Sphere };

struct Atom {
    Vec x;
    double mass;
};

/// Finitely many weighted atoms in R^n or on S^{n-1}.
class DiscreteMeasure {
public:
    DiscreteMeasure() = default;
    DiscreteMeasure(Ambient ambient, int dim, std::vector<Atom> atoms = {})
        : ambient_(ambient), dim_(dim), atoms_(std::move(atoms)) {
        require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "measure dimension must be 1 or 2");
        for (auto& a : atoms_) {
            require(a.mass >= 0 && std::isfinite(a.mass), ErrorCode::InvalidArgument, "atom masses must be finite and >= 0");
            if (dim == 1) a.x[1] = 0;
        }
    }

    [[nodiscard]] Ambient ambient() const { return ambient_; }
    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<Atom>& atoms() const { return atoms_; }
    [[nodiscard]] std::size_t size() const { return atoms_.size(); }
    [[nodiscard]] bool empty() const { return atoms_.empty(); }

    void add(const Vec& x, double mass) { atoms_.push_back({dim_ == 1 ? Vec{x[0], 0} : x, mass}); }

    [[nodiscard]] double total_mass() const {
        double s = 0;
        for (const auto& a : atoms_) s += a.mass;
        return s;
    }

    [[nodiscard]] double first_moment() const {
        double s = 0;
        for (const auto& a : atoms_) s += a.mass * norm(a.x);
        return s;
    }

    /// Integral of g against the measure.
    template <class G>
    [[nodiscard]] double integrate(G&& g) const {
        double s = 0;
        for (const auto& a : atoms_) s += a.mass * g(a.x);
        return s;
    }

    [[nodiscard]] DiscreteMeasure scaled(double c) const {
        DiscreteMeasure m = *this;
        for (auto& a : m.atoms_) a.mass *= c;
        return m;
    }

    /// Atoms merged per cell of width h centred at the multiples of h, placed at the
    /// mass-weighted centroid; atoms below drop_relative * total are removed. Output order is
    /// by cell index, so the result is deterministic.
    [[nodiscard]] DiscreteMeasure binned(double h, double drop_relative = 1e-12) const {
        std::map<std::pair<long long, long long>, std::pair<Vec, double>> cells;
        for (const auto& a : atoms_) {
            const auto key = std::pair{static_cast<long long>(std::llround(a.x[0] / h)),
                                       static_cast<long long>(std::llround(a.x[1] / h))};
            auto& c = cells[key];
            c.first = c.first + a.mass * a.x;
            c.second += a.mass;
        }
        const double cut = drop_relative * total_mass();
        DiscreteMeasure out(ambient_, dim_);
        for (const auto& [key, c] : cells) {
            if (c.second <= cut || c.second == 0) continue;
            Vec x = (1.0 / c.second) * c.first;
            if (ambient_ == Ambient::Sphere) x = (1.0 / norm(x)) * x;
            out.atoms_.push_back({x, c.second});
        }
        return out;
    }

    /// Mass within distance r of x.
    [[nodiscard]] double mass_near(const Vec& x, double r) const {
        double s = 0;
        for (const auto& a : atoms_)
            if (norm(a.x - x) <= r) s += a.mass;
        return s;
    }

    /// True when the atom set is symmetric under x -> -x (masses within rel_tol).
    [[nodiscard]] bool even(double rel_tol = 1e-9) const {
        const auto b = binned(1e-9, 0.0);
        const double tol = rel_tol * std::max(1.0, total_mass());
        for (const auto& a : b.atoms())
            if (std::abs(b.mass_near(-1.0 * a.x, 1e-8) - a.mass) > tol) return false;
        return true;
    }

private:
    Ambient ambient_ = Ambient::Euclidean;
    int dim_ = 1;
    std::vector<Atom> atoms_;
};

namespace detail {

/// int |F - G| over the line for the (unnormalised) distribution functions of two atomic
/// measures given as (position, mass) lists.
inline double cdf_gap_1d(std::vector<std::pair<double, double>> a, std::vector<std::pair<double, double>> b) {
    std::vector<std::pair<double, double>> ev;
    for (auto& p : a) ev.push_back(p);
    for (auto& p : b) ev.emplace_back(p.first, -p.second);
    std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    double diff = 0, out = 0;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        diff += ev[i].second;
        if (i + 1 < ev.size()) out += std::abs(diff) * (ev[i + 1].first - ev[i].first);
    }
    return out;
}

} // namespace detail

struct MeasureComparison {
    double w1_distance = 0;
    double mass_gap = 0;
};

/// Wasserstein-1 comparison: exact in one dimension (integral of |F - G|, which equals the
/// quantile coupling cost for equal masses); sliced over 32 equispaced projection angles in
/// two dimensions, averaged.
inline MeasureComparison compare_measures(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    require(a.dim() == b.dim(), ErrorCode::GridMismatch, "comparing measures of different dimension");
    MeasureComparison c;
    c.mass_gap = std::abs(a.total_mass() - b.total_mass());
    auto project = [](const DiscreteMeasure& m, const Vec& u) {
        std::vector<std::pair<double, double>> out;
        for (const auto& at : m.atoms()) out.emplace_back(dot(at.x, u), at.mass);
        return out;
    };
    if (a.dim() == 1) {
        c.w1_distance = detail::cdf_gap_1d(project(a, Vec{1, 0}), project(b, Vec{1, 0}));
        return c;
    }
    const int slices = 32;
    double s = 0;
    for (int k = 0; k < slices; ++k) {
        const Vec u = unit_at_angle(std::numbers::pi * k / slices);
        s += detail::cdf_gap_1d(project(a, u), project(b, u));
    }
    c.w1_distance = s / slices;
    return c;
}

} // namespace orlicz
