#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/grid.hpp"

namespace orlicz {

/// Convex piecewise-linear function of one variable, finite exactly on [xs.front(), xs.back()].
struct PiecewiseLinear {
    std::vector<double> xs;
    std::vector<double> ys;

    [[nodiscard]] bool empty() const { return xs.empty(); }
    [[nodiscard]] double lo() const { return xs.front(); }
    [[nodiscard]] double hi() const { return xs.back(); }

    [[nodiscard]] double operator()(double x) const {
        if (xs.empty() || x < xs.front() || x > xs.back()) return kInf;
        if (xs.size() == 1) return ys[0];
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        std::size_t j = static_cast<std::size_t>(it - xs.begin());
        if (j >= xs.size()) j = xs.size() - 1;
        if (j == 0) j = 1;
        const double x0 = xs[j - 1], x1 = xs[j];
        if (x1 == x0) return std::min(ys[j - 1], ys[j]);
        const double s = (x - x0) / (x1 - x0);
        return ys[j - 1] + s * (ys[j] - ys[j - 1]);
    }

    /// Lower convex hull of the vertex list (drops interior points where the data are not convex).
    [[nodiscard]] PiecewiseLinear convexified() const {
        PiecewiseLinear h;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (!h.xs.empty() && xs[i] == h.xs.back()) {
                h.ys.back() = std::min(h.ys.back(), ys[i]);
                continue;
            }
            while (h.xs.size() >= 2) {
                const std::size_t k = h.xs.size();
                const double cr = (h.xs[k - 1] - h.xs[k - 2]) * (ys[i] - h.ys[k - 2]) -
                                  (h.ys[k - 1] - h.ys[k - 2]) * (xs[i] - h.xs[k - 2]);
                if (cr <= 0) {
                    h.xs.pop_back();
                    h.ys.pop_back();
                } else {
                    break;
                }
            }
            h.xs.push_back(xs[i]);
            h.ys.push_back(ys[i]);
        }
        return h;
    }
};

enum class Provenance { ClosedForm, GridData, ConjugateOf, AsplundSum };

inline std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::ClosedForm: return "closed_form";
    case Provenance::GridData: return "grid_data";
    case Provenance::ConjugateOf: return "conjugate_of";
    case Provenance::AsplundSum: return "asplund_sum";
    }
    return "grid_data";
}

struct NodeGradient {
    Vec g{0, 0};
    bool valid = false;
    bool boundary_grade = false;  // one-sided difference next to a masked node
};

/// A convex function sampled on a Grid, with +inf stored as an explicit mask.
///
/// Between nodes the function is the piecewise-linear interpolant: on segments in one
/// dimension and on triangles in two (each cell split along its (0,0)-(1,1) diagonal).
/// A one-dimensional function may instead carry an exact piecewise-linear model whose
/// breakpoints need not be grid nodes; node values are then samples of the model.
class SampledConvexFunction {
public:
    SampledConvexFunction() = default;

    SampledConvexFunction(Grid grid, std::vector<double> values, Provenance prov = Provenance::GridData,
                          std::string source = {})
        : grid_(std::move(grid)), values_(std::move(values)), provenance_(prov), source_(std::move(source)) {
        require(values_.size() == grid_.size(), ErrorCode::GridMismatch, "value count does not match grid size");
        mask_.assign(values_.size(), 0);
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!std::isfinite(values_[k])) {
                require(!std::isnan(values_[k]), ErrorCode::InvalidArgument, "NaN in sampled function");
                mask_[k] = 1;
                values_[k] = kInf;
            }
        }
        if (grid_.dim() == 1) build_pl_from_nodes();
    }

    template <class F>
    static SampledConvexFunction sample(const Grid& grid, F&& phi, Provenance prov = Provenance::ClosedForm,
                                        std::string source = {}) {
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = phi(grid.node(k));
        return SampledConvexFunction(grid, std::move(v), prov, std::move(source));
    }

    /// One-dimensional function given by an exact piecewise-linear model.
    static SampledConvexFunction from_model(const Grid& grid, PiecewiseLinear model,
                                            Provenance prov = Provenance::ClosedForm, std::string source = {}) {
        require(grid.dim() == 1, ErrorCode::InvalidArgument, "piecewise-linear models are one-dimensional");
        require(!model.empty(), ErrorCode::AllInfinite, "empty piecewise-linear model");
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = model(grid.node(k)[0]);
        SampledConvexFunction f(grid, std::move(v), prov, std::move(source));
        f.pl_ = std::move(model);
        return f;
    }

    [[nodiscard]] const Grid& grid() const { return grid_; }
    [[nodiscard]] int dim() const { return grid_.dim(); }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] const std::vector<std::uint8_t>& mask() const { return mask_; }
    [[nodiscard]] bool finite(std::size_t k) const { return mask_[k] == 0; }
    [[nodiscard]] bool finite(int i0, int i1) const { return finite(grid_.index(i0, i1)); }
    [[nodiscard]] double value(std::size_t k) const { return values_[k]; }
    [[nodiscard]] double value(int i0, int i1) const { return values_[grid_.index(i0, i1)]; }
    [[nodiscard]] Provenance provenance() const { return provenance_; }
    [[nodiscard]] const std::string& source() const { return source_; }
    void set_provenance(Provenance p, std::string source) {
        provenance_ = p;
        source_ = std::move(source);
    }

    /// Exact one-dimensional model (dimension 1 only).
    [[nodiscard]] const PiecewiseLinear& model() const { return pl_; }

    [[nodiscard]] std::size_t finite_count() const {
        return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{0}));
    }
    [[nodiscard]] bool has_finite() const { return finite_count() > 0; }

    [[nodiscard]] double min_value() const {
        double m = kInf;
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (finite(k)) m = std::min(m, values_[k]);
        if (dim() == 1 && !pl_.empty())
            for (double y : pl_.ys) m = std::min(m, y);
        return m;
    }

    /// Largest |value| over finite nodes, at least 1; the scale used by relative tolerances.
    [[nodiscard]] double value_scale() const {
        double s = 1.0;
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (finite(k)) s = std::max(s, std::abs(values_[k]));
        return s;
    }

    /// Piecewise-linear interpolant; +inf outside the interpolated domain.
    [[nodiscard]] double evaluate(const Vec& x) const {
        if (dim() == 1) return pl_(x[0]);
        const double eps = 1e-12;
        double loc[2];
        int base[2];
        for (int a = 0; a < 2; ++a) {
            const double hw = grid_.half_width(a);
            if (x[a] < -hw - eps || x[a] > hw + eps) return kInf;
            const double p = (std::clamp(x[a], -hw, hw) + hw) / grid_.spacing(a);
            int i = static_cast<int>(std::floor(p));
            i = std::clamp(i, 0, grid_.points(a) - 2);
            base[a] = i;
            loc[a] = std::clamp(p - i, 0.0, 1.0);
        }
        const int i0 = base[0], i1 = base[1];
        const double s = loc[0], t = loc[1];
        // exact node hits avoid spurious +inf from masked neighbours
        for (int d0 = 0; d0 <= 1; ++d0)
            for (int d1 = 0; d1 <= 1; ++d1)
                if (std::abs(s - d0) < 1e-12 && std::abs(t - d1) < 1e-12) return value(i0 + d0, i1 + d1);
        const double v00 = value(i0, i1), v11 = value(i0 + 1, i1 + 1);
        if (s >= t) {
            // triangle (0,0), (1,0), (1,1)
            const double v10 = value(i0 + 1, i1);
            if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v11)) return kInf;
            return v00 + s * (v10 - v00) + t * (v11 - v10);
        }
        const double v01 = value(i0, i1 + 1);
        if (!std::isfinite(v00) || !std::isfinite(v01) || !std::isfinite(v11)) return kInf;
        return v00 + t * (v01 - v00) + s * (v11 - v01);
    }

    /// Central differences where both neighbours are finite, one-sided next to masked nodes.
    [[nodiscard]] NodeGradient node_gradient(int i0, int i1 = 0) const {
        NodeGradient out;
        if (!finite(i0, i1)) return out;
        out.valid = true;
        for (int a = 0; a < dim(); ++a) {
            const int i = a == 0 ? i0 : i1;
            auto at = [&](int j) {
                return a == 0 ? std::pair{finite(j, i1), value(j, i1)} : std::pair{finite(i0, j), value(i0, j)};
            };
            const bool has_lo = i > 0 && at(i - 1).first;
            const bool has_hi = i + 1 < grid_.points(a) && at(i + 1).first;
            const double h = grid_.spacing(a), c = value(i0, i1);
            if (has_lo && has_hi) {
                out.g[a] = (at(i + 1).second - at(i - 1).second) / (2 * h);
            } else if (has_hi) {
                out.g[a] = (at(i + 1).second - c) / h;
                out.boundary_grade = true;
            } else if (has_lo) {
                out.g[a] = (c - at(i - 1).second) / h;
                out.boundary_grade = true;
            } else {
                out.valid = false;
            }
        }
        return out;
    }

    /// Convex hull of the finite nodes (exact model support in one dimension).
    [[nodiscard]] ConvexBody domain_hull() const {
        require(has_finite(), ErrorCode::AllInfinite, "function is identically +inf");
        if (dim() == 1) return ConvexBody::interval(pl_.lo(), pl_.hi());
        std::vector<Vec> pts;
        for (std::size_t k = 0; k < values_.size(); ++k)
            if (finite(k)) pts.push_back(grid_.node(k));
        return ConvexBody::from_points(2, std::move(pts));
    }

    /// True when some finite node lies on the outer edge of the grid box.
    [[nodiscard]] bool touches_box() const {
        for (std::size_t k = 0; k < values_.size(); ++k) {
            if (!finite(k)) continue;
            const auto [i0, i1] = grid_.multi_index(k);
            if (grid_.on_boundary(i0, i1)) return true;
        }
        return false;
    }

    /// Lattice convexity: second differences along the axes and both diagonals are
    /// nonnegative (within rel_tol * value scale) and the finite set has no holes along
    /// those lines.
    [[nodiscard]] bool grid_convex(double rel_tol = 1e-9, std::string* why = nullptr) const {
        const double tol = rel_tol * value_scale();
        const int m0 = grid_.points(0), m1 = grid_.points(1);
        const std::array<std::array<int, 2>, 4> dirs{{{1, 0}, {0, 1}, {1, 1}, {1, -1}}};
        const int ndirs = dim() == 1 ? 1 : 4;
        for (int d = 0; d < ndirs; ++d) {
            const int a = dirs[d][0], b = dirs[d][1];
            for (int i0 = 0; i0 < m0; ++i0)
                for (int i1 = 0; i1 < m1; ++i1) {
                    const int j0 = i0 - a, j1 = i1 - b, k0 = i0 + a, k1 = i1 + b;
                    if (j0 < 0 || k0 >= m0 || j1 < 0 || k1 < 0 || j1 >= m1 || k1 >= m1) continue;
                    const bool fj = finite(j0, j1), fi = finite(i0, i1), fk = finite(k0, k1);
                    if (fj && fk && !fi) {
                        if (why) *why = "finite node set is not lattice convex";
                        return false;
                    }
                    if (fj && fi && fk && value(j0, j1) + value(k0, k1) - 2 * value(i0, i1) < -tol) {
                        if (why) *why = "negative second difference";
                        return false;
                    }
                }
        }
        return true;
    }

    [[nodiscard]] SampledConvexFunction shifted(double a) const {
        SampledConvexFunction f = *this;
        for (std::size_t k = 0; k < f.values_.size(); ++k)
            if (f.finite(k)) f.values_[k] += a;
        for (double& y : f.pl_.ys) y += a;
        return f;
    }

private:
    void build_pl_from_nodes() {
        pl_ = {};
        for (int i = 0; i < grid_.points(0); ++i) {
            if (!finite(i, 0)) continue;
            pl_.xs.push_back(grid_.coordinate(0, i));
            pl_.ys.push_back(value(i, 0));
        }
    }

    Grid grid_;
    std::vector<double> values_;
    std::vector<std::uint8_t> mask_;
    Provenance provenance_ = Provenance::GridData;
    std::string source_;
    PiecewiseLinear pl_;
};

} // namespace orlicz
