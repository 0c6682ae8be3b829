#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"

namespace orlicz {

/// Regular axis-aligned grid on [-R_0, R_0] (x [-R_1, R_1]) with an odd number of
/// nodes per axis, so the origin is always a node.
///
/// Nodes are stored row-major: axis 1 varies fastest.
class Grid {
public:
    Grid() = default;

    Grid(int dim, double half_width, int points)
        : Grid(dim, {half_width, half_width}, {points, points}) {}

    Grid(int dim, std::array<double, 2> half_width, std::array<int, 2> points) : dim_(dim) {
        require(dim == 1 || dim == 2, ErrorCode::InvalidArgument, "grid dimension must be 1 or 2");
        for (int a = 0; a < dim; ++a) {
            require(half_width[a] > 0, ErrorCode::InvalidArgument, "grid half-width must be positive");
            require(points[a] >= 16 && points[a] % 2 == 1, ErrorCode::InvalidArgument,
                    "points per axis must be odd and at least 17, got " + std::to_string(points[a]));
            half_width_[a] = half_width[a];
            points_[a] = points[a];
            spacing_[a] = 2.0 * half_width[a] / (points[a] - 1);
        }
        if (dim == 1) {
            half_width_[1] = 0.0;
            points_[1] = 1;
            spacing_[1] = 1.0;
        }
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] double half_width(int axis) const { return half_width_[axis]; }
    [[nodiscard]] int points(int axis) const { return points_[axis]; }
    [[nodiscard]] double spacing(int axis) const { return spacing_[axis]; }
    [[nodiscard]] double spacing() const { return dim_ == 1 ? spacing_[0] : std::max(spacing_[0], spacing_[1]); }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(points_[0]) * points_[1]; }

    /// Volume of one grid cell, h_0 (* h_1).
    [[nodiscard]] double cell_volume() const { return dim_ == 1 ? spacing_[0] : spacing_[0] * spacing_[1]; }

    [[nodiscard]] std::size_t index(int i0, int i1 = 0) const {
        return static_cast<std::size_t>(i0) * points_[1] + static_cast<std::size_t>(i1);
    }
    [[nodiscard]] std::array<int, 2> multi_index(std::size_t k) const {
        return {static_cast<int>(k / points_[1]), static_cast<int>(k % points_[1])};
    }

    [[nodiscard]] double coordinate(int axis, int i) const {
        if (axis == 1 && dim_ == 1) return 0.0;
        return -half_width_[axis] + i * spacing_[axis];
    }
    [[nodiscard]] Vec node(int i0, int i1 = 0) const { return {coordinate(0, i0), coordinate(1, i1)}; }
    [[nodiscard]] Vec node(std::size_t k) const {
        const auto [i0, i1] = multi_index(k);
        return node(i0, i1);
    }

    [[nodiscard]] int origin_index(int axis) const { return (points_[axis] - 1) / 2; }

    /// Largest node index whose coordinate is <= x (clamped to the valid range).
    [[nodiscard]] int floor_index(int axis, double x) const {
        const int i = static_cast<int>(std::floor((x + half_width_[axis]) / spacing_[axis] + 1e-9));
        return std::clamp(i, 0, points_[axis] - 1);
    }

    [[nodiscard]] bool on_boundary(int i0, int i1) const {
        if (i0 == 0 || i0 == points_[0] - 1) return true;
        return dim_ == 2 && (i1 == 0 || i1 == points_[1] - 1);
    }

    [[nodiscard]] bool same_shape(const Grid& o) const {
        return dim_ == o.dim_ && points_ == o.points_ && half_width_ == o.half_width_;
    }

    /// Grid with every other node removed (requires (m-1)/2 even on every axis).
    [[nodiscard]] bool coarsenable() const {
        for (int a = 0; a < dim_; ++a)
            if ((points_[a] - 1) % 4 != 0 || (points_[a] - 1) / 2 + 1 < 17) return false;
        return true;
    }
    [[nodiscard]] Grid coarsened() const {
        return Grid(dim_, half_width_, {(points_[0] - 1) / 2 + 1, dim_ == 2 ? (points_[1] - 1) / 2 + 1 : 17});
    }

    [[nodiscard]] ConvexBody box() const {
        if (dim_ == 1) return ConvexBody::interval(-half_width_[0], half_width_[0]);
        return ConvexBody::box(half_width_[0], half_width_[1]);
    }

private:
    int dim_ = 1;
    std::array<double, 2> half_width_{1.0, 0.0};
    std::array<int, 2> points_{17, 1};
    std::array<double, 2> spacing_{0.125, 1.0};
};

} // namespace orlicz
