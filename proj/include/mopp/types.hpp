#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>

namespace mopp {

/// Cell index into a grid. Convention: (row, col) with the origin at the
/// lower-left corner, so row increases northward and col increases eastward.
/// One cell side corresponds to one meter.
struct GridCoord {
    int row = 0;
    int col = 0;

    friend bool operator==(const GridCoord&, const GridCoord&) = default;
    // Lexicographic (row, col); this is the deterministic tie-break order
    // used throughout the planners.
    friend auto operator<=>(const GridCoord&, const GridCoord&) = default;
};

/// 2D vector in cell units, x along columns (east), y along rows (north).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }

    /// Counterclockwise rotation by `angle` radians.
    Vec2 rotated(double angle) const {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        return {x * c - y * s, x * s + y * c};
    }

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline bool cells_adjacent8(const GridCoord& a, const GridCoord& b) {
    const int dr = std::abs(a.row - b.row);
    const int dc = std::abs(a.col - b.col);
    return (dr <= 1 && dc <= 1) && (dr + dc > 0);
}

struct GridCoordHash {
    size_t operator()(const GridCoord& c) const {
        return std::hash<int64_t>{}((int64_t(c.row) << 32) ^ uint32_t(c.col));
    }
};

}  // namespace mopp

