#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mopp/types.hpp"

namespace mopp {

/// Binary occupancy grid, row-major with row 0 at the bottom (lower-left
/// origin). A cell is free (0) or occupied (1); occupied cells are never
/// traversable.
class OccupancyGrid {
  public:
    OccupancyGrid() = default;
    OccupancyGrid(int width, int height, uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    size_t cell_count() const { return cells_.size(); }

    bool in_bounds(const GridCoord& c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    size_t index(const GridCoord& c) const {
        return size_t(c.row) * width_ + c.col;
    }

    bool occupied(const GridCoord& c) const { return cells_[index(c)] != 0; }
    bool free(const GridCoord& c) const { return cells_[index(c)] == 0; }
    void set(const GridCoord& c, bool occupied_state) {
        cells_[index(c)] = occupied_state ? 1 : 0;
    }

    size_t occupied_count() const;
    double occupied_fraction() const;

    const std::vector<uint8_t>& cells() const { return cells_; }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<uint8_t> cells_;
};

/// Per-cell normalized elevation in [0,1], same dimensions and cell order as
/// the occupancy grid it accompanies.
class ElevationLayer {
  public:
    ElevationLayer() = default;
    ElevationLayer(int width, int height, double fill = 0.0);
    ElevationLayer(int width, int height, std::vector<double> values);

    int width() const { return width_; }
    int height() const { return height_; }

    double at(const GridCoord& c) const {
        return values_[size_t(c.row) * width_ + c.col];
    }
    double& at(const GridCoord& c) {
        return values_[size_t(c.row) * width_ + c.col];
    }

    const std::vector<double>& values() const { return values_; }

    /// Throws ConfigError unless all values are finite and in [0,1].
    void validate() const;

    friend bool operator==(const ElevationLayer&, const ElevationLayer&) = default;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

/// Single point of maximum risk. The risk value at a cell falls off with the
/// inverse squared cell distance from the center; the denominator is clamped
/// at epsilon_sq so the value at the center itself stays finite.
struct RiskField {
    GridCoord center;
    double epsilon_sq = 0.25;  // cells^2

    friend bool operator==(const RiskField&, const RiskField&) = default;
};

/// Inverse-square risk at `at`; always finite and positive.
double risk_at(const RiskField& risk, const GridCoord& at);

/// Sun direction model: a unit vector rotated counterclockwise by
/// rotation_rate radians per step.
struct SolarModel {
    Vec2 initial{1.0, 0.0};
    double rotation_rate = 0.01;  // radians per step

    /// Throws ConfigError unless the initial vector is unit length (1e-9).
    void validate() const;

    friend bool operator==(const SolarModel&, const SolarModel&) = default;
};

/// Solar vector after `step` rotations; unit length within 1e-9.
Vec2 solar_vector_at(const SolarModel& model, int step);

/// The full configuration space: occupancy, elevation terrain, risk field,
/// solar model, start and goal. Immutable after construction; safe to share
/// across concurrent planner runs.
struct Workspace {
    OccupancyGrid grid;
    ElevationLayer elevation;
    RiskField risk;
    SolarModel solar;
    GridCoord start;
    GridCoord goal;
    uint64_t seed = 0;  // 0 when hand-built

    int width() const { return grid.width(); }
    int height() const { return grid.height(); }

    /// Throws ConfigError on any violated invariant: layer dimension
    /// mismatch, start/goal occupied or out of bounds, start == goal, risk
    /// center out of bounds.
    void validate() const;
};

/// All free in-bounds 8-neighbors of `at`, in row-major offset order
/// (d_row -1..1 outer, d_col -1..1 inner). Throws InvalidQueryError when
/// `at` is out of bounds or occupied.
std::vector<GridCoord> successors(const Workspace& ws, const GridCoord& at);
std::vector<GridCoord> successors(const OccupancyGrid& grid, const GridCoord& at);

/// True when a free 8-connected path joins `from` and `to` (flood fill).
bool cells_connected(const OccupancyGrid& grid, const GridCoord& from,
                     const GridCoord& to);

/// Ratios of obstacle placement attempts per size class; they need not sum
/// to one (normalized internally). Side lengths: large 8-15, medium 4-7,
/// small 1-3 cells.
struct SizeMix {
    double large = 0.2;
    double medium = 0.3;
    double small = 0.5;
};

struct WorkspaceGenOptions {
    SizeMix size_mix;
    double epsilon_sq = 0.25;
    SolarModel solar;
    std::optional<GridCoord> start_override;
    std::optional<GridCoord> goal_override;
};

/// Generates a random workspace: rectangular obstacles in three size
/// classes until coverage is within +/-0.05 of target_coverage, synthetic
/// terrain, a uniformly random free risk cell, start at the lower-left
/// corner and goal at the upper-right (unless overridden). Start/goal cells
/// and their 8-neighborhoods are kept free, and a free 8-connected
/// start-goal path is guaranteed (regeneration with derived sub-seeds, at
/// most 100 attempts). Pure function of the seed.
Workspace generate_random_workspace(uint64_t seed, int width, int height,
                                    double target_coverage,
                                    const WorkspaceGenOptions& options = {});

}  // namespace mopp

