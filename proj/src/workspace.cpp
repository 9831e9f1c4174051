#include "mopp/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <string>

#include "mopp/errors.hpp"
#include "mopp/rng.hpp"
#include "mopp/terrain.hpp"

namespace mopp {

OccupancyGrid::OccupancyGrid(int width, int height, uint8_t fill)
    : width_(width), height_(height), cells_(size_t(width) * height, fill) {
    if (width <= 0 || height <= 0) {
        throw ConfigError("occupancy grid dimensions must be positive");
    }
}

size_t OccupancyGrid::occupied_count() const {
    return size_t(std::count_if(cells_.begin(), cells_.end(),
                                [](uint8_t c) { return c != 0; }));
}

double OccupancyGrid::occupied_fraction() const {
    return cells_.empty() ? 0.0 : double(occupied_count()) / double(cells_.size());
}

ElevationLayer::ElevationLayer(int width, int height, double fill)
    : width_(width), height_(height), values_(size_t(width) * height, fill) {
    if (width <= 0 || height <= 0) {
        throw ConfigError("elevation layer dimensions must be positive");
    }
}

ElevationLayer::ElevationLayer(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width <= 0 || height <= 0) {
        throw ConfigError("elevation layer dimensions must be positive");
    }
    if (values_.size() != size_t(width) * height) {
        throw DimensionError("elevation value count does not match dimensions");
    }
}

void ElevationLayer::validate() const {
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
            throw ConfigError("elevation values must be finite and in [0,1]");
        }
    }
}

double risk_at(const RiskField& risk, const GridCoord& at) {
    const double dr = double(at.row - risk.center.row);
    const double dc = double(at.col - risk.center.col);
    const double d_sq = dr * dr + dc * dc;
    return 1.0 / std::max(d_sq, risk.epsilon_sq);
}

void SolarModel::validate() const {
    if (std::abs(initial.norm() - 1.0) > 1e-9) {
        throw ConfigError("solar initial vector must be unit length");
    }
    if (!std::isfinite(rotation_rate)) {
        throw ConfigError("solar rotation rate must be finite");
    }
}

Vec2 solar_vector_at(const SolarModel& model, int step) {
    // Rotate by the total angle in one shot; no per-step drift.
    return model.initial.rotated(double(step) * model.rotation_rate);
}

void Workspace::validate() const {
    if (grid.width() <= 0 || grid.height() <= 0) {
        throw ConfigError("workspace grid is empty");
    }
    if (elevation.width() != grid.width() || elevation.height() != grid.height()) {
        throw DimensionError("elevation layer dimensions differ from grid");
    }
    elevation.validate();
    solar.validate();
    if (!grid.in_bounds(risk.center)) {
        throw ConfigError("risk center out of bounds");
    }
    if (risk.epsilon_sq <= 0.0 || !std::isfinite(risk.epsilon_sq)) {
        throw ConfigError("risk epsilon_sq must be positive");
    }
    if (!grid.in_bounds(start) || !grid.in_bounds(goal)) {
        throw ConfigError("start/goal out of bounds");
    }
    if (grid.occupied(start) || grid.occupied(goal)) {
        throw ConfigError("start/goal cell occupied");
    }
    if (start == goal) {
        throw ConfigError("start and goal must differ");
    }
}

namespace {

// Row-major offset order: d_row outer, d_col inner, center skipped.
constexpr int kOffsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                {0, 1},   {1, -1}, {1, 0},  {1, 1}};

}  // namespace

std::vector<GridCoord> successors(const OccupancyGrid& grid, const GridCoord& at) {
    if (!grid.in_bounds(at)) {
        throw InvalidQueryError("successor query out of bounds");
    }
    if (grid.occupied(at)) {
        throw InvalidQueryError("successor query on occupied cell");
    }
    std::vector<GridCoord> out;
    out.reserve(8);
    for (const auto& off : kOffsets) {
        const GridCoord n{at.row + off[0], at.col + off[1]};
        if (grid.in_bounds(n) && grid.free(n)) out.push_back(n);
    }
    return out;
}

std::vector<GridCoord> successors(const Workspace& ws, const GridCoord& at) {
    return successors(ws.grid, at);
}

bool cells_connected(const OccupancyGrid& grid, const GridCoord& from,
                     const GridCoord& to) {
    if (!grid.in_bounds(from) || !grid.in_bounds(to)) return false;
    if (grid.occupied(from) || grid.occupied(to)) return false;
    if (from == to) return true;

    std::vector<uint8_t> seen(grid.cell_count(), 0);
    std::deque<GridCoord> queue{from};
    seen[grid.index(from)] = 1;
    while (!queue.empty()) {
        const GridCoord c = queue.front();
        queue.pop_front();
        for (const auto& off : kOffsets) {
            const GridCoord n{c.row + off[0], c.col + off[1]};
            if (!grid.in_bounds(n) || grid.occupied(n)) continue;
            if (seen[grid.index(n)]) continue;
            if (n == to) return true;
            seen[grid.index(n)] = 1;
            queue.push_back(n);
        }
    }
    return false;
}

namespace {

struct SizeClass {
    int min_side;
    int max_side;
};

constexpr SizeClass kLarge{8, 15};
constexpr SizeClass kMedium{4, 7};
constexpr SizeClass kSmall{1, 3};

bool touches_protected(const std::vector<uint8_t>& protected_cells,
                       const OccupancyGrid& grid, int r0, int c0, int r1, int c1) {
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            if (protected_cells[grid.index({r, c})]) return true;
        }
    }
    return false;
}

// Places axis-aligned rectangles by rejection sampling until the occupied
// fraction lands in [target - 0.04, target + 0.04]. Returns false when the
// attempt budget runs out before reaching the band.
bool place_obstacles(SeededRng& rng, OccupancyGrid& grid, double target_coverage,
                     const SizeMix& mix, const std::vector<uint8_t>& protected_cells) {
    const double total = double(grid.cell_count());
    const double hi_band = (target_coverage + 0.04) * total;
    const double lo_band = (target_coverage - 0.04) * total;
    if (lo_band <= 0.0) return true;  // zero or near-zero coverage: nothing to place

    const double mix_total = mix.large + mix.medium + mix.small;
    if (mix_total <= 0.0) throw ConfigError("size mix must have a positive ratio");

    const int max_dim = std::max(1, std::min(grid.width(), grid.height()) / 3);
    size_t occupied = grid.occupied_count();
    const int budget = 40 * grid.width() * grid.height() / 10;

    for (int tries = 0; tries < budget && double(occupied) < lo_band; ++tries) {
        const double pick = rng.uniform_real01() * mix_total;
        SizeClass cls = kSmall;
        if (pick < mix.large) {
            cls = kLarge;
        } else if (pick < mix.large + mix.medium) {
            cls = kMedium;
        }
        const int side_r =
            std::min(max_dim, rng.uniform_int(cls.min_side, cls.max_side));
        const int side_c =
            std::min(max_dim, rng.uniform_int(cls.min_side, cls.max_side));
        if (side_r > grid.height() || side_c > grid.width()) continue;

        const int r0 = rng.uniform_int(0, grid.height() - side_r);
        const int c0 = rng.uniform_int(0, grid.width() - side_c);
        const int r1 = r0 + side_r - 1;
        const int c1 = c0 + side_c - 1;
        if (touches_protected(protected_cells, grid, r0, c0, r1, c1)) continue;

        size_t fresh = 0;
        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) {
                if (grid.free({r, c})) ++fresh;
            }
        }
        if (double(occupied + fresh) > hi_band) continue;  // would overshoot

        for (int r = r0; r <= r1; ++r) {
            for (int c = c0; c <= c1; ++c) {
                grid.set({r, c}, true);
            }
        }
        occupied += fresh;
    }
    return double(occupied) >= lo_band;
}

}  // namespace

Workspace generate_random_workspace(uint64_t seed, int width, int height,
                                    double target_coverage,
                                    const WorkspaceGenOptions& options) {
    if (width < 10 || height < 10) {
        throw ConfigError("workspace dimensions must be at least 10x10");
    }
    if (target_coverage < 0.0 || target_coverage >= 0.6) {
        throw ConfigError("target coverage must lie in [0, 0.6)");
    }
    options.solar.validate();

    const GridCoord start = options.start_override.value_or(GridCoord{0, 0});
    const GridCoord goal =
        options.goal_override.value_or(GridCoord{height - 1, width - 1});

    for (int attempt = 0; attempt < 100; ++attempt) {
        SeededRng rng(derive_seed(seed, uint64_t(attempt)));
        OccupancyGrid grid(width, height);

        // Start/goal cells plus their 8-neighborhoods stay free.
        std::vector<uint8_t> protected_cells(grid.cell_count(), 0);
        for (const GridCoord& anchor : {start, goal}) {
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const GridCoord c{anchor.row + dr, anchor.col + dc};
                    if (grid.in_bounds(c)) protected_cells[grid.index(c)] = 1;
                }
            }
        }

        if (!place_obstacles(rng, grid, target_coverage, options.size_mix,
                             protected_cells)) {
            continue;
        }
        if (!cells_connected(grid, start, goal)) continue;

        Workspace ws;
        ws.grid = std::move(grid);
        ws.elevation = generate_synthetic_terrain(
            derive_seed(seed, 0x7e22a1ULL + uint64_t(attempt)), width, height);

        // Risk center: uniformly random free cell.
        std::vector<GridCoord> free_cells;
        free_cells.reserve(ws.grid.cell_count());
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                if (ws.grid.free({r, c})) free_cells.push_back({r, c});
            }
        }
        const GridCoord risk_center =
            free_cells[size_t(rng.uniform_int(0, int(free_cells.size()) - 1))];

        ws.risk = RiskField{risk_center, options.epsilon_sq};
        ws.solar = options.solar;
        ws.start = start;
        ws.goal = goal;
        ws.seed = seed;
        ws.validate();
        return ws;
    }
    throw GenerationError("no connected workspace found in 100 attempts (seed " +
                          std::to_string(seed) + ")");
}

}  // namespace mopp
