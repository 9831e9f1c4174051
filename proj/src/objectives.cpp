#include "mopp/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_set>

#include "mopp/errors.hpp"

namespace mopp {

double step_distance(const GridCoord& a, const GridCoord& b) {
    if (!cells_adjacent8(a, b)) {
        throw InvalidStepError("cells are not 8-adjacent");
    }
    const int dr = std::abs(a.row - b.row);
    const int dc = std::abs(a.col - b.col);
    return (dr + dc == 2) ? std::numbers::sqrt2 : 1.0;
}

double heuristic(const GridCoord& at, const GridCoord& goal) {
    const double dr = double(at.row - goal.row);
    const double dc = double(at.col - goal.col);
    return std::sqrt(dr * dr + dc * dc);
}

double solar_step_cost(const GridCoord& from, const GridCoord& to, const Vec2& solar) {
    if (from == to) {
        throw InvalidStepError("zero-length heading has no direction");
    }
    // Heading lives in (x, y) = (col, row) space to match the solar vector.
    Vec2 heading{double(to.col - from.col), double(to.row - from.row)};
    const double len = heading.norm();
    heading.x /= len;
    heading.y /= len;
    return heading.dot(solar);
}

ObjectiveVector extend_objectives(const ObjectiveVector& parent, const GridCoord& from,
                                  const GridCoord& to, const Workspace& ws,
                                  int step_index, const GridCoord& h_target,
                                  AccumulationMode mode) {
    if (!ws.grid.in_bounds(from) || !ws.grid.in_bounds(to)) {
        throw InvalidStepError("move endpoints out of bounds");
    }
    if (ws.grid.occupied(from) || ws.grid.occupied(to)) {
        throw InvalidStepError("move touches an occupied cell");
    }
    const double dist = step_distance(from, to);  // also enforces adjacency
    const double elev = ws.elevation.at(to);
    const double solar =
        solar_step_cost(from, to, solar_vector_at(ws.solar, step_index));
    const double risk = risk_at(ws.risk, to);

    ObjectiveVector child;
    child.h = heuristic(to, h_target);
    if (mode == AccumulationMode::Cumulative) {
        child.g = parent.g + dist;
        child.e = parent.e + elev;
        child.s = parent.s + solar;
        child.r = parent.r + risk;
    } else {
        child.g = parent.g + dist;  // g stays a true running length in both modes
        child.e = elev;
        child.s = solar;
        child.r = risk;
    }
    return child;
}

ObjectiveVector extend_objectives(const ObjectiveVector& parent, const GridCoord& from,
                                  const GridCoord& to, const Workspace& ws,
                                  int step_index) {
    return extend_objectives(parent, from, to, ws, step_index, ws.goal);
}

std::vector<std::array<double, 5>> normalize_columns(
    const std::vector<ObjectiveVector>& vectors) {
    if (vectors.empty()) {
        throw InvalidQueryError("cannot normalize an empty vector list");
    }
    std::array<double, 5> lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const ObjectiveVector& v : vectors) {
        const auto a = v.as_array();
        for (int i = 0; i < 5; ++i) {
            lo[i] = std::min(lo[i], a[i]);
            hi[i] = std::max(hi[i], a[i]);
        }
    }
    std::array<double, 5> span;
    for (int i = 0; i < 5; ++i) span[i] = hi[i] - lo[i];

    std::vector<std::array<double, 5>> out(vectors.size());
    for (size_t n = 0; n < vectors.size(); ++n) {
        const auto a = vectors[n].as_array();
        for (int i = 0; i < 5; ++i) {
            out[n][i] = span[i] > 0.0 ? (a[i] - lo[i]) / span[i] : 0.0;
        }
    }
    return out;
}

double composite_cost(const std::array<double, 5>& normalized, const Weights& weights) {
    bool any_positive = false;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ConfigError("composite weights must be finite and non-negative");
        }
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) {
        throw ConfigError("composite weights must not all be zero");
    }
    double cost = 0.0;
    for (int i = 0; i < 5; ++i) cost += weights[i] * normalized[i];
    return cost;
}

PathMetrics path_metrics(const Workspace& ws, const std::vector<GridCoord>& path,
                         double compute_time, size_t expansions) {
    if (path.size() < 2) {
        throw InvalidStepError("path needs at least two waypoints");
    }
    std::unordered_set<GridCoord, GridCoordHash> seen;
    for (size_t i = 0; i < path.size(); ++i) {
        if (!ws.grid.in_bounds(path[i]) || ws.grid.occupied(path[i])) {
            throw InvalidStepError("waypoint " + std::to_string(i) +
                                   " is out of bounds or occupied");
        }
        if (!seen.insert(path[i]).second) {
            throw InvalidStepError("waypoint " + std::to_string(i) + " repeats");
        }
        if (i > 0 && !cells_adjacent8(path[i - 1], path[i])) {
            throw InvalidStepError("waypoints " + std::to_string(i - 1) + " and " +
                                   std::to_string(i) + " are not 8-adjacent");
        }
    }

    const size_t n = path.size();
    PathMetrics m;
    m.compute_time = compute_time;
    m.expansions = expansions;

    double solar_sum = 0.0;
    for (size_t i = 1; i < n; ++i) {
        m.length += step_distance(path[i - 1], path[i]);
        solar_sum +=
            solar_step_cost(path[i - 1], path[i], solar_vector_at(ws.solar, int(i)));
    }
    m.solar_deviation = solar_sum / double(n - 1);

    double elev_sum = 0.0;
    double risk_sum = 0.0;
    for (const GridCoord& p : path) {
        elev_sum += ws.elevation.at(p);
        risk_sum += risk_at(ws.risk, p);
    }
    m.mean_elevation = elev_sum / double(n);
    m.risk_proximity = risk_sum / double(n);
    return m;
}

}  // namespace mopp
