#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mopp/types.hpp"
#include "mopp/workspace.hpp"

namespace mopp {

/// Per-node projection into objective space. g/e/s/r accumulate along the
/// best-known path to the node; h is the instantaneous heuristic. s is the
/// only component that may go negative (it sums dot products).
struct ObjectiveVector {
    double g = 0.0;  ///< accumulated Euclidean distance, meters
    double h = 0.0;  ///< heuristic distance to the search target, meters
    double e = 0.0;  ///< accumulated elevation sum
    double s = 0.0;  ///< accumulated solar dot-product sum
    double r = 0.0;  ///< accumulated inverse-square risk sum

    std::array<double, 5> as_array() const { return {g, h, e, s, r}; }

    bool operator==(const ObjectiveVector&) const = default;
};

/// Component weights in (g, h, e, s, r) order.
using Weights = std::array<double, 5>;

inline constexpr Weights kEqualWeights{1.0, 1.0, 1.0, 1.0, 1.0};
inline constexpr Weights kDistanceOnlyWeights{1.0, 1.0, 0.0, 0.0, 0.0};

struct PathMetrics {
    double length = 0.0;           ///< total path length, meters
    double mean_elevation = 0.0;   ///< mean elevation over all waypoints
    double solar_deviation = 0.0;  ///< mean per-step heading/solar dot product
    double risk_proximity = 0.0;   ///< mean inverse-square risk over waypoints
    double compute_time = 0.0;     ///< seconds
    size_t expansions = 0;
};

/// 1 for orthogonal moves, sqrt(2) for diagonal. Throws InvalidStepError when
/// the cells are not 8-adjacent.
double step_distance(const GridCoord& a, const GridCoord& b);

/// Euclidean distance between cell centers.
double heuristic(const GridCoord& at, const GridCoord& goal);

/// Dot product of the normalized heading (to - from) with the solar vector.
/// Throws InvalidStepError on a zero-length heading.
double solar_step_cost(const GridCoord& from, const GridCoord& to, const Vec2& solar);

enum class AccumulationMode { Cumulative, Instantaneous };

/// Extends a parent's objective vector across one legal free move; h is taken
/// toward h_target (ws.goal for start-rooted search, ws.start for goal-rooted).
/// step_index drives the solar model.
ObjectiveVector extend_objectives(const ObjectiveVector& parent, const GridCoord& from,
                                  const GridCoord& to, const Workspace& ws,
                                  int step_index, const GridCoord& h_target,
                                  AccumulationMode mode = AccumulationMode::Cumulative);

/// Convenience overload targeting ws.goal.
ObjectiveVector extend_objectives(const ObjectiveVector& parent, const GridCoord& from,
                                  const GridCoord& to, const Workspace& ws,
                                  int step_index);

/// Per-column min-max normalization across the list. A zero-range column maps
/// to 0 for every vector. Throws InvalidQueryError on an empty list.
std::vector<std::array<double, 5>> normalize_columns(
    const std::vector<ObjectiveVector>& vectors);

/// Weighted sum of a normalized vector. Weights must be finite, non-negative,
/// and not all zero; otherwise throws ConfigError.
double composite_cost(const std::array<double, 5>& normalized, const Weights& weights);

/// Recomputes the reportable metrics for a finished path. The step arriving at
/// waypoint i uses solar_vector_at(ws.solar, i).
PathMetrics path_metrics(const Workspace& ws, const std::vector<GridCoord>& path,
                         double compute_time, size_t expansions);

}  // namespace mopp
