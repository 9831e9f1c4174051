#pragma once

#include <string>
#include <vector>

#include "mopp/planner.hpp"
#include "mopp/types.hpp"
#include "mopp/workspace.hpp"

namespace mopp {

/// Scalar field drawn under the paths. OccupancyHeuristic shades free cells
/// by goal distance with obstacles at the darkest value; Elevation renders as
/// contour lines in SVG and grayscale in PGM; Risk uses a log scale of the
/// inverse-square kernel; Solar shades by position along the ray direction.
enum class RenderLayer { OccupancyHeuristic, Elevation, Risk, Solar };

RenderLayer layer_from_string(const std::string& name);
std::string to_string(RenderLayer layer);

struct PathOverlay {
    Algorithm algorithm = Algorithm::Astar;
    std::vector<GridCoord> waypoints;
};

/// Binary P5 image, one pixel per cell, file row 0 at the top of the map.
/// Layer values span [32, 223]; obstacles 0; path cells 255.
std::string render_pgm(const Workspace& ws, RenderLayer layer,
                       const std::vector<PathOverlay>& paths);

/// SVG figure: layer as cell rectangles (or contour polylines for Elevation),
/// one polyline per path (astar black dashed, dstar black, dstar-po white,
/// astar-po white dashed), start cell red, goal cell green.
std::string render_svg(const Workspace& ws, RenderLayer layer,
                       const std::vector<PathOverlay>& paths);

}  // namespace mopp
