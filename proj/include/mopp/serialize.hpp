#pragma once

#include <string>
#include <vector>

#include "mopp/types.hpp"
#include "mopp/workspace.hpp"

namespace mopp {

/// Workspace <-> JSON document. Occupancy is run-length encoded as alternating
/// free/occupied run lengths over the row-major cell order, starting with a
/// free run (possibly 0). Elevation is stored as nested row arrays.
std::string workspace_to_json(const Workspace& ws);
Workspace workspace_from_json(const std::string& text);

void save_workspace(const Workspace& ws, const std::string& path);
Workspace load_workspace(const std::string& path);

/// Waypoint CSV: header `step,row,col`, one row per waypoint.
std::string waypoints_to_csv(const std::vector<GridCoord>& path);
std::vector<GridCoord> waypoints_from_csv(const std::string& text);

void save_waypoints(const std::vector<GridCoord>& path, const std::string& file);
std::vector<GridCoord> load_waypoints(const std::string& file);

}  // namespace mopp
