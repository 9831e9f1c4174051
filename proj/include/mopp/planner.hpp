#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mopp/objectives.hpp"
#include "mopp/pareto.hpp"
#include "mopp/types.hpp"
#include "mopp/workspace.hpp"

namespace mopp {

enum class Algorithm { Astar, Dstar, DstarPo, AstarPo };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

/// PO variants substitute Pareto-front selection for the composite argmin.
bool is_pareto(Algorithm algorithm);
/// D* variants grow the search tree outward from the goal.
bool is_goal_rooted(Algorithm algorithm);

/// RAISE and LOWER appear only transiently while a replan repairs the field.
enum class NodeState { New, Open, Closed, Raise, Lower };

struct SearchNode {
    GridCoord coord;
    NodeState tag = NodeState::New;
    ObjectiveVector objectives;
    std::optional<GridCoord> back_pointer;
    int step_index = 0;  // path depth (A* family) or expansion count (D* family)
};

struct TraceRecord {
    size_t expansion_index = 0;
    GridCoord chosen_cell;
    size_t open_list_size = 0;
    std::optional<size_t> front_size;  // PO runs with front sizing enabled
    uint64_t snapshot_hash = 0;        // FNV-1a over the normalized open list
};

struct SearchTrace {
    std::string policy;  // "composite" or "pareto", constant per run
    std::vector<TraceRecord> records;

    /// One JSON object per line: {expansionIndex, chosenCell, openListSize,
    /// frontSize (when recorded), policy}.
    std::string to_ndjson() const;
};

/// Normalized open-list snapshot handed to an audit callback at each
/// expansion, before the chosen node is removed.
struct OpenSnapshot {
    size_t expansion_index = 0;
    GridCoord chosen;
    size_t chosen_slot = 0;  // index into coords/normalized
    std::vector<GridCoord> coords;
    std::vector<std::array<double, 5>> normalized;
};

struct PlannerConfig {
    Algorithm algorithm = Algorithm::Astar;
    Weights weights = kEqualWeights;  // composite policy
    PrioritySelector selector{};      // pareto policy
    AccumulationMode accumulation = AccumulationMode::Cumulative;
    size_t max_expansions = 0;  // 0 means 50 x cell count
    bool trace_front_size = false;

    /// Test hooks; both default to disabled and must not change results.
    std::function<void(const OpenSnapshot&)> snapshot_sink;
    std::function<void(const std::vector<SearchNode>&, size_t chosen_slot)>
        selection_probe;
};

struct PlanResult {
    std::vector<GridCoord> path;
    PathMetrics metrics;
    SearchTrace trace;
};

/// Runs the configured search over the workspace. When the accumulated scalar
/// is static (solar weight 0, cumulative mode) the search relaxes to
/// exhaustion with reopening and the result is optimal for that scalar;
/// otherwise it expands greedily and stops at the target, matching the
/// normalized-composite behavior the algorithms are defined with.
PlanResult plan(const Workspace& ws, const PlannerConfig& config);

/// Literal expansion policies over an explicit open list. Both return the
/// index of the chosen node within the list.
size_t expand_policy_composite(const std::vector<SearchNode>& open_list,
                               const Weights& weights);
size_t expand_policy_pareto(const std::vector<SearchNode>& open_list,
                            const PrioritySelector& selector);

/// Back-pointer field exported from a finished search. Roots carry nullopt.
struct BackPointerField {
    std::unordered_map<GridCoord, std::optional<GridCoord>, GridCoordHash> pointers;
};

/// Follows back-pointers from `from` to the root, returning the walked cells
/// in order. Throws CorruptStateError on cycles, dangling pointers, or
/// non-adjacent links.
std::vector<GridCoord> extract_path(const BackPointerField& field,
                                    const GridCoord& from);

enum class CellState { Free, Occupied };

struct CostChangeEvent {
    GridCoord cell;
    CellState new_state = CellState::Occupied;
};

struct RepairStats {
    size_t raised = 0;   // nodes invalidated and later re-reached
    size_t lowered = 0;  // intact nodes re-queued as repair sources
    size_t pops = 0;     // repair-queue pops until fixpoint
};

/// Goal-rooted incremental planner. The initial plan relaxes the static part
/// of the composite (solar weight forced to 0) to exhaustion so that later
/// repairs are exact; replan applies occupancy events, invalidates the
/// affected back-pointer subtrees, and re-relaxes to fixpoint.
class DstarPlanner {
  public:
    DstarPlanner(const Workspace& ws, const PlannerConfig& config);
    ~DstarPlanner();
    DstarPlanner(DstarPlanner&&) noexcept;
    DstarPlanner& operator=(DstarPlanner&&) noexcept;

    PlanResult initial_plan();

    /// Requires a prior initial_plan. Returns the repaired path from robot_at
    /// to the goal. Throws NoPathError when the events sever it.
    std::vector<GridCoord> replan(const std::vector<CostChangeEvent>& events,
                                  const GridCoord& robot_at);

    BackPointerField back_pointers() const;
    const Workspace& workspace() const;
    RepairStats last_repair_stats() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::pair<std::vector<GridCoord>, BackPointerField> dstar_initial_plan(
    const Workspace& ws, const PlannerConfig& config);

/// Order-independent composite cost of a finished path: each step adds
/// weights[0] * distance + weights[2] * elevation(to) + weights[4] * risk(to).
/// The heuristic and solar components do not contribute.
double static_path_cost(const Workspace& ws, const std::vector<GridCoord>& path,
                        const Weights& weights);

}  // namespace mopp
