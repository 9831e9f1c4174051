#include "mopp/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "mopp/errors.hpp"

namespace mopp {

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::Astar: return "astar";
        case Algorithm::Dstar: return "dstar";
        case Algorithm::DstarPo: return "dstar-po";
        case Algorithm::AstarPo: return "astar-po";
    }
    throw ConfigError("unknown algorithm");
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "astar") return Algorithm::Astar;
    if (name == "dstar") return Algorithm::Dstar;
    if (name == "dstar-po" || name == "dstar_po") return Algorithm::DstarPo;
    if (name == "astar-po" || name == "astar_po") return Algorithm::AstarPo;
    throw ConfigError("unknown algorithm: " + name);
}

bool is_pareto(Algorithm algorithm) {
    return algorithm == Algorithm::DstarPo || algorithm == Algorithm::AstarPo;
}

bool is_goal_rooted(Algorithm algorithm) {
    return algorithm == Algorithm::Dstar || algorithm == Algorithm::DstarPo;
}

std::string SearchTrace::to_ndjson() const {
    std::string out;
    for (const TraceRecord& rec : records) {
        out += "{\"expansionIndex\":" + std::to_string(rec.expansion_index) +
               ",\"chosenCell\":{\"row\":" + std::to_string(rec.chosen_cell.row) +
               ",\"col\":" + std::to_string(rec.chosen_cell.col) +
               "},\"openListSize\":" + std::to_string(rec.open_list_size);
        if (rec.front_size) {
            out += ",\"frontSize\":" + std::to_string(*rec.front_size);
        }
        out += ",\"policy\":\"" + policy + "\"}\n";
    }
    return out;
}

std::vector<GridCoord> extract_path(const BackPointerField& field,
                                    const GridCoord& from) {
    auto it = field.pointers.find(from);
    if (it == field.pointers.end()) {
        throw CorruptStateError("no back-pointer entry at the requested cell");
    }
    std::vector<GridCoord> path{from};
    std::unordered_set<GridCoord, GridCoordHash> visited{from};
    GridCoord at = from;
    while (true) {
        const std::optional<GridCoord>& bp = field.pointers.at(at);
        if (!bp) break;
        if (!cells_adjacent8(at, *bp)) {
            throw CorruptStateError("back-pointer links non-adjacent cells");
        }
        if (field.pointers.find(*bp) == field.pointers.end()) {
            throw CorruptStateError("back-pointer dangles into an unknown cell");
        }
        if (!visited.insert(*bp).second) {
            throw CorruptStateError("back-pointer cycle detected");
        }
        path.push_back(*bp);
        at = *bp;
    }
    return path;
}

size_t expand_policy_composite(const std::vector<SearchNode>& open_list,
                               const Weights& weights) {
    if (open_list.empty()) {
        throw InvalidQueryError("composite policy needs a non-empty open list");
    }
    std::vector<ObjectiveVector> objs;
    objs.reserve(open_list.size());
    for (const SearchNode& n : open_list) objs.push_back(n.objectives);
    const auto normalized = normalize_columns(objs);

    size_t best = 0;
    double best_cost = composite_cost(normalized[0], weights);
    for (size_t i = 1; i < normalized.size(); ++i) {
        const double cost = composite_cost(normalized[i], weights);
        if (cost < best_cost ||
            (cost == best_cost && open_list[i].coord < open_list[best].coord)) {
            best = i;
            best_cost = cost;
        }
    }
    return best;
}

size_t expand_policy_pareto(const std::vector<SearchNode>& open_list,
                            const PrioritySelector& selector) {
    if (open_list.empty()) {
        throw InvalidQueryError("pareto policy needs a non-empty open list");
    }
    std::vector<ObjectiveVector> objs;
    objs.reserve(open_list.size());
    for (const SearchNode& n : open_list) objs.push_back(n.objectives);
    const auto normalized = normalize_columns(objs);

    std::vector<ParetoPoint> points(open_list.size());
    for (size_t i = 0; i < open_list.size(); ++i) {
        points[i].values.assign(normalized[i].begin(), normalized[i].end());
        points[i].node_id = i;
        points[i].coord = open_list[i].coord;
    }
    return select_successor(pareto_front(points), selector);
}

double static_path_cost(const Workspace& ws, const std::vector<GridCoord>& path,
                        const Weights& weights) {
    if (path.size() < 2) {
        throw InvalidStepError("path needs at least two waypoints");
    }
    double cost = 0.0;
    for (size_t i = 1; i < path.size(); ++i) {
        cost += weights[0] * step_distance(path[i - 1], path[i]) +
                weights[2] * ws.elevation.at(path[i]) +
                weights[4] * risk_at(ws.risk, path[i]);
    }
    return cost;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr uint32_t kNoSlot = UINT32_MAX;

constexpr int kOffsets[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1},
                                {0, 1},   {1, -1}, {1, 0},  {1, 1}};

uint64_t fnv1a64(const void* data, size_t len, uint64_t hash) {
    const auto* bytes = static_cast<const uint8_t*>(data);
    for (size_t i = 0; i < len; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

struct CellNode {
    double cost = kInf;  // static composite accumulation, the relaxation key
    ObjectiveVector obj;
    int bp = -1;
    NodeState tag = NodeState::New;
    int step_index = 0;
    uint32_t open_slot = kNoSlot;
};

void validate_composite_weights(const Weights& weights) {
    bool any_positive = false;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ConfigError("planner weights must be finite and non-negative");
        }
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw ConfigError("planner weights must not all be zero");
}

size_t count_front(const std::vector<std::array<double, 5>>& points) {
    std::vector<double> sums(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        sums[i] = std::accumulate(points[i].begin(), points[i].end(), 0.0);
    }
    std::vector<size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return sums[a] < sums[b]; });
    std::vector<size_t> accepted;
    for (size_t idx : order) {
        bool dominated = false;
        for (size_t keep : accepted) {
            if (dominates(points[keep], points[idx])) {
                dominated = true;
                break;
            }
        }
        if (!dominated) accepted.push_back(idx);
    }
    return accepted.size();
}

}  // namespace

// Shared search core. A single engine instance owns a mutable copy of the
// workspace (replanning applies occupancy events to it) plus the per-cell
// node field and the open list.
//
// Mode rule: with cumulative accumulation and zero effective solar weight the
// accumulated scalar is static, so the engine relaxes with reopening and runs
// the open list to exhaustion; the resulting costs are exact for that scalar
// no matter what order the policy popped nodes in. Any nonzero solar weight
// makes the scalar depend on expansion history, so the engine falls back to
// greedy best-first (closed stays closed) and stops once the target pops.
struct EngineImpl {
    Workspace ws;
    PlannerConfig config;
    bool pareto = false;
    bool goal_rooted = false;
    bool certified = false;
    double rw_g = 0, rw_e = 0, rw_s = 0, rw_r = 0;  // relaxation weights
    GridCoord root_c, target_c, h_target;
    int root_i = 0, target_i = 0;
    size_t max_pops = 0;

    std::vector<CellNode> nodes;
    std::vector<int> open;
    size_t pops = 0;
    bool target_seen = false;
    bool planned = false;
    bool repair_mode = false;
    SearchTrace trace;
    RepairStats repair;

    std::vector<ObjectiveVector> scratch_objs;
    std::vector<size_t> tie;

    EngineImpl(const Workspace& workspace, const PlannerConfig& cfg,
               bool force_static_relax)
        : ws(workspace), config(cfg) {
        ws.validate();
        pareto = is_pareto(config.algorithm);
        goal_rooted = is_goal_rooted(config.algorithm);

        Weights eff = pareto ? config.selector.effective_weights() : config.weights;
        validate_composite_weights(eff);
        rw_g = eff[0];
        rw_e = eff[2];
        rw_s = force_static_relax ? 0.0 : eff[3];
        rw_r = eff[4];
        certified = config.accumulation == AccumulationMode::Cumulative && rw_s == 0.0;

        root_c = goal_rooted ? ws.goal : ws.start;
        target_c = goal_rooted ? ws.start : ws.goal;
        h_target = target_c;
        root_i = index_of(root_c);
        target_i = index_of(target_c);
        max_pops = config.max_expansions
                       ? config.max_expansions
                       : 50 * ws.grid.cell_count();
    }

    int index_of(const GridCoord& c) const {
        return c.row * ws.grid.width() + c.col;
    }
    GridCoord coord_of(int idx) const {
        return GridCoord{idx / ws.grid.width(), idx % ws.grid.width()};
    }

    void push_open(int cell, NodeState tag) {
        nodes[size_t(cell)].open_slot = uint32_t(open.size());
        nodes[size_t(cell)].tag = tag;
        open.push_back(cell);
    }

    void remove_open_slot(size_t slot) {
        const int cell = open[slot];
        const int moved = open.back();
        open.pop_back();
        if (slot < open.size()) {
            open[slot] = moved;
            nodes[size_t(moved)].open_slot = uint32_t(slot);
        }
        nodes[size_t(cell)].open_slot = kNoSlot;
    }

    // Policy selection over the current open list. Emits the trace record and
    // fires the test hooks. Returns the chosen open slot.
    size_t select_slot() {
        scratch_objs.clear();
        scratch_objs.reserve(open.size());
        for (int cell : open) scratch_objs.push_back(nodes[size_t(cell)].obj);
        const auto normalized = normalize_columns(scratch_objs);

        uint64_t hash = 0xcbf29ce484222325ULL;
        for (const auto& arr : normalized) {
            hash = fnv1a64(arr.data(), sizeof(double) * arr.size(), hash);
        }

        size_t chosen = 0;
        std::optional<size_t> front_size;
        if (!pareto) {
            double best_cost = composite_cost(normalized[0], config.weights);
            for (size_t i = 1; i < normalized.size(); ++i) {
                const double cost = composite_cost(normalized[i], config.weights);
                if (cost < best_cost ||
                    (cost == best_cost &&
                     coord_of(open[i]) < coord_of(open[chosen]))) {
                    chosen = i;
                    best_cost = cost;
                }
            }
        } else {
            // Fused equivalent of pareto_front + select_successor: any
            // dominator of a priority-argmin node has priority <= the minimum
            // (weights are non-negative), so it sits in the argmin tie set
            // itself. Filtering domination inside the tie set therefore
            // reproduces the front-restricted selection exactly.
            tie.clear();
            double best_cost = kInf;
            for (size_t i = 0; i < normalized.size(); ++i) {
                const double cost = config.selector.priority_cost(normalized[i]);
                if (cost < best_cost) {
                    best_cost = cost;
                    tie.clear();
                    tie.push_back(i);
                } else if (cost == best_cost) {
                    tie.push_back(i);
                }
            }
            bool picked = false;
            for (size_t i : tie) {
                bool dominated = false;
                for (size_t j : tie) {
                    if (j != i && dominates(normalized[j], normalized[i])) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated &&
                    (!picked || coord_of(open[i]) < coord_of(open[chosen]))) {
                    chosen = i;
                    picked = true;
                }
            }
            if (config.trace_front_size) front_size = count_front(normalized);
        }

        const GridCoord chosen_coord = coord_of(open[chosen]);
        const int64_t cell_key[2] = {chosen_coord.row, chosen_coord.col};
        hash = fnv1a64(cell_key, sizeof(cell_key), hash);

        trace.records.push_back(
            {pops, chosen_coord, open.size(), front_size, hash});

        if (config.snapshot_sink) {
            OpenSnapshot snap;
            snap.expansion_index = pops;
            snap.chosen = chosen_coord;
            snap.chosen_slot = chosen;
            snap.coords.reserve(open.size());
            for (int cell : open) snap.coords.push_back(coord_of(cell));
            snap.normalized = normalized;
            config.snapshot_sink(snap);
        }
        if (config.selection_probe) {
            config.selection_probe(export_open_nodes(), chosen);
        }
        return chosen;
    }

    std::vector<SearchNode> export_open_nodes() const {
        std::vector<SearchNode> out;
        out.reserve(open.size());
        for (int cell : open) {
            const CellNode& n = nodes[size_t(cell)];
            SearchNode sn;
            sn.coord = coord_of(cell);
            sn.tag = n.tag;
            sn.objectives = n.obj;
            if (n.bp >= 0) sn.back_pointer = coord_of(n.bp);
            sn.step_index = n.step_index;
            out.push_back(std::move(sn));
        }
        return out;
    }

    double relax_scalar(const ObjectiveVector& obj) const {
        return rw_g * obj.g + rw_e * obj.e + rw_s * obj.s + rw_r * obj.r;
    }

    void expand_node(int cell_idx) {
        const GridCoord at = coord_of(cell_idx);
        const CellNode& n = nodes[size_t(cell_idx)];
        const int child_step = goal_rooted ? int(pops) : n.step_index + 1;

        for (const auto& off : kOffsets) {
            const GridCoord nb{at.row + off[0], at.col + off[1]};
            if (!ws.grid.in_bounds(nb) || ws.grid.occupied(nb)) continue;

            const ObjectiveVector cobj = extend_objectives(
                n.obj, at, nb, ws, child_step, h_target, config.accumulation);
            const double c = relax_scalar(cobj);

            CellNode& m = nodes[size_t(index_of(nb))];
            if (m.tag == NodeState::New) {
                m.cost = c;
                m.obj = cobj;
                m.bp = cell_idx;
                m.step_index = child_step;
                push_open(index_of(nb),
                          repair_mode ? NodeState::Raise : NodeState::Open);
                if (repair_mode) ++repair.raised;
            } else if (m.open_slot != kNoSlot) {
                if (c < m.cost) {
                    m.cost = c;
                    m.obj = cobj;
                    m.bp = cell_idx;
                    m.step_index = child_step;
                }
            } else if (certified && c < m.cost) {
                // reopen: a strictly cheaper route through the frontier
                m.cost = c;
                m.obj = cobj;
                m.bp = cell_idx;
                m.step_index = child_step;
                push_open(index_of(nb),
                          repair_mode ? NodeState::Lower : NodeState::Open);
                if (repair_mode) ++repair.lowered;
            }
        }
    }

    void search() {
        nodes.assign(ws.grid.cell_count(), CellNode{});
        open.clear();
        pops = 0;
        target_seen = false;
        trace = SearchTrace{};
        trace.policy = pareto ? "pareto" : "composite";

        CellNode& root = nodes[size_t(root_i)];
        root.cost = 0.0;
        root.obj = ObjectiveVector{0.0, heuristic(root_c, h_target), 0.0, 0.0, 0.0};
        root.step_index = 0;
        push_open(root_i, NodeState::Open);

        while (!open.empty()) {
            if (pops >= max_pops) {
                throw BudgetError("expansion budget of " + std::to_string(max_pops) +
                                  " exhausted");
            }
            const size_t slot = select_slot();
            const int cell = open[slot];
            remove_open_slot(slot);
            nodes[size_t(cell)].tag = NodeState::Closed;
            ++pops;

            if (cell == target_i) {
                target_seen = true;
                if (!certified) break;
            }
            expand_node(cell);
        }
        if (!target_seen) {
            throw NoPathError(goal_rooted ? "start unreachable from goal"
                                          : "goal unreachable from start");
        }
        planned = true;
    }

    std::vector<GridCoord> walk_back_pointers(const GridCoord& from) const {
        const int from_i = index_of(from);
        if (!(nodes[size_t(from_i)].cost < kInf)) {
            throw NoPathError("requested cell is not connected to the root");
        }
        std::vector<GridCoord> path;
        int at = from_i;
        size_t guard = 0;
        while (at >= 0) {
            if (++guard > nodes.size()) {
                throw CorruptStateError("back-pointer walk exceeded the grid");
            }
            path.push_back(coord_of(at));
            at = nodes[size_t(at)].bp;
        }
        return path;
    }

    PlanResult run_full() {
        const auto t0 = std::chrono::steady_clock::now();
        search();
        std::vector<GridCoord> path = walk_back_pointers(target_c);
        if (!goal_rooted) std::reverse(path.begin(), path.end());
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();

        PlanResult result;
        result.path = std::move(path);
        result.metrics = path_metrics(ws, result.path, seconds, pops);
        result.trace = std::move(trace);
        return result;
    }

    // ---- replanning ----

    void apply_events(const std::vector<CostChangeEvent>& events) {
        repair = RepairStats{};
        std::vector<int> blocked;
        std::vector<int> freed;
        for (const CostChangeEvent& ev : events) {
            if (!ws.grid.in_bounds(ev.cell)) {
                throw InvalidQueryError("cost-change event out of bounds");
            }
            if (ev.cell == ws.start || ev.cell == ws.goal) {
                throw InvalidQueryError("cost-change events may not touch start or goal");
            }
            const bool occupy = ev.new_state == CellState::Occupied;
            if (ws.grid.occupied(ev.cell) == occupy) continue;  // no-op event
            ws.grid.set(ev.cell, occupy);
            (occupy ? blocked : freed).push_back(index_of(ev.cell));
        }
        if (blocked.empty() && freed.empty()) return;

        // Children lists (CSR over bp) so blocked subtrees can be found.
        std::vector<int> child_count(nodes.size() + 1, 0);
        for (const CellNode& n : nodes) {
            if (n.bp >= 0) ++child_count[size_t(n.bp) + 1];
        }
        for (size_t i = 1; i < child_count.size(); ++i) {
            child_count[i] += child_count[i - 1];
        }
        std::vector<int> children(nodes.empty() ? 0 : size_t(child_count.back()));
        {
            std::vector<int> cursor(child_count.begin(), child_count.end() - 1);
            for (size_t i = 0; i < nodes.size(); ++i) {
                if (nodes[i].bp >= 0) {
                    children[size_t(cursor[size_t(nodes[i].bp)]++)] = int(i);
                }
            }
        }

        // Every node whose back-pointer chain runs through a blocked cell has
        // a stale cost: reset the whole subtree to NEW.
        std::vector<int> stack = blocked;
        std::vector<uint8_t> invalid(nodes.size(), 0);
        for (int cell : stack) invalid[size_t(cell)] = 1;
        while (!stack.empty()) {
            const int cell = stack.back();
            stack.pop_back();
            for (int k = child_count[size_t(cell)]; k < child_count[size_t(cell) + 1];
                 ++k) {
                const int child = children[size_t(k)];
                if (!invalid[size_t(child)]) {
                    invalid[size_t(child)] = 1;
                    stack.push_back(child);
                }
            }
        }
        std::vector<int> region;
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (invalid[i]) {
                if (nodes[i].open_slot != kNoSlot) {
                    remove_open_slot(nodes[i].open_slot);
                }
                nodes[i] = CellNode{};
                region.push_back(int(i));
            }
        }
        region.insert(region.end(), freed.begin(), freed.end());

        // Intact neighbors of the disturbed region seed the repair wave.
        for (int cell : region) {
            const GridCoord at = coord_of(cell);
            for (const auto& off : kOffsets) {
                const GridCoord nb{at.row + off[0], at.col + off[1]};
                if (!ws.grid.in_bounds(nb) || ws.grid.occupied(nb)) continue;
                CellNode& n = nodes[size_t(index_of(nb))];
                if (n.cost < kInf && n.open_slot == kNoSlot &&
                    !invalid[size_t(index_of(nb))]) {
                    push_open(index_of(nb), NodeState::Lower);
                    ++repair.lowered;
                }
            }
        }
    }

    void repair_to_fixpoint() {
        repair_mode = true;
        while (!open.empty()) {
            if (pops >= max_pops) {
                repair_mode = false;
                throw BudgetError("repair budget exhausted");
            }
            // Maintenance pops go by raw static cost, lexicographic on ties.
            size_t best = 0;
            for (size_t s = 1; s < open.size(); ++s) {
                const CellNode& a = nodes[size_t(open[s])];
                const CellNode& b = nodes[size_t(open[best])];
                if (a.cost < b.cost ||
                    (a.cost == b.cost && coord_of(open[s]) < coord_of(open[best]))) {
                    best = s;
                }
            }
            const int cell = open[best];
            remove_open_slot(best);
            nodes[size_t(cell)].tag = NodeState::Closed;
            ++pops;
            ++repair.pops;
            expand_node(cell);
        }
        repair_mode = false;
    }

    BackPointerField export_back_pointers() const {
        BackPointerField field;
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].cost < kInf) {
                field.pointers[coord_of(int(i))] =
                    nodes[i].bp >= 0 ? std::optional<GridCoord>(coord_of(nodes[i].bp))
                                     : std::nullopt;
            }
        }
        return field;
    }
};

PlanResult plan(const Workspace& ws, const PlannerConfig& config) {
    EngineImpl engine(ws, config, false);
    return engine.run_full();
}

struct DstarPlanner::Impl {
    EngineImpl engine;
    Impl(const Workspace& ws, const PlannerConfig& config)
        : engine(ws, config, true) {}
};

DstarPlanner::DstarPlanner(const Workspace& ws, const PlannerConfig& config) {
    if (!is_goal_rooted(config.algorithm)) {
        throw ConfigError("DstarPlanner requires a goal-rooted algorithm");
    }
    if (config.accumulation != AccumulationMode::Cumulative) {
        throw ConfigError("replanning requires cumulative accumulation");
    }
    impl_ = std::make_unique<Impl>(ws, config);
}

DstarPlanner::~DstarPlanner() = default;
DstarPlanner::DstarPlanner(DstarPlanner&&) noexcept = default;
DstarPlanner& DstarPlanner::operator=(DstarPlanner&&) noexcept = default;

PlanResult DstarPlanner::initial_plan() {
    return impl_->engine.run_full();
}

std::vector<GridCoord> DstarPlanner::replan(
    const std::vector<CostChangeEvent>& events, const GridCoord& robot_at) {
    EngineImpl& eng = impl_->engine;
    if (!eng.planned) {
        throw InvalidQueryError("replan requires a prior initial_plan");
    }
    if (!eng.ws.grid.in_bounds(robot_at)) {
        throw InvalidQueryError("robot position out of bounds");
    }
    if (robot_at == eng.ws.goal) {
        throw InvalidQueryError("robot is already at the goal");
    }
    eng.apply_events(events);
    eng.repair_to_fixpoint();
    if (eng.ws.grid.occupied(robot_at)) {
        throw NoPathError("robot cell became occupied");
    }
    if (!(eng.nodes[size_t(eng.index_of(robot_at))].cost < kInf)) {
        throw NoPathError("events severed the robot from the goal");
    }
    return eng.walk_back_pointers(robot_at);
}

BackPointerField DstarPlanner::back_pointers() const {
    return impl_->engine.export_back_pointers();
}

const Workspace& DstarPlanner::workspace() const {
    return impl_->engine.ws;
}

RepairStats DstarPlanner::last_repair_stats() const {
    return impl_->engine.repair;
}

std::pair<std::vector<GridCoord>, BackPointerField> dstar_initial_plan(
    const Workspace& ws, const PlannerConfig& config) {
    PlannerConfig cfg = config;
    if (!is_goal_rooted(cfg.algorithm)) cfg.algorithm = Algorithm::Dstar;
    DstarPlanner planner(ws, cfg);
    PlanResult result = planner.initial_plan();
    return {std::move(result.path), planner.back_pointers()};
}

}  // namespace mopp
