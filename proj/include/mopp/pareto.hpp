#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mopp/objectives.hpp"
#include "mopp/types.hpp"

namespace mopp {

/// One open-list entry projected into (normalized) objective space. Dimension
/// is usually 5 but domination and front extraction accept any dimension.
struct ParetoPoint {
    std::vector<double> values;
    size_t node_id = 0;
    GridCoord coord{};  // identity for the deterministic tie-break
};

/// How a single expansion candidate is picked off the Pareto front.
struct PrioritySelector {
    enum class Mode { CompositeSum, SingleObjective, CustomWeights };

    Mode mode = Mode::CompositeSum;
    int objective_index = 0;          // SingleObjective only
    Weights weights = kEqualWeights;  // CustomWeights only

    static PrioritySelector composite_sum();
    static PrioritySelector single_objective(int index);
    static PrioritySelector custom(const Weights& weights);

    /// Scalar priority cost of one candidate; lower wins.
    double priority_cost(const std::vector<double>& values) const;
    double priority_cost(const std::array<double, 5>& values) const;

    /// The selector expressed as 5-dim weights (one-hot for SingleObjective,
    /// all ones for CompositeSum).
    Weights effective_weights() const;
};

/// True iff a <= b componentwise and a < b somewhere (minimization). Throws
/// DimensionError on mismatched lengths.
bool dominates(const std::vector<double>& a, const std::vector<double>& b);
bool dominates(const std::array<double, 5>& a, const std::array<double, 5>& b);

/// Non-dominated subset, input order preserved, duplicates of front points
/// retained. Throws InvalidQueryError on empty input.
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

/// Front member minimizing the selector's priority cost; ties broken by
/// lexicographic (row, col). Returns the winner's node_id.
size_t select_successor(const std::vector<ParetoPoint>& front,
                        const PrioritySelector& selector);

}  // namespace mopp
