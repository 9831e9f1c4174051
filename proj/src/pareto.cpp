#include "mopp/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mopp/errors.hpp"

namespace mopp {

PrioritySelector PrioritySelector::composite_sum() {
    return PrioritySelector{};
}

PrioritySelector PrioritySelector::single_objective(int index) {
    if (index < 0 || index >= 5) {
        throw ConfigError("single-objective selector index must be in [0,5)");
    }
    PrioritySelector s;
    s.mode = Mode::SingleObjective;
    s.objective_index = index;
    return s;
}

PrioritySelector PrioritySelector::custom(const Weights& weights) {
    bool any_positive = false;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ConfigError("selector weights must be finite and non-negative");
        }
        if (w > 0.0) any_positive = true;
    }
    if (!any_positive) throw ConfigError("selector weights must not all be zero");
    PrioritySelector s;
    s.mode = Mode::CustomWeights;
    s.weights = weights;
    return s;
}

namespace {

template <typename Seq>
double priority_cost_impl(const PrioritySelector& sel, const Seq& values) {
    switch (sel.mode) {
        case PrioritySelector::Mode::CompositeSum:
            return std::accumulate(values.begin(), values.end(), 0.0);
        case PrioritySelector::Mode::SingleObjective:
            if (size_t(sel.objective_index) >= values.size()) {
                throw DimensionError("selector index exceeds point dimension");
            }
            return values[size_t(sel.objective_index)];
        case PrioritySelector::Mode::CustomWeights: {
            if (values.size() != 5) {
                throw DimensionError("custom-weight selector needs 5-dim points");
            }
            double cost = 0.0;
            for (int i = 0; i < 5; ++i) cost += sel.weights[i] * values[i];
            return cost;
        }
    }
    throw ConfigError("unknown selector mode");
}

template <typename Seq>
bool dominates_impl(const Seq& a, const Seq& b) {
    bool strict = false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

}  // namespace

double PrioritySelector::priority_cost(const std::vector<double>& values) const {
    return priority_cost_impl(*this, values);
}

double PrioritySelector::priority_cost(const std::array<double, 5>& values) const {
    return priority_cost_impl(*this, values);
}

Weights PrioritySelector::effective_weights() const {
    switch (mode) {
        case Mode::CompositeSum: return kEqualWeights;
        case Mode::SingleObjective: {
            Weights w{};
            w[size_t(objective_index)] = 1.0;
            return w;
        }
        case Mode::CustomWeights: return weights;
    }
    throw ConfigError("unknown selector mode");
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw DimensionError("dominance needs equal dimensions (" +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()) + ")");
    }
    return dominates_impl(a, b);
}

bool dominates(const std::array<double, 5>& a, const std::array<double, 5>& b) {
    return dominates_impl(a, b);
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points) {
    if (points.empty()) {
        throw InvalidQueryError("cannot take the front of an empty set");
    }
    const size_t dim = points.front().values.size();
    for (const ParetoPoint& p : points) {
        if (p.values.size() != dim) {
            throw DimensionError("mixed dimensions in front extraction");
        }
    }

    // A dominator always has a strictly smaller component sum, so scanning in
    // ascending-sum order only ever needs to test against accepted points.
    std::vector<double> sums(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        sums[i] = std::accumulate(points[i].values.begin(), points[i].values.end(), 0.0);
    }
    std::vector<size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return sums[a] < sums[b]; });

    std::vector<size_t> accepted;
    accepted.reserve(points.size());
    for (size_t idx : order) {
        bool dominated = false;
        for (size_t keep : accepted) {
            if (dominates_impl(points[keep].values, points[idx].values)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) accepted.push_back(idx);
    }

    std::sort(accepted.begin(), accepted.end());
    std::vector<ParetoPoint> front;
    front.reserve(accepted.size());
    for (size_t idx : accepted) front.push_back(points[idx]);
    return front;
}

size_t select_successor(const std::vector<ParetoPoint>& front,
                        const PrioritySelector& selector) {
    if (front.empty()) {
        throw InvalidQueryError("cannot select from an empty front");
    }
    size_t best = 0;
    double best_cost = selector.priority_cost(front[0].values);
    for (size_t i = 1; i < front.size(); ++i) {
        const double cost = selector.priority_cost(front[i].values);
        if (cost < best_cost ||
            (cost == best_cost && front[i].coord < front[best].coord)) {
            best = i;
            best_cost = cost;
        }
    }
    return front[best].node_id;
}

}  // namespace mopp
