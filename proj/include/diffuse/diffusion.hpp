#pragma once

#include <algorithm>
#include <unordered_map>
#include <utility>
#include <vector>

#include "diffuse/graph.hpp"

namespace diffuse {

/// Sparse node -> value accumulator for diffusion estimates.
class DiffusionVector {
public:
    void add(NodeId v, double mass) { values_[v] += mass; }
    double value(NodeId v) const {
        auto it = values_.find(v);
        return it == values_.end() ? 0.0 : it->second;
    }
    std::size_t size() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double l1Norm() const {
        double s = 0.0;
        for (const auto& [v, x] : values_) s += x;
        return s;
    }

    void scale(double factor) {
        for (auto& [v, x] : values_) x *= factor;
    }

    const std::unordered_map<NodeId, double>& items() const { return values_; }

    /// Entries sorted by node id, for deterministic output.
    std::vector<std::pair<NodeId, double>> sortedById() const {
        std::vector<std::pair<NodeId, double>> out(values_.begin(), values_.end());
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::unordered_map<NodeId, double> values_;
};

}  // namespace diffuse
