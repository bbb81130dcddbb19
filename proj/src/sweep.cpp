#include "diffuse/sweep.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_set>

namespace diffuse {

SweepResult sweepCut(const DiffusionVector& f, const CsrGraph& g) {
    std::vector<std::pair<double, NodeId>> order;  // (f_i / d_i, i)
    order.reserve(f.size());
    for (const auto& [v, val] : f.items())
        if (val > 0.0) order.emplace_back(val / g.degree(v), v);
    if (order.empty()) throw std::invalid_argument("empty diffusion vector");
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    const std::uint64_t total = g.totalVolume();
    const std::size_t prefixes =
        order.size() == g.numNodes() ? order.size() - 1 : order.size();

    std::unordered_set<NodeId> in_prefix;
    in_prefix.reserve(order.size());
    std::uint64_t vol = 0, boundary = 0;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_prefix = 0;

    SweepResult res{NodeSet({}, g)};
    res.support_size = order.size();
    res.curve.reserve(prefixes);
    for (std::size_t k = 0; k < prefixes; ++k) {
        const NodeId v = order[k].second;
        std::uint64_t internal = 0;
        for (NodeId u : g.neighbors(v))
            if (in_prefix.contains(u)) ++internal;
        vol += g.degree(v);
        boundary += g.degree(v) - 2 * internal;
        in_prefix.insert(v);
        const double phi = static_cast<double>(boundary) /
                           static_cast<double>(std::min(vol, total - vol));
        res.curve.emplace_back(k + 1, phi);
        if (phi < best) {
            best = phi;
            best_prefix = k + 1;
        }
    }

    std::vector<NodeId> members(best_prefix);
    for (std::size_t k = 0; k < best_prefix; ++k) members[k] = order[k].second;
    res.best_set = NodeSet(std::move(members), g);
    res.best_conductance = best;
    return res;
}

}  // namespace diffuse
