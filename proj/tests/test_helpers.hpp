#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "diffuse/eval.hpp"
#include "diffuse/graph.hpp"

namespace diffuse::testhelpers {

inline CsrGraph graphFromEdges(const std::vector<std::pair<OrigId, OrigId>>& edges) {
    return CsrGraph::fromEdges(edges);
}

inline std::vector<std::pair<OrigId, OrigId>> completeGraphEdges(OrigId k, OrigId base = 0) {
    std::vector<std::pair<OrigId, OrigId>> edges;
    for (OrigId i = 0; i < k; ++i)
        for (OrigId j = i + 1; j < k; ++j) edges.emplace_back(base + i, base + j);
    return edges;
}

inline CsrGraph k2() { return graphFromEdges({{0, 1}}); }
inline CsrGraph triangle() { return graphFromEdges(completeGraphEdges(3)); }

/// Two K5s joined by a single bridge edge 4-5.
inline std::vector<std::pair<OrigId, OrigId>> barbellEdges() {
    auto edges = completeGraphEdges(5);
    auto right = completeGraphEdges(5, 5);
    edges.insert(edges.end(), right.begin(), right.end());
    edges.emplace_back(4, 5);
    return edges;
}
inline CsrGraph barbell() { return graphFromEdges(barbellEdges()); }

/// Star with `leaves` leaves; node 0 is the hub.
inline CsrGraph star(OrigId leaves) {
    std::vector<std::pair<OrigId, OrigId>> edges;
    for (OrigId i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return graphFromEdges(edges);
}

/// Two cliques of size k joined by one edge; community fixtures for the
/// ground-truth tests.
inline CsrGraph twoCliques(OrigId k) {
    auto edges = completeGraphEdges(k);
    auto right = completeGraphEdges(k, k);
    edges.insert(edges.end(), right.begin(), right.end());
    edges.emplace_back(k - 1, k);
    return graphFromEdges(edges);
}

/// Largest connected component of an Erdos-Renyi draw, retried until it
/// has at least min_nodes nodes. Deterministic given the rng state.
inline CsrGraph randomConnectedGraph(std::mt19937_64& rng, OrigId n, double p,
                                     OrigId min_nodes = 5) {
    const std::uint64_t cut = static_cast<std::uint64_t>(p * 1e6);
    for (;;) {
        std::vector<std::pair<OrigId, OrigId>> edges;
        for (OrigId i = 0; i < n; ++i)
            for (OrigId j = i + 1; j < n; ++j)
                if (uniformIndex(rng, 1'000'000) < cut) edges.emplace_back(i, j);
        if (edges.empty()) continue;
        CsrGraph g = CsrGraph::fromEdges(edges);
        if (g.numNodes() >= min_nodes) return g;
    }
}

/// Conductance recomputed from scratch through std::set membership,
/// independent of NodeSet's cached counters.
inline double bruteForceConductance(const std::vector<NodeId>& members, const CsrGraph& g) {
    std::set<NodeId> in(members.begin(), members.end());
    std::uint64_t vol = 0, boundary = 0;
    for (NodeId v : in) {
        vol += g.degree(v);
        for (NodeId u : g.neighbors(v))
            if (!in.contains(u)) ++boundary;
    }
    const std::uint64_t other = g.totalVolume() - vol;
    return static_cast<double>(boundary) / static_cast<double>(std::min(vol, other));
}

inline std::string edgeListText(const std::vector<std::pair<OrigId, OrigId>>& edges) {
    std::ostringstream out;
    for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
    return out.str();
}

}  // namespace diffuse::testhelpers
