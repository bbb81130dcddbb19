#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace diffuse {

using NodeId = std::uint32_t;
using OrigId = std::uint64_t;

/**
 * Immutable compressed-sparse-row adjacency of a simple undirected graph.
 *
 * Construction symmetrizes the input, strips self-loops and duplicate
 * edges, and keeps only the largest connected component, so every node
 * has degree >= 1. Internal node ids are dense (0..n-1) in order of first
 * appearance in the input; originalId()/internalId() translate between
 * internal ids and the labels used in the input file.
 *
 * Immutable after construction and safe to share across threads.
 */
class CsrGraph {
public:
    /// Parse a whitespace-separated edge list ("u v" per line, '#'/'%'
    /// comments). Throws std::runtime_error on malformed input (with the
    /// line number) and on inputs with no usable edges.
    static CsrGraph loadEdgeList(std::istream& in);

    /// Build from explicit pairs of original ids. Same cleaning rules as
    /// loadEdgeList.
    static CsrGraph fromEdges(const std::vector<std::pair<OrigId, OrigId>>& edges);

    NodeId numNodes() const { return static_cast<NodeId>(degrees_.size()); }
    std::uint64_t numEdges() const { return neighbors_.size() / 2; }
    /// Sum of all degrees, i.e. 2|E|.
    std::uint64_t totalVolume() const { return neighbors_.size(); }

    NodeId degree(NodeId v) const { return degrees_[v]; }

    /// Sorted, duplicate-free neighbor list.
    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + row_offsets_[v],
                neighbors_.data() + row_offsets_[v + 1]};
    }

    OrigId originalId(NodeId v) const { return original_ids_[v]; }
    std::optional<NodeId> internalId(OrigId original) const;

    /// Emit each edge once ("u v" with original ids) in internal-id order.
    /// Reloading the output reproduces this graph exactly.
    void writeEdgeList(std::ostream& out) const;

    /// Binary CSR cache. The checksum of the source edge-list file is
    /// stored in the header; readCache() returns nullopt when the magic,
    /// version, or checksum does not match, or the payload is inconsistent.
    void writeCache(std::ostream& out, std::uint64_t source_checksum) const;
    static std::optional<CsrGraph> readCache(std::istream& in,
                                             std::uint64_t source_checksum);

private:
    CsrGraph() = default;
    void buildIdIndex();

    std::vector<std::uint64_t> row_offsets_;  // length numNodes()+1
    std::vector<NodeId> neighbors_;           // flat adjacency
    std::vector<NodeId> degrees_;
    std::vector<OrigId> original_ids_;
    std::unordered_map<OrigId, NodeId> internal_ids_;
};

/// A subset of nodes with cached volume (sum of member degrees) and
/// boundary (edges with exactly one endpoint inside).
class NodeSet {
public:
    NodeSet(std::vector<NodeId> members, const CsrGraph& g);

    const std::vector<NodeId>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::uint64_t volume() const { return volume_; }
    std::uint64_t boundary() const { return boundary_; }
    bool contains(NodeId v) const;

private:
    std::vector<NodeId> members_;  // sorted ascending
    std::uint64_t volume_ = 0;
    std::uint64_t boundary_ = 0;
};

/// phi(S) = boundary(S) / min(vol(S), vol(V-S)). Throws
/// std::invalid_argument for S empty or S = V.
double conductance(const NodeSet& set, const CsrGraph& g);

/// FNV-1a checksum used to tie a binary cache to its source file.
std::uint64_t fnv1a64(std::istream& in);

}  // namespace diffuse
