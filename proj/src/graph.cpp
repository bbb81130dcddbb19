#include "diffuse/graph.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace diffuse {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

// Parses one unsigned integer token, advancing past it.
bool parseId(std::string_view& s, OrigId& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || ptr == s.data()) return false;
    if (ptr != s.data() + s.size() && *ptr != ' ' && *ptr != '\t') return false;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return true;
}

}  // namespace

CsrGraph CsrGraph::loadEdgeList(std::istream& in) {
    std::vector<std::pair<OrigId, OrigId>> edges;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#' || s.front() == '%') continue;
        OrigId u, v;
        if (!parseId(s, u) || !parseId(s, v))
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": expected two non-negative integers");
        if (!trim(s).empty())
            throw std::runtime_error("parse error at line " + std::to_string(line_no) +
                                     ": trailing data (weighted edges are not supported)");
        edges.emplace_back(u, v);
    }
    return fromEdges(edges);
}

CsrGraph CsrGraph::fromEdges(const std::vector<std::pair<OrigId, OrigId>>& edges) {
    // Dense provisional ids in order of first appearance.
    std::unordered_map<OrigId, NodeId> provisional;
    std::vector<OrigId> originals;
    auto intern = [&](OrigId o) {
        auto [it, inserted] = provisional.try_emplace(o, static_cast<NodeId>(originals.size()));
        if (inserted) {
            if (originals.size() > std::numeric_limits<NodeId>::max())
                throw std::runtime_error("too many nodes");
            originals.push_back(o);
        }
        return it->second;
    };

    std::vector<std::pair<NodeId, NodeId>> dirs;
    dirs.reserve(edges.size() * 2);
    for (const auto& [a, b] : edges) {
        if (a == b) continue;  // self-loop
        NodeId u = intern(a), v = intern(b);
        dirs.emplace_back(u, v);
        dirs.emplace_back(v, u);
    }
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    if (dirs.empty()) throw std::runtime_error("empty graph: no edges after cleaning");

    const NodeId pn = static_cast<NodeId>(originals.size());
    std::vector<std::uint64_t> poff(pn + 1, 0);
    for (const auto& [u, v] : dirs) poff[u + 1]++;
    for (NodeId i = 0; i < pn; ++i) poff[i + 1] += poff[i];

    // Connected components over the provisional adjacency.
    constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> comp(pn, kNone);
    std::vector<NodeId> stack;
    NodeId num_comps = 0;
    std::vector<std::uint64_t> comp_size;
    std::vector<OrigId> comp_min_orig;
    for (NodeId start = 0; start < pn; ++start) {
        if (comp[start] != kNone) continue;
        NodeId c = num_comps++;
        comp_size.push_back(0);
        comp_min_orig.push_back(originals[start]);
        stack.push_back(start);
        comp[start] = c;
        while (!stack.empty()) {
            NodeId v = stack.back();
            stack.pop_back();
            comp_size[c]++;
            comp_min_orig[c] = std::min(comp_min_orig[c], originals[v]);
            for (std::uint64_t e = poff[v]; e < poff[v + 1]; ++e) {
                NodeId u = dirs[e].second;
                if (comp[u] == kNone) {
                    comp[u] = c;
                    stack.push_back(u);
                }
            }
        }
    }

    // Largest component; ties go to the one containing the smallest
    // original id.
    NodeId best = 0;
    for (NodeId c = 1; c < num_comps; ++c) {
        if (comp_size[c] > comp_size[best] ||
            (comp_size[c] == comp_size[best] && comp_min_orig[c] < comp_min_orig[best]))
            best = c;
    }

    // Compact the winning component; provisional order is first-appearance
    // order, so ascending provisional ids preserve it.
    std::vector<NodeId> remap(pn, kNone);
    CsrGraph g;
    for (NodeId p = 0; p < pn; ++p) {
        if (comp[p] != best) continue;
        remap[p] = static_cast<NodeId>(g.original_ids_.size());
        g.original_ids_.push_back(originals[p]);
    }
    const NodeId n = static_cast<NodeId>(g.original_ids_.size());
    g.row_offsets_.assign(n + 1, 0);
    g.degrees_.assign(n, 0);
    for (NodeId p = 0; p < pn; ++p) {
        if (remap[p] == kNone) continue;
        g.degrees_[remap[p]] = static_cast<NodeId>(poff[p + 1] - poff[p]);
    }
    for (NodeId i = 0; i < n; ++i) g.row_offsets_[i + 1] = g.row_offsets_[i] + g.degrees_[i];
    g.neighbors_.resize(g.row_offsets_[n]);
    for (NodeId p = 0; p < pn; ++p) {
        NodeId i = remap[p];
        if (i == kNone) continue;
        std::uint64_t at = g.row_offsets_[i];
        for (std::uint64_t e = poff[p]; e < poff[p + 1]; ++e)
            g.neighbors_[at++] = remap[dirs[e].second];  // stays sorted: remap is monotone
    }
    g.buildIdIndex();
    assert(!g.degrees_.empty());
    return g;
}

void CsrGraph::buildIdIndex() {
    internal_ids_.clear();
    internal_ids_.reserve(original_ids_.size());
    for (NodeId i = 0; i < original_ids_.size(); ++i)
        internal_ids_.emplace(original_ids_[i], i);
}

std::optional<NodeId> CsrGraph::internalId(OrigId original) const {
    auto it = internal_ids_.find(original);
    if (it == internal_ids_.end()) return std::nullopt;
    return it->second;
}

void CsrGraph::writeEdgeList(std::ostream& out) const {
    for (NodeId i = 0; i < numNodes(); ++i)
        for (NodeId u : neighbors(i))
            if (i < u) out << original_ids_[i] << ' ' << original_ids_[u] << '\n';
}

namespace {

constexpr char kCacheMagic[8] = {'D', 'I', 'F', 'C', 'S', 'R', '0', '1'};

void putU64(std::ostream& out, std::uint64_t x) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    out.write(b, 8);
}

void putU32(std::ostream& out, std::uint32_t x) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    out.write(b, 4);
}

bool getU64(std::istream& in, std::uint64_t& x) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) return false;
    x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return true;
}

bool getU32(std::istream& in, std::uint32_t& x) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
    x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return true;
}

}  // namespace

void CsrGraph::writeCache(std::ostream& out, std::uint64_t source_checksum) const {
    out.write(kCacheMagic, sizeof(kCacheMagic));
    putU64(out, source_checksum);
    putU64(out, numNodes());
    putU64(out, neighbors_.size());
    for (std::uint64_t o : row_offsets_) putU64(out, o);
    for (NodeId v : neighbors_) putU32(out, v);
    for (OrigId o : original_ids_) putU64(out, o);
}

std::optional<CsrGraph> CsrGraph::readCache(std::istream& in,
                                            std::uint64_t source_checksum) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kCacheMagic, 8) != 0) return std::nullopt;
    std::uint64_t checksum, n64, m64;
    if (!getU64(in, checksum) || !getU64(in, n64) || !getU64(in, m64)) return std::nullopt;
    if (checksum != source_checksum) return std::nullopt;
    if (n64 == 0 || n64 > std::numeric_limits<NodeId>::max()) return std::nullopt;

    CsrGraph g;
    g.row_offsets_.resize(n64 + 1);
    for (auto& o : g.row_offsets_)
        if (!getU64(in, o)) return std::nullopt;
    g.neighbors_.resize(m64);
    for (auto& v : g.neighbors_)
        if (!getU32(in, v)) return std::nullopt;
    g.original_ids_.resize(n64);
    for (auto& o : g.original_ids_)
        if (!getU64(in, o)) return std::nullopt;

    // Structural validation; any inconsistency invalidates the cache.
    if (g.row_offsets_.front() != 0 || g.row_offsets_.back() != m64) return std::nullopt;
    const NodeId n = static_cast<NodeId>(n64);
    g.degrees_.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        if (g.row_offsets_[i + 1] <= g.row_offsets_[i]) return std::nullopt;  // degree >= 1
        g.degrees_[i] = static_cast<NodeId>(g.row_offsets_[i + 1] - g.row_offsets_[i]);
        for (std::uint64_t e = g.row_offsets_[i]; e < g.row_offsets_[i + 1]; ++e) {
            NodeId u = g.neighbors_[e];
            if (u >= n || u == i) return std::nullopt;
            if (e > g.row_offsets_[i] && g.neighbors_[e - 1] >= u) return std::nullopt;
        }
    }
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId u : g.neighbors(i)) {
            auto nb = g.neighbors(u);
            if (!std::binary_search(nb.begin(), nb.end(), i)) return std::nullopt;
        }
    }
    g.buildIdIndex();
    if (g.internal_ids_.size() != n) return std::nullopt;  // duplicate original ids
    return g;
}

NodeSet::NodeSet(std::vector<NodeId> members, const CsrGraph& g)
    : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (NodeId v : members_) {
        if (v >= g.numNodes()) throw std::invalid_argument("node id out of range");
        volume_ += g.degree(v);
        for (NodeId u : g.neighbors(v))
            if (!std::binary_search(members_.begin(), members_.end(), u)) ++boundary_;
    }
    assert(boundary_ <= volume_);
}

bool NodeSet::contains(NodeId v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

double conductance(const NodeSet& set, const CsrGraph& g) {
    if (set.size() == 0 || set.volume() == g.totalVolume())
        throw std::invalid_argument("degenerate set: conductance undefined");
    const std::uint64_t other = g.totalVolume() - set.volume();
    return static_cast<double>(set.boundary()) /
           static_cast<double>(std::min(set.volume(), other));
}

std::uint64_t fnv1a64(std::istream& in) {
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

}  // namespace diffuse
