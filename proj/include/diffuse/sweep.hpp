#pragma once

#include <cstdint>
#include <vector>

#include "diffuse/diffusion.hpp"
#include "diffuse/graph.hpp"

namespace diffuse {

struct SweepResult {
    NodeSet best_set;
    double best_conductance = 0.0;
    /// (prefix size, conductance) for every prefix of the sorted support.
    /// When the support covers the whole graph the final (degenerate)
    /// prefix is omitted.
    std::vector<std::pair<std::size_t, double>> curve;
    std::size_t support_size = 0;
};

/// Sort the support of f by f_i / d_i descending (ties: smaller id first)
/// and return the minimum-conductance prefix. Boundary and volume are
/// maintained incrementally, so the scan costs O(vol(support)) plus the
/// sort. Throws std::invalid_argument when f has no positive entries.
SweepResult sweepCut(const DiffusionVector& f, const CsrGraph& g);

}  // namespace diffuse
