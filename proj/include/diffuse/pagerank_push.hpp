#pragma once

#include <cstdint>
#include <vector>

#include "diffuse/diffusion.hpp"
#include "diffuse/graph.hpp"

namespace diffuse {

struct PprParams {
    double alpha = 0.99;  ///< decay in (0,1)
    double eps = 1e-4;    ///< push tolerance, per-node error |p*_u - p_u| <= eps * d_u
};

struct PprResult {
    DiffusionVector p;           ///< estimate of (1-alpha) sum_k alpha^k P^k s
    std::uint64_t steps = 0;     ///< pushes performed
    std::uint64_t work = 0;      ///< sum of degrees of pushed nodes
    double pushed_mass = 0.0;    ///< total residual mass pushed; ||p||_1 == (1-alpha) * this
};

/// Personalized-PageRank push with a FIFO queue: repeatedly pick a node
/// with r_u >= eps * d_u, move (1-alpha) r_u into p_u and spread
/// alpha r_u / d_u to the neighbors' residuals. Deterministic.
PprResult pprPush(const CsrGraph& g, const std::vector<NodeId>& seeds,
                  const PprParams& params);

}  // namespace diffuse
