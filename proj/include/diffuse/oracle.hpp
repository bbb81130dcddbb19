#pragma once

#include <cstdint>
#include <vector>

#include "diffuse/graph.hpp"

namespace diffuse {
namespace oracle {

/// Node cap guarding the dense reference computations; they allocate
/// length-n vectors and iterate matrix-vector products to near machine
/// precision, deliberately trading speed for simplicity.
constexpr NodeId kDefaultNodeCap = 10'000;

/// Dense heat kernel h = exp(-t(I - P)) s by Taylor summation of sparse
/// matrix-vector products, truncated once the dropped Poisson tail is
/// below tail_tol. Throws when g has more than node_cap nodes.
std::vector<double> exactHeatKernel(const CsrGraph& g, const std::vector<NodeId>& seeds,
                                    double t, NodeId node_cap = kDefaultNodeCap,
                                    double tail_tol = 1e-14);

/// Same exponential action applied to an arbitrary dense start vector.
std::vector<double> heatKernelApply(const CsrGraph& g, const std::vector<double>& v,
                                    double t, NodeId node_cap = kDefaultNodeCap,
                                    double tail_tol = 1e-14);

/// Dense personalized PageRank: solves (I - alpha P) p = (1 - alpha) s by
/// Richardson iteration to max-norm residual below 1e-12.
std::vector<double> exactPageRank(const CsrGraph& g, const std::vector<NodeId>& seeds,
                                  double alpha, NodeId node_cap = kDefaultNodeCap);

/// One row of the error/work certificate produced by checkErrorBound.
struct BoundCheck {
    NodeId seed = 0;
    double max_weighted_error = 0.0;  ///< max_i |h_i - x_i| / d_i
    std::uint64_t work = 0;
    double work_bound = 0.0;
    bool error_ok = false;  ///< max_weighted_error < eps
    bool work_ok = false;   ///< work <= work_bound
};

/// Run hkRelax from each seed and compare against the dense heat kernel.
BoundCheck checkErrorBound(const CsrGraph& g, NodeId seed, double t, double eps,
                           NodeId node_cap = kDefaultNodeCap);

}  // namespace oracle
}  // namespace diffuse
