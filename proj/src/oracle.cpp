#include "diffuse/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "diffuse/heat_kernel.hpp"

namespace diffuse {
namespace oracle {

namespace {

void checkCap(const CsrGraph& g, NodeId node_cap) {
    if (g.numNodes() > node_cap)
        throw std::invalid_argument(
            "graph exceeds the dense-oracle node cap; use sampled verification");
}

std::vector<double> seedVector(const CsrGraph& g, const std::vector<NodeId>& seeds) {
    if (seeds.empty()) throw std::invalid_argument("seed set is empty");
    std::vector<double> s(g.numNodes(), 0.0);
    std::size_t distinct = 0;
    for (NodeId v : seeds) {
        if (v >= g.numNodes()) throw std::invalid_argument("invalid seed id");
        if (s[v] == 0.0) ++distinct;
        s[v] = 1.0;
    }
    for (double& x : s) x /= static_cast<double>(distinct);
    return s;
}

// out = P v with P = A D^{-1}.
void multiplyWalkMatrix(const CsrGraph& g, const std::vector<double>& v,
                        std::vector<double>& out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (NodeId i = 0; i < g.numNodes(); ++i) {
        if (v[i] == 0.0) continue;
        const double share = v[i] / g.degree(i);
        for (NodeId u : g.neighbors(i)) out[u] += share;
    }
}

}  // namespace

std::vector<double> heatKernelApply(const CsrGraph& g, const std::vector<double>& v,
                                    double t, NodeId node_cap, double tail_tol) {
    checkCap(g, node_cap);
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    const NodeId n = g.numNodes();
    if (v.size() != n) throw std::invalid_argument("vector length mismatch");

    // term_k = e^-t t^k/k! P^k v, accumulated until the dropped scalar
    // tail e^-t sum_{k>M} t^k/k! falls below tail_tol.
    std::vector<double> term(v);
    const double w0 = std::exp(-t);
    for (double& x : term) x *= w0;
    std::vector<double> h(term);
    std::vector<double> scratch(n, 0.0);
    double weight = w0, covered = w0;
    const int max_terms = static_cast<int>(4.0 * t) + 200;
    for (int k = 1; 1.0 - covered >= tail_tol && k <= max_terms; ++k) {
        multiplyWalkMatrix(g, term, scratch);
        const double factor = t / k;
        for (NodeId i = 0; i < n; ++i) {
            term[i] = factor * scratch[i];
            h[i] += term[i];
        }
        weight *= factor;
        covered += weight;
    }
    return h;
}

std::vector<double> exactHeatKernel(const CsrGraph& g, const std::vector<NodeId>& seeds,
                                    double t, NodeId node_cap, double tail_tol) {
    return heatKernelApply(g, seedVector(g, seeds), t, node_cap, tail_tol);
}

std::vector<double> exactPageRank(const CsrGraph& g, const std::vector<NodeId>& seeds,
                                  double alpha, NodeId node_cap) {
    checkCap(g, node_cap);
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    const NodeId n = g.numNodes();
    std::vector<double> s = seedVector(g, seeds);
    std::vector<double> p(n, 0.0), pv(n, 0.0);

    // Richardson iteration p <- (1-alpha) s + alpha P p converges at rate
    // alpha; the max-norm residual of (I - alpha P) p = (1-alpha) s equals
    // the max-norm update.
    const double target = 1e-13;
    const long max_iters =
        static_cast<long>(std::log(target) / std::log(alpha)) + 64;
    for (long it = 0; it < max_iters; ++it) {
        multiplyWalkMatrix(g, p, pv);
        double delta = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            const double next = (1.0 - alpha) * s[i] + alpha * pv[i];
            delta = std::max(delta, std::abs(next - p[i]));
            p[i] = next;
        }
        if (delta < target) break;
    }
    return p;
}

BoundCheck checkErrorBound(const CsrGraph& g, NodeId seed, double t, double eps,
                           NodeId node_cap) {
    const std::vector<double> h = exactHeatKernel(g, {seed}, t, node_cap);
    const HkResult run = hkRelax(g, {seed}, HkParams{t, eps, std::nullopt});
    BoundCheck check;
    check.seed = seed;
    check.work = run.work;
    check.work_bound = run.workBound();
    for (NodeId i = 0; i < g.numNodes(); ++i) {
        const double err = std::abs(h[i] - run.x.value(i)) / g.degree(i);
        check.max_weighted_error = std::max(check.max_weighted_error, err);
    }
    check.error_ok = check.max_weighted_error < eps;
    check.work_ok = static_cast<double>(check.work) <= check.work_bound;
    return check;
}

}  // namespace oracle
}  // namespace diffuse
