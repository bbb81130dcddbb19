#include "diffuse/heat_kernel.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace diffuse {

int chooseTaylorDegree(double t, double eps) {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be positive");
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
    // term = t^{N+1}/(N+1)!, maintained multiplicatively.
    double term = t;  // N = 0 -> t^1/1!
    int n = 0;
    while (true) {
        ++n;
        term *= t / (n + 1);  // t^{n+1}/(n+1)!
        if (n + 2 > t && term * (n + 2) / (n + 2 - t) < eps / 2.0) return n;
        if (n > 1'000'000) throw std::invalid_argument("taylor degree did not converge");
    }
}

PsiTable::PsiTable(double t, int degree) : t_(t), psi_(degree + 1) {
    if (degree < 1) throw std::invalid_argument("psi table needs degree >= 1");
    if (!(t > 0.0)) throw std::invalid_argument("t must be positive");
    // Backward recurrence psi_N = 1, psi_k = 1 + t/(k+1) psi_{k+1};
    // all terms positive, no cancellation.
    psi_[degree] = 1.0;
    for (int k = degree - 1; k >= 0; --k) psi_[k] = 1.0 + t / (k + 1) * psi_[k + 1];
#ifndef NDEBUG
    if (t <= degree)
        for (int k = 1; k + 1 <= degree; ++k) assert(psi_[k] >= psi_[k + 1]);
#endif
}

namespace {

// Residual entries are keyed by (node, Taylor step).
constexpr int kStepBits = 20;

inline std::uint64_t packKey(NodeId v, int step) {
    return (static_cast<std::uint64_t>(v) << kStepBits) | static_cast<std::uint64_t>(step);
}
inline NodeId keyNode(std::uint64_t key) { return static_cast<NodeId>(key >> kStepBits); }
inline int keyStep(std::uint64_t key) {
    return static_cast<int>(key & ((1u << kStepBits) - 1));
}

}  // namespace

HkResult hkRelax(const CsrGraph& g, const std::vector<NodeId>& seeds,
                 const HkParams& params) {
    const double t = params.t;
    const double eps = params.eps;
    if (!(t > 0.0) || !std::isfinite(std::exp(t)))
        throw std::invalid_argument("t must be positive (and exp(t) representable)");
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must be in (0,1)");
    if (params.volume_cap && !(*params.volume_cap > 0.0))
        throw std::invalid_argument("volume_cap must be positive");
    if (seeds.empty()) throw std::invalid_argument("seed set is empty");
    for (NodeId s : seeds)
        if (s >= g.numNodes()) throw std::invalid_argument("invalid seed id");

    const int N = chooseTaylorDegree(t, eps);
    if (N >= (1 << kStepBits)) throw std::invalid_argument("taylor degree too large");
    const PsiTable psi(t, N);
    const double expt = std::exp(t);

    // Residual threshold for an entry in block j is thresh[j] * d_i.
    std::vector<double> thresh(N + 1);
    for (int j = 0; j <= N; ++j) thresh[j] = expt * eps / (2.0 * N * psi[j]);

    HkResult res;
    res.taylor_degree = N;
    res.work_bound = 2.0 * N * psi[1] / eps;

    std::unordered_map<std::uint64_t, double> residual;
    std::deque<std::uint64_t> queue;

    std::vector<NodeId> uniq(seeds);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const double seed_mass = 1.0 / static_cast<double>(uniq.size());
    for (NodeId s : uniq) {
        residual[packKey(s, 0)] = seed_mass;
        if (seed_mass >= thresh[0] * g.degree(s)) queue.push_back(packKey(s, 0));
    }

    while (!queue.empty()) {
        const std::uint64_t key = queue.front();
        queue.pop_front();
        const NodeId v = keyNode(key);
        const int j = keyStep(key);
        auto it = residual.find(key);
        assert(it != residual.end());
        const double rvj = it->second;  // mass merged since enqueue is relaxed too
        residual.erase(it);

        res.x.add(v, rvj);
        res.solution_mass += rvj;
        res.steps += 1;
        res.work += g.degree(v);

        const double mass = rvj * t / (j + 1) / g.degree(v);
        if (j + 1 == N) {
            // Last block: nothing flows onward, so its share of the
            // solution is added directly.
            for (NodeId u : g.neighbors(v)) {
                res.x.add(u, mass);
                res.solution_mass += mass;
            }
        } else {
            const double block_thresh = thresh[j + 1];
            for (NodeId u : g.neighbors(v)) {
                double& ru = residual[packKey(u, j + 1)];
                const double updated = ru + mass;
                const double cut = block_thresh * g.degree(u);
                if (ru < cut && updated >= cut) queue.push_back(packKey(u, j + 1));
                ru = updated;
            }
        }

        if (params.volume_cap && static_cast<double>(res.work) > *params.volume_cap) {
            res.terminated_early = true;
            break;
        }
    }

    for (const auto& [key, mass] : residual) {
        const double cut = thresh[keyStep(key)] * g.degree(keyNode(key));
        res.residual_slack = std::max(res.residual_slack, mass / cut);
    }

    res.x.scale(std::exp(-t));
    return res;
}

}  // namespace diffuse
