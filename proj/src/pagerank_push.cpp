#include "diffuse/pagerank_push.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>
#include <unordered_map>

namespace diffuse {

PprResult pprPush(const CsrGraph& g, const std::vector<NodeId>& seeds,
                  const PprParams& params) {
    const double alpha = params.alpha;
    const double eps = params.eps;
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("alpha must be in (0,1)");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (seeds.empty()) throw std::invalid_argument("seed set is empty");
    for (NodeId s : seeds)
        if (s >= g.numNodes()) throw std::invalid_argument("invalid seed id");

    std::unordered_map<NodeId, double> residual;
    std::deque<NodeId> queue;

    std::vector<NodeId> uniq(seeds);
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    const double seed_mass = 1.0 / static_cast<double>(uniq.size());
    for (NodeId s : uniq) {
        residual[s] = seed_mass;
        if (seed_mass >= eps * g.degree(s)) queue.push_back(s);
    }

    PprResult res;
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop_front();
        auto it = residual.find(u);
        assert(it != residual.end());
        const double ru = it->second;
        residual.erase(it);

        res.p.add(u, (1.0 - alpha) * ru);
        res.pushed_mass += ru;
        res.steps += 1;
        res.work += g.degree(u);

        const double mass = alpha * ru / g.degree(u);
        for (NodeId w : g.neighbors(u)) {
            double& rw = residual[w];
            const double updated = rw + mass;
            const double cut = eps * g.degree(w);
            if (rw < cut && updated >= cut) queue.push_back(w);
            rw = updated;
        }
    }
    return res;
}

}  // namespace diffuse
