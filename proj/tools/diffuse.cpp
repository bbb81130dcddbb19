#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diffuse/eval.hpp"
#include "diffuse/graph.hpp"
#include "diffuse/heat_kernel.hpp"
#include "diffuse/oracle.hpp"
#include "diffuse/pagerank_push.hpp"
#include "diffuse/sweep.hpp"

namespace {

using namespace diffuse;

constexpr std::uint64_t kDefaultRngSeed = 42;

std::string g9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

CsrGraph loadGraph(const std::string& path, const std::string& cache_path) {
    std::ifstream src(path, std::ios::binary);
    if (!src) throw std::runtime_error("cannot open graph file: " + path);
    if (cache_path.empty()) return CsrGraph::loadEdgeList(src);

    const std::uint64_t checksum = fnv1a64(src);
    if (std::ifstream cache{cache_path, std::ios::binary}) {
        if (auto g = CsrGraph::readCache(cache, checksum)) return std::move(*g);
    }
    src.clear();
    src.seekg(0);
    CsrGraph g = CsrGraph::loadEdgeList(src);
    if (std::ofstream out{cache_path, std::ios::binary}) g.writeCache(out, checksum);
    return g;
}

std::vector<NodeId> resolveSeeds(const CsrGraph& g, const std::vector<OrigId>& originals) {
    std::vector<NodeId> seeds;
    seeds.reserve(originals.size());
    for (OrigId o : originals) {
        auto id = g.internalId(o);
        if (!id) throw std::runtime_error("seed id " + std::to_string(o) + " not in graph");
        seeds.push_back(*id);
    }
    return seeds;
}

void printCommunity(const CsrGraph& g, const NodeSet& set, double phi,
                    std::size_t support, std::uint64_t work, std::uint64_t steps) {
    std::vector<OrigId> ids;
    ids.reserve(set.size());
    for (NodeId v : set.members()) ids.push_back(g.originalId(v));
    std::sort(ids.begin(), ids.end());
    std::cout << "community:";
    for (OrigId o : ids) std::cout << ' ' << o;
    std::cout << '\n';
    std::cout << "size: " << set.size() << '\n';
    std::cout << "conductance: " << g9(phi) << '\n';
    std::cout << "support: " << support << '\n';
    std::cout << "work: " << work << '\n';
    std::cout << "steps: " << steps << '\n';
}

void dumpVector(const CsrGraph& g, const DiffusionVector& f) {
    std::vector<std::pair<double, OrigId>> entries;
    entries.reserve(f.size());
    for (const auto& [v, val] : f.items())
        if (val > 0.0) entries.emplace_back(val, g.originalId(v));
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (const auto& [val, id] : entries) std::cout << id << ' ' << g9(val) << '\n';
}

int runCluster(const std::string& graph_path, const std::string& cache,
               const std::vector<OrigId>& seed_ids, const std::string& method,
               double t, double eps, double alpha, bool dump) {
    const CsrGraph g = loadGraph(graph_path, cache);
    const std::vector<NodeId> seeds = resolveSeeds(g, seed_ids);

    DiffusionVector f;
    std::uint64_t work = 0, steps = 0;
    if (method == "hk") {
        HkResult res = hkRelax(g, seeds, HkParams{t, eps, std::nullopt});
        f = std::move(res.x);
        work = res.work;
        steps = res.steps;
    } else {
        PprResult res = pprPush(g, seeds, PprParams{alpha, eps});
        f = std::move(res.p);
        work = res.work;
        steps = res.steps;
    }
    if (dump) {
        dumpVector(g, f);
        return 0;
    }
    if (f.empty())
        throw std::runtime_error(
            "diffusion is empty: eps is too coarse for this seed's degree");
    SweepResult sweep = sweepCut(f, g);
    std::cout << "graph: n=" << g.numNodes() << " volume=" << g.totalVolume() << '\n';
    std::cout << "method: " << method;
    if (method == "hk") std::cout << " t=" << g9(t) << " eps=" << g9(eps);
    else std::cout << " alpha=" << g9(alpha) << " eps=" << g9(eps);
    std::cout << '\n';
    printCommunity(g, sweep.best_set, sweep.best_conductance, sweep.support_size, work,
                   steps);
    return 0;
}

int runCompare(const std::string& graph_path, const std::string& cache,
               std::uint32_t trials, std::uint64_t rng_seed, const std::string& out_path) {
    const CsrGraph g = loadGraph(graph_path, cache);
    const std::vector<TrialRecord> records = randomSeedTrials(g, trials, rng_seed);
    const double volume_cap = std::pow(static_cast<double>(g.numNodes()), 1.5);
    const std::string summary =
        trialSummaryJson(g, records, rng_seed, trials, volume_cap);

    if (out_path.empty()) {
        writeTrialsCsv(std::cout, g, records);
        std::cerr << summary << '\n';
        return 0;
    }
    std::ofstream csv(out_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + out_path);
    writeTrialsCsv(csv, g, records);

    std::string json_path = out_path;
    if (json_path.size() > 4 && json_path.ends_with(".csv"))
        json_path.resize(json_path.size() - 4);
    json_path += ".json";
    std::ofstream json(json_path, std::ios::binary);
    if (!json) throw std::runtime_error("cannot write " + json_path);
    json << summary << '\n';
    std::cerr << "wrote " << out_path << " and " << json_path << '\n';
    return 0;
}

int runVerify(const std::string& graph_path, const std::string& cache, double t,
              double eps, std::uint32_t samples, std::uint64_t rng_seed,
              NodeId oracle_cap) {
    const CsrGraph g = loadGraph(graph_path, cache);
    std::mt19937_64 rng(rng_seed);
    std::cout << "seed,max_weighted_error,eps,work,bound,status\n";
    bool all_ok = true;
    for (std::uint32_t i = 0; i < samples; ++i) {
        const NodeId seed = static_cast<NodeId>(uniformIndex(rng, g.numNodes()));
        const oracle::BoundCheck check = oracle::checkErrorBound(g, seed, t, eps, oracle_cap);
        const bool ok = check.error_ok && check.work_ok;
        all_ok = all_ok && ok;
        std::cout << g.originalId(seed) << ',' << g9(check.max_weighted_error) << ','
                  << g9(eps) << ',' << check.work << ',' << g9(check.work_bound) << ','
                  << (ok ? "PASS" : "FAIL") << '\n';
    }
    return all_ok ? 0 : 2;
}

int runEvalTruth(const std::string& graph_path, const std::string& cache,
                 const std::string& truth_path, const std::string& method, double t,
                 double eps, double alpha) {
    const CsrGraph g = loadGraph(graph_path, cache);
    std::ifstream truth_in(truth_path);
    if (!truth_in) throw std::runtime_error("cannot open truth file: " + truth_path);
    const GroundTruth truth = loadGroundTruth(g, truth_in);
    if (truth.dropped_nodes > 0)
        std::cerr << "note: dropped " << truth.dropped_nodes
                  << " ground-truth node ids absent from the graph\n";

    std::vector<TruthSummary> rows;
    for (Method m : {Method::kHeatKernel, Method::kPageRank}) {
        if (method != "both" && method != methodName(m)) continue;
        TruthEvalOptions opts;
        opts.method = m;
        opts.hk_t = t;
        opts.hk_eps = eps;
        opts.alpha = alpha;
        rows.push_back(groundTruthEval(g, truth, opts));
    }
    std::cout << "method,f1,conductance,setsize\n";
    for (const TruthSummary& row : rows)
        std::cout << methodName(row.method) << ',' << g9(row.mean_f1) << ','
                  << g9(row.mean_conductance) << ',' << g9(row.mean_set_size) << '\n';
    if (rows.size() == 2) {
        std::cout << "# directional (reported, not asserted): hk f1 > ppr f1: "
                  << (rows[0].mean_f1 > rows[1].mean_f1 ? "yes" : "no")
                  << "; hk set size < ppr set size: "
                  << (rows[0].mean_set_size < rows[1].mean_set_size ? "yes" : "no") << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local community detection on undirected graphs via seeded diffusions"};
    app.require_subcommand(1);

    std::string graph_path, cache, truth_path, out_path;
    std::string method = "hk";
    std::vector<OrigId> seed_ids;
    double t = 5.0, eps = 1e-4, alpha = 0.99;
    std::uint32_t trials = 200, samples = 10;
    std::uint64_t rng_seed = kDefaultRngSeed;
    NodeId oracle_cap = oracle::kDefaultNodeCap;
    bool dump_vector = false;

    auto* cluster = app.add_subcommand("cluster", "community around one or more seeds");
    cluster->add_option("graph", graph_path, "edge-list file")->required();
    cluster->add_option("--seed", seed_ids, "seed node id (repeatable)")->required();
    cluster->add_option("--method", method, "hk or ppr")
        ->check(CLI::IsMember({"hk", "ppr"}))
        ->capture_default_str();
    cluster->add_option("--t", t, "heat kernel diffusion time")->capture_default_str();
    cluster->add_option("--eps", eps, "accuracy")->capture_default_str();
    cluster->add_option("--alpha", alpha, "pagerank decay")->capture_default_str();
    cluster->add_flag("--dump-vector", dump_vector,
                      "print the diffusion vector instead of sweeping");
    cluster->add_option("--cache", cache, "binary CSR cache path");

    auto* compare = app.add_subcommand("compare", "random-seed hk vs ppr trials");
    compare->add_option("graph", graph_path, "edge-list file")->required();
    compare->add_option("--trials", trials, "number of random seeds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare->add_option("--rng-seed", rng_seed, "seed for the trial prng")
        ->capture_default_str();
    compare->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    compare->add_option("--cache", cache, "binary CSR cache path");

    auto* verify = app.add_subcommand("verify", "certify error and work bounds");
    verify->add_option("graph", graph_path, "edge-list file")->required();
    verify->add_option("--t", t, "heat kernel diffusion time")->capture_default_str();
    verify->add_option("--eps", eps, "accuracy")->capture_default_str();
    verify->add_option("--samples", samples, "random seeds to check")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--rng-seed", rng_seed, "seed for sampling")->capture_default_str();
    verify->add_option("--oracle-cap", oracle_cap, "dense-oracle node cap")
        ->capture_default_str();
    verify->add_option("--cache", cache, "binary CSR cache path");

    auto* eval_truth =
        app.add_subcommand("eval-truth", "F1 against ground-truth communities");
    eval_truth->add_option("graph", graph_path, "edge-list file")->required();
    eval_truth->add_option("truth", truth_path, "one community per line, original ids")
        ->required();
    eval_truth->add_option("--method", method, "hk, ppr, or both")
        ->check(CLI::IsMember({"hk", "ppr", "both"}))
        ->default_val("both");
    eval_truth->add_option("--t", t, "hk diffusion time")->capture_default_str();
    eval_truth->add_option("--eps", eps, "hk accuracy")->capture_default_str();
    eval_truth->add_option("--alpha", alpha, "ppr decay")->capture_default_str();
    eval_truth->add_option("--cache", cache, "binary CSR cache path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cluster->parsed()) {
            if (method == "hk" && !(eps > 0.0 && eps < 1.0))
                throw std::runtime_error("eps must be in (0,1) for hk");
            return runCluster(graph_path, cache, seed_ids, method, t, eps, alpha,
                              dump_vector);
        }
        if (compare->parsed())
            return runCompare(graph_path, cache, trials, rng_seed, out_path);
        if (verify->parsed()) {
            if (!(eps > 0.0 && eps < 1.0))
                throw std::runtime_error("eps must be in (0,1) for hk");
            return runVerify(graph_path, cache, t, eps, samples, rng_seed, oracle_cap);
        }
        if (eval_truth->parsed())
            return runEvalTruth(graph_path, cache, truth_path, method, t, eps, alpha);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
