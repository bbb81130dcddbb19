#include "diffuse/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>

namespace diffuse {

const char* methodName(Method m) {
    return m == Method::kHeatKernel ? "hk" : "ppr";
}

std::vector<HkParams> defaultHkGrid() {
    return {{10.0, 1e-4, std::nullopt},
            {20.0, 1e-3, std::nullopt},
            {40.0, 5e-3, std::nullopt},
            {80.0, 1e-2, std::nullopt}};
}

std::vector<PprParams> defaultPprGrid(double alpha) {
    return {{alpha, 1e-5}, {alpha, 1e-4}, {alpha, 1e-3}, {alpha, 1e-2}};
}

std::uint64_t uniformIndex(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("empty range");
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t reject = (max % n + 1) % n;  // top `reject` values are biased
    std::uint64_t x = rng();
    while (reject != 0 && x > max - reject) x = rng();
    return x % n;
}

unsigned trialThreads() {
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DIFFUSE_THREADS")) {
        unsigned cap = 0;
        auto [ptr, ec] = std::from_chars(env, env + std::string_view(env).size(), cap);
        if (ec == std::errc{} && cap >= 1) threads = std::min(threads, cap);
    }
    return threads;
}

namespace {

// Runs fn(0..count) across up to `threads` workers; each index writes its
// own output slot, so results do not depend on scheduling.
template <typename Fn>
void parallelFor(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::min<std::size_t>(std::max(1u, threads), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

MethodRun singletonFallback(const CsrGraph& g, NodeId seed, Method method) {
    MethodRun run{method, 0.0, 0.0, 0.0, NodeSet({seed}, g)};
    run.conductance = conductance(run.set, g);
    run.support_size = 0;
    return run;
}

}  // namespace

MethodRun bestHkOverGrid(const CsrGraph& g, const std::vector<NodeId>& seeds,
                         const std::vector<HkParams>& grid,
                         std::optional<double> volume_cap) {
    std::optional<MethodRun> best;
    for (const HkParams& point : grid) {
        HkParams params = point;
        params.volume_cap = volume_cap;
        HkResult result = hkRelax(g, seeds, params);
        if (result.x.empty()) continue;
        SweepResult sweep = sweepCut(result.x, g);
        if (!best || sweep.best_conductance < best->conductance) {
            best = MethodRun{Method::kHeatKernel, params.t,    0.0,
                             params.eps,          sweep.best_set};
            best->conductance = sweep.best_conductance;
            best->support_size = sweep.support_size;
            best->work = result.work;
            best->steps = result.steps;
        }
    }
    if (!best) return singletonFallback(g, seeds.front(), Method::kHeatKernel);
    return *best;
}

MethodRun bestPprOverGrid(const CsrGraph& g, const std::vector<NodeId>& seeds,
                          const std::vector<PprParams>& grid) {
    std::optional<MethodRun> best;
    for (const PprParams& params : grid) {
        PprResult result = pprPush(g, seeds, params);
        if (result.p.empty()) continue;
        SweepResult sweep = sweepCut(result.p, g);
        if (!best || sweep.best_conductance < best->conductance) {
            best = MethodRun{Method::kPageRank, 0.0,        params.alpha,
                             params.eps,        sweep.best_set};
            best->conductance = sweep.best_conductance;
            best->support_size = sweep.support_size;
            best->work = result.work;
            best->steps = result.steps;
        }
    }
    if (!best) return singletonFallback(g, seeds.front(), Method::kPageRank);
    return *best;
}

namespace {

TrialRecord toRecord(std::uint32_t trial, NodeId seed, const MethodRun& run,
                     double elapsed_ms) {
    TrialRecord rec;
    rec.trial = trial;
    rec.method = run.method;
    rec.seed = seed;
    rec.t = run.t;
    rec.eps = run.eps;
    rec.alpha = run.alpha;
    rec.conductance = run.conductance;
    rec.set_size = run.set.size();
    rec.support_size = run.support_size;
    rec.work = run.work;
    rec.steps = run.steps;
    rec.elapsed_ms = elapsed_ms;
    return rec;
}

}  // namespace

std::vector<TrialRecord> randomSeedTrials(const CsrGraph& g, std::uint32_t n_trials,
                                          std::uint64_t rng_seed, unsigned threads) {
    if (n_trials == 0) throw std::invalid_argument("n_trials must be >= 1");

    std::mt19937_64 rng(rng_seed);
    std::vector<NodeId> seed_nodes(n_trials);
    for (auto& s : seed_nodes) s = static_cast<NodeId>(uniformIndex(rng, g.numNodes()));

    const double volume_cap = std::pow(static_cast<double>(g.numNodes()), 1.5);
    const std::vector<HkParams> hk_grid = defaultHkGrid();
    const std::vector<PprParams> ppr_grid = defaultPprGrid();

    std::vector<TrialRecord> records(2 * static_cast<std::size_t>(n_trials));
    parallelFor(n_trials, threads, [&](std::size_t i) {
        const NodeId seed = seed_nodes[i];
        using clock = std::chrono::steady_clock;

        auto t0 = clock::now();
        MethodRun hk = bestHkOverGrid(g, {seed}, hk_grid, volume_cap);
        auto t1 = clock::now();
        MethodRun ppr = bestPprOverGrid(g, {seed}, ppr_grid);
        auto t2 = clock::now();

        const double ms_hk = std::chrono::duration<double, std::milli>(t1 - t0).count();
        const double ms_ppr = std::chrono::duration<double, std::milli>(t2 - t1).count();
        records[2 * i] = toRecord(static_cast<std::uint32_t>(i), seed, hk, ms_hk);
        records[2 * i + 1] = toRecord(static_cast<std::uint32_t>(i), seed, ppr, ms_ppr);
    });
    return records;
}

namespace {

// Fixed 9-significant-digit float formatting shared by the CSV and CLI.
std::string formatG9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

}  // namespace

void writeTrialsCsv(std::ostream& out, const CsrGraph& g,
                    const std::vector<TrialRecord>& records) {
    out << "trial,method,seed,t,eps,alpha,conductance,set_size,support_size,work,steps\n";
    for (const TrialRecord& r : records) {
        out << r.trial << ',' << methodName(r.method) << ',' << g.originalId(r.seed) << ',';
        if (r.method == Method::kHeatKernel) out << formatG9(r.t);
        out << ',' << formatG9(r.eps) << ',';
        if (r.method == Method::kPageRank) out << formatG9(r.alpha);
        out << ',' << formatG9(r.conductance) << ',' << r.set_size << ','
            << r.support_size << ',' << r.work << ',' << r.steps << '\n';
    }
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::string trialSummaryJson(const CsrGraph& g, const std::vector<TrialRecord>& records,
                             std::uint64_t rng_seed, std::uint32_t n_trials,
                             std::optional<double> volume_cap) {
    nlohmann::json doc;
    doc["rng_algorithm"] = kRngAlgorithm;
    doc["rng_seed"] = rng_seed;
    doc["trials"] = n_trials;
    doc["graph"] = {{"nodes", g.numNodes()}, {"volume", g.totalVolume()}};
    if (volume_cap) doc["volume_cap"] = *volume_cap;

    for (Method m : {Method::kHeatKernel, Method::kPageRank}) {
        std::vector<double> cond, size, work, elapsed;
        for (const TrialRecord& r : records) {
            if (r.method != m) continue;
            cond.push_back(r.conductance);
            size.push_back(static_cast<double>(r.set_size));
            work.push_back(static_cast<double>(r.work));
            elapsed.push_back(r.elapsed_ms);
        }
        auto quartiles = [](const std::vector<double>& v) {
            return nlohmann::json{{"25", percentile(v, 25)},
                                  {"50", percentile(v, 50)},
                                  {"75", percentile(v, 75)}};
        };
        doc["methods"][methodName(m)] = {{"conductance", quartiles(cond)},
                                         {"set_size", quartiles(size)},
                                         {"work", quartiles(work)},
                                         {"elapsed_ms", quartiles(elapsed)}};
    }
    return doc.dump(2);
}

GroundTruth loadGroundTruth(const CsrGraph& g, std::istream& in) {
    GroundTruth truth;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s(line);
        while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
            s.remove_suffix(1);
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        if (s.empty() || s.front() == '#' || s.front() == '%') continue;

        GroundTruth::Community community;
        community.id = line_no - 1;
        while (!s.empty()) {
            OrigId id;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), id);
            if (ec != std::errc{} || ptr == s.data())
                throw std::runtime_error("ground-truth parse error at line " +
                                         std::to_string(line_no));
            s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            if (auto internal = g.internalId(id))
                community.members.push_back(*internal);
            else
                ++truth.dropped_nodes;
        }
        std::sort(community.members.begin(), community.members.end());
        community.members.erase(
            std::unique(community.members.begin(), community.members.end()),
            community.members.end());
        if (!community.members.empty()) truth.communities.push_back(std::move(community));
    }
    return truth;
}

double f1Score(const NodeSet& found, const NodeSet& truth) {
    if (found.size() == 0 || truth.size() == 0)
        throw std::invalid_argument("f1 of an empty set");
    std::size_t overlap = 0;
    const auto& a = found.members();
    const auto& b = truth.members();
    for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
        if (a[i] < b[j]) ++i;
        else if (a[i] > b[j]) ++j;
        else { ++overlap; ++i; ++j; }
    }
    if (overlap == 0) return 0.0;
    const double precision = static_cast<double>(overlap) / static_cast<double>(a.size());
    const double recall = static_cast<double>(overlap) / static_cast<double>(b.size());
    return 2.0 * precision * recall / (precision + recall);
}

TruthSummary groundTruthEval(const CsrGraph& g, const GroundTruth& truth,
                             const TruthEvalOptions& opts, unsigned threads) {
    std::vector<const GroundTruth::Community*> selected;
    for (const auto& c : truth.communities) {
        if (c.members.size() >= opts.min_size) selected.push_back(&c);
        if (selected.size() == opts.max_communities) break;
    }
    if (selected.empty()) throw std::runtime_error("no qualifying ground-truth communities");

    struct CommunityBest {
        double f1 = -1.0;
        double conductance = 0.0;
        std::size_t set_size = 0;
    };
    std::vector<CommunityBest> best(selected.size());

    parallelFor(selected.size(), threads, [&](std::size_t c) {
        const auto& community = *selected[c];
        const NodeSet truth_set(community.members, g);
        for (NodeId seed : community.members) {
            MethodRun run =
                opts.method == Method::kHeatKernel
                    ? bestHkOverGrid(g, {seed},
                                     {{opts.hk_t, opts.hk_eps, std::nullopt}}, std::nullopt)
                    : bestPprOverGrid(g, {seed}, defaultPprGrid(opts.alpha));
            const double f1 = f1Score(run.set, truth_set);
            if (f1 > best[c].f1) {
                best[c].f1 = f1;
                best[c].conductance = run.conductance;
                best[c].set_size = run.set.size();
            }
        }
    });

    TruthSummary summary{opts.method};
    summary.communities_evaluated = selected.size();
    for (const CommunityBest& b : best) {
        summary.mean_f1 += b.f1;
        summary.mean_conductance += b.conductance;
        summary.mean_set_size += static_cast<double>(b.set_size);
    }
    const double count = static_cast<double>(selected.size());
    summary.mean_f1 /= count;
    summary.mean_conductance /= count;
    summary.mean_set_size /= count;
    return summary;
}

}  // namespace diffuse
