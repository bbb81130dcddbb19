#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diffuse/graph.hpp"
#include "diffuse/heat_kernel.hpp"
#include "diffuse/pagerank_push.hpp"
#include "diffuse/sweep.hpp"

namespace diffuse {

enum class Method { kHeatKernel, kPageRank };
const char* methodName(Method m);  // "hk" / "ppr"

/// Parameter grids used by the comparison harness. Both are ordered by
/// ascending eps so that "best conductance, ties to the more accurate
/// run" falls out of a strict-improvement scan.
std::vector<HkParams> defaultHkGrid();
std::vector<PprParams> defaultPprGrid(double alpha = 0.99);

/// One diffusion-plus-sweep outcome, the best over a parameter grid.
struct MethodRun {
    Method method;
    double t = 0.0;      // hk only
    double alpha = 0.0;  // ppr only
    double eps = 0.0;
    NodeSet set;
    double conductance = 0.0;
    std::size_t support_size = 0;
    std::uint64_t work = 0;
    std::uint64_t steps = 0;
};

/// Best-conductance sweep over the grid. Grid points whose diffusion has
/// no positive entries are skipped; if every point comes back empty the
/// seed itself is returned as a singleton community.
MethodRun bestHkOverGrid(const CsrGraph& g, const std::vector<NodeId>& seeds,
                         const std::vector<HkParams>& grid,
                         std::optional<double> volume_cap);
MethodRun bestPprOverGrid(const CsrGraph& g, const std::vector<NodeId>& seeds,
                          const std::vector<PprParams>& grid);

struct TrialRecord {
    std::uint32_t trial = 0;
    Method method = Method::kHeatKernel;
    NodeId seed = 0;
    double t = 0.0;
    double eps = 0.0;
    double alpha = 0.0;
    double conductance = 0.0;
    std::size_t set_size = 0;
    std::size_t support_size = 0;
    std::uint64_t work = 0;
    std::uint64_t steps = 0;
    double elapsed_ms = 0.0;  ///< kept out of the CSV so outputs stay byte-stable
};

/// Identifier recorded in output metadata; seed nodes come from
/// std::mt19937_64 with modulo-rejection sampling, so trial sequences are
/// reproducible across platforms and languages.
inline constexpr const char* kRngAlgorithm = "mt19937_64+rejection";

/// Unbiased sample from [0, n) consuming 64-bit draws from rng.
std::uint64_t uniformIndex(std::mt19937_64& rng, std::uint64_t n);

/// Worker count for trial parallelism: hardware concurrency capped by the
/// DIFFUSE_THREADS environment variable.
unsigned trialThreads();

/// For each trial, seed both methods at one uniformly random node, run
/// their default grids (hk with the n^1.5 early-termination cap), and
/// record the best-conductance result per method. Returns 2*n_trials
/// records ordered (trial, hk then ppr); deterministic given rng_seed
/// regardless of thread count.
std::vector<TrialRecord> randomSeedTrials(const CsrGraph& g, std::uint32_t n_trials,
                                          std::uint64_t rng_seed,
                                          unsigned threads = trialThreads());

/// Fixed column order, floats at 9 significant digits, original node ids.
void writeTrialsCsv(std::ostream& out, const CsrGraph& g,
                    const std::vector<TrialRecord>& records);

/// JSON document with rng metadata and 25/50/75 percentiles per method
/// for conductance, set size, work, and elapsed time.
std::string trialSummaryJson(const CsrGraph& g, const std::vector<TrialRecord>& records,
                             std::uint64_t rng_seed, std::uint32_t n_trials,
                             std::optional<double> volume_cap);

/// Linear-interpolation percentile of a nonempty sample, q in [0,100].
double percentile(std::vector<double> values, double q);

struct GroundTruth {
    struct Community {
        std::uint64_t id;               ///< line number in the source file (0-based)
        std::vector<NodeId> members;    ///< internal ids, sorted
    };
    std::vector<Community> communities;
    std::uint64_t dropped_nodes = 0;    ///< listed ids not present in the graph
};

/// One community per line, whitespace-separated original node ids. Ids
/// missing from the graph (e.g. outside the retained component) are
/// dropped and counted; communities left empty are discarded.
GroundTruth loadGroundTruth(const CsrGraph& g, std::istream& in);

/// Harmonic mean of precision and recall; 0 when the sets are disjoint.
/// Throws std::invalid_argument when either set is empty.
double f1Score(const NodeSet& found, const NodeSet& truth);

struct TruthEvalOptions {
    Method method = Method::kHeatKernel;
    double hk_t = 5.0;
    double hk_eps = 1e-4;
    double alpha = 0.99;  ///< ppr runs its eps grid at this alpha
    std::size_t min_size = 11;       ///< communities of size > 10
    std::size_t max_communities = 100;
};

struct TruthSummary {
    Method method;
    double mean_f1 = 0.0;
    double mean_conductance = 0.0;
    double mean_set_size = 0.0;
    std::size_t communities_evaluated = 0;
};

/// For each qualifying community (first max_communities in file order),
/// seed the method at every member node, keep the highest-F1 set, and
/// average F1 / conductance / set size over communities.
TruthSummary groundTruthEval(const CsrGraph& g, const GroundTruth& truth,
                             const TruthEvalOptions& opts,
                             unsigned threads = trialThreads());

}  // namespace diffuse
