#include "diffuse/heat_kernel.hpp"

#include <cmath>
#include <random>

#include "diffuse/oracle.hpp"
#include "gtest/gtest.h"
#include "test_helpers.hpp"

namespace diffuse {
namespace {

namespace th = testhelpers;

// Exhaustive-scan reference for the Taylor degree: smallest N >= 1 with
// N+2 > t and t^{N+1}/(N+1)! * (N+2)/(N+2-t) < eps/2, factorials through
// lgamma so the route differs from the implementation.
int scanTaylorDegree(double t, double eps) {
    for (int n = 1; n <= 2000; ++n) {
        if (n + 2 <= t) continue;
        const double term =
            std::exp((n + 1) * std::log(t) - std::lgamma(n + 2)) * (n + 2) / (n + 2 - t);
        if (term < eps / 2.0) return n;
    }
    ADD_FAILURE() << "scan did not converge for t=" << t << " eps=" << eps;
    return -1;
}

// Direct summation psi_k = sum_{m=0}^{N-k} k! t^m / (m+k)!.
double psiDirect(double t, int N, int k) {
    double term = 1.0, sum = 1.0;  // m = 0
    for (int m = 1; m <= N - k; ++m) {
        term *= t / (k + m);
        sum += term;
    }
    return sum;
}

TEST(ChooseTaylorDegree, FrozenValues) {
    EXPECT_EQ(chooseTaylorDegree(1.0, 0.5), 2);
    EXPECT_EQ(chooseTaylorDegree(5.0, 1e-4), 20);
}

TEST(ChooseTaylorDegree, MatchesExhaustiveScan) {
    for (double t : {0.5, 1.0, 5.0, 10.0, 20.0, 40.0, 80.0})
        for (double eps : {0.5, 1e-3, 1e-4, 1e-6, 1e-9})
            EXPECT_EQ(chooseTaylorDegree(t, eps), scanTaylorDegree(t, eps))
                << "t=" << t << " eps=" << eps;
}

TEST(ChooseTaylorDegree, SoftLogarithmicGrowth) {
    // Observed to hold with small slack; logged as a soft check, not a
    // hard guarantee.
    for (double t : {1.0, 5.0, 10.0, 20.0, 40.0, 80.0})
        for (double eps : {1e-2, 1e-4, 1e-6}) {
            const int n = chooseTaylorDegree(t, eps);
            EXPECT_LE(n, std::ceil(2.0 * t * std::log(1.0 / eps)) + 5)
                << "t=" << t << " eps=" << eps << " N=" << n;
        }
}

TEST(ChooseTaylorDegree, RejectsBadArguments) {
    EXPECT_THROW(chooseTaylorDegree(0.0, 0.5), std::invalid_argument);
    EXPECT_THROW(chooseTaylorDegree(-1.0, 0.5), std::invalid_argument);
    EXPECT_THROW(chooseTaylorDegree(1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(chooseTaylorDegree(1.0, 1.0), std::invalid_argument);
}

TEST(PsiTable, KnownValues) {
    PsiTable psi(1.0, 2);
    EXPECT_DOUBLE_EQ(psi[0], 2.5);
    EXPECT_DOUBLE_EQ(psi[1], 1.5);
    EXPECT_EQ(psi[2], 1.0);  // exact
}

TEST(PsiTable, LastEntryExactlyOne) {
    for (double t : {0.5, 1.0, 5.0, 20.0, 80.0}) {
        const int n = chooseTaylorDegree(t, 1e-4);
        EXPECT_EQ(PsiTable(t, n)[n], 1.0);
    }
}

TEST(PsiTable, MatchesDirectSummation) {
    for (double t : {0.5, 1.0, 5.0, 20.0, 80.0}) {
        const int n = chooseTaylorDegree(t, 1e-4);
        PsiTable psi(t, n);
        for (int k = 0; k <= n; ++k) {
            const double direct = psiDirect(t, n, k);
            EXPECT_NEAR(psi[k], direct, 1e-12 * direct) << "t=" << t << " k=" << k;
        }
    }
}

TEST(PsiTable, FirstEntryIsTaylorPartialSum) {
    for (double t : {0.5, 1.0, 5.0, 20.0, 80.0}) {
        const int n = chooseTaylorDegree(t, 1e-4);
        double term = 1.0, taylor = 1.0;
        for (int k = 1; k <= n; ++k) {
            term *= t / k;
            taylor += term;
        }
        const PsiTable psi(t, n);
        EXPECT_NEAR(psi[0], taylor, 1e-12 * taylor);
        EXPECT_LE(psi[0], std::exp(t));
    }
}

TEST(HkRelax, K2ClosedForm) {
    CsrGraph g = th::k2();
    HkResult res = hkRelax(g, {0}, HkParams{1.0, 1e-6, std::nullopt});
    // exp(-t(I-P)) e_0 on K2 is [e^-1 cosh 1, e^-1 sinh 1] at t=1.
    EXPECT_NEAR(res.x.value(0), 0.5676676416183063, 1e-6);
    EXPECT_NEAR(res.x.value(1), 0.4323323583816936, 1e-6);
}

TEST(HkRelax, TriangleMatchesDenseOracle) {
    CsrGraph g = th::triangle();
    const double eps = 1e-5;
    HkResult res = hkRelax(g, {0}, HkParams{2.0, eps, std::nullopt});
    const auto h = oracle::exactHeatKernel(g, {0}, 2.0);
    for (NodeId v = 0; v < 3; ++v)
        EXPECT_LT(std::abs(h[v] - res.x.value(v)), eps * g.degree(v));
}

TEST(HkRelax, HugeEpsCanReturnEmptyButBoundHolds) {
    CsrGraph g = th::star(8);
    const double eps = 0.9;
    HkResult res = hkRelax(g, {0}, HkParams{1.0, eps, std::nullopt});
    EXPECT_TRUE(res.x.empty());  // hub residual 1 < e eps d/(2 N psi_0)
    const auto h = oracle::exactHeatKernel(g, {0}, 1.0);
    for (NodeId v = 0; v < g.numNodes(); ++v)
        EXPECT_LT(std::abs(h[v] - res.x.value(v)) / g.degree(v), eps);
}

TEST(HkRelax, DegreeWeightedAccuracyOnRandomGraphs) {
    std::mt19937_64 rng(17);
    for (double p : {0.1, 0.3, 0.6}) {
        for (int rep = 0; rep < 4; ++rep) {
            const OrigId n = 5 + uniformIndex(rng, 46);
            CsrGraph g = th::randomConnectedGraph(rng, n, p);
            const NodeId seed = static_cast<NodeId>(uniformIndex(rng, g.numNodes()));
            for (auto [t, eps] : {std::pair{1.0, 1e-3}, std::pair{5.0, 1e-4}}) {
                HkResult res = hkRelax(g, {seed}, HkParams{t, eps, std::nullopt});
                const auto h = oracle::exactHeatKernel(g, {seed}, t);
                double max_err = 0.0;
                for (NodeId v = 0; v < g.numNodes(); ++v)
                    max_err = std::max(max_err,
                                       std::abs(h[v] - res.x.value(v)) / g.degree(v));
                EXPECT_LT(max_err, eps) << "n=" << g.numNodes() << " p=" << p << " t=" << t;
                EXPECT_FALSE(res.terminated_early);
                EXPECT_LE(static_cast<double>(res.work), res.workBound());
            }
        }
    }
}

TEST(HkRelax, WorkBoundBothForms) {
    std::mt19937_64 rng(23);
    CsrGraph g = th::randomConnectedGraph(rng, 40, 0.3);
    for (auto [t, eps] : {std::pair{1.0, 1e-3}, std::pair{5.0, 1e-4}, std::pair{15.0, 1e-4}}) {
        HkResult res = hkRelax(g, {0}, HkParams{t, eps, std::nullopt});
        const int n = res.taylor_degree;
        const double psi1 = psiDirect(t, n, 1);
        EXPECT_LE(static_cast<double>(res.work), 2.0 * n * psi1 / eps);
        EXPECT_LE(2.0 * n * psi1 / eps, 2.0 * n * (std::exp(t) - 1.0) / (eps * t) * (1 + 1e-12));
    }
}

TEST(HkRelax, SolutionMassAndSign) {
    std::mt19937_64 rng(29);
    CsrGraph g = th::randomConnectedGraph(rng, 30, 0.2);
    HkResult res = hkRelax(g, {1}, HkParams{5.0, 1e-4, std::nullopt});
    double l1 = 0.0;
    for (const auto& [v, x] : res.x.items()) {
        EXPECT_GE(x, 0.0);
        l1 += x;
    }
    EXPECT_LE(l1, 1.0 + 1e-12);
    // ||y||_1 never exceeds the Taylor partial sum T_N(t).
    const PsiTable psi(5.0, res.taylor_degree);
    EXPECT_LE(res.solution_mass, psi[0] * (1 + 1e-12));
    EXPECT_LT(res.residual_slack, 1.0);  // every leftover entry is under threshold
}

TEST(HkRelax, Deterministic) {
    std::mt19937_64 rng(31);
    CsrGraph g = th::randomConnectedGraph(rng, 40, 0.3);
    HkResult a = hkRelax(g, {2, 5}, HkParams{10.0, 1e-4, std::nullopt});
    HkResult b = hkRelax(g, {2, 5}, HkParams{10.0, 1e-4, std::nullopt});
    EXPECT_EQ(a.steps, b.steps);
    EXPECT_EQ(a.work, b.work);
    const auto av = a.x.sortedById(), bv = b.x.sortedById();
    ASSERT_EQ(av.size(), bv.size());
    for (std::size_t i = 0; i < av.size(); ++i) {
        EXPECT_EQ(av[i].first, bv[i].first);
        EXPECT_EQ(av[i].second, bv[i].second);  // bitwise
    }
}

TEST(HkRelax, DuplicateSeedsFormASet) {
    CsrGraph g = th::triangle();
    HkResult a = hkRelax(g, {0, 0, 1}, HkParams{2.0, 1e-5, std::nullopt});
    HkResult b = hkRelax(g, {0, 1}, HkParams{2.0, 1e-5, std::nullopt});
    EXPECT_EQ(a.x.sortedById(), b.x.sortedById());
}

TEST(HkRelax, MultiSeedMatchesOracle) {
    CsrGraph g = th::barbell();
    const double eps = 1e-6;
    HkResult res = hkRelax(g, {0, 7}, HkParams{3.0, eps, std::nullopt});
    const auto h = oracle::exactHeatKernel(g, {0, 7}, 3.0);
    for (NodeId v = 0; v < g.numNodes(); ++v)
        EXPECT_LT(std::abs(h[v] - res.x.value(v)) / g.degree(v), eps);
}

TEST(HkRelax, VolumeCapTerminatesEarly) {
    CsrGraph g = th::barbell();
    HkResult res = hkRelax(g, {0}, HkParams{5.0, 1e-6, 10.0});
    EXPECT_TRUE(res.terminated_early);
    EXPECT_GT(res.work, 10u);   // detected right after the crossing step
    EXPECT_LE(res.work, 10u + 9u);  // overshoot is at most one node's degree
    for (const auto& [v, x] : res.x.items()) EXPECT_GE(x, 0.0);
}

TEST(HkRelax, ValidatesArguments) {
    CsrGraph g = th::k2();
    EXPECT_THROW(hkRelax(g, {}, HkParams{1.0, 1e-4, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(hkRelax(g, {9}, HkParams{1.0, 1e-4, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(hkRelax(g, {0}, HkParams{0.0, 1e-4, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(hkRelax(g, {0}, HkParams{1.0, 0.0, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(hkRelax(g, {0}, HkParams{1.0, 2.0, std::nullopt}), std::invalid_argument);
    EXPECT_THROW(hkRelax(g, {0}, HkParams{1.0, 1e-4, -1.0}), std::invalid_argument);
}

}  // namespace
}  // namespace diffuse
