#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "diffuse/diffusion.hpp"
#include "diffuse/graph.hpp"

namespace diffuse {

/// Parameters for hkRelax. The estimate satisfies
/// max_i |h_i - x_i| / d_i < eps, where h = exp(-t(I - P)) s.
struct HkParams {
    double t = 5.0;
    double eps = 1e-4;
    /// Stop early once the work counter (sum of degrees of relaxed
    /// entries) exceeds this. Unset in plain library calls; the
    /// experiment harness sets it to n^1.5.
    std::optional<double> volume_cap;
};

/// Weights psi_k(t) = sum_{m=0}^{N-k} k! t^m / (m+k)!, k = 0..N.
/// psi[0] is the degree-N Taylor partial sum of e^t and psi[N] == 1.
class PsiTable {
public:
    PsiTable(double t, int degree);

    int degree() const { return static_cast<int>(psi_.size()) - 1; }
    double t() const { return t_; }
    double operator[](int k) const { return psi_[k]; }
    const std::vector<double>& values() const { return psi_; }

private:
    double t_;
    std::vector<double> psi_;
};

/// Smallest N with t^{N+1}/(N+1)! * (N+2)/(N+2-t) < eps/2 (and N+2 > t),
/// so that the degree-N Taylor truncation contributes less than half of
/// the error budget. Never less than 1.
int chooseTaylorDegree(double t, double eps);

struct HkResult {
    DiffusionVector x;            ///< estimate of exp(-t(I-P)) s
    std::uint64_t steps = 0;      ///< residual entries relaxed
    std::uint64_t work = 0;       ///< sum of degrees of relaxed entries
    int taylor_degree = 0;        ///< N used for this run
    bool terminated_early = false;
    double solution_mass = 0.0;   ///< ||y||_1 before the e^-t scaling
    /// max over leftover residual entries of r(i,j) relative to its
    /// threshold; < 1 exactly when the stopping criterion holds.
    double residual_slack = 0.0;
    /// Theorem-style work cap for these parameters, 2 N psi_1(t) / eps.
    /// Holds whenever terminated_early is false.
    double workBound() const { return work_bound; }
    double work_bound = 0.0;
};

/// Coordinate-relaxation estimate of the heat kernel diffusion seeded at
/// `seeds` (uniform mass over distinct seeds). Deterministic: FIFO queue
/// and sorted neighbor order. Throws std::invalid_argument on bad
/// parameters or seed ids.
HkResult hkRelax(const CsrGraph& g, const std::vector<NodeId>& seeds,
                 const HkParams& params);

}  // namespace diffuse
