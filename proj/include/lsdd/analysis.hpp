#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "lsdd/decomposition.hpp"
#include "lsdd/operators.hpp"
#include "lsdd/sparse.hpp"
#include "lsdd/subdomain.hpp"

namespace lsdd {

class Preconditioner;

/// Multiplicity constant: the largest number of row sets sharing one row of A.
Index compute_km(std::span<const IndexSet> rows, Index m);

/// Number of colours used by a largest-degree-first greedy colouring of the
/// subdomain coupling graph, where i and j are adjacent when C(Omega_i,
/// Omega_j) has a nonzero (this includes every overlapping pair). Same
/// colour means the restriction spaces are C-orthogonal, so the count is an
/// upper bound on the minimal colouring constant k_c.
Index estimate_kc(const Decomposition& d, const SparseMatrix& C);

/// For each subdomain, #{j : Omega_i and Omega_j intersect} (i included).
std::vector<Index> neighbour_counts(const Decomposition& d);

/// (k_c + 1) (2 + (2 k_c + 1) k_m / tau).
double theoretical_bound(Index k_c, Index k_m, double tau);

struct SpectrumEstimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    Index steps = 0;
    /// Lanczos stopped on an invariant subspace smaller than the problem.
    bool approximate = false;
};

/// Extreme eigenvalues of M C by Lanczos in the C inner product with full
/// reorthogonalization. M must be symmetric and C SPD.
SpectrumEstimate estimate_preconditioned_spectrum(const LinearOperator& M, const LinearOperator& C,
                                                  Index n, Index iterations = 200,
                                                  std::uint64_t seed = 7);

struct BoundReport {
    Index k_m = 0;
    Index k_c_greedy = 0;
    double tau = 0.0;
    double theoretical_bound = 0.0;
    double lambda_min_est = 0.0;
    double lambda_max_est = 0.0;
    double kappa_est = 0.0;
    double construction_shift = 0.0;
    bool approximate = false;
    bool verified = false;
};

/// Relative slack allowed on the Lanczos condition estimate.
inline constexpr double kEstimatorSlack = 0.05;

/// Estimates kappa(M_additive C) for the unshifted C, with M_additive = Q +
/// M_ASM built from P's setup, and compares it with the theoretical bound.
BoundReport verify_condition_bound(const Preconditioner& P, Index iterations = 200,
                                   std::uint64_t seed = 7);

struct SplittingCheck {
    bool holds = true;
    Index trials = 0;
    /// max over trials and i of u^T C~_i u / u^T C u.
    double max_local_ratio = 0.0;
    /// min over trials and i of u^T C~_i u / u^T C u.
    double min_local_ratio = 0.0;
    /// max over trials of sum_i u^T C~_i u / u^T C u.
    double max_sum_ratio = 0.0;
    std::optional<Vector> witness;
};

/// Checks 0 <= u^T C~_i u <= u^T C u for each i and sum_i u^T C~_i u <= k_m
/// u^T C u on `trials` random unit vectors, with slack 1e-12 u^T C u. A
/// violating vector is returned and, if `witness_path` is set, written there.
SplittingCheck verify_splitting(const SparseMatrix& A, const Decomposition& d,
                                std::span<const SubdomainData> subdomains, Index k_m, Index trials,
                                std::uint64_t seed = 11,
                                const std::optional<std::filesystem::path>& witness_path = std::nullopt);

}  // namespace lsdd
