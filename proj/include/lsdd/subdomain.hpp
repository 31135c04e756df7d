#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>

#include "lsdd/decomposition.hpp"
#include "lsdd/sparse.hpp"

namespace lsdd {

struct LocalMatrices {
    DenseMatrix c_ii;        // A(:, Omega_i)^T A(:, Omega_i)
    DenseMatrix c_tilde_ii;  // A(rows_i, Omega_i)^T A(rows_i, Omega_i)
};

/// Local operator and splitting matrix of one subdomain. `At` must be A^T.
LocalMatrices assemble_local(const SparseMatrix& A, const SparseMatrix& At,
                             std::span<const Index> omega, std::span<const Index> rows);
LocalMatrices assemble_local(const SparseMatrix& A, std::span<const Index> omega,
                             std::span<const Index> rows);

/// Dense Cholesky factor of M + shift*I.
class SpdFactor {
public:
    SpdFactor() = default;

    /// Throws FactorizationError (tagged with `block`) on a non-positive pivot.
    static SpdFactor factor(const DenseMatrix& M, double shift, Index block = -1);

    Index size() const noexcept { return size_; }
    double shift() const noexcept { return shift_; }

    Vector solve(std::span<const double> v) const;
    void solve_in_place(Eigen::Ref<Eigen::VectorXd> v) const;

    /// Ratio of largest to smallest squared diagonal entry of the factor.
    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    Eigen::LLT<DenseMatrix> llt_;
    Index size_ = 0;
    double shift_ = 0.0;
    double condition_estimate_ = 1.0;
};

struct GevpOptions {
    double tau = 0.6;
    Index cap = 300;
    /// s = shift_scale * ||C_tilde_ii||_F.
    double shift_scale = 1e-8;
    double machine_eps = std::numeric_limits<double>::epsilon();
    /// Condition estimate of C_ii used by the selection threshold.
    double kappa_estimate = 1.0;
};

struct LocalEigenpairs {
    std::vector<double> eigenvalues;  // selected, descending
    DenseMatrix vectors;              // n_i x p_i, (C_tilde_ii + sI)-orthonormal columns
    std::vector<double> spectrum;     // every eigenvalue of the pencil, descending
    double shift = 0.0;               // s actually used
    double threshold = 0.0;           // min(1/tau, 1/(kappa*eps))
};

/// Solves D C_ii D v = lambda (C_tilde_ii + s I) v and keeps the eigenpairs
/// with lambda >= threshold, largest first, at most `cap` of them.
LocalEigenpairs solve_local_gevp(std::span<const double> weights, const DenseMatrix& c_ii,
                                 const DenseMatrix& c_tilde_ii, const GevpOptions& options,
                                 Index block = -1);

struct SubdomainOptions {
    GevpOptions gevp;
    /// Absolute shift added to C_ii before factoring (global construction shift).
    double construction_shift = 0.0;
    bool compute_coarse = true;
};

struct SubdomainData {
    Index index = 0;
    DenseMatrix c_ii;
    DenseMatrix c_tilde_ii;
    SpdFactor c_ii_factor;
    double shift_s = 0.0;
    DenseMatrix z;                     // n_i x p_i
    std::vector<double> eigenvalues;   // selected, descending
    double kappa_estimate = 1.0;
    double eigensolve_seconds = 0.0;
};

/// Assemble, factor and (optionally) solve the eigenproblem for subdomain i.
SubdomainData setup_subdomain(const SparseMatrix& A, const SparseMatrix& At, const Decomposition& d,
                              Index i, const SubdomainOptions& options);

/// (C_ii + construction shift)^{-1} v.
Vector local_solve(const SubdomainData& data, std::span<const double> v);

}  // namespace lsdd
