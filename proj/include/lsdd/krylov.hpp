#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lsdd/operators.hpp"
#include "lsdd/sparse.hpp"

namespace lsdd {

enum class StopReason { converged, maxit, breakdown };

std::string to_string(StopReason reason);

struct SolveReport {
    Index iterations = 0;
    StopReason stop_reason = StopReason::maxit;
    /// LSQR: ||b - A x_k|| as carried by the recurrences (nonincreasing).
    /// GMRES: ||rhs - C x_k|| from the Givens recurrences.
    /// One entry per iterate, x_0 included.
    std::vector<double> residual_history;
    /// LSQR only: preconditioned normal residual ||(A W^-1)^T r_k||.
    std::vector<double> normal_residual_history;
    /// LSQR: running Frobenius estimate of A W^-1 from the bidiagonalization.
    /// GMRES: largest ||C M v_j|| seen.
    double operator_norm_estimate = 0.0;
    /// ||A x - b|| recomputed from the returned x (LSQR) or ||rhs - C x|| (GMRES).
    double final_ls_residual = 0.0;
    std::string message;
};

struct SolveResult {
    Vector x;
    SolveReport report;
};

struct LsqrOptions {
    double tol = 1e-8;
    Index maxit = 1000;
    /// Called with (k, x_k) after every iteration.
    std::function<void(Index, std::span<const double>)> on_iterate;
};

/// Preconditioned LSQR for min ||A x - b||, starting from x = 0. M must be
/// a symmetric positive definite operator approximating (A^T A)^{-1}; it is
/// applied once per iteration and never factored. An empty M means identity.
/// Stops when ||(A W^-1)^T r|| / (||A W^-1||_F ||r||) < tol, or when the
/// system is consistent to ||r|| <= tol ||b||.
SolveResult lsqr(const SparseMatrix& A, std::span<const double> b, const LinearOperator& M,
                 const LsqrOptions& options = {});

struct GmresOptions {
    Index restart = 100;
    double tol = 1e-8;
    Index maxit = 1000;
};

/// Right-preconditioned restarted GMRES (modified Gram-Schmidt Arnoldi) for
/// C x = rhs from x = 0. Converges when ||rhs - C x|| <= tol ||rhs||.
SolveResult gmres(const LinearOperator& C, std::span<const double> rhs, const LinearOperator& M,
                  const GmresOptions& options = {});

}  // namespace lsdd
