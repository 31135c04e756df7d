#pragma once

#include <cstdint>

#include "lsdd/sparse.hpp"

namespace lsdd {

/// The 5x4 example used throughout the tests:
///   [1 0 6 0; 2 4 0 0; 3 0 0 0; 0 5 0 7; 0 0 0 8]
SparseMatrix worked_example();

/// m x n matrix with nnz_per_col entries per column. Column j always has an
/// entry at row floor(j*m/n) of magnitude in [2, 3], the rest are uniform in
/// (-1, 1) at random rows. Full column rank with overwhelming probability.
SparseMatrix random_sparse(Index m, Index n, Index nnz_per_col, std::uint64_t seed);

/// Weighted gradient of an nx x ny grid: one row per grid edge, w (e_p - e_q),
/// plus one anchor row w e_p per node of the left boundary. Edge weights are
/// log-uniform in [1, contrast], so C = A^T A is a heterogeneous
/// diffusion operator.
SparseMatrix grid_gradient(Index nx, Index ny, std::uint64_t seed, double contrast = 1e3);

/// (n+1) x n difference matrix with rows e_0, e_i - e_{i-1}, -e_{n-1}.
SparseMatrix difference_1d(Index n);

/// Random right-hand side, uniform in (-1, 1).
Vector random_vector(Index size, std::uint64_t seed);

}  // namespace lsdd
