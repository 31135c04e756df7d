#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseCholesky>

#include "lsdd/decomposition.hpp"
#include "lsdd/sparse.hpp"
#include "lsdd/subdomain.hpp"

namespace lsdd {

struct CoarseBasis {
    SparseMatrix basis;          // n x n0, columns R_i^T D_i Z_i grouped by subdomain
    std::vector<Index> owner;    // subdomain of each column
};

/// Concatenates R_i^T D_i Z_i over subdomains in order; zero columns are dropped.
CoarseBasis assemble_coarse_basis(const Decomposition& d, std::span<const SubdomainData> subdomains);

/// Second level: basis R_0^T and the factored C_00 = (A R_0^T)^T (A R_0^T) + shift R_0 R_0^T.
struct CoarseSpace {
    using Factor = Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                                        Eigen::AMDOrdering<int>>;

    SparseMatrix basis;
    std::vector<Index> owner;
    SparseMatrix c00;
    double shift = 0.0;
    /// Columns (indices into the assembled basis) removed by rank filtering.
    std::vector<Index> dropped_columns;
    std::shared_ptr<const Factor> factor;

    Index n0() const noexcept { return basis.ncols(); }
};

/// Rank-filters the basis with a diagonally pivoted Cholesky of C_00
/// (tolerance 1e-12 * trace / n0), then factors the filtered C_00 with a
/// fill-reducing ordering. Requires at least one column.
CoarseSpace factor_coarse(const SparseMatrix& A, CoarseBasis basis, double shift = 0.0);

/// Q v = R_0^T C_00^{-1} R_0 v.
Vector coarse_apply(const CoarseSpace& cs, std::span<const double> v);
void coarse_apply(const CoarseSpace& cs, std::span<const double> v, std::span<double> out);

}  // namespace lsdd
