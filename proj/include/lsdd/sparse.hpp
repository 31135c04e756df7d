#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace lsdd {

using Index = std::ptrdiff_t;
using Vector = std::vector<double>;
using IndexSet = std::vector<Index>;

/// Small dense blocks (local C_ii, splitting matrices, eigenvectors). Column-major.
using DenseMatrix = Eigen::MatrixXd;

struct Triplet {
    Index row;
    Index col;
    double value;
};

/// Compressed sparse row matrix over doubles.
///
/// Invariants established by every constructor: row offsets are
/// nondecreasing with length nrows+1, column indices are strictly increasing
/// within a row and < ncols, and no stored value is exactly zero.
/// Instances are immutable after construction.
class SparseMatrix {
public:
    SparseMatrix() : row_offsets_(1, 0) {}

    /// Takes raw CSR arrays. Validates the layout, sorts nothing, prunes zeros.
    SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                 std::vector<Index> col_indices, std::vector<double> values);

    /// Builds from coordinate entries; duplicates are summed, zeros pruned.
    static SparseMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries);
    static SparseMatrix from_dense(const DenseMatrix& dense);
    static SparseMatrix identity(Index n);

    Index nrows() const noexcept { return nrows_; }
    Index ncols() const noexcept { return ncols_; }
    Index nnz() const noexcept { return static_cast<Index>(values_.size()); }

    std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
    std::span<const Index> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    std::span<const Index> row_cols(Index i) const noexcept {
        return {col_indices_.data() + row_offsets_[i],
                static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
    }
    std::span<const double> row_values(Index i) const noexcept {
        return {values_.data() + row_offsets_[i],
                static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
    }

    /// Entry (i, j), zero when not stored. O(log row length).
    double coeff(Index i, Index j) const;

    SparseMatrix transpose() const;
    DenseMatrix to_dense() const;

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    Index nrows_ = 0;
    Index ncols_ = 0;
    std::vector<Index> row_offsets_;
    std::vector<Index> col_indices_;
    std::vector<double> values_;
};

/// y = A x.
Vector spmv(const SparseMatrix& A, std::span<const double> x);
void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y);

/// y = A^T x, computed by scattering rows; A^T is never formed.
Vector spmv_transpose(const SparseMatrix& A, std::span<const double> y);
void spmv_transpose(const SparseMatrix& A, std::span<const double> y, std::span<double> x);

/// C = A^T A with exact structural pattern. Rejects A with an empty column.
SparseMatrix normal_matrix(const SparseMatrix& A);

/// A * B for conformable sparse matrices.
SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B);

/// A(rows, cols), keeping the order given by both index lists.
SparseMatrix extract_submatrix(const SparseMatrix& A, std::span<const Index> rows,
                               std::span<const Index> cols);

double frobenius_norm(const SparseMatrix& A);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);

}  // namespace lsdd
