#include "lsdd/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lsdd/errors.hpp"

namespace lsdd {

namespace {

void check_dims(bool ok, const char* what, Index expected, Index got) {
    if (!ok) {
        throw InputError(std::string(what) + ": dimension mismatch (expected " +
                         std::to_string(expected) + ", got " + std::to_string(got) + ")");
    }
}

}  // namespace

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols) {
    if (nrows < 0 || ncols < 0) throw InputError("SparseMatrix: negative dimension");
    if (static_cast<Index>(row_offsets.size()) != nrows + 1 || row_offsets.front() != 0 ||
        row_offsets.back() != static_cast<Index>(col_indices.size()) ||
        col_indices.size() != values.size()) {
        throw InputError("SparseMatrix: inconsistent CSR arrays");
    }
    row_offsets_.reserve(row_offsets.size());
    row_offsets_.push_back(0);
    col_indices_.reserve(col_indices.size());
    values_.reserve(values.size());
    for (Index i = 0; i < nrows; ++i) {
        if (row_offsets[i + 1] < row_offsets[i]) {
            throw InputError("SparseMatrix: row offsets must be nondecreasing");
        }
        Index prev = -1;
        for (Index k = row_offsets[i]; k < row_offsets[i + 1]; ++k) {
            const Index j = col_indices[k];
            if (j <= prev || j >= ncols) {
                throw InputError("SparseMatrix: column indices of row " + std::to_string(i) +
                                 " must be strictly increasing and < ncols");
            }
            prev = j;
            if (values[k] != 0.0) {
                col_indices_.push_back(j);
                values_.push_back(values[k]);
            }
        }
        row_offsets_.push_back(static_cast<Index>(col_indices_.size()));
    }
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
            throw InputError("SparseMatrix: entry (" + std::to_string(t.row) + ", " +
                             std::to_string(t.col) + ") out of range");
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Index> offsets(static_cast<std::size_t>(nrows) + 1, 0);
    std::vector<Index> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size();) {
        const Index r = entries[k].row;
        const Index c = entries[k].col;
        double sum = 0.0;
        for (; k < entries.size() && entries[k].row == r && entries[k].col == c; ++k) {
            sum += entries[k].value;
        }
        if (sum != 0.0) {
            cols.push_back(c);
            vals.push_back(sum);
            ++offsets[r + 1];
        }
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& dense) {
    std::vector<Triplet> entries;
    for (Index i = 0; i < dense.rows(); ++i) {
        for (Index j = 0; j < dense.cols(); ++j) {
            if (dense(i, j) != 0.0) entries.push_back({i, j, dense(i, j)});
        }
    }
    return from_triplets(dense.rows(), dense.cols(), std::move(entries));
}

SparseMatrix SparseMatrix::identity(Index n) {
    std::vector<Index> offsets(static_cast<std::size_t>(n) + 1);
    std::iota(offsets.begin(), offsets.end(), Index{0});
    std::vector<Index> cols(static_cast<std::size_t>(n));
    std::iota(cols.begin(), cols.end(), Index{0});
    return SparseMatrix(n, n, std::move(offsets), std::move(cols),
                        std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

double SparseMatrix::coeff(Index i, Index j) const {
    const auto cols = row_cols(i);
    const auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return row_values(i)[static_cast<std::size_t>(it - cols.begin())];
}

SparseMatrix SparseMatrix::transpose() const {
    std::vector<Index> offsets(static_cast<std::size_t>(ncols_) + 1, 0);
    for (Index j : col_indices_) ++offsets[j + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<Index> next(offsets.begin(), offsets.end() - 1);
    std::vector<Index> cols(col_indices_.size());
    std::vector<double> vals(values_.size());
    // Rows are visited in order, so each transposed row comes out sorted.
    for (Index i = 0; i < nrows_; ++i) {
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const Index pos = next[col_indices_[k]]++;
            cols[pos] = i;
            vals[pos] = values_[k];
        }
    }
    return SparseMatrix(ncols_, nrows_, std::move(offsets), std::move(cols), std::move(vals));
}

DenseMatrix SparseMatrix::to_dense() const {
    DenseMatrix dense = DenseMatrix::Zero(nrows_, ncols_);
    for (Index i = 0; i < nrows_; ++i) {
        for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            dense(i, col_indices_[k]) = values_[k];
        }
    }
    return dense;
}

void spmv(const SparseMatrix& A, std::span<const double> x, std::span<double> y) {
    check_dims(static_cast<Index>(x.size()) == A.ncols(), "spmv", A.ncols(),
               static_cast<Index>(x.size()));
    check_dims(static_cast<Index>(y.size()) == A.nrows(), "spmv (output)", A.nrows(),
               static_cast<Index>(y.size()));
    const auto offsets = A.row_offsets();
    const auto cols = A.col_indices();
    const auto vals = A.values();
    for (Index i = 0; i < A.nrows(); ++i) {
        double sum = 0.0;
        for (Index k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
        y[i] = sum;
    }
}

Vector spmv(const SparseMatrix& A, std::span<const double> x) {
    Vector y(static_cast<std::size_t>(A.nrows()));
    spmv(A, x, y);
    return y;
}

void spmv_transpose(const SparseMatrix& A, std::span<const double> y, std::span<double> x) {
    check_dims(static_cast<Index>(y.size()) == A.nrows(), "spmv_transpose", A.nrows(),
               static_cast<Index>(y.size()));
    check_dims(static_cast<Index>(x.size()) == A.ncols(), "spmv_transpose (output)", A.ncols(),
               static_cast<Index>(x.size()));
    std::fill(x.begin(), x.end(), 0.0);
    const auto offsets = A.row_offsets();
    const auto cols = A.col_indices();
    const auto vals = A.values();
    for (Index i = 0; i < A.nrows(); ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        for (Index k = offsets[i]; k < offsets[i + 1]; ++k) x[cols[k]] += vals[k] * yi;
    }
}

Vector spmv_transpose(const SparseMatrix& A, std::span<const double> y) {
    Vector x(static_cast<std::size_t>(A.ncols()));
    spmv_transpose(A, y, x);
    return x;
}

SparseMatrix multiply(const SparseMatrix& A, const SparseMatrix& B) {
    check_dims(A.ncols() == B.nrows(), "multiply", A.ncols(), B.nrows());
    // Row-by-row Gustavson product with a dense accumulator.
    std::vector<double> acc(static_cast<std::size_t>(B.ncols()), 0.0);
    std::vector<char> used(static_cast<std::size_t>(B.ncols()), 0);
    std::vector<Index> pattern;
    std::vector<Index> offsets{0};
    std::vector<Index> cols;
    std::vector<double> vals;
    offsets.reserve(static_cast<std::size_t>(A.nrows()) + 1);
    for (Index i = 0; i < A.nrows(); ++i) {
        pattern.clear();
        const auto acols = A.row_cols(i);
        const auto avals = A.row_values(i);
        for (std::size_t ka = 0; ka < acols.size(); ++ka) {
            const Index r = acols[ka];
            const auto bcols = B.row_cols(r);
            const auto bvals = B.row_values(r);
            for (std::size_t kb = 0; kb < bcols.size(); ++kb) {
                const Index j = bcols[kb];
                if (!used[j]) {
                    used[j] = 1;
                    pattern.push_back(j);
                }
                acc[j] += avals[ka] * bvals[kb];
            }
        }
        std::sort(pattern.begin(), pattern.end());
        for (Index j : pattern) {
            if (acc[j] != 0.0) {
                cols.push_back(j);
                vals.push_back(acc[j]);
            }
            acc[j] = 0.0;
            used[j] = 0;
        }
        offsets.push_back(static_cast<Index>(cols.size()));
    }
    return SparseMatrix(A.nrows(), B.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix normal_matrix(const SparseMatrix& A) {
    const SparseMatrix At = A.transpose();
    for (Index j = 0; j < At.nrows(); ++j) {
        if (At.row_cols(j).empty()) {
            throw InputError("normal_matrix: column " + std::to_string(j + 1) +
                             " (1-based) of A is empty, so A^T A is singular");
        }
    }
    return multiply(At, A);
}

SparseMatrix extract_submatrix(const SparseMatrix& A, std::span<const Index> rows,
                               std::span<const Index> cols) {
    std::vector<Index> col_pos(static_cast<std::size_t>(A.ncols()), -1);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const Index j = cols[k];
        if (j < 0 || j >= A.ncols()) {
            throw InputError("extract_submatrix: column index " + std::to_string(j) +
                             " out of range");
        }
        if (col_pos[j] != -1) throw InputError("extract_submatrix: duplicate column index");
        col_pos[j] = static_cast<Index>(k);
    }
    std::vector<Triplet> entries;
    std::vector<char> seen_row(static_cast<std::size_t>(A.nrows()), 0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Index i = rows[k];
        if (i < 0 || i >= A.nrows()) {
            throw InputError("extract_submatrix: row index " + std::to_string(i) +
                             " out of range");
        }
        if (seen_row[i]) throw InputError("extract_submatrix: duplicate row index");
        seen_row[i] = 1;
        const auto rc = A.row_cols(i);
        const auto rv = A.row_values(i);
        for (std::size_t e = 0; e < rc.size(); ++e) {
            if (col_pos[rc[e]] >= 0) entries.push_back({static_cast<Index>(k), col_pos[rc[e]], rv[e]});
        }
    }
    return SparseMatrix::from_triplets(static_cast<Index>(rows.size()),
                                       static_cast<Index>(cols.size()), std::move(entries));
}

double frobenius_norm(const SparseMatrix& A) {
    double sum = 0.0;
    for (double v : A.values()) sum += v * v;
    return std::sqrt(sum);
}

double dot(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
    return sum;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

}  // namespace lsdd
