#include "lsdd/coarse.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "lsdd/errors.hpp"

namespace lsdd {

namespace {

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& M) {
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(M.nnz()));
    for (Index i = 0; i < M.nrows(); ++i) {
        const auto cols = M.row_cols(i);
        const auto vals = M.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            entries.emplace_back(static_cast<int>(i), static_cast<int>(cols[k]), vals[k]);
        }
    }
    Eigen::SparseMatrix<double> out(M.nrows(), M.ncols());
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

// Galerkin operator (A B)^T (A B) + shift B^T B.
SparseMatrix galerkin(const SparseMatrix& A, const SparseMatrix& B, double shift) {
    const SparseMatrix AB = multiply(A, B);
    SparseMatrix c00 = multiply(AB.transpose(), AB);
    if (shift == 0.0) return c00;
    const SparseMatrix BtB = multiply(B.transpose(), B);
    std::vector<Triplet> entries;
    for (const SparseMatrix* part : std::array<const SparseMatrix*, 2>{&c00, &BtB}) {
        const double scale = part == &c00 ? 1.0 : shift;
        for (Index i = 0; i < part->nrows(); ++i) {
            const auto cols = part->row_cols(i);
            const auto vals = part->row_values(i);
            for (std::size_t k = 0; k < cols.size(); ++k) entries.push_back({i, cols[k], scale * vals[k]});
        }
    }
    return SparseMatrix::from_triplets(c00.nrows(), c00.ncols(), std::move(entries));
}

// Diagonally pivoted Cholesky; returns the pivots accepted before the
// largest remaining diagonal drops below tol.
std::vector<Index> pivoted_cholesky_rank(DenseMatrix M, double tol) {
    const Index n = M.rows();
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    Index k = 0;
    for (; k < n; ++k) {
        Index best = k;
        for (Index j = k + 1; j < n; ++j) {
            if (M(j, j) > M(best, best)) best = j;
        }
        if (!(M(best, best) > tol)) break;
        if (best != k) {
            M.row(k).swap(M.row(best));
            M.col(k).swap(M.col(best));
            std::swap(perm[k], perm[best]);
        }
        const double pivot = std::sqrt(M(k, k));
        M(k, k) = pivot;
        M.col(k).tail(n - k - 1) /= pivot;
        // Full symmetric update so later row/column swaps stay valid.
        const Eigen::VectorXd l = M.col(k).tail(n - k - 1);
        M.bottomRightCorner(n - k - 1, n - k - 1).noalias() -= l * l.transpose();
    }
    std::vector<Index> kept(perm.begin(), perm.begin() + k);
    std::sort(kept.begin(), kept.end());
    return kept;
}

SparseMatrix select_columns(const SparseMatrix& B, const std::vector<Index>& keep) {
    std::vector<Index> rows(static_cast<std::size_t>(B.nrows()));
    std::iota(rows.begin(), rows.end(), Index{0});
    return extract_submatrix(B, rows, keep);
}

}  // namespace

CoarseBasis assemble_coarse_basis(const Decomposition& d, std::span<const SubdomainData> subdomains) {
    if (static_cast<Index>(subdomains.size()) != d.count()) {
        throw InputError("assemble_coarse_basis: one SubdomainData per subdomain required");
    }
    std::vector<Triplet> entries;
    std::vector<Index> owner;
    Index column = 0;
    for (Index i = 0; i < d.count(); ++i) {
        const auto& omega = d.overlapping[i];
        const auto& weights = d.unity_weights[i];
        const DenseMatrix& z = subdomains[i].z;
        for (Index c = 0; c < z.cols(); ++c) {
            bool nonzero = false;
            for (Index k = 0; k < z.rows(); ++k) {
                const double value = weights[k] * z(k, c);
                if (value != 0.0) {
                    entries.push_back({omega[k], column, value});
                    nonzero = true;
                }
            }
            if (nonzero) {
                owner.push_back(i);
                ++column;
            }
        }
    }
    return {SparseMatrix::from_triplets(d.n, column, std::move(entries)), std::move(owner)};
}

CoarseSpace factor_coarse(const SparseMatrix& A, CoarseBasis assembled, double shift) {
    if (assembled.basis.ncols() < 1) throw InputError("factor_coarse: empty coarse basis");
    if (assembled.basis.nrows() != A.ncols()) throw InputError("factor_coarse: basis has wrong row count");

    CoarseSpace cs;
    cs.shift = shift;
    SparseMatrix c00 = galerkin(A, assembled.basis, shift);
    const Index n0 = c00.nrows();
    const DenseMatrix dense = c00.to_dense();
    const double tol = 1e-12 * dense.trace() / static_cast<double>(n0);
    const std::vector<Index> kept = pivoted_cholesky_rank(dense, tol);

    if (static_cast<Index>(kept.size()) < n0) {
        std::vector<char> is_kept(static_cast<std::size_t>(n0), 0);
        for (Index k : kept) is_kept[k] = 1;
        for (Index k = 0; k < n0; ++k) {
            if (!is_kept[k]) cs.dropped_columns.push_back(k);
        }
        cs.basis = select_columns(assembled.basis, kept);
        for (Index k : kept) cs.owner.push_back(assembled.owner[k]);
        c00 = galerkin(A, cs.basis, shift);
    } else {
        cs.basis = std::move(assembled.basis);
        cs.owner = std::move(assembled.owner);
    }
    if (cs.basis.ncols() == 0) {
        throw FactorizationError("coarse operator is numerically zero", -1, cs.dropped_columns);
    }
    cs.c00 = std::move(c00);

    auto factor = std::make_shared<CoarseSpace::Factor>();
    factor->compute(to_eigen(cs.c00));
    if (factor->info() != Eigen::Success) {
        std::vector<Index> columns(static_cast<std::size_t>(cs.basis.ncols()));
        std::iota(columns.begin(), columns.end(), Index{0});
        throw FactorizationError("Cholesky factorization of the coarse operator failed", -1,
                                 std::move(columns));
    }
    cs.factor = std::move(factor);
    return cs;
}

void coarse_apply(const CoarseSpace& cs, std::span<const double> v, std::span<double> out) {
    if (!cs.factor) throw InputError("coarse_apply: coarse space not factored");
    if (static_cast<Index>(v.size()) != cs.basis.nrows() || out.size() != v.size()) {
        throw InputError("coarse_apply: dimension mismatch");
    }
    Vector coarse = spmv_transpose(cs.basis, v);
    Eigen::Map<Eigen::VectorXd> rhs(coarse.data(), static_cast<Index>(coarse.size()));
    Eigen::VectorXd sol = cs.factor->solve(rhs);
    spmv(cs.basis, std::span<const double>(sol.data(), static_cast<std::size_t>(sol.size())), out);
}

Vector coarse_apply(const CoarseSpace& cs, std::span<const double> v) {
    Vector out(v.size());
    coarse_apply(cs, v, out);
    return out;
}

}  // namespace lsdd
