#include "lsdd/subdomain.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "lsdd/errors.hpp"

namespace lsdd {

namespace {

// Gram matrix X^T X of a sparse block, accumulated row by row.
DenseMatrix gram(const SparseMatrix& X) {
    DenseMatrix G = DenseMatrix::Zero(X.ncols(), X.ncols());
    for (Index r = 0; r < X.nrows(); ++r) {
        const auto cols = X.row_cols(r);
        const auto vals = X.row_values(r);
        for (std::size_t a = 0; a < cols.size(); ++a) {
            for (std::size_t b = 0; b <= a; ++b) G(cols[a], cols[b]) += vals[a] * vals[b];
        }
    }
    G.triangularView<Eigen::StrictlyUpper>() = G.transpose();
    return G;
}

}  // namespace

LocalMatrices assemble_local(const SparseMatrix& A, const SparseMatrix& At,
                             std::span<const Index> omega, std::span<const Index> rows) {
    // Every row touching Omega_i contributes to C_ii.
    std::vector<char> mark(static_cast<std::size_t>(A.nrows()), 0);
    IndexSet touching;
    for (Index j : omega) {
        for (Index r : At.row_cols(j)) {
            if (!mark[r]) {
                mark[r] = 1;
                touching.push_back(r);
            }
        }
    }
    std::sort(touching.begin(), touching.end());
    LocalMatrices local;
    local.c_ii = gram(extract_submatrix(A, touching, omega));
    local.c_tilde_ii = gram(extract_submatrix(A, rows, omega));
    return local;
}

LocalMatrices assemble_local(const SparseMatrix& A, std::span<const Index> omega,
                             std::span<const Index> rows) {
    return assemble_local(A, A.transpose(), omega, rows);
}

SpdFactor SpdFactor::factor(const DenseMatrix& M, double shift, Index block) {
    if (M.rows() != M.cols()) throw InputError("factor_spd: matrix must be square");
    SpdFactor f;
    f.size_ = M.rows();
    f.shift_ = shift;
    DenseMatrix shifted = M;
    shifted.diagonal().array() += shift;
    f.llt_.compute(shifted);
    bool ok = f.llt_.info() == Eigen::Success;
    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    if (ok && f.size_ > 0) {
        const auto diag = f.llt_.matrixLLT().diagonal();
        for (Index k = 0; k < f.size_; ++k) {
            const double d2 = diag(k) * diag(k);
            if (!(d2 > 0.0) || !std::isfinite(d2)) ok = false;
            dmax = std::max(dmax, d2);
            dmin = std::min(dmin, d2);
        }
    }
    if (!ok) {
        throw FactorizationError("Cholesky factorization failed (non-positive pivot) for block " +
                                     std::to_string(block) + " with shift " + std::to_string(shift),
                                 block);
    }
    f.condition_estimate_ = f.size_ > 0 ? dmax / dmin : 1.0;
    return f;
}

void SpdFactor::solve_in_place(Eigen::Ref<Eigen::VectorXd> v) const {
    if (v.size() != size_) throw InputError("SpdFactor::solve: dimension mismatch");
    if (size_ == 0) return;
    llt_.solveInPlace(v);
}

Vector SpdFactor::solve(std::span<const double> v) const {
    Vector out(v.begin(), v.end());
    solve_in_place(Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Index>(out.size())));
    return out;
}

LocalEigenpairs solve_local_gevp(std::span<const double> weights, const DenseMatrix& c_ii,
                                 const DenseMatrix& c_tilde_ii, const GevpOptions& options,
                                 Index block) {
    const Index ni = c_ii.rows();
    if (c_ii.cols() != ni || c_tilde_ii.rows() != ni || c_tilde_ii.cols() != ni ||
        static_cast<Index>(weights.size()) != ni) {
        throw InputError("solve_local_gevp: inconsistent block sizes");
    }
    if (!(options.tau > 0.0)) throw InputError("solve_local_gevp: tau must be positive");
    if (options.cap < 0) throw InputError("solve_local_gevp: cap must be nonnegative");

    LocalEigenpairs result;
    result.threshold = std::min(1.0 / options.tau, 1.0 / (options.kappa_estimate * options.machine_eps));
    result.vectors = DenseMatrix(ni, 0);
    if (ni == 0) return result;

    const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(weights.data(), ni);
    const DenseMatrix lhs = d.asDiagonal() * c_ii * d.asDiagonal();

    // Reduce to a standard problem with the Cholesky factor of the shifted
    // right-hand side; one retry with a ten times larger shift.
    double s = options.shift_scale * c_tilde_ii.norm();
    if (s == 0.0) s = options.shift_scale;
    Eigen::LLT<DenseMatrix> rhs_factor;
    for (int attempt = 0; attempt < 2; ++attempt) {
        DenseMatrix rhs = c_tilde_ii;
        rhs.diagonal().array() += s;
        rhs_factor.compute(rhs);
        if (rhs_factor.info() == Eigen::Success &&
            (rhs_factor.matrixLLT().diagonal().array() > 0.0).all()) {
            break;
        }
        if (attempt == 1) {
            throw FactorizationError("generalized eigenproblem of subdomain " + std::to_string(block) +
                                         ": shifted splitting matrix is not positive definite",
                                     block);
        }
        s *= 10.0;
    }
    result.shift = s;

    const auto L = rhs_factor.matrixL();
    DenseMatrix reduced = L.solve(lhs);
    reduced = L.solve(reduced.transpose()).transpose();
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(reduced);
    if (eig.info() != Eigen::Success) {
        throw EigensolverError("eigensolver did not converge for subdomain " + std::to_string(block),
                               block);
    }

    // Descending eigenvalues; ties keep the eigensolver's (ascending) column order.
    const Eigen::VectorXd& values = eig.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(ni));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return values(a) > values(b); });

    result.spectrum.reserve(order.size());
    for (Index k : order) result.spectrum.push_back(values(k));

    std::vector<Index> selected;
    for (Index k : order) {
        if (static_cast<Index>(selected.size()) >= options.cap) break;
        if (values(k) >= result.threshold) selected.push_back(k);
    }
    DenseMatrix y(ni, static_cast<Index>(selected.size()));
    for (std::size_t c = 0; c < selected.size(); ++c) {
        y.col(static_cast<Index>(c)) = eig.eigenvectors().col(selected[c]);
        result.eigenvalues.push_back(values(selected[c]));
    }
    // v = L^{-T} y gives (C_tilde + sI)-orthonormal eigenvectors.
    result.vectors = L.transpose().solve(y);
    return result;
}

SubdomainData setup_subdomain(const SparseMatrix& A, const SparseMatrix& At, const Decomposition& d,
                              Index i, const SubdomainOptions& options) {
    SubdomainData data;
    data.index = i;
    LocalMatrices local = assemble_local(A, At, d.overlapping[i], d.rows[i]);
    data.c_ii = std::move(local.c_ii);
    data.c_tilde_ii = std::move(local.c_tilde_ii);
    data.c_ii_factor = SpdFactor::factor(data.c_ii, options.construction_shift, i);
    data.kappa_estimate = data.c_ii_factor.condition_estimate();
    data.z = DenseMatrix(data.c_ii.rows(), 0);
    if (options.compute_coarse) {
        const auto start = std::chrono::steady_clock::now();
        GevpOptions gevp = options.gevp;
        gevp.kappa_estimate = data.kappa_estimate;
        LocalEigenpairs pairs =
            solve_local_gevp(d.unity_weights[i], data.c_ii, data.c_tilde_ii, gevp, i);
        data.shift_s = pairs.shift;
        data.z = std::move(pairs.vectors);
        data.eigenvalues = std::move(pairs.eigenvalues);
        data.eigensolve_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return data;
}

Vector local_solve(const SubdomainData& data, std::span<const double> v) {
    return data.c_ii_factor.solve(v);
}

}  // namespace lsdd
