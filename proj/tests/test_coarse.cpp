#include <gtest/gtest.h>

#include "lsdd/coarse.hpp"
#include "lsdd/errors.hpp"
#include "lsdd/generators.hpp"
#include "oracles.hpp"

using namespace lsdd;

namespace {

Decomposition worked_decomposition() {
    const auto A = worked_example();
    return decompose(A, A.transpose(), {{0, 2}, {1, 3}});
}

std::vector<SubdomainData> with_z(const Decomposition& d, std::vector<DenseMatrix> zs) {
    std::vector<SubdomainData> out(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        out[i].index = static_cast<Index>(i);
        out[i].z = std::move(zs[i]);
    }
    (void)d;
    return out;
}

SparseMatrix column(Index n, Index j) { return SparseMatrix::from_triplets(n, 1, {{j, 0, 1.0}}); }

}  // namespace

TEST(CoarseBasis, EmptyWhenNoEigenvectors) {
    const auto d = worked_decomposition();
    const auto basis = assemble_coarse_basis(d, with_z(d, {DenseMatrix(3, 0), DenseMatrix(3, 0)}));
    EXPECT_EQ(basis.basis.ncols(), 0);
    EXPECT_EQ(basis.basis.nrows(), 4);
}

TEST(CoarseBasis, SingleSubdomainScatter) {
    const auto A = random_sparse(10, 6, 2, 1);
    const auto d = decompose(A, A.transpose(), {{0, 1, 2, 3, 4, 5}});
    DenseMatrix z = DenseMatrix::Zero(6, 1);
    z(0, 0) = 1.0;
    const auto basis = assemble_coarse_basis(d, with_z(d, {z}));
    EXPECT_EQ(basis.basis, column(6, d.overlapping[0][0]));
}

TEST(CoarseBasis, WorkedExampleHandChosenVectors) {
    const auto d = worked_decomposition();
    DenseMatrix z1 = DenseMatrix::Zero(3, 1), z2 = DenseMatrix::Zero(3, 1);
    z1(0, 0) = 1.0;
    z2(1, 0) = 1.0;
    const auto basis = assemble_coarse_basis(d, with_z(d, {z1, z2}));
    EXPECT_EQ(oracle::dense(basis.basis), (oracle::Dense{{1, 0}, {0, 0}, {0, 0}, {0, 1}}));
    EXPECT_EQ(basis.owner, (std::vector<Index>{0, 1}));
}

TEST(CoarseBasis, BoundaryOnlyColumnDropped) {
    const auto d = worked_decomposition();
    DenseMatrix z1 = DenseMatrix::Zero(3, 1);
    z1(2, 0) = 1.0;  // weight zero under D_1
    const auto basis = assemble_coarse_basis(d, with_z(d, {z1, DenseMatrix(3, 0)}));
    EXPECT_EQ(basis.basis.ncols(), 0);
}

TEST(CoarseOperator, Examples) {
    const auto I = SparseMatrix::identity(4);
    const auto full = factor_coarse(I, {SparseMatrix::identity(4), {0, 0, 1, 1}});
    EXPECT_EQ(oracle::dense(full.c00), oracle::identity(4));

    const auto cs = factor_coarse(worked_example(), {column(4, 0), {0}});
    EXPECT_EQ(oracle::dense(cs.c00), (oracle::Dense{{14}}));
    const auto q = coarse_apply(cs, Vector{7, 1, 2, 3});
    EXPECT_NEAR(q[0], 0.5, 1e-15);
    EXPECT_EQ(q[1], 0.0);
    EXPECT_EQ(q[3], 0.0);

    const auto zero = coarse_apply(cs, Vector{0, 1, 1, 1});
    for (double x : zero) EXPECT_EQ(x, 0.0);
}

TEST(CoarseOperator, RandomBasisMatchesDense) {
    const auto A = random_sparse(50, 30, 4, 2);
    const auto B = random_sparse(30, 6, 5, 3);
    const auto cs = factor_coarse(A, {B, std::vector<Index>(6, 0)});
    const auto AB = oracle::multiply(oracle::dense(A), oracle::dense(B));
    const auto ref = oracle::gram(AB);
    EXPECT_LT(oracle::max_abs_diff(oracle::dense(cs.c00), ref), 1e-12 * oracle::max_abs(ref));
}

TEST(CoarseOperator, ShiftIsGalerkinConsistent) {
    const auto A = random_sparse(50, 30, 4, 2);
    const auto B = random_sparse(30, 6, 5, 3);
    const double shift = 0.125;
    const auto cs = factor_coarse(A, {B, std::vector<Index>(6, 0)}, shift);
    const auto Bd = oracle::dense(B);
    auto ref = oracle::gram(oracle::multiply(oracle::dense(A), Bd));
    const auto BtB = oracle::gram(Bd);
    for (std::size_t i = 0; i < ref.size(); ++i)
        for (std::size_t j = 0; j < ref.size(); ++j) ref[i][j] += shift * BtB[i][j];
    EXPECT_LT(oracle::max_abs_diff(oracle::dense(cs.c00), ref), 1e-12 * oracle::max_abs(ref));
}

TEST(CoarseOperator, IsCProjection) {
    const auto A = grid_gradient(7, 6, 1);
    const auto B = random_sparse(42, 8, 6, 5);
    const auto cs = factor_coarse(A, {B, std::vector<Index>(8, 0)});
    const auto Cd = oracle::gram(oracle::dense(A));
    const auto v = random_vector(42, 4);
    const auto qv = coarse_apply(cs, v);
    const auto qcqv = coarse_apply(cs, oracle::matvec(Cd, qv));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < qv.size(); ++i) {
        num += (qcqv[i] - qv[i]) * (qcqv[i] - qv[i]);
        den += qv[i] * qv[i];
    }
    EXPECT_LT(std::sqrt(num / den), 1e-10);
}

TEST(CoarseOperator, DependentColumnsFiltered) {
    const auto A = random_sparse(40, 20, 4, 8);
    // Column 2 = column 0 + column 1.
    const auto B = SparseMatrix::from_triplets(
        20, 3, {{0, 0, 1.0}, {3, 0, 2.0}, {5, 1, 1.0}, {0, 2, 1.0}, {3, 2, 2.0}, {5, 2, 1.0}});
    const auto cs = factor_coarse(A, {B, {0, 1, 2}});
    EXPECT_EQ(cs.n0(), 2);
    EXPECT_EQ(cs.dropped_columns.size(), 1u);
    const auto v = random_vector(20, 1);
    EXPECT_TRUE(std::isfinite(norm2(coarse_apply(cs, v))));
}

TEST(CoarseOperator, RejectsEmptyBasis) {
    EXPECT_THROW(factor_coarse(worked_example(), {SparseMatrix::from_triplets(4, 0, {}), {}}), InputError);
}
