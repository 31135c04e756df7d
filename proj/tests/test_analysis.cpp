#include <gtest/gtest.h>

#include "lsdd/analysis.hpp"
#include "lsdd/generators.hpp"
#include "lsdd/preconditioner.hpp"
#include "oracles.hpp"

using namespace lsdd;

namespace {

Decomposition worked_decomposition() {
    const auto A = worked_example();
    return decompose(A, A.transpose(), {{0, 2}, {1, 3}});
}

oracle::Dense operator_matrix(const LinearOperator& op, Index n) {
    oracle::Dense M = oracle::zeros(n, n);
    for (Index j = 0; j < n; ++j) {
        Vector e(n, 0.0);
        e[j] = 1.0;
        const auto col = lsdd::apply(op, e);
        for (Index i = 0; i < n; ++i) M[i][j] = col[i];
    }
    return M;
}

std::vector<SubdomainData> local_data(const SparseMatrix& A, const Decomposition& d) {
    std::vector<SubdomainData> out;
    SubdomainOptions options;
    options.compute_coarse = false;
    const auto At = A.transpose();
    for (Index i = 0; i < d.count(); ++i) out.push_back(setup_subdomain(A, At, d, i, options));
    return out;
}

}  // namespace

TEST(Km, Examples) {
    const auto d = worked_decomposition();
    EXPECT_EQ(compute_km(d.rows, 5), 2);
    const std::vector<IndexSet> single{{0, 1, 2, 3, 4}};
    EXPECT_EQ(compute_km(single, 5), 1);
    const std::vector<IndexSet> disjoint{{0, 1}, {2, 3}};
    EXPECT_EQ(compute_km(disjoint, 4), 1);
}

TEST(Kc, Examples) {
    const auto A = worked_example();
    const auto C = normal_matrix(A);
    EXPECT_EQ(estimate_kc(worked_decomposition(), C), 2);
    EXPECT_EQ(estimate_kc(decompose(A, A.transpose(), {{0, 1, 2, 3}}), C), 1);

    const auto B = SparseMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 2}, {2, 2, 3}});
    EXPECT_EQ(estimate_kc(decompose(B, B.transpose(), {{0}, {1}, {2}}), normal_matrix(B)), 1);
}

TEST(Kc, ChainOfSubdomainsNeedsTwoColours) {
    const auto A = difference_1d(40);
    const auto C = normal_matrix(A);
    const auto d = decompose(A, A.transpose(), partition_columns(C, 8, 0));
    EXPECT_EQ(estimate_kc(d, C), 2);
    for (Index count : neighbour_counts(d)) EXPECT_LE(count, 3);
}

TEST(Bound, Formula) {
    EXPECT_DOUBLE_EQ(theoretical_bound(2, 2, 0.6), 3.0 * (2.0 + 5.0 * 2.0 / 0.6));
    EXPECT_DOUBLE_EQ(theoretical_bound(1, 1, 1.0), 2.0 * 5.0);
}

TEST(Lanczos, ExactInverseGivesUnitSpectrum) {
    const auto A = random_sparse(30, 20, 4, 2);
    const auto inv = oracle::spd_inverse(oracle::gram(oracle::dense(A)));
    const LinearOperator M = [&inv](std::span<const double> in, std::span<double> out) {
        const auto y = oracle::matvec(inv, oracle::Row(in.begin(), in.end()));
        std::copy(y.begin(), y.end(), out.begin());
    };
    const auto est = estimate_preconditioned_spectrum(M, normal_operator(A), 20);
    EXPECT_NEAR(est.lambda_min, 1.0, 1e-8);
    EXPECT_NEAR(est.lambda_max, 1.0, 1e-8);
}

TEST(Lanczos, MatchesDenseOracleOnSmallProblem) {
    const auto A = grid_gradient(5, 5, 3);
    PreconditionerConfig c;
    c.second_level = SecondLevel::additive;
    c.construction_shift_scale = 0.0;
    const auto P = Preconditioner::setup(A, c);
    const auto op = P.as_operator();
    const auto est = estimate_preconditioned_spectrum(op, normal_operator(A), 25, 200);
    auto M = operator_matrix(op, 25);
    for (std::size_t i = 0; i < 25; ++i)
        for (std::size_t j = i + 1; j < 25; ++j) M[i][j] = M[j][i] = 0.5 * (M[i][j] + M[j][i]);
    const auto ev = oracle::product_eigenvalues(M, oracle::gram(oracle::dense(A)));
    EXPECT_NEAR(est.lambda_min, ev.front(), 1e-6 * ev.front());
    EXPECT_NEAR(est.lambda_max, ev.back(), 1e-6 * ev.back());
}

TEST(Lanczos, OneLevelMaxEigenvalueBoundedByColours) {
    const auto A = difference_1d(64);
    PreconditionerConfig c;
    c.subdomains = 8;
    c.second_level = SecondLevel::none;
    c.construction_shift_scale = 0.0;
    const auto P = Preconditioner::setup(A, c);
    const auto est = estimate_preconditioned_spectrum(P.as_operator(), normal_operator(A), 64, 200);
    EXPECT_LE(est.lambda_max, static_cast<double>(P.stats().k_c + 1) * (1.0 + 1e-10));
}

TEST(Splitting, WorkedExampleHolds) {
    const auto A = worked_example();
    const auto d = worked_decomposition();
    const auto subs = local_data(A, d);
    const auto check = verify_splitting(A, d, subs, compute_km(d.rows, d.m), 200);
    EXPECT_TRUE(check.holds);
    EXPECT_LE(check.max_local_ratio, 1.0 + 1e-12);
    EXPECT_GE(check.min_local_ratio, 0.0);
}

TEST(Splitting, DisjointRowsGiveEquality) {
    const auto A = SparseMatrix::from_triplets(4, 4, {{0, 0, 1}, {0, 1, 2}, {1, 1, 3}, {2, 2, 1}, {3, 3, 4}, {3, 2, 1}});
    const auto d = decompose(A, A.transpose(), {{0, 1}, {2, 3}});
    EXPECT_EQ(compute_km(d.rows, 4), 1);
    const auto subs = local_data(A, d);
    const auto check = verify_splitting(A, d, subs, 1, 50);
    EXPECT_TRUE(check.holds);
    EXPECT_NEAR(check.max_sum_ratio, 1.0, 1e-12);
}

TEST(Splitting, RandomHolds) {
    const auto A = random_sparse(120, 80, 4, 17);
    const auto d = decompose(A, A.transpose(), partition_columns(normal_matrix(A), 4, 0));
    const auto subs = local_data(A, d);
    const auto check = verify_splitting(A, d, subs, compute_km(d.rows, d.m), 200);
    EXPECT_TRUE(check.holds);
    EXPECT_FALSE(check.witness.has_value());
}

TEST(Bound, VerifiedOnGrid) {
    const auto A = grid_gradient(12, 12, 7);
    PreconditionerConfig c;
    c.subdomains = 4;
    const auto P = Preconditioner::setup(A, c);
    const auto report = verify_condition_bound(P);
    EXPECT_TRUE(report.verified);
    EXPECT_GT(report.lambda_min_est, 0.0);
    EXPECT_DOUBLE_EQ(report.theoretical_bound, theoretical_bound(report.k_c_greedy, report.k_m, 0.6));
}
