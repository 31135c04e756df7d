#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "lsdd/decomposition.hpp"
#include "lsdd/errors.hpp"
#include "lsdd/generators.hpp"
#include "oracles.hpp"

using namespace lsdd;

namespace {

Decomposition worked_decomposition() {
    const auto A = worked_example();
    return decompose(A, A.transpose(), {{0, 2}, {1, 3}});
}

void expect_valid_partition(const std::vector<IndexSet>& parts, Index n) {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& p : parts) {
        EXPECT_FALSE(p.empty());
        EXPECT_TRUE(std::is_sorted(p.begin(), p.end()));
        for (Index j : p) ++seen[j];
    }
    for (int s : seen) EXPECT_EQ(s, 1);
}

}  // namespace

TEST(Decomposition, WorkedExample) {
    const auto d = worked_decomposition();
    ASSERT_EQ(d.count(), 2);
    EXPECT_EQ(d.rows[0], (IndexSet{0, 1, 2}));
    EXPECT_EQ(d.boundary[0], (IndexSet{1}));
    EXPECT_EQ(d.overlapping[0], (IndexSet{0, 2, 1}));
    EXPECT_EQ(d.rows[1], (IndexSet{1, 3, 4}));
    EXPECT_EQ(d.boundary[1], (IndexSet{0}));
    EXPECT_EQ(d.overlapping[1], (IndexSet{1, 3, 0}));
    EXPECT_EQ(d.unity_weights[0], (std::vector<double>{1, 1, 0}));
    EXPECT_EQ(d.unity_weights[1], (std::vector<double>{1, 1, 0}));
}

TEST(Decomposition, PartitionFromLabels) {
    const std::vector<Index> labels{0, 1, 0, 1};
    EXPECT_EQ(partition_from_labels(labels, 4), (std::vector<IndexSet>{{0, 2}, {1, 3}}));
    const std::vector<Index> short_labels{0, 1};
    EXPECT_THROW(partition_from_labels(short_labels, 4), InputError);
    const std::vector<Index> negative{0, -1, 0, 1};
    EXPECT_THROW(partition_from_labels(negative, 4), InputError);
    const std::vector<Index> gap{0, 2, 0, 2};
    EXPECT_THROW(partition_from_labels(gap, 4), InputError);
}

TEST(Partition, SinglePart) {
    const auto C = normal_matrix(random_sparse(30, 20, 3, 1));
    const auto parts = partition_columns(C, 1, 0);
    ASSERT_EQ(parts.size(), 1u);
    IndexSet all(20);
    std::iota(all.begin(), all.end(), Index{0});
    EXPECT_EQ(parts[0], all);
}

TEST(Partition, PathGraphSplitsIntoContiguousHalves) {
    const auto C = normal_matrix(difference_1d(10));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto parts = partition_columns(C, 2, seed);
        ASSERT_EQ(parts.size(), 2u);
        for (const auto& p : parts) {
            ASSERT_EQ(p.size(), 5u);
            EXPECT_EQ(p.back() - p.front(), 4);
        }
    }
}

TEST(Partition, BalancedAndDeterministic) {
    const auto C = normal_matrix(grid_gradient(13, 11, 3));
    for (Index N : {2, 3, 7, 8, 16}) {
        const auto parts = partition_columns(C, N, 5);
        ASSERT_EQ(static_cast<Index>(parts.size()), N);
        expect_valid_partition(parts, C.ncols());
        std::size_t lo = parts[0].size(), hi = lo;
        for (const auto& p : parts) {
            lo = std::min(lo, p.size());
            hi = std::max(hi, p.size());
        }
        EXPECT_LE(hi - lo, 1u);
        EXPECT_EQ(parts, partition_columns(C, N, 5));
    }
    EXPECT_THROW(partition_columns(C, 0, 0), InputError);
    EXPECT_THROW(partition_columns(C, C.ncols() + 1, 0), InputError);
}

TEST(Overlap, BlockDiagonalHasNoBoundary) {
    const auto A = SparseMatrix::from_triplets(4, 4, {{0, 0, 1}, {0, 1, 2}, {1, 1, 3}, {2, 2, 1}, {3, 3, 4}, {3, 2, 1}});
    const std::vector<Index> block{0, 1};
    const Overlap o = build_overlap(A, block);
    EXPECT_TRUE(o.boundary.empty());
    EXPECT_EQ(o.rows, (IndexSet{0, 1}));
    const IndexSet omega{0, 1};
    EXPECT_EQ(build_partition_of_unity(omega, 2), (std::vector<double>{1, 1}));
}

TEST(Overlap, MatchesDenseDefinition) {
    const auto A = random_sparse(60, 40, 3, 11);
    const auto Ad = oracle::dense(A);
    const auto parts = partition_columns(normal_matrix(A), 4, 2);
    const auto d = decompose(A, A.transpose(), parts);
    for (Index i = 0; i < d.count(); ++i) {
        std::set<Index> rows, cols;
        for (Index r = 0; r < 60; ++r)
            for (Index j : d.interior[i])
                if (Ad[r][j] != 0.0) rows.insert(r);
        for (Index r : rows)
            for (Index c = 0; c < 40; ++c)
                if (Ad[r][c] != 0.0) cols.insert(c);
        for (Index j : d.interior[i]) cols.erase(j);
        EXPECT_EQ(d.rows[i], IndexSet(rows.begin(), rows.end()));
        EXPECT_EQ(d.boundary[i], IndexSet(cols.begin(), cols.end()));
    }
}

TEST(PartitionOfUnity, SumsToIdentity) {
    const auto A = random_sparse(80, 50, 4, 6);
    const auto d = decompose(A, A.transpose(), partition_columns(normal_matrix(A), 5, 1));
    oracle::Dense sum = oracle::zeros(50, 50);
    for (Index i = 0; i < d.count(); ++i) {
        for (std::size_t k = 0; k < d.overlapping[i].size(); ++k) {
            const Index g = d.overlapping[i][k];
            sum[g][g] += d.unity_weights[i][k];
        }
    }
    EXPECT_EQ(sum, oracle::identity(50));
}

TEST(Restriction, WorkedExampleOrdering) {
    const auto d = worked_decomposition();
    EXPECT_EQ(restrict_vector(d.overlapping[0], Vector{10, 20, 30, 40}), (Vector{10, 30, 20}));
    EXPECT_EQ(prolong_vector(d.overlapping[0], Vector{10, 30, 20}, 4), (Vector{10, 20, 30, 0}));
}

TEST(Restriction, WeightedProlongationReconstructs) {
    const auto A = random_sparse(80, 50, 4, 7);
    const auto d = decompose(A, A.transpose(), partition_columns(normal_matrix(A), 6, 3));
    const auto u = random_vector(50, 13);
    Vector sum(50, 0.0);
    for (Index i = 0; i < d.count(); ++i) {
        Vector ui = restrict_vector(d.overlapping[i], u);
        for (std::size_t k = 0; k < ui.size(); ++k) ui[k] *= d.unity_weights[i][k];
        prolong_add(d.overlapping[i], ui, sum);
    }
    EXPECT_EQ(sum, u);
}

TEST(Decompose, ThreadedMatchesSerial) {
    const auto A = grid_gradient(12, 12, 1);
    const auto parts = partition_columns(normal_matrix(A), 6, 0);
    const auto d1 = decompose(A, A.transpose(), parts, 1);
    const auto d4 = decompose(A, A.transpose(), parts, 4);
    EXPECT_EQ(d1.overlapping, d4.overlapping);
    EXPECT_EQ(d1.rows, d4.rows);
}

TEST(Decompose, RejectsBadInteriors) {
    const auto A = worked_example();
    EXPECT_THROW(decompose(A, A.transpose(), {{0, 2}, {1}}), InputError);
    EXPECT_THROW(decompose(A, A.transpose(), {{0, 2}, {1, 2, 3}}), InputError);
    EXPECT_THROW(decompose(A, A.transpose(), {{0, 1, 2, 3}, {}}), InputError);
}
