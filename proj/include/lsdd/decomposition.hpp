#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsdd/sparse.hpp"

namespace lsdd {

/// Overlapping decomposition of the columns of A into N subdomains.
///
/// For subdomain i: `interior[i]` is disjoint from every other interior,
/// `rows[i]` lists the nonzero rows of A(:, interior[i]), `boundary[i]` the
/// remaining nonzero columns of A(rows[i], :), and `overlapping[i]` is the
/// concatenation [interior, boundary] in that order. All sets except
/// `overlapping` are sorted ascending. `unity_weights[i]` is the diagonal of
/// D_i: one on interior positions, zero on boundary positions.
struct Decomposition {
    Index n = 0;  // columns of A
    Index m = 0;  // rows of A
    std::vector<IndexSet> interior;
    std::vector<IndexSet> boundary;
    std::vector<IndexSet> overlapping;
    std::vector<IndexSet> rows;
    std::vector<std::vector<double>> unity_weights;

    Index count() const noexcept { return static_cast<Index>(interior.size()); }
};

/// Greedy k-way partition of the graph of C grown by breadth-first search
/// from pseudo-peripheral start vertices. Parts are nonempty and their sizes
/// differ by at most one. `seed` picks the first start vertex.
std::vector<IndexSet> partition_columns(const SparseMatrix& C, Index parts, std::uint64_t seed);

/// Converts per-column subdomain labels (e.g. from a partition file) into
/// interior sets. `parts` <= 0 means max label + 1.
std::vector<IndexSet> partition_from_labels(std::span<const Index> labels, Index n, Index parts = 0);

struct Overlap {
    IndexSet rows;
    IndexSet boundary;
};

/// Row set and boundary columns of one subdomain. `At` must be A^T.
Overlap build_overlap(const SparseMatrix& A, const SparseMatrix& At, std::span<const Index> interior);
Overlap build_overlap(const SparseMatrix& A, std::span<const Index> interior);

/// Diagonal of D_i for an ordered set whose first `n_interior` entries are interior.
std::vector<double> build_partition_of_unity(std::span<const Index> omega, Index n_interior);

/// Builds the full decomposition from disjoint interiors covering all columns.
Decomposition decompose(const SparseMatrix& A, const SparseMatrix& At,
                        std::vector<IndexSet> interiors, unsigned threads = 1);

/// R_i u: entries of u in the order of omega.
Vector restrict_vector(std::span<const Index> omega, std::span<const double> u);
/// R_i^T u_i as a length-n vector.
Vector prolong_vector(std::span<const Index> omega, std::span<const double> ui, Index n);
/// out += R_i^T u_i.
void prolong_add(std::span<const Index> omega, std::span<const double> ui, std::span<double> out);

}  // namespace lsdd
