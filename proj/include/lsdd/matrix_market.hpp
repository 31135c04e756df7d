#pragma once

#include <filesystem>
#include <iosfwd>

#include "lsdd/sparse.hpp"

namespace lsdd {

// Matrix Market coordinate files. Indices are 1-based on disk, 0-based in
// memory. "real" and "integer" fields are read as doubles, "pattern" entries
// become 1.0. Symmetric files are expanded to full storage. Duplicate
// entries are summed and explicit zeros dropped.
SparseMatrix read_matrix_market(std::istream& in);
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Writes "coordinate real general", or "symmetric" (lower triangle) when
/// requested; the matrix must then be numerically symmetric.
void write_matrix_market(std::ostream& out, const SparseMatrix& A, bool symmetric = false);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& A,
                         bool symmetric = false);

/// Plain text, one value per line; blank lines and '%'/'#' comments skipped.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, std::span<const double> v);

/// Partition file: line k holds the subdomain id (0-based) of column k.
std::vector<Index> read_partition(const std::filesystem::path& path);

}  // namespace lsdd
