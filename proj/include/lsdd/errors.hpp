#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lsdd {

/// Malformed or inconsistent user input (dimensions, indices, files).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A Cholesky factorization met a non-positive pivot.
class FactorizationError : public std::runtime_error {
public:
    FactorizationError(const std::string& what, std::ptrdiff_t block,
                       std::vector<std::ptrdiff_t> columns = {})
        : std::runtime_error(what), block_(block), columns_(std::move(columns)) {}

    /// Subdomain id, or -1 for the coarse operator.
    std::ptrdiff_t block() const noexcept { return block_; }
    /// Offending coarse columns, when known.
    const std::vector<std::ptrdiff_t>& columns() const noexcept { return columns_; }

private:
    std::ptrdiff_t block_;
    std::vector<std::ptrdiff_t> columns_;
};

class EigensolverError : public std::runtime_error {
public:
    EigensolverError(const std::string& what, std::ptrdiff_t block)
        : std::runtime_error(what), block_(block) {}
    std::ptrdiff_t block() const noexcept { return block_; }

private:
    std::ptrdiff_t block_;
};

}  // namespace lsdd
