#pragma once

#include <functional>
#include <span>

#include "lsdd/sparse.hpp"

namespace lsdd {

/// out = Op(in). `in` and `out` never alias.
using LinearOperator = std::function<void(std::span<const double> in, std::span<double> out)>;

/// Implicit normal-equations operator x -> A^T (A x). Holds a reference to A.
inline LinearOperator normal_operator(const SparseMatrix& A) {
    return [&A](std::span<const double> in, std::span<double> out) {
        const Vector Ax = spmv(A, in);
        spmv_transpose(A, Ax, out);
    };
}

inline LinearOperator identity_operator() {
    return [](std::span<const double> in, std::span<double> out) {
        std::copy(in.begin(), in.end(), out.begin());
    };
}

inline Vector apply(const LinearOperator& op, std::span<const double> in) {
    Vector out(in.size());
    op(in, out);
    return out;
}

}  // namespace lsdd
