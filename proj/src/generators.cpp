#include "lsdd/generators.hpp"

#include <cmath>
#include <random>

#include "lsdd/errors.hpp"

namespace lsdd {

SparseMatrix worked_example() {
    return SparseMatrix::from_triplets(5, 4,
                                       {{0, 0, 1.0},
                                        {0, 2, 6.0},
                                        {1, 0, 2.0},
                                        {1, 1, 4.0},
                                        {2, 0, 3.0},
                                        {3, 1, 5.0},
                                        {3, 3, 7.0},
                                        {4, 3, 8.0}});
}

SparseMatrix random_sparse(Index m, Index n, Index nnz_per_col, std::uint64_t seed) {
    if (m < n || n <= 0 || nnz_per_col < 1) throw InputError("random_sparse: need m >= n > 0, nnz >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::uniform_int_distribution<Index> row(0, m - 1);
    std::vector<Triplet> entries;
    for (Index j = 0; j < n; ++j) {
        const Index anchor = j * m / n;
        const double u = uniform(rng);
        entries.push_back({anchor, j, u < 0 ? -2.5 + 0.5 * u : 2.5 + 0.5 * u});
        for (Index k = 1; k < nnz_per_col; ++k) {
            Index r = row(rng);
            if (r == anchor) r = (r + 1) % m;
            entries.push_back({r, j, uniform(rng)});
        }
    }
    return SparseMatrix::from_triplets(m, n, std::move(entries));
}

SparseMatrix grid_gradient(Index nx, Index ny, std::uint64_t seed, double contrast) {
    if (nx < 1 || ny < 1 || !(contrast >= 1.0)) throw InputError("grid_gradient: bad arguments");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double log_contrast = std::log(contrast);
    auto weight = [&] { return std::exp(unit(rng) * log_contrast); };
    auto node = [nx](Index x, Index y) { return y * nx + x; };

    std::vector<Triplet> entries;
    Index r = 0;
    for (Index y = 0; y < ny; ++y) {
        for (Index x = 0; x < nx; ++x) {
            if (x + 1 < nx) {
                const double w = weight();
                entries.push_back({r, node(x, y), w});
                entries.push_back({r, node(x + 1, y), -w});
                ++r;
            }
            if (y + 1 < ny) {
                const double w = weight();
                entries.push_back({r, node(x, y), w});
                entries.push_back({r, node(x, y + 1), -w});
                ++r;
            }
        }
    }
    for (Index y = 0; y < ny; ++y) entries.push_back({r++, node(0, y), weight()});
    return SparseMatrix::from_triplets(r, nx * ny, std::move(entries));
}

SparseMatrix difference_1d(Index n) {
    if (n < 1) throw InputError("difference_1d: n must be positive");
    std::vector<Triplet> entries;
    for (Index i = 0; i <= n; ++i) {
        if (i < n) entries.push_back({i, i, 1.0});
        if (i > 0) entries.push_back({i, i - 1, -1.0});
    }
    return SparseMatrix::from_triplets(n + 1, n, std::move(entries));
}

Vector random_vector(Index size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Vector v(static_cast<std::size_t>(size));
    for (double& x : v) x = uniform(rng);
    return v;
}

}  // namespace lsdd
