#include "lsdd/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <string>

#include "lsdd/errors.hpp"
#include "lsdd/parallel.hpp"

namespace lsdd {

namespace {

// BFS over unlabelled vertices from `root`; returns the last level and its depth.
std::pair<std::vector<Index>, Index> last_level(const SparseMatrix& C, const std::vector<Index>& label,
                                                Index root, std::vector<Index>& depth) {
    std::vector<Index> touched{root};
    depth[root] = 0;
    std::deque<Index> queue{root};
    Index max_depth = 0;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index w : C.row_cols(v)) {
            if (label[w] != -1 || depth[w] != -1) continue;
            depth[w] = depth[v] + 1;
            max_depth = std::max(max_depth, depth[w]);
            touched.push_back(w);
            queue.push_back(w);
        }
    }
    std::vector<Index> level;
    for (Index v : touched) {
        if (depth[v] == max_depth) level.push_back(v);
    }
    for (Index v : touched) depth[v] = -1;
    std::sort(level.begin(), level.end());
    return {level, max_depth};
}

// George-Liu pseudo-peripheral vertex of the unlabelled component containing root.
Index pseudo_peripheral(const SparseMatrix& C, const std::vector<Index>& label, Index root,
                        std::vector<Index>& depth) {
    auto [level, ecc] = last_level(C, label, root, depth);
    for (int sweep = 0; sweep < 16; ++sweep) {
        Index best = level.front();
        for (Index v : level) {
            if (C.row_cols(v).size() < C.row_cols(best).size()) best = v;
        }
        auto [next_level, next_ecc] = last_level(C, label, best, depth);
        if (next_ecc <= ecc) break;
        root = best;
        level = std::move(next_level);
        ecc = next_ecc;
    }
    return root;
}

}  // namespace

std::vector<IndexSet> partition_columns(const SparseMatrix& C, Index parts, std::uint64_t seed) {
    const Index n = C.nrows();
    if (C.ncols() != n) throw InputError("partition_columns: C must be square");
    if (parts < 1 || parts > n) {
        throw InputError("partition_columns: need 1 <= N <= n (N = " + std::to_string(parts) +
                         ", n = " + std::to_string(n) + ")");
    }
    std::vector<Index> label(static_cast<std::size_t>(n), -1);
    std::vector<Index> depth(static_cast<std::size_t>(n), -1);
    std::mt19937_64 rng(seed);
    Index remaining = n;
    Index scan = 0;  // lowest possibly unlabelled vertex

    auto next_unlabelled = [&] {
        while (label[scan] != -1) ++scan;
        return scan;
    };

    for (Index p = 0; p < parts; ++p) {
        const Index target = p == parts - 1 ? remaining : remaining / (parts - p);
        Index size = 0;
        std::deque<Index> queue;
        while (size < target) {
            if (queue.empty()) {
                Index root = -1;
                if (p == 0 && size == 0) {
                    std::uniform_int_distribution<Index> pick(0, n - 1);
                    root = pick(rng);
                } else {
                    // Prefer a vertex touching the labelled region so parts stay compact.
                    for (Index v = next_unlabelled(); v < n && root == -1; ++v) {
                        if (label[v] != -1) continue;
                        for (Index w : C.row_cols(v)) {
                            if (label[w] != -1) {
                                root = v;
                                break;
                            }
                        }
                    }
                    if (root == -1) root = next_unlabelled();
                }
                const Index start = pseudo_peripheral(C, label, root, depth);
                label[start] = p;
                ++size;
                queue.push_back(start);
                continue;
            }
            const Index v = queue.front();
            queue.pop_front();
            for (Index w : C.row_cols(v)) {
                if (size == target) break;
                if (label[w] != -1) continue;
                label[w] = p;
                ++size;
                queue.push_back(w);
            }
        }
        remaining -= size;
    }

    std::vector<IndexSet> sets(static_cast<std::size_t>(parts));
    for (Index v = 0; v < n; ++v) sets[label[v]].push_back(v);
    return sets;
}

std::vector<IndexSet> partition_from_labels(std::span<const Index> labels, Index n, Index parts) {
    if (static_cast<Index>(labels.size()) != n) {
        throw InputError("partition: expected " + std::to_string(n) + " labels, got " +
                         std::to_string(labels.size()));
    }
    Index max_label = -1;
    for (Index l : labels) {
        if (l < 0) throw InputError("partition: negative subdomain id");
        max_label = std::max(max_label, l);
    }
    if (parts <= 0) parts = max_label + 1;
    if (max_label >= parts) {
        throw InputError("partition: subdomain id " + std::to_string(max_label) +
                         " exceeds N-1 = " + std::to_string(parts - 1));
    }
    std::vector<IndexSet> sets(static_cast<std::size_t>(parts));
    for (Index j = 0; j < n; ++j) sets[labels[j]].push_back(j);
    for (Index p = 0; p < parts; ++p) {
        if (sets[p].empty()) throw InputError("partition: subdomain " + std::to_string(p) + " is empty");
    }
    return sets;
}

Overlap build_overlap(const SparseMatrix& A, const SparseMatrix& At, std::span<const Index> interior) {
    if (interior.empty()) throw InputError("build_overlap: empty interior set");
    std::vector<char> in_interior(static_cast<std::size_t>(A.ncols()), 0);
    for (Index j : interior) {
        if (j < 0 || j >= A.ncols()) throw InputError("build_overlap: column index out of range");
        in_interior[j] = 1;
    }
    Overlap result;
    std::vector<char> row_mark(static_cast<std::size_t>(A.nrows()), 0);
    for (Index j : interior) {
        for (Index r : At.row_cols(j)) {
            if (!row_mark[r]) {
                row_mark[r] = 1;
                result.rows.push_back(r);
            }
        }
    }
    std::sort(result.rows.begin(), result.rows.end());
    std::vector<char> col_mark(static_cast<std::size_t>(A.ncols()), 0);
    for (Index r : result.rows) {
        for (Index j : A.row_cols(r)) {
            if (!in_interior[j] && !col_mark[j]) {
                col_mark[j] = 1;
                result.boundary.push_back(j);
            }
        }
    }
    std::sort(result.boundary.begin(), result.boundary.end());
    return result;
}

Overlap build_overlap(const SparseMatrix& A, std::span<const Index> interior) {
    return build_overlap(A, A.transpose(), interior);
}

std::vector<double> build_partition_of_unity(std::span<const Index> omega, Index n_interior) {
    if (n_interior < 0 || n_interior > static_cast<Index>(omega.size())) {
        throw InputError("build_partition_of_unity: interior count exceeds subdomain size");
    }
    std::vector<double> weights(omega.size(), 0.0);
    std::fill_n(weights.begin(), n_interior, 1.0);
    return weights;
}

Decomposition decompose(const SparseMatrix& A, const SparseMatrix& At,
                        std::vector<IndexSet> interiors, unsigned threads) {
    const Index n = A.ncols();
    std::vector<char> owned(static_cast<std::size_t>(n), 0);
    for (auto& set : interiors) {
        std::sort(set.begin(), set.end());
        if (set.empty()) throw InputError("decompose: empty interior set");
        for (Index j : set) {
            if (j < 0 || j >= n) throw InputError("decompose: column index out of range");
            if (owned[j]) throw InputError("decompose: column " + std::to_string(j) + " owned twice");
            owned[j] = 1;
        }
    }
    if (std::find(owned.begin(), owned.end(), 0) != owned.end()) {
        throw InputError("decompose: interior sets do not cover every column");
    }

    Decomposition d;
    d.n = n;
    d.m = A.nrows();
    const auto N = interiors.size();
    d.interior = std::move(interiors);
    d.boundary.resize(N);
    d.overlapping.resize(N);
    d.rows.resize(N);
    d.unity_weights.resize(N);
    parallel_for(static_cast<Index>(N), threads, [&](Index i) {
        Overlap ov = build_overlap(A, At, d.interior[i]);
        d.rows[i] = std::move(ov.rows);
        d.boundary[i] = std::move(ov.boundary);
        auto& omega = d.overlapping[i];
        omega.reserve(d.interior[i].size() + d.boundary[i].size());
        omega.insert(omega.end(), d.interior[i].begin(), d.interior[i].end());
        omega.insert(omega.end(), d.boundary[i].begin(), d.boundary[i].end());
        d.unity_weights[i] =
            build_partition_of_unity(omega, static_cast<Index>(d.interior[i].size()));
    });
    return d;
}

Vector restrict_vector(std::span<const Index> omega, std::span<const double> u) {
    Vector local(omega.size());
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (omega[k] < 0 || omega[k] >= static_cast<Index>(u.size())) {
            throw InputError("restrict_vector: index out of range");
        }
        local[k] = u[omega[k]];
    }
    return local;
}

void prolong_add(std::span<const Index> omega, std::span<const double> ui, std::span<double> out) {
    if (ui.size() != omega.size()) throw InputError("prolong: local vector size mismatch");
    for (std::size_t k = 0; k < omega.size(); ++k) {
        if (omega[k] < 0 || omega[k] >= static_cast<Index>(out.size())) {
            throw InputError("prolong: index out of range");
        }
        out[omega[k]] += ui[k];
    }
}

Vector prolong_vector(std::span<const Index> omega, std::span<const double> ui, Index n) {
    Vector out(static_cast<std::size_t>(n), 0.0);
    prolong_add(omega, ui, out);
    return out;
}

}  // namespace lsdd
