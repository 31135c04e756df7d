#include "lsdd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "lsdd/errors.hpp"
#include "lsdd/matrix_market.hpp"
#include "lsdd/preconditioner.hpp"

namespace lsdd {

Index compute_km(std::span<const IndexSet> rows, Index m) {
    std::vector<Index> multiplicity(static_cast<std::size_t>(m), 0);
    for (const auto& set : rows) {
        for (Index r : set) {
            if (r < 0 || r >= m) throw InputError("compute_km: row index out of range");
            ++multiplicity[r];
        }
    }
    Index k_m = 0;
    for (Index count : multiplicity) k_m = std::max(k_m, count);
    return k_m;
}

namespace {

// Subdomains whose overlapping set contains each column.
std::vector<std::vector<Index>> column_owners(const Decomposition& d) {
    std::vector<std::vector<Index>> owners(static_cast<std::size_t>(d.n));
    for (Index i = 0; i < d.count(); ++i) {
        for (Index j : d.overlapping[i]) owners[j].push_back(i);
    }
    return owners;
}

}  // namespace

std::vector<Index> neighbour_counts(const Decomposition& d) {
    const auto owners = column_owners(d);
    std::vector<Index> counts;
    std::vector<char> mark(static_cast<std::size_t>(d.count()), 0);
    for (Index i = 0; i < d.count(); ++i) {
        std::fill(mark.begin(), mark.end(), 0);
        Index count = 0;
        for (Index j : d.overlapping[i]) {
            for (Index k : owners[j]) {
                if (!mark[k]) {
                    mark[k] = 1;
                    ++count;
                }
            }
        }
        counts.push_back(count);
    }
    return counts;
}

Index estimate_kc(const Decomposition& d, const SparseMatrix& C) {
    const Index N = d.count();
    if (N == 0) return 0;
    const auto owners = column_owners(d);
    std::vector<std::vector<Index>> adjacency(static_cast<std::size_t>(N));
    std::vector<char> mark(static_cast<std::size_t>(N), 0);
    for (Index i = 0; i < N; ++i) {
        std::fill(mark.begin(), mark.end(), 0);
        mark[i] = 1;
        for (Index j : d.overlapping[i]) {
            for (Index k : C.row_cols(j)) {
                for (Index other : owners[k]) {
                    if (!mark[other]) {
                        mark[other] = 1;
                        adjacency[i].push_back(other);
                    }
                }
            }
        }
    }
    std::vector<Index> order(static_cast<std::size_t>(N));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return adjacency[a].size() > adjacency[b].size();
    });
    std::vector<Index> colour(static_cast<std::size_t>(N), -1);
    Index colours = 0;
    std::vector<char> used;
    for (Index v : order) {
        used.assign(static_cast<std::size_t>(colours) + 1, 0);
        for (Index w : adjacency[v]) {
            if (colour[w] >= 0) used[colour[w]] = 1;
        }
        Index c = 0;
        while (used[c]) ++c;
        colour[v] = c;
        colours = std::max(colours, c + 1);
    }
    return colours;
}

double theoretical_bound(Index k_c, Index k_m, double tau) {
    const auto kc = static_cast<double>(k_c);
    return (kc + 1.0) * (2.0 + (2.0 * kc + 1.0) * static_cast<double>(k_m) / tau);
}

SpectrumEstimate estimate_preconditioned_spectrum(const LinearOperator& M, const LinearOperator& C,
                                                  Index n, Index iterations, std::uint64_t seed) {
    SpectrumEstimate est;
    if (n <= 0 || iterations <= 0) return est;
    const Index steps_max = std::min(iterations, n);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Index k = 0; k < n; ++k) v(k) = uniform(rng);

    auto op = [](const LinearOperator& f, const Eigen::VectorXd& x) {
        Eigen::VectorXd y(x.size());
        f(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
          std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
        return y;
    };

    // Basis V and C V, orthonormal in the C inner product.
    Eigen::MatrixXd V(n, steps_max);
    Eigen::MatrixXd CV(n, steps_max);
    Eigen::VectorXd cv = op(C, v);
    double norm = std::sqrt(std::max(v.dot(cv), 0.0));
    if (!(norm > 0.0)) throw InputError("estimate_preconditioned_spectrum: C is not positive definite");
    V.col(0) = v / norm;
    CV.col(0) = cv / norm;

    std::vector<double> alpha, beta;
    Index steps = 0;
    for (Index j = 0; j < steps_max; ++j) {
        Eigen::VectorXd w = op(M, CV.col(j));
        const double a = CV.col(j).dot(w);
        alpha.push_back(a);
        steps = j + 1;
        if (j + 1 == steps_max) break;
        // Full reorthogonalization, two passes.
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd coeffs = CV.leftCols(j + 1).transpose() * w;
            w -= V.leftCols(j + 1) * coeffs;
        }
        const Eigen::VectorXd cw = op(C, w);
        const double b = std::sqrt(std::max(w.dot(cw), 0.0));
        if (!(b > 1e-12 * std::max(std::abs(a), 1e-300))) {
            est.approximate = steps < n;
            break;
        }
        beta.push_back(b);
        V.col(j + 1) = w / b;
        CV.col(j + 1) = cw / b;
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (Index k = 0; k < steps; ++k) {
        T(k, k) = alpha[k];
        if (k + 1 < steps) T(k, k + 1) = T(k + 1, k) = beta[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T, Eigen::EigenvaluesOnly);
    est.lambda_min = eig.eigenvalues()(0);
    est.lambda_max = eig.eigenvalues()(steps - 1);
    est.steps = steps;
    return est;
}

BoundReport verify_condition_bound(const Preconditioner& P, Index iterations, std::uint64_t seed) {
    BoundReport report;
    report.k_m = P.stats().k_m;
    report.k_c_greedy = P.stats().k_c;
    report.tau = P.config().tau;
    report.construction_shift = P.stats().construction_shift;
    report.theoretical_bound = theoretical_bound(report.k_c_greedy, report.k_m, report.tau);

    const LinearOperator additive = [&P](std::span<const double> in, std::span<double> out) {
        P.apply_variant(in, out, FirstLevel::ASM, SecondLevel::additive);
    };
    const SpectrumEstimate spectrum = estimate_preconditioned_spectrum(
        additive, normal_operator(P.matrix()), P.matrix().ncols(), iterations, seed);
    report.lambda_min_est = spectrum.lambda_min;
    report.lambda_max_est = spectrum.lambda_max;
    report.approximate = spectrum.approximate;
    report.kappa_est = spectrum.lambda_max / spectrum.lambda_min;
    report.verified = spectrum.lambda_min > 0.0 &&
                      report.kappa_est <= report.theoretical_bound * (1.0 + kEstimatorSlack);
    return report;
}

SplittingCheck verify_splitting(const SparseMatrix& A, const Decomposition& d,
                                std::span<const SubdomainData> subdomains, Index k_m, Index trials,
                                std::uint64_t seed,
                                const std::optional<std::filesystem::path>& witness_path) {
    if (static_cast<Index>(subdomains.size()) != d.count()) {
        throw InputError("verify_splitting: one SubdomainData per subdomain required");
    }
    SplittingCheck check;
    check.trials = trials;
    check.min_local_ratio = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Vector u(static_cast<std::size_t>(A.ncols()));
    for (Index t = 0; t < trials; ++t) {
        for (double& x : u) x = uniform(rng);
        const double unorm = norm2(u);
        for (double& x : u) x /= unorm;
        const double cu = [&] {
            const Vector Au = spmv(A, u);
            return dot(Au, Au);
        }();
        const double slack = 1e-12 * cu;
        double sum = 0.0;
        bool ok = true;
        for (Index i = 0; i < d.count(); ++i) {
            const Vector ui = restrict_vector(d.overlapping[i], u);
            const Eigen::Map<const Eigen::VectorXd> x(ui.data(), static_cast<Index>(ui.size()));
            const double local = x.dot(subdomains[i].c_tilde_ii * x);
            sum += local;
            check.max_local_ratio = std::max(check.max_local_ratio, local / cu);
            check.min_local_ratio = std::min(check.min_local_ratio, local / cu);
            if (local < -slack || local > cu + slack) ok = false;
        }
        check.max_sum_ratio = std::max(check.max_sum_ratio, sum / cu);
        if (sum > static_cast<double>(k_m) * cu + slack) ok = false;
        if (!ok && check.holds) {
            check.holds = false;
            check.witness = u;
            if (witness_path) write_vector(*witness_path, u);
        }
    }
    if (trials == 0) check.min_local_ratio = 0.0;
    return check;
}

}  // namespace lsdd
