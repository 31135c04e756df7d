#include "lsdd/krylov.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "lsdd/errors.hpp"

namespace lsdd {

std::string to_string(StopReason reason) {
    switch (reason) {
        case StopReason::converged: return "converged";
        case StopReason::maxit: return "maxit";
        case StopReason::breakdown: return "breakdown";
    }
    return "breakdown";
}

namespace {

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

SolveResult lsqr(const SparseMatrix& A, std::span<const double> b, const LinearOperator& M,
                 const LsqrOptions& options) {
    if (static_cast<Index>(b.size()) != A.nrows()) throw InputError("lsqr: b has wrong length");
    const auto n = static_cast<std::size_t>(A.ncols());
    const auto m = static_cast<std::size_t>(A.nrows());
    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        if (M) {
            M(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    };

    SolveResult result;
    SolveReport& rep = result.report;
    result.x.assign(n, 0.0);
    Vector& x = result.x;

    Vector u(b.begin(), b.end());
    double beta = norm2(u);
    const double bnorm = beta;
    rep.residual_history.push_back(beta);
    if (beta == 0.0) {
        rep.stop_reason = StopReason::converged;
        rep.normal_residual_history.push_back(0.0);
        rep.message = "zero right-hand side";
        return result;
    }
    for (double& e : u) e /= beta;

    // Bidiagonalization in the M^{-1} inner product: p = M z, alpha^2 = z^T p,
    // v = p / alpha and what = M^{-1} v = z / alpha.
    Vector z(n), p(n), v(n), what(n), d(n), Av(m);
    spmv_transpose(A, u, z);
    precondition(z, p);
    double alpha2 = dot(z, p);
    if (!finite(alpha2) || alpha2 < 0.0) {
        rep.stop_reason = StopReason::breakdown;
        rep.message = "preconditioner is not positive definite";
        rep.normal_residual_history.push_back(std::nan(""));
        rep.final_ls_residual = bnorm;
        return result;
    }
    double alpha = std::sqrt(alpha2);
    rep.normal_residual_history.push_back(alpha * beta);
    if (alpha == 0.0) {
        rep.stop_reason = StopReason::converged;
        rep.message = "A^T b = 0, x = 0 solves the problem";
        rep.final_ls_residual = bnorm;
        return result;
    }
    for (std::size_t k = 0; k < n; ++k) {
        v[k] = p[k] / alpha;
        what[k] = z[k] / alpha;
    }
    d = v;

    double phibar = beta;
    double rhobar = alpha;
    double anorm2 = 0.0;
    rep.stop_reason = StopReason::maxit;

    for (Index k = 1; k <= options.maxit; ++k) {
        spmv(A, v, Av);
        for (std::size_t i = 0; i < m; ++i) u[i] = Av[i] - alpha * u[i];
        beta = norm2(u);
        if (beta > 0.0) {
            for (double& e : u) e /= beta;
            anorm2 += alpha * alpha + beta * beta;
            spmv_transpose(A, u, z);
            for (std::size_t i = 0; i < n; ++i) z[i] -= beta * what[i];
            precondition(z, p);
            alpha2 = dot(z, p);
            if (!finite(alpha2) || alpha2 < 0.0) {
                rep.stop_reason = StopReason::breakdown;
                rep.message = "preconditioner is not positive definite";
                rep.iterations = k - 1;
                break;
            }
            alpha = std::sqrt(alpha2);
            if (alpha > 0.0) {
                for (std::size_t i = 0; i < n; ++i) {
                    v[i] = p[i] / alpha;
                    what[i] = z[i] / alpha;
                }
            } else {
                std::fill(v.begin(), v.end(), 0.0);
            }
        }

        const double rho = std::hypot(rhobar, beta);
        const double c = rhobar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rhobar = -c * alpha;
        const double phi = c * phibar;
        phibar = s * phibar;

        axpy(phi / rho, d, x);
        for (std::size_t i = 0; i < n; ++i) d[i] = v[i] - (theta / rho) * d[i];

        const double rnorm = std::abs(phibar);
        const double arnorm = alpha * std::abs(s * phi);
        rep.iterations = k;
        rep.residual_history.push_back(rnorm);
        rep.normal_residual_history.push_back(arnorm);
        rep.operator_norm_estimate = std::sqrt(anorm2);
        if (options.on_iterate) options.on_iterate(k, x);

        if (!finite(rnorm) || !finite(arnorm) || !finite(rep.operator_norm_estimate)) {
            rep.stop_reason = StopReason::breakdown;
            rep.message = "non-finite value in LSQR recurrences";
            break;
        }
        if (arnorm == 0.0 || rnorm <= options.tol * bnorm ||
            arnorm < options.tol * rep.operator_norm_estimate * rnorm) {
            rep.stop_reason = StopReason::converged;
            break;
        }
    }

    const Vector Ax = spmv(A, x);
    double r2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) r2 += (Ax[i] - b[i]) * (Ax[i] - b[i]);
    rep.final_ls_residual = std::sqrt(r2);
    return result;
}

SolveResult gmres(const LinearOperator& C, std::span<const double> rhs, const LinearOperator& M,
                  const GmresOptions& options) {
    const auto n = static_cast<Index>(rhs.size());
    const Index restart = std::max<Index>(1, options.restart);
    auto precondition = [&](std::span<const double> in, std::span<double> out) {
        if (M) {
            M(in, out);
        } else {
            std::copy(in.begin(), in.end(), out.begin());
        }
    };
    auto span_of = [](Eigen::Ref<Eigen::VectorXd> col) {
        return std::span<double>(col.data(), static_cast<std::size_t>(col.size()));
    };

    SolveResult result;
    SolveReport& rep = result.report;
    result.x.assign(static_cast<std::size_t>(n), 0.0);
    Eigen::Map<Eigen::VectorXd> x(result.x.data(), n);
    const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n);

    const double bnorm = b.norm();
    rep.residual_history.push_back(bnorm);
    if (bnorm == 0.0) {
        rep.stop_reason = StopReason::converged;
        rep.message = "zero right-hand side";
        return result;
    }

    Eigen::VectorXd r = b;
    double beta = bnorm;
    double previous_cycle = beta;
    Eigen::MatrixXd V(n, restart + 1);
    Eigen::MatrixXd Z(n, restart);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(restart + 1, restart);
    Eigen::VectorXd cs(restart), sn(restart), g(restart + 1);
    Eigen::VectorXd w(n);
    rep.stop_reason = StopReason::maxit;

    while (true) {
        H.setZero();
        g.setZero();
        V.col(0) = r / beta;
        g(0) = beta;
        Index done = 0;
        bool happy = false;
        for (Index j = 0; j < restart && rep.iterations < options.maxit; ++j) {
            precondition(std::span<const double>(V.col(j).data(), static_cast<std::size_t>(n)),
                         span_of(Z.col(j)));
            C(std::span<const double>(Z.col(j).data(), static_cast<std::size_t>(n)), span_of(w));
            const double wnorm = w.norm();
            rep.operator_norm_estimate = std::max(rep.operator_norm_estimate, wnorm);
            for (Index i = 0; i <= j; ++i) {
                H(i, j) = w.dot(V.col(i));
                w -= H(i, j) * V.col(i);
            }
            const double hnext = w.norm();
            H(j + 1, j) = hnext;
            for (Index i = 0; i < j; ++i) {
                const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
                H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
                H(i, j) = t;
            }
            const double denom = std::hypot(H(j, j), H(j + 1, j));
            cs(j) = denom == 0.0 ? 1.0 : H(j, j) / denom;
            sn(j) = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
            H(j, j) = denom;
            H(j + 1, j) = 0.0;
            g(j + 1) = -sn(j) * g(j);
            g(j) = cs(j) * g(j);

            ++rep.iterations;
            done = j + 1;
            rep.residual_history.push_back(std::abs(g(j + 1)));
            if (!std::isfinite(g(j + 1)) || !std::isfinite(hnext)) {
                rep.stop_reason = StopReason::breakdown;
                rep.message = "non-finite value in Arnoldi process";
                return result;
            }
            if (hnext <= 1e-14 * wnorm) {
                happy = true;
                break;
            }
            V.col(j + 1) = w / hnext;
            if (std::abs(g(j + 1)) <= options.tol * bnorm) break;
        }

        if (done > 0) {
            const Eigen::VectorXd y =
                H.topLeftCorner(done, done).triangularView<Eigen::Upper>().solve(g.head(done));
            x += Z.leftCols(done) * y;
        }
        C(std::span<const double>(result.x.data(), result.x.size()), span_of(w));
        r = b - w;
        beta = r.norm();
        rep.final_ls_residual = beta;
        if (beta <= options.tol * bnorm) {
            rep.stop_reason = StopReason::converged;
            if (happy) rep.message = "happy breakdown";
            break;
        }
        if (rep.iterations >= options.maxit) {
            rep.stop_reason = StopReason::maxit;
            break;
        }
        if (beta >= previous_cycle * (1.0 - 1e-12)) {
            rep.stop_reason = StopReason::breakdown;
            rep.message = "stagnation over a full restart cycle";
            break;
        }
        previous_cycle = beta;
    }
    return result;
}

}  // namespace lsdd
