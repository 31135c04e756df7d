#include "lsdd/preconditioner.hpp"

#include <chrono>
#include <string>

#include "lsdd/analysis.hpp"
#include "lsdd/errors.hpp"
#include "lsdd/parallel.hpp"

namespace lsdd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string to_string(FirstLevel level) { return level == FirstLevel::ASM ? "asm" : "ras"; }

std::string to_string(SecondLevel level) {
    switch (level) {
        case SecondLevel::none: return "none";
        case SecondLevel::additive: return "additive";
        case SecondLevel::balanced: return "balanced";
        case SecondLevel::deflated: return "deflated";
    }
    return "none";
}

FirstLevel parse_first_level(const std::string& name) {
    if (name == "asm" || name == "ASM") return FirstLevel::ASM;
    if (name == "ras" || name == "RAS") return FirstLevel::RAS;
    throw InputError("unknown first level '" + name + "' (expected asm or ras)");
}

SecondLevel parse_second_level(const std::string& name) {
    if (name == "none") return SecondLevel::none;
    if (name == "additive") return SecondLevel::additive;
    if (name == "balanced") return SecondLevel::balanced;
    if (name == "deflated") return SecondLevel::deflated;
    throw InputError("unknown second level '" + name +
                     "' (expected none, additive, balanced or deflated)");
}

Preconditioner Preconditioner::setup(const SparseMatrix& A, const PreconditionerConfig& config) {
    if (!config.allow_any_pairing) {
        if (config.second_level == SecondLevel::balanced && config.first_level != FirstLevel::ASM) {
            throw InputError("balanced second level pairs with ASM (set allow_any_pairing to override)");
        }
        if (config.second_level == SecondLevel::deflated && config.first_level != FirstLevel::RAS) {
            throw InputError("deflated second level pairs with RAS (set allow_any_pairing to override)");
        }
    }
    if (!(config.tau > 0.0)) throw InputError("tau must be positive");
    if (config.cap < 0) throw InputError("eigenpair cap must be nonnegative");

    const auto setup_start = Clock::now();
    Preconditioner P;
    P.config_ = config;
    P.A_ = std::make_shared<const SparseMatrix>(A);
    const SparseMatrix At = A.transpose();
    const SparseMatrix C = normal_matrix(A);
    const double shift = config.construction_shift_scale * frobenius_norm(C);
    P.stats_.construction_shift = shift;

    const auto partition_start = Clock::now();
    std::vector<IndexSet> interiors =
        config.partition_labels ? partition_from_labels(*config.partition_labels, A.ncols())
                                : partition_columns(C, config.subdomains, config.seed);
    P.decomposition_ = decompose(A, At, std::move(interiors), config.threads);
    P.stats_.partition_seconds = seconds_since(partition_start);
    const Decomposition& d = P.decomposition_;

    SubdomainOptions options;
    options.gevp.tau = config.tau;
    options.gevp.cap = config.cap;
    options.gevp.shift_scale = config.gevp_shift_scale;
    options.construction_shift = shift;
    options.compute_coarse = config.second_level != SecondLevel::none;
    P.subdomains_.resize(static_cast<std::size_t>(d.count()));
    parallel_for(d.count(), config.threads, [&](Index i) {
        P.subdomains_[i] = setup_subdomain(A, At, d, i, options);
    });

    for (const auto& sd : P.subdomains_) {
        P.stats_.subdomain_sizes.push_back(sd.c_ii.rows());
        P.stats_.eigenpairs.push_back(sd.z.cols());
        P.stats_.eigensolve_seconds += sd.eigensolve_seconds;
    }
    for (const auto& set : d.interior) P.stats_.interior_sizes.push_back(static_cast<Index>(set.size()));

    if (options.compute_coarse) {
        CoarseBasis basis = assemble_coarse_basis(d, P.subdomains_);
        if (basis.basis.ncols() == 0) {
            P.stats_.warnings.push_back("no eigenpair passed the threshold (n0 = 0); the " +
                                        to_string(config.second_level) +
                                        " preconditioner falls back to its one-level part");
        } else {
            P.coarse_ = factor_coarse(A, std::move(basis), shift);
            P.stats_.n0 = P.coarse_->n0();
            P.stats_.dropped_columns = P.coarse_->dropped_columns;
            if (!P.stats_.dropped_columns.empty()) {
                P.stats_.warnings.push_back(std::to_string(P.stats_.dropped_columns.size()) +
                                            " linearly dependent coarse column(s) dropped");
            }
        }
    }

    P.stats_.k_m = compute_km(d.rows, d.m);
    P.stats_.k_c = estimate_kc(d, C);
    P.stats_.setup_seconds = seconds_since(setup_start);
    return P;
}

void Preconditioner::normal_product(std::span<const double> v, std::span<double> out) const {
    const Vector Av = spmv(*A_, v);
    spmv_transpose(*A_, Av, out);
}

void Preconditioner::one_level(std::span<const double> v, std::span<double> out,
                               FirstLevel first) const {
    const Decomposition& d = decomposition_;
    std::vector<Vector> local(static_cast<std::size_t>(d.count()));
    parallel_for(d.count(), config_.threads, [&](Index i) {
        Vector vi = restrict_vector(d.overlapping[i], v);
        subdomains_[i].c_ii_factor.solve_in_place(
            Eigen::Map<Eigen::VectorXd>(vi.data(), static_cast<Index>(vi.size())));
        if (first == FirstLevel::RAS) {
            for (std::size_t k = 0; k < vi.size(); ++k) vi[k] *= d.unity_weights[i][k];
        }
        local[i] = std::move(vi);
    });
    // Fixed subdomain order keeps the sum bitwise reproducible.
    std::fill(out.begin(), out.end(), 0.0);
    for (Index i = 0; i < d.count(); ++i) prolong_add(d.overlapping[i], local[i], out);
}

void Preconditioner::apply_variant(std::span<const double> v, std::span<double> out,
                                   FirstLevel first, SecondLevel second) const {
    if (static_cast<Index>(v.size()) != A_->ncols() || out.size() != v.size()) {
        throw InputError("Preconditioner::apply: dimension mismatch");
    }
    if (second == SecondLevel::none || !coarse_) {
        one_level(v, out, first);
        return;
    }
    const std::size_t n = v.size();
    const Vector q = coarse_apply(*coarse_, v);
    if (second == SecondLevel::additive) {
        one_level(v, out, first);
        for (std::size_t k = 0; k < n; ++k) out[k] += q[k];
        return;
    }
    // w = (I - C Q) v
    Vector w(n);
    normal_product(q, w);
    for (std::size_t k = 0; k < n; ++k) w[k] = v[k] - w[k];
    Vector y(n);
    one_level(w, y, first);
    if (second == SecondLevel::deflated) {
        for (std::size_t k = 0; k < n; ++k) out[k] = q[k] + y[k];
        return;
    }
    // balanced: Q v + (I - Q C) y
    Vector cy(n);
    normal_product(y, cy);
    const Vector qcy = coarse_apply(*coarse_, cy);
    for (std::size_t k = 0; k < n; ++k) out[k] = q[k] + y[k] - qcy[k];
}

Vector Preconditioner::apply_variant(std::span<const double> v, FirstLevel first,
                                     SecondLevel second) const {
    Vector out(v.size());
    apply_variant(v, out, first, second);
    return out;
}

void Preconditioner::apply(std::span<const double> v, std::span<double> out) const {
    apply_variant(v, out, config_.first_level, config_.second_level);
}

Vector Preconditioner::apply(std::span<const double> v) const {
    return apply_variant(v, config_.first_level, config_.second_level);
}

Vector Preconditioner::apply_one_level(std::span<const double> v) const {
    return apply_variant(v, config_.first_level, SecondLevel::none);
}

Vector Preconditioner::apply_two_level(std::span<const double> v) const {
    return apply_variant(v, config_.first_level, config_.second_level);
}

bool Preconditioner::is_symmetric() const noexcept {
    return config_.first_level == FirstLevel::ASM && config_.second_level != SecondLevel::deflated;
}

LinearOperator Preconditioner::as_operator() const {
    return [this](std::span<const double> in, std::span<double> out) { apply(in, out); };
}

}  // namespace lsdd
