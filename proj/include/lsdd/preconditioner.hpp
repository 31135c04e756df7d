#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsdd/coarse.hpp"
#include "lsdd/decomposition.hpp"
#include "lsdd/operators.hpp"
#include "lsdd/sparse.hpp"
#include "lsdd/subdomain.hpp"

namespace lsdd {

enum class FirstLevel { ASM, RAS };
enum class SecondLevel { none, additive, balanced, deflated };

std::string to_string(FirstLevel level);
std::string to_string(SecondLevel level);
FirstLevel parse_first_level(const std::string& name);
SecondLevel parse_second_level(const std::string& name);

struct PreconditionerConfig {
    FirstLevel first_level = FirstLevel::ASM;
    SecondLevel second_level = SecondLevel::balanced;
    double tau = 0.6;
    Index cap = 300;
    Index subdomains = 4;
    std::uint64_t seed = 0;
    /// Allows balanced+RAS and deflated+ASM.
    bool allow_any_pairing = false;
    /// C_ii and C_00 are factored with C shifted by this times ||C||_F.
    double construction_shift_scale = 1e-10;
    /// GEVP shift s = gevp_shift_scale * ||C_tilde_ii||_F.
    double gevp_shift_scale = 1e-8;
    /// Per-column subdomain ids; overrides the built-in partitioner.
    std::optional<std::vector<Index>> partition_labels;
    unsigned threads = 1;
};

struct SetupStats {
    std::vector<Index> subdomain_sizes;
    std::vector<Index> interior_sizes;
    std::vector<Index> eigenpairs;
    Index n0 = 0;
    Index k_m = 0;
    Index k_c = 0;
    double construction_shift = 0.0;
    std::vector<Index> dropped_columns;
    std::vector<std::string> warnings;
    double partition_seconds = 0.0;
    double eigensolve_seconds = 0.0;
    double setup_seconds = 0.0;
};

/// One- or two-level overlapping Schwarz preconditioner for C = A^T A.
/// Immutable after setup; apply() may be called concurrently.
class Preconditioner {
public:
    static Preconditioner setup(const SparseMatrix& A, const PreconditionerConfig& config);

    /// Full preconditioner as configured.
    void apply(std::span<const double> v, std::span<double> out) const;
    Vector apply(std::span<const double> v) const;

    /// M_ASM v or M_RAS v, depending on the first level.
    Vector apply_one_level(std::span<const double> v) const;
    /// Additive, balanced or deflated two-level operator; one-level when n0 = 0.
    Vector apply_two_level(std::span<const double> v) const;
    /// Any first/second level combination built from this setup. A
    /// two-level variant without a coarse space reduces to the first level.
    Vector apply_variant(std::span<const double> v, FirstLevel first, SecondLevel second) const;
    void apply_variant(std::span<const double> v, std::span<double> out, FirstLevel first,
                       SecondLevel second) const;

    /// True for ASM-based none/additive/balanced.
    bool is_symmetric() const noexcept;
    bool has_coarse_space() const noexcept { return coarse_.has_value(); }

    const PreconditionerConfig& config() const noexcept { return config_; }
    const Decomposition& decomposition() const noexcept { return decomposition_; }
    const std::vector<SubdomainData>& subdomains() const noexcept { return subdomains_; }
    const std::optional<CoarseSpace>& coarse() const noexcept { return coarse_; }
    const SetupStats& stats() const noexcept { return stats_; }
    const SparseMatrix& matrix() const noexcept { return *A_; }

    LinearOperator as_operator() const;

private:
    void one_level(std::span<const double> v, std::span<double> out, FirstLevel first) const;
    void normal_product(std::span<const double> v, std::span<double> out) const;

    PreconditionerConfig config_;
    std::shared_ptr<const SparseMatrix> A_;
    Decomposition decomposition_;
    std::vector<SubdomainData> subdomains_;
    std::optional<CoarseSpace> coarse_;
    SetupStats stats_;
};

}  // namespace lsdd
