#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lsdd/analysis.hpp"
#include "lsdd/krylov.hpp"
#include "lsdd/preconditioner.hpp"

namespace lsdd {

enum class SolverKind { lsqr, gmres };

std::string to_string(SolverKind kind);
SolverKind parse_solver(const std::string& name);

struct RunConfig {
    std::filesystem::path matrix_path;
    /// Right-hand side file (one value per line). Random b when absent.
    std::optional<std::filesystem::path> rhs_path;
    std::uint64_t rhs_seed = 0;
    SolverKind solver = SolverKind::lsqr;
    PreconditionerConfig preconditioner;
    double tol = 1e-8;
    Index maxit = 1000;
    Index restart = 100;
    /// One 0-based subdomain id per column; overrides the partitioner.
    std::optional<std::filesystem::path> partition_file;
    std::optional<std::filesystem::path> report_path;
    std::optional<std::filesystem::path> residual_csv_path;
    bool verify_bounds = false;
    Index lanczos_steps = 200;
};

struct RunOutcome {
    /// 0 converged, 1 not converged or setup failure, 2 input error.
    int exit_code = 0;
    nlohmann::json report;
};

/// Reads the matrix, b and partition named by config, runs setup and the
/// solve, and writes the report and residual CSV if requested.
RunOutcome run(const RunConfig& config);

/// Same as run() on an in-memory problem; writes no files.
RunOutcome run_problem(const SparseMatrix& A, std::span<const double> b, const RunConfig& config);

enum class SweepAxis { tau, subdomains, variant };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& name);

struct SweepRow {
    std::string value;
    Index n0 = 0;
    Index iterations = 0;
    double setup_seconds = 0.0;
    double solve_seconds = 0.0;
    /// Stop reason, or "error: ..." when the run threw.
    std::string status;
};

/// One run per value along axis. Variant values are asm, ras, additive,
/// balanced and deflated. Failed runs are recorded and the sweep continues.
std::vector<SweepRow> sweep(const SparseMatrix& A, std::span<const double> b, const RunConfig& base,
                            SweepAxis axis, const std::vector<std::string>& values);
std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis,
                            const std::vector<std::string>& values);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace lsdd
