// lsdd: two-level Schwarz preconditioned least squares from the command line.
//
//   lsdd solve --matrix A.mtx [--rhs b.txt] [--solver lsqr|gmres] [--report r.json]
//   lsdd sweep --matrix A.mtx --axis tau --values 0.01 0.1 0.6 [--output sweep.csv]
//   lsdd generate --kind grid --nx 30 --ny 30 --output A.mtx
//
// Every option of solve/sweep can also come from a key = value file given
// with --config; command-line flags win.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lsdd/errors.hpp"
#include "lsdd/generators.hpp"
#include "lsdd/harness.hpp"
#include "lsdd/matrix_market.hpp"

namespace {

struct Options {
    std::string matrix;
    std::string rhs;
    std::uint64_t rhs_seed = 0;
    std::string solver = "lsqr";
    std::string first_level = "asm";
    std::string second_level = "balanced";
    double tau = 0.6;
    lsdd::Index cap = 300;
    lsdd::Index subdomains = 4;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool allow_any_pairing = false;
    double tol = 1e-8;
    lsdd::Index maxit = 1000;
    lsdd::Index restart = 100;
    std::string partition;
    std::string report;
    std::string residual_csv;
    bool verify_bounds = false;
    lsdd::Index lanczos_steps = 200;
};

lsdd::RunConfig to_run_config(const Options& o) {
    lsdd::RunConfig c;
    c.matrix_path = o.matrix;
    if (!o.rhs.empty()) c.rhs_path = o.rhs;
    c.rhs_seed = o.rhs_seed;
    c.solver = lsdd::parse_solver(o.solver);
    c.preconditioner.first_level = lsdd::parse_first_level(o.first_level);
    c.preconditioner.second_level = lsdd::parse_second_level(o.second_level);
    c.preconditioner.tau = o.tau;
    c.preconditioner.cap = o.cap;
    c.preconditioner.subdomains = o.subdomains;
    c.preconditioner.seed = o.seed;
    c.preconditioner.threads = o.threads;
    c.preconditioner.allow_any_pairing = o.allow_any_pairing;
    c.tol = o.tol;
    c.maxit = o.maxit;
    c.restart = o.restart;
    if (!o.partition.empty()) c.partition_file = o.partition;
    if (!o.report.empty()) c.report_path = o.report;
    if (!o.residual_csv.empty()) c.residual_csv_path = o.residual_csv;
    c.verify_bounds = o.verify_bounds;
    c.lanczos_steps = o.lanczos_steps;
    return c;
}

void print_summary(const nlohmann::json& r) {
    if (!r["error"].is_null()) {
        std::cerr << "error: " << r["error"].get<std::string>() << '\n';
        return;
    }
    const auto& s = r["solve"];
    std::cout << "n0 " << r["setup"]["n0"] << "  k_m " << r["setup"]["k_m"] << "  k_c " << r["setup"]["k_c_greedy"]
              << "\n"
              << s["stop_reason"].get<std::string>() << " after " << s["iterations"] << " iterations, residual "
              << s["residual_norm"] << "\n";
    for (const auto& w : r["setup"]["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
    if (!r["bounds"]["kappa_est"].is_null()) {
        std::cout << "kappa estimate " << r["bounds"]["kappa_est"] << " <= bound " << r["bounds"]["theoretical_bound"]
                  << (r["bounds"]["verified"].get<bool>() ? "  (holds)" : "  (VIOLATED)") << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-level Schwarz preconditioned sparse least squares"};
    app.set_config("--config", "", "key = value file with default options");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--matrix", o.matrix, "Matrix Market file with A");
    app.add_option("--rhs", o.rhs, "Right-hand side, one value per line (random when omitted)");
    app.add_option("--rhs-seed", o.rhs_seed, "Seed for the random right-hand side");
    app.add_option("--solver", o.solver, "lsqr or gmres")->check(CLI::IsMember({"lsqr", "gmres"}));
    app.add_option("--first-level", o.first_level, "asm or ras")->check(CLI::IsMember({"asm", "ras"}));
    app.add_option("--second-level", o.second_level, "none, additive, balanced or deflated")
        ->check(CLI::IsMember({"none", "additive", "balanced", "deflated"}));
    app.add_option("--tau", o.tau, "Eigenvalue threshold parameter")->check(CLI::PositiveNumber);
    app.add_option("--cap", o.cap, "Maximum eigenpairs per subdomain")->check(CLI::NonNegativeNumber);
    app.add_option("--subdomains,-N", o.subdomains, "Number of subdomains")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Partitioner seed");
    app.add_option("--threads", o.threads, "Worker threads for setup and apply")->check(CLI::PositiveNumber);
    app.add_flag("--allow-any-pairing", o.allow_any_pairing, "Allow balanced+RAS and deflated+ASM");
    app.add_option("--tol", o.tol, "Relative stopping tolerance");
    app.add_option("--maxit", o.maxit, "Maximum iterations");
    app.add_option("--restart", o.restart, "GMRES restart length");
    app.add_option("--partition", o.partition, "Partition file, one 0-based id per column");
    app.add_option("--report", o.report, "JSON report path");
    app.add_option("--residual-csv", o.residual_csv, "Residual history CSV path");
    app.add_flag("--verify-bounds", o.verify_bounds, "Estimate kappa(M C) and check the condition bound");
    app.add_option("--lanczos-steps", o.lanczos_steps, "Lanczos steps for --verify-bounds");

    auto* solve = app.add_subcommand("solve", "Set up the preconditioner and solve once");

    auto* sweep = app.add_subcommand("sweep", "One run per value along an axis, aggregated as CSV");
    std::string axis = "tau";
    std::vector<std::string> values;
    std::string sweep_output;
    sweep->add_option("--axis", axis, "tau, N or variant")->check(CLI::IsMember({"tau", "N", "variant"}));
    sweep->add_option("--values", values, "Axis values (default tau list when omitted)");
    sweep->add_option("--output", sweep_output, "CSV path (stdout when omitted)");

    auto* generate = app.add_subcommand("generate", "Write a test matrix in Matrix Market format");
    std::string kind = "grid";
    lsdd::Index rows = 300, cols = 200, nnz_per_col = 4, nx = 30, ny = 30;
    double contrast = 1e3;
    std::uint64_t gen_seed = 0;
    std::string gen_output;
    generate->add_option("--kind", kind, "example, random, grid or difference")
        ->check(CLI::IsMember({"example", "random", "grid", "difference"}));
    generate->add_option("--rows", rows, "Rows (random)");
    generate->add_option("--cols", cols, "Columns (random, difference)");
    generate->add_option("--nnz-per-col", nnz_per_col, "Entries per column (random)");
    generate->add_option("--nx", nx, "Grid width (grid)");
    generate->add_option("--ny", ny, "Grid height (grid)");
    generate->add_option("--contrast", contrast, "Edge weight contrast (grid)");
    generate->add_option("--gen-seed", gen_seed, "Generator seed");
    generate->add_option("--output", gen_output, "Output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) {
            lsdd::SparseMatrix A;
            if (kind == "example") A = lsdd::worked_example();
            if (kind == "random") A = lsdd::random_sparse(rows, cols, nnz_per_col, gen_seed);
            if (kind == "grid") A = lsdd::grid_gradient(nx, ny, gen_seed, contrast);
            if (kind == "difference") A = lsdd::difference_1d(cols);
            lsdd::write_matrix_market(gen_output, A);
            return 0;
        }

        if (o.matrix.empty()) {
            std::cerr << "error: --matrix is required\n";
            return 2;
        }
        const lsdd::RunConfig config = to_run_config(o);

        if (*solve) {
            const lsdd::RunOutcome outcome = lsdd::run(config);
            print_summary(outcome.report);
            return outcome.exit_code;
        }

        if (values.empty()) {
            if (axis != "tau") {
                std::cerr << "error: --values is required for axis " << axis << '\n';
                return 2;
            }
            values = {"0.01275", "0.02", "0.05", "0.1", "0.4", "0.6"};
        }
        const auto table = lsdd::sweep(config, lsdd::parse_sweep_axis(axis), values);
        if (sweep_output.empty()) {
            lsdd::write_sweep_csv(std::cout, table);
        } else {
            std::ofstream out(sweep_output);
            if (!out) {
                std::cerr << "error: cannot write " << sweep_output << '\n';
                return 2;
            }
            lsdd::write_sweep_csv(out, table);
        }
        return 0;
    } catch (const lsdd::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
