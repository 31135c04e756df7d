#include "lsdd/harness.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "lsdd/errors.hpp"
#include "lsdd/generators.hpp"
#include "lsdd/matrix_market.hpp"

namespace lsdd {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

json one_based(const IndexSet& set) {
    json out = json::array();
    for (Index k : set) out.push_back(k + 1);
    return out;
}

json config_json(const RunConfig& c) {
    const PreconditionerConfig& p = c.preconditioner;
    json out;
    out["solver"] = to_string(c.solver);
    out["tol"] = c.tol;
    out["maxit"] = c.maxit;
    out["restart"] = c.restart;
    out["rhs"] = c.rhs_path ? json(c.rhs_path->string()) : json("random");
    out["rhs_seed"] = c.rhs_seed;
    out["partition_file"] = c.partition_file ? json(c.partition_file->string()) : json(nullptr);
    out["first_level"] = to_string(p.first_level);
    out["second_level"] = to_string(p.second_level);
    out["tau"] = p.tau;
    out["cap"] = p.cap;
    out["subdomains"] = p.subdomains;
    out["seed"] = p.seed;
    out["threads"] = p.threads;
    out["construction_shift_scale"] = p.construction_shift_scale;
    out["verify_bounds"] = c.verify_bounds;
    return out;
}

json empty_report(const RunConfig& config) {
    json r;
    r["matrix"] = {{"path", config.matrix_path.string()}, {"rows", nullptr}, {"cols", nullptr}, {"nnz", nullptr}};
    r["config"] = config_json(config);
    r["decomposition"] = {{"subdomains", json::array()}};
    r["setup"] = {{"n0", nullptr},
                  {"k_m", nullptr},
                  {"k_c_greedy", nullptr},
                  {"subdomain_sizes", json::array()},
                  {"interior_sizes", json::array()},
                  {"eigenpairs", json::array()},
                  {"construction_shift", nullptr},
                  {"dropped_columns", json::array()},
                  {"warnings", json::array()}};
    r["solve"] = {{"iterations", nullptr},
                  {"stop_reason", nullptr},
                  {"converged", false},
                  {"residual_norm", nullptr},
                  {"ls_residual_norm", nullptr},
                  {"operator_norm_estimate", nullptr},
                  {"message", ""},
                  {"residual_history", json::array()}};
    r["bounds"] = {{"k_m", nullptr},
                   {"k_c_greedy", nullptr},
                   {"tau", config.preconditioner.tau},
                   {"theoretical_bound", nullptr},
                   {"lambda_min_est", nullptr},
                   {"lambda_max_est", nullptr},
                   {"kappa_est", nullptr},
                   {"approximate", nullptr},
                   {"verified", nullptr}};
    r["timings"] = {{"partition", 0.0}, {"eigensolve", 0.0}, {"setup", 0.0}, {"solve", 0.0}};
    r["error"] = nullptr;
    return r;
}

void fill_setup(json& r, const Preconditioner& P) {
    const Decomposition& d = P.decomposition();
    json subs = json::array();
    for (Index i = 0; i < d.count(); ++i) {
        subs.push_back({{"interior", one_based(d.interior[i])},
                        {"boundary", one_based(d.boundary[i])},
                        {"rows", one_based(d.rows[i])},
                        {"unity_weights", d.unity_weights[i]}});
    }
    r["decomposition"]["subdomains"] = std::move(subs);

    const SetupStats& s = P.stats();
    r["setup"] = {{"n0", s.n0},
                  {"k_m", s.k_m},
                  {"k_c_greedy", s.k_c},
                  {"subdomain_sizes", s.subdomain_sizes},
                  {"interior_sizes", s.interior_sizes},
                  {"eigenpairs", s.eigenpairs},
                  {"construction_shift", s.construction_shift},
                  {"dropped_columns", s.dropped_columns},
                  {"warnings", s.warnings}};
    r["bounds"]["k_m"] = s.k_m;
    r["bounds"]["k_c_greedy"] = s.k_c;
    r["bounds"]["theoretical_bound"] = theoretical_bound(s.k_c, s.k_m, P.config().tau);
    r["timings"]["partition"] = s.partition_seconds;
    r["timings"]["eigensolve"] = s.eigensolve_seconds;
    r["timings"]["setup"] = s.setup_seconds;
}

void write_residual_csv(const std::filesystem::path& path, const SolveReport& rep) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out.precision(17);
    const bool normal = !rep.normal_residual_history.empty();
    out << (normal ? "iteration,residual,normal_residual\n" : "iteration,residual\n");
    for (std::size_t k = 0; k < rep.residual_history.size(); ++k) {
        out << k << ',' << rep.residual_history[k];
        if (normal) {
            out << ',';
            if (k < rep.normal_residual_history.size()) out << rep.normal_residual_history[k];
        }
        out << '\n';
    }
}

void write_report(const std::filesystem::path& path, const json& report) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    out << report.dump(2) << '\n';
}

struct Problem {
    SparseMatrix A;
    Vector b;
};

Problem load_problem(const RunConfig& config) {
    Problem p{read_matrix_market(config.matrix_path), {}};
    if (config.rhs_path) {
        p.b = read_vector(*config.rhs_path);
    } else {
        p.b = random_vector(p.A.nrows(), config.rhs_seed);
    }
    return p;
}

RunConfig with_partition(RunConfig config) {
    if (config.partition_file && !config.preconditioner.partition_labels) {
        config.preconditioner.partition_labels = read_partition(*config.partition_file);
    }
    return config;
}

}  // namespace

std::string to_string(SolverKind kind) { return kind == SolverKind::lsqr ? "lsqr" : "gmres"; }

SolverKind parse_solver(const std::string& name) {
    if (name == "lsqr") return SolverKind::lsqr;
    if (name == "gmres") return SolverKind::gmres;
    throw InputError("unknown solver '" + name + "' (expected lsqr or gmres)");
}

RunOutcome run_problem(const SparseMatrix& A, std::span<const double> b, const RunConfig& config) {
    RunOutcome outcome;
    json& r = outcome.report;
    r = empty_report(config);
    r["matrix"]["rows"] = A.nrows();
    r["matrix"]["cols"] = A.ncols();
    r["matrix"]["nnz"] = A.nnz();
    if (static_cast<Index>(b.size()) != A.nrows()) {
        r["error"] = "right-hand side has " + std::to_string(b.size()) + " entries, matrix has " +
                     std::to_string(A.nrows()) + " rows";
        outcome.exit_code = 2;
        return outcome;
    }

    std::optional<Preconditioner> P;
    try {
        P = Preconditioner::setup(A, config.preconditioner);
    } catch (const InputError& e) {
        r["error"] = e.what();
        outcome.exit_code = 2;
        return outcome;
    } catch (const std::exception& e) {
        r["error"] = e.what();
        outcome.exit_code = 1;
        return outcome;
    }
    fill_setup(r, *P);

    const auto solve_start = Clock::now();
    SolveResult result;
    if (config.solver == SolverKind::lsqr) {
        LsqrOptions options;
        options.tol = config.tol;
        options.maxit = config.maxit;
        result = lsqr(A, b, P->as_operator(), options);
    } else {
        GmresOptions options;
        options.tol = config.tol;
        options.maxit = config.maxit;
        options.restart = config.restart;
        const Vector rhs = spmv_transpose(A, b);
        result = gmres(normal_operator(A), rhs, P->as_operator(), options);
    }
    r["timings"]["solve"] = std::chrono::duration<double>(Clock::now() - solve_start).count();

    const SolveReport& rep = result.report;
    const Vector Ax = spmv(A, result.x);
    double ls = 0.0;
    for (std::size_t i = 0; i < Ax.size(); ++i) ls += (Ax[i] - b[i]) * (Ax[i] - b[i]);
    r["solve"] = {{"iterations", rep.iterations},
                  {"stop_reason", to_string(rep.stop_reason)},
                  {"converged", rep.stop_reason == StopReason::converged},
                  {"residual_norm", rep.residual_history.back()},
                  {"ls_residual_norm", std::sqrt(ls)},
                  {"operator_norm_estimate", rep.operator_norm_estimate},
                  {"message", rep.message},
                  {"residual_history", rep.residual_history}};

    if (config.verify_bounds) {
        const BoundReport bounds = verify_condition_bound(*P, config.lanczos_steps);
        r["bounds"]["lambda_min_est"] = bounds.lambda_min_est;
        r["bounds"]["lambda_max_est"] = bounds.lambda_max_est;
        r["bounds"]["kappa_est"] = bounds.kappa_est;
        r["bounds"]["approximate"] = bounds.approximate;
        r["bounds"]["verified"] = bounds.verified;
    }
    if (config.residual_csv_path) write_residual_csv(*config.residual_csv_path, rep);
    outcome.exit_code = rep.stop_reason == StopReason::converged ? 0 : 1;
    return outcome;
}

RunOutcome run(const RunConfig& config) {
    RunOutcome outcome;
    try {
        const Problem p = load_problem(config);
        outcome = run_problem(p.A, p.b, with_partition(config));
    } catch (const InputError& e) {
        outcome.report = empty_report(config);
        outcome.report["error"] = e.what();
        outcome.exit_code = 2;
    }
    if (config.report_path) {
        try {
            write_report(*config.report_path, outcome.report);
        } catch (const InputError&) {
            outcome.exit_code = 2;
        }
    }
    return outcome;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::tau: return "tau";
        case SweepAxis::subdomains: return "N";
        case SweepAxis::variant: return "variant";
    }
    return "tau";
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "tau") return SweepAxis::tau;
    if (name == "N" || name == "subdomains") return SweepAxis::subdomains;
    if (name == "variant") return SweepAxis::variant;
    throw InputError("unknown sweep axis '" + name + "' (expected tau, N or variant)");
}

namespace {

void apply_axis_value(RunConfig& config, SweepAxis axis, const std::string& value) {
    PreconditionerConfig& p = config.preconditioner;
    switch (axis) {
        case SweepAxis::tau:
            p.tau = std::stod(value);
            break;
        case SweepAxis::subdomains:
            p.subdomains = std::stoll(value);
            break;
        case SweepAxis::variant:
            if (value == "asm" || value == "ras") {
                p.first_level = parse_first_level(value);
                p.second_level = SecondLevel::none;
            } else {
                p.second_level = parse_second_level(value);
                p.first_level = p.second_level == SecondLevel::deflated ? FirstLevel::RAS : FirstLevel::ASM;
            }
            break;
    }
}

}  // namespace

std::vector<SweepRow> sweep(const SparseMatrix& A, std::span<const double> b, const RunConfig& base,
                            SweepAxis axis, const std::vector<std::string>& values) {
    if (values.empty()) throw InputError("sweep needs at least one value");
    std::vector<SweepRow> rows;
    for (const std::string& value : values) {
        SweepRow row;
        row.value = value;
        try {
            RunConfig config = base;
            config.residual_csv_path.reset();
            config.report_path.reset();
            apply_axis_value(config, axis, value);
            const RunOutcome outcome = run_problem(A, b, config);
            const json& r = outcome.report;
            if (!r["error"].is_null()) {
                row.status = "error: " + r["error"].get<std::string>();
            } else {
                row.n0 = r["setup"]["n0"].get<Index>();
                row.iterations = r["solve"]["iterations"].get<Index>();
                row.status = r["solve"]["stop_reason"].get<std::string>();
            }
            row.setup_seconds = r["timings"]["setup"].get<double>();
            row.solve_seconds = r["timings"]["solve"].get<double>();
        } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis,
                            const std::vector<std::string>& values) {
    const Problem p = load_problem(base);
    return sweep(p.A, p.b, with_partition(base), axis, values);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "value,n0,iterations,setup_time,solve_time,status\n";
    for (const SweepRow& row : rows) {
        std::string status = row.status;
        for (char& ch : status) {
            if (ch == ',' || ch == '\n') ch = ';';
        }
        out << row.value << ',' << row.n0 << ',' << row.iterations << ',' << row.setup_seconds << ','
            << row.solve_seconds << ',' << status << '\n';
    }
}

}  // namespace lsdd
