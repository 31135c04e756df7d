#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lsdd/generators.hpp"
#include "lsdd/harness.hpp"
#include "lsdd/matrix_market.hpp"

using namespace lsdd;
using nlohmann::json;

namespace {

const std::filesystem::path kData = LSDD_TEST_DATA;

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

void expect_schema(const json& r) {
    for (const char* key : {"matrix", "config", "decomposition", "setup", "solve", "bounds", "timings", "error"}) {
        EXPECT_TRUE(r.contains(key)) << key;
    }
    for (const char* key : {"n0", "k_m", "k_c_greedy", "eigenpairs", "warnings"}) EXPECT_TRUE(r["setup"].contains(key));
    for (const char* key : {"iterations", "stop_reason", "residual_history"}) EXPECT_TRUE(r["solve"].contains(key));
    for (const char* key : {"partition", "eigensolve", "setup", "solve"}) EXPECT_TRUE(r["timings"].contains(key));
    for (const char* key : {"theoretical_bound", "kappa_est", "verified"}) EXPECT_TRUE(r["bounds"].contains(key));
}

json without_timings(json r) {
    r.erase("timings");
    return r;
}

}  // namespace

TEST(Run, IdentityConvergesInOneIteration) {
    const auto path = temp("lsdd_identity.mtx");
    write_matrix_market(path, SparseMatrix::identity(6));
    for (auto second : {SecondLevel::none, SecondLevel::balanced}) {
        RunConfig c;
        c.matrix_path = path;
        c.preconditioner.subdomains = 2;
        c.preconditioner.second_level = second;
        const auto out = run(c);
        EXPECT_EQ(out.exit_code, 0);
        EXPECT_EQ(out.report["solve"]["iterations"], 1);
        expect_schema(out.report);
    }
}

TEST(Run, WorkedExampleReportsSets) {
    RunConfig c;
    c.matrix_path = kData / "worked_example.mtx";
    c.partition_file = kData / "worked_partition.txt";
    c.preconditioner.subdomains = 2;
    c.report_path = temp("lsdd_worked_report.json");
    const auto out = run(c);
    ASSERT_TRUE(out.report["error"].is_null()) << out.report["error"];
    const auto& subs = out.report["decomposition"]["subdomains"];
    ASSERT_EQ(subs.size(), 2u);
    EXPECT_EQ(subs[0]["interior"], json({1, 3}));
    EXPECT_EQ(subs[0]["rows"], json({1, 2, 3}));
    EXPECT_EQ(subs[0]["boundary"], json({2}));
    EXPECT_EQ(subs[1]["interior"], json({2, 4}));
    EXPECT_EQ(subs[1]["rows"], json({2, 4, 5}));
    EXPECT_EQ(subs[1]["boundary"], json({1}));
    EXPECT_EQ(subs[0]["unity_weights"], json({1.0, 1.0, 0.0}));

    std::ifstream in(*c.report_path);
    const json written = json::parse(in);
    EXPECT_EQ(written["decomposition"], out.report["decomposition"]);
}

TEST(Run, MissingFileIsExitTwo) {
    RunConfig c;
    c.matrix_path = "/nonexistent/matrix.mtx";
    c.report_path = temp("lsdd_missing_report.json");
    const auto out = run(c);
    EXPECT_EQ(out.exit_code, 2);
    expect_schema(out.report);
    EXPECT_FALSE(out.report["error"].is_null());
}

TEST(Run, WrongRhsLengthIsExitTwo) {
    RunConfig c;
    c.matrix_path = kData / "worked_example.mtx";
    c.preconditioner.subdomains = 2;
    const auto rhs = temp("lsdd_short_rhs.txt");
    write_vector(rhs, Vector{1, 2, 3});
    c.rhs_path = rhs;
    EXPECT_EQ(run(c).exit_code, 2);
}

TEST(Run, NonConvergenceKeepsSchema) {
    const auto A = grid_gradient(15, 15, 2);
    RunConfig c;
    c.maxit = 2;
    c.residual_csv_path = temp("lsdd_residuals.csv");
    const auto out = run_problem(A, random_vector(A.nrows(), 1), c);
    EXPECT_EQ(out.exit_code, 1);
    EXPECT_EQ(out.report["solve"]["stop_reason"], "maxit");
    expect_schema(out.report);
    std::ifstream csv(*c.residual_csv_path);
    std::string header;
    std::getline(csv, header);
    EXPECT_EQ(header, "iteration,residual,normal_residual");
    int lines = 0;
    for (std::string line; std::getline(csv, line);) ++lines;
    EXPECT_EQ(lines, 3);
}

TEST(Run, GmresAndBounds) {
    const auto A = grid_gradient(10, 10, 2);
    RunConfig c;
    c.solver = SolverKind::gmres;
    c.preconditioner.first_level = FirstLevel::RAS;
    c.preconditioner.second_level = SecondLevel::deflated;
    c.verify_bounds = true;
    const auto out = run_problem(A, random_vector(A.nrows(), 1), c);
    EXPECT_EQ(out.exit_code, 0);
    EXPECT_TRUE(out.report["bounds"]["verified"].get<bool>());
}

TEST(Run, DeterministicReport) {
    const auto A = grid_gradient(12, 12, 9);
    const auto b = random_vector(A.nrows(), 3);
    RunConfig c;
    c.preconditioner.seed = 4;
    EXPECT_EQ(without_timings(run_problem(A, b, c).report), without_timings(run_problem(A, b, c).report));
}

TEST(Sweep, SingleValueMatchesRun) {
    const auto A = grid_gradient(12, 12, 1);
    const auto b = random_vector(A.nrows(), 2);
    RunConfig c;
    c.preconditioner.tau = 0.1;
    const auto rows = sweep(A, b, c, SweepAxis::tau, {"0.1"});
    ASSERT_EQ(rows.size(), 1u);
    const auto single = run_problem(A, b, c).report;
    EXPECT_EQ(rows[0].n0, single["setup"]["n0"].get<Index>());
    EXPECT_EQ(rows[0].iterations, single["solve"]["iterations"].get<Index>());
    EXPECT_EQ(rows[0].status, "converged");
}

TEST(Sweep, SubdomainAxisNZeroMatchesStats) {
    const auto A = grid_gradient(25, 20, 5);
    const auto b = random_vector(A.nrows(), 2);
    const std::vector<std::string> values{"1", "2", "4", "8"};
    const auto rows = sweep(A, b, RunConfig{}, SweepAxis::subdomains, values);
    ASSERT_EQ(rows.size(), values.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        RunConfig c;
        c.preconditioner.subdomains = std::stoll(values[k]);
        const auto r = run_problem(A, b, c).report;
        Index sum = 0;
        for (const auto& p : r["setup"]["eigenpairs"]) sum += p.get<Index>();
        sum -= static_cast<Index>(r["setup"]["dropped_columns"].size());
        EXPECT_EQ(rows[k].n0, sum);
    }
}

TEST(Sweep, VariantAxisAndFailuresRecorded) {
    const auto A = grid_gradient(12, 12, 3);
    const auto b = random_vector(A.nrows(), 2);
    const auto rows = sweep(A, b, RunConfig{}, SweepAxis::variant, {"asm", "balanced", "bogus"});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_LE(rows[1].iterations, rows[0].iterations);
    EXPECT_EQ(rows[2].status.rfind("error", 0), 0u);

    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    EXPECT_EQ(csv.str().substr(0, csv.str().find('\n')), "value,n0,iterations,setup_time,solve_time,status");
}

TEST(Sweep, TauAxisNZeroMonotone) {
    const auto A = grid_gradient(16, 16, 4);
    const auto b = random_vector(A.nrows(), 2);
    const auto rows = sweep(A, b, RunConfig{}, SweepAxis::tau, {"0.01275", "0.02", "0.05", "0.1", "0.4", "0.6"});
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GE(rows[k].n0, rows[k - 1].n0);
}
