#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "solq/driver.hpp"
#include "support.hpp"

using namespace solq;
using solq::cli::BackendKind;
using solq::cli::OutputFormat;
using solq::cli::RunConfig;
using solq::test::program_path;
using solq::test::read_text;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(RunConfig cfg) {
  std::ostringstream out, err;
  int code = cli::run(cfg, out, err);
  return {code, out.str(), err.str()};
}

Result run_program(const std::string& name, BackendKind backend = BackendKind::Brute,
                   OutputFormat format = OutputFormat::Table) {
  RunConfig cfg;
  cfg.program_path = program_path(name);
  cfg.backend = backend;
  cfg.format = format;
  return run(cfg);
}

std::filesystem::path scratch_dir() {
  auto p = std::filesystem::temp_directory_path() / ("solq-cli-" + std::to_string(::getpid()));
  std::filesystem::create_directories(p);
  return p;
}

Result run_source(const std::string& source, RunConfig cfg = {}) {
  auto path = scratch_dir() / "prog.ra";
  std::ofstream(path) << source;
  cfg.program_path = path.string();
  return run(cfg);
}

}  // namespace

TEST(Cli, LatinTableIsGolden) {
  Result r = run_program("latin.ra");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_text(std::string(SOLQ_TESTS_DIR) + "/golden/latin.txt"));
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, UnicodeProgramPrintsTheSameTable) {
  EXPECT_EQ(run_program("latin_unicode.ra").out, run_program("latin.ra").out);
}

TEST(Cli, CakesTable) {
  Result r = run_program("cakes.ra");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "LetsMakeBatch\n"
            "+-----------+-----+--------+\n"
            "| cake      | qty | profit |\n"
            "+-----------+-----+--------+\n"
            "| Banana    | 2   | 800    |\n"
            "| Chocolate | 2   | 900    |\n"
            "+-----------+-----+--------+\n");
}

TEST(Cli, GstTableAndCheck) {
  Result r = run_program("gst.ra");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("| 55.0  | 5.0  | 50.0  |"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("| 110.0 | 10.0 | 100.0 |"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("check GST == GST2: true"), std::string::npos);
}

TEST(Cli, CsvFormat) {
  Result r = run_program("cakes.ra", BackendKind::Brute, OutputFormat::Csv);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "cake,qty,profit\nBanana,2,800\nChocolate,2,900\n");
}

TEST(Cli, CsvQuotesFields) {
  RunConfig cfg;
  cfg.format = OutputFormat::Csv;
  Result r = run_source("R := omega[s: TEXT]{('a,b'), ('say \"hi\"')}\nrun R\n", cfg);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "s\n\"a,b\"\n\"say \"\"hi\"\"\"\n");
}

TEST(Cli, JsonFormat) {
  Result r = run_program("meal.ra", BackendKind::Brute, OutputFormat::Json);
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["name"], "LetsUsePlans");
  EXPECT_EQ(doc[0]["attributes"], (nlohmann::json{"i", "meal", "recipe"}));
  EXPECT_EQ(doc[0]["tuples"].size(), 36u);
  EXPECT_EQ(doc[0]["status"], "SATISFIED");
  EXPECT_EQ(doc[0]["tuples"][0]["i"], 1);
}

TEST(Cli, MznEmitEnergy) {
  Result r = run_program("energy.ra", BackendKind::MznEmit);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, read_text(std::string(SOLQ_TESTS_DIR) + "/golden/energy.mzn"));
}

TEST(Cli, EnergyBruteForceIsUnbounded) {
  Result r = run_program("energy.ra");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("energy.ra:"), std::string::npos);
}

TEST(Cli, EmptyProgram) {
  Result r = run_program("empty.ra");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(r.err.empty());
}

TEST(Cli, SyntaxErrorExitsOne) {
  Result r = run_source("R := omega[q: INT]{(1)}\nY := select[q > ](R)\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("prog.ra:2:17: syntax error: "), std::string::npos) << r.err;
}

TEST(Cli, DataErrorExitsOne) {
  std::ofstream(scratch_dir() / "stock.csv") << "item,qty\napple,3\npear,-1\n";
  Result r = run_source("load S[item: TEXT, qty: 0..100] from \"stock.csv\"\nrun S\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("row 2"), std::string::npos) << r.err;
}

TEST(Cli, MissingProgramExitsOne) {
  RunConfig cfg;
  cfg.program_path = "/nonexistent/program.ra";
  EXPECT_EQ(run(cfg).code, 1);
}

TEST(Cli, FalseCheckExitsTwo) {
  Result r = run_source("A := omega[x: 1..3]{(1)}\nB := omega[x: 1..3]{(2)}\ncheck A == B\n");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("evaluation error"), std::string::npos) << r.err;
}

TEST(Cli, CapExceededExitsTwo) {
  RunConfig cfg;
  cfg.program_path = program_path("cakes.ra");
  cfg.cap = 100;
  EXPECT_EQ(run(cfg).code, 2);
}

TEST(Cli, OutputFile) {
  auto path = scratch_dir() / "out.txt";
  RunConfig cfg;
  cfg.program_path = program_path("latin.ra");
  cfg.output_path = path.string();
  Result r = run(cfg);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(read_text(path.string()), read_text(std::string(SOLQ_TESTS_DIR) + "/golden/latin.txt"));
}

TEST(Cli, MultipleOutputsAreSeparated) {
  Result r = run_source("A := omega[x: INT]{(1)}\nrun A\nrun A join omega[y: INT]{(2)}\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "A\n+---+\n| x |\n+---+\n| 1 |\n+---+\n"
            "\n"
            "result\n+---+---+\n| x | y |\n+---+---+\n| 1 | 2 |\n+---+---+\n");
}

TEST(Cli, JobsDoNotChangeResults) {
  RunConfig cfg;
  cfg.program_path = program_path("meal.ra");
  Result one = run(cfg);
  cfg.jobs = 3;
  EXPECT_EQ(run(cfg).out, one.out);
}

TEST(Cli, SolveWithFakeSolver) {
  auto doc = scratch_dir() / "result.json";
  std::ofstream(doc) << R"({"candidates": [{"qty1": 2, "qty2": 2}], "status": "OPTIMAL"})";
  setenv("FAKE_SOLVER_OUTPUT", doc.string().c_str(), 1);
  RunConfig cfg;
  cfg.program_path = program_path("cakes.ra");
  cfg.backend = BackendKind::MznSolve;
  cfg.solver_path = std::string(SOLQ_TESTS_DIR) + "/fake_solver.py";
  Result r = run(cfg);
  unsetenv("FAKE_SOLVER_OUTPUT");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, run_program("cakes.ra").out);
}

TEST(Cli, SolverLookupOrder) {
  RunConfig cfg;
  cfg.solver_path = "/explicit/solver";
  setenv("SOLQ_SOLVER", "/env/solver", 1);
  EXPECT_EQ(cli::find_solver(cfg), "/explicit/solver");
  cfg.solver_path.reset();
  EXPECT_EQ(cli::find_solver(cfg), "/env/solver");
  unsetenv("SOLQ_SOLVER");
}

TEST(Cli, SolveWithoutSolverIsUserError) {
  if (std::system("command -v solq-minizinc > /dev/null 2>&1") == 0) GTEST_SKIP() << "solq-minizinc on PATH";
  unsetenv("SOLQ_SOLVER");
  Result r = run_program("cakes.ra", BackendKind::MznSolve);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--solver-path"), std::string::npos);
}

TEST(Cli, EmitWritesModelFile) {
  auto target = scratch_dir() / "latin.mzn";
  Result r = run_source(read_text(program_path("latin.ra")) + "emit LatinSquare to \"" + target.string() + "\"\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_text(target.string()), read_text(std::string(SOLQ_TESTS_DIR) + "/golden/latin.mzn"));
}

TEST(Cli, RenderError) {
  Error e(ErrorKind::Type, "bad", SourcePos{3, 4, 0, 1});
  EXPECT_EQ(cli::render_error(e, "p.ra"), "p.ra:3:4: type error: bad");
  EXPECT_EQ(cli::render_error(Error(ErrorKind::Io, "gone"), "p.ra"), "p.ra: i/o error: gone");
}
