#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "solq/driver.hpp"

int main(int argc, char** argv) {
  using solq::cli::BackendKind;
  using solq::cli::OutputFormat;

  CLI::App app{"solq: solution-set relational algebra"};
  app.require_subcommand(1);

  solq::cli::RunConfig cfg;
  std::string output;
  std::string solver;
  auto* run = app.add_subcommand("run", "Execute a program and print its run directives");
  run->add_option("program", cfg.program_path, "Program file (.ra)")->required()->check(CLI::ExistingFile);
  const std::map<std::string, BackendKind> backends{
      {"brute", BackendKind::Brute}, {"mzn-emit", BackendKind::MznEmit}, {"mzn-solve", BackendKind::MznSolve}};
  run->add_option("--backend", cfg.backend, "brute | mzn-emit | mzn-solve")
      ->transform(CLI::CheckedTransformer(backends, CLI::ignore_case));
  const std::map<std::string, OutputFormat> formats{
      {"table", OutputFormat::Table}, {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}};
  run->add_option("--format", cfg.format, "table | csv | json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  run->add_option("-o,--output", output, "Write output to a file instead of stdout");
  run->add_option("--cap", cfg.cap, "Enumeration cap for brute force and finite projections")
      ->check(CLI::PositiveNumber);
  run->add_option("--jobs", cfg.jobs, "Worker threads for brute-force search")->check(CLI::Range(1u, 256u));
  run->add_option("--solver-path", solver, "Solver executable for mzn-solve (default: $SOLQ_SOLVER)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (!output.empty()) cfg.output_path = output;
  if (!solver.empty()) cfg.solver_path = solver;
  return solq::cli::run(cfg, std::cout, std::cerr);
}
