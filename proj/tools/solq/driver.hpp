#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "solq/cdr.hpp"
#include "solq/error.hpp"
#include "solq/relation.hpp"

namespace solq::cli {

enum class BackendKind { Brute, MznEmit, MznSolve };
enum class OutputFormat { Table, Csv, Json };

struct RunConfig {
  std::string program_path;
  BackendKind backend = BackendKind::Brute;
  OutputFormat format = OutputFormat::Table;
  std::uint64_t cap = kDefaultCap;
  unsigned jobs = 1;
  std::optional<std::string> solver_path;
  std::optional<std::string> output_path;
};

// Parses, elaborates and executes the program. Returns the exit status:
// 0 success, 1 user error, 2 evaluation failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// --solver-path, then $SOLQ_SOLVER, then solq-minizinc on PATH.
std::optional<std::string> find_solver(const RunConfig& config);

std::string render_error(const Error& e, const std::string& file);

struct Sink {
  std::string name;
  Schema schema;
  std::vector<Tuple> tuples;
  std::optional<std::string> status;
};

std::string format_table(const Sink& s);
std::string format_csv(const Sink& s);
std::string format_json(const std::vector<Sink>& sinks);

}  // namespace solq::cli
