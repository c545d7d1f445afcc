#pragma once

#include <map>
#include <string>
#include <string_view>

#include "solq/eval.hpp"

namespace solq::mzn {

struct MznModel {
  std::string source;
  std::map<std::string, std::string> var_names;  // flat attribute -> identifier
  Schema flat_schema;
};

// Legal MiniZinc identifier for a name: case kept, other characters
// replaced by '_', reserved words suffixed with "_v".
std::string mangle(std::string_view name);

MznModel emit(const FlatForm& ff);

// Parses {"candidates": [...], "status": "..."} into an outcome keyed by
// flat attribute names.
EvalOutcome parse_solver_result(std::string_view text, const MznModel& model);

// Runs `<solver> [--all | --limit k] <model.mzn>` and parses its stdout.
class SolverBackend : public Backend {
 public:
  explicit SolverBackend(std::string solver_path) : path_(std::move(solver_path)) {}
  EvalOutcome solve(const FlatForm& ff) override;

 private:
  std::string path_;
};

}  // namespace solq::mzn
