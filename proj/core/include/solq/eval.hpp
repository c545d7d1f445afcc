#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solq/translate.hpp"

namespace solq {

enum class QueryKind { Decision, SatisfactionLimited, SatisfactionAll, Optimization };

struct QueryClass {
  QueryKind kind = QueryKind::SatisfactionAll;
  std::size_t limit = 0;  // SatisfactionLimited, and Optimization when > 0
  adr::Direction direction = adr::Direction::Asc;
  Expr objective;
};

QueryClass classify(const QueryMeta& meta, const CompleteRelation& flat);
const char* query_kind_name(QueryKind k);

enum class Status { Satisfied, Unsatisfiable, Optimal, LimitReached };
const char* status_name(Status s);
std::optional<Status> status_from_name(std::string_view s);

using Assignment = std::map<std::string, Value>;

struct EvalOutcome {
  std::vector<Assignment> candidates;
  Status status = Status::Unsatisfiable;
  std::vector<Value> objective_values;
  std::uint64_t assignments_visited = 0;
};

struct BruteForceOptions {
  std::uint64_t cap = kDefaultCap;
  unsigned jobs = 1;
};

// Enumerates assignments of the flat attributes in lexicographic order
// (last attribute fastest) and applies the query class.
EvalOutcome brute_force_solve(const CompleteRelation& flat, const QueryClass& qc,
                              const BruteForceOptions& opts = {});

bool check_feasible(const CompleteRelation& flat, const Assignment& a);
Value evaluate_objective(const Expr& objective, const Assignment& a);

// Substitutes candidate values back into symI. Columns are `attrs` (base,
// decision or objective names), preceded by rank_attr when given.
Relation reinstantiate(const EvalOutcome& outcome, const FlatForm& ff, const std::vector<std::string>& attrs,
                       const std::optional<std::string>& rank_attr, const std::string& name = "");

class Backend {
 public:
  virtual ~Backend() = default;
  virtual EvalOutcome solve(const FlatForm& ff) = 0;
};

class BruteForceBackend : public Backend {
 public:
  explicit BruteForceBackend(BruteForceOptions opts = {}) : opts_(opts) {}
  EvalOutcome solve(const FlatForm& ff) override;

 private:
  BruteForceOptions opts_;
};

// Translates, solves and reinstantiates a projection. Empty attrs select
// every candidate attribute.
Relation materialize(const SolProjection& p, Backend& backend, const std::string& name = "");

}  // namespace solq
