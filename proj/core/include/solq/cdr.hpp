#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solq/expr.hpp"
#include "solq/relation.hpp"
#include "solq/schema.hpp"

namespace solq {

// Complete domain relation: schema plus characteristic function chi.
class CompleteRelation {
 public:
  CompleteRelation() = default;
  CompleteRelation(std::string name, Schema schema, Expr chi)
      : name_(std::move(name)), schema_(std::move(schema)), chi_(std::move(chi)) {}

  const std::string& name() const { return name_; }
  const Schema& schema() const { return schema_; }
  const Expr& chi() const { return chi_; }
  CompleteRelation with_name(std::string name) const {
    return CompleteRelation(std::move(name), schema_, chi_);
  }

 private:
  std::string name_;
  Schema schema_;
  Expr chi_;
};

inline constexpr std::uint64_t kDefaultCap = 10'000'000;

struct SearchOptions {
  std::uint64_t cap = kDefaultCap;
  // Relative tolerance when verifying float equalities after pinning.
  double float_tolerance = 1e-9;
};

// Satisfying tuples of chi over schema that agree with `fixed` (one entry
// per schema attribute). Splits top-level disjunctions, pins attributes
// through equality propagation, enumerates the remaining finite domains.
// Throws Unbounded when an infinite attribute stays undetermined.
std::vector<Tuple> solve_cdr(const Schema& schema, const Expr& chi,
                             const std::vector<std::optional<Value>>& fixed,
                             const SearchOptions& opts = {});

// Solves `side = target` for attribute x when x occurs in side exactly once
// under + - * / and negation. Other attributes must already be substituted.
std::optional<Expr> isolate(const Expr& side, const std::string& x, const Expr& target);

namespace cdr {

enum class Combine { Join, Cross, Intersect, Difference, Union };

CompleteRelation construct(std::string name, Schema schema, Expr chi = Expr::boolean(true));
CompleteRelation combine(Combine kind, const CompleteRelation& c, const CompleteRelation& d);
CompleteRelation select(const Expr& theta, const CompleteRelation& c);
CompleteRelation rename(const RenameSpec& spec, const CompleteRelation& c);

// chi = OR over tuples of AND over attr = value.
CompleteRelation from_adr(const Relation& r);
// As from_adr, with each attribute's domain narrowed to the column's values
// so the relation can serve as a finite decision domain.
CompleteRelation decision_from_adr(const Relation& r);

struct ProjectOptions {
  std::vector<adr::OrderKey> order;
  std::optional<std::size_t> limit;
  std::uint64_t cap = kDefaultCap;
};

Relation project_eval(const std::vector<std::string>& attrs, const CompleteRelation& c,
                      const ProjectOptions& opts = {});

// Extends each tuple of r with the completions of c determined by the
// shared attributes.
Relation join_adr(const Relation& r, const CompleteRelation& c, std::uint64_t cap = kDefaultCap);

using ProbeDomains = std::map<std::string, std::vector<Value>>;

bool equivalent(const CompleteRelation& c, const CompleteRelation& d, const ProbeDomains& probes);

}  // namespace cdr
}  // namespace solq
