#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solq/expr.hpp"
#include "solq/schema.hpp"

namespace solq {

struct DnfLiteral {
  std::string attr;
  bool equal = true;  // attr = value, or attr != value
  Value value;
};

using DnfConjunct = std::vector<DnfLiteral>;

struct Dnf {
  std::vector<DnfConjunct> disjuncts;  // empty = False; one empty conjunct = True
};

inline constexpr std::size_t kDnfLimit = 1'000'000;

// Normalizes e (=, !=, AND, OR, NOT over attribute/constant atoms, bare
// Bool attributes) into a disjunction of literal conjunctions. Conflicting
// equalities drop the disjunct. Throws Type "not DNF-convertible" otherwise.
Dnf dnf_terms(const Expr& e, const Schema& schema, std::size_t limit = kDnfLimit);
Expr dnf_to_expr(const Dnf& dnf, const Schema& schema);
Expr to_dnf(const Expr& e, const Schema& schema, std::size_t limit = kDnfLimit);

// True iff e is a disjunction of conjunctions equating every schema
// attribute to a constant exactly once per disjunct. False qualifies.
bool is_adr_dnf(const Expr& e, const Schema& schema);

}  // namespace solq
