#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "solq/cdr.hpp"
#include "solq/expr.hpp"
#include "solq/relation.hpp"
#include "solq/solset.hpp"

namespace solq {

// Relation whose cells are expressions: constants, symbolic references to
// flat attributes, or symbolic terms built from them.
struct SymbolicRelation {
  std::vector<std::string> attrs;
  std::vector<std::vector<Expr>> rows;

  std::optional<std::size_t> index(const std::string& a) const;
  std::string to_string() const;
};

struct QueryMeta {
  std::optional<adr::Direction> direction;
  std::optional<Expr> objective;  // over flat attributes
  std::string objective_name;
  std::optional<std::size_t> limit;
  // Per-base-tuple objective terms when the objective is a plain sum over
  // the candidate; used for the objective column of the result.
  std::vector<Expr> row_objective;
};

struct FlatForm {
  CompleteRelation flat;
  SymbolicRelation symI;
  Schema base_schema;
  Schema decision_schema;
  std::vector<std::string> decision_attrs;
  // flat_names[i][j]: flat attribute of decision attribute j for base tuple i.
  std::vector<std::vector<std::string>> flat_names;
  std::map<Tuple, std::size_t, TupleLess> base_index;
  QueryMeta meta;
};

namespace phi {

CompleteRelation build_flat(const SolutionSet& u);
SymbolicRelation build_symI(const SolutionSet& u);

// Singleton symbolic relation over R: matched attributes become <a>,
// dependents become lookups keyed by the matched attributes.
SymbolicRelation encode_fd_lookup(const Relation& r, const std::vector<std::string>& matched);

// Translation context: the symbolic candidate the expression is read against.
struct Context {
  const SymbolicRelation* candidate = nullptr;
};

SymbolicRelation translate_iexpr(const IExpr& e, const Context& ctx);
// Boolean expression (over SymRefs) equivalent to chi on the context's candidate.
Expr translate_chi_expr(const ChiExpr& chi, const Context& ctx);

FlatForm translate(const SolutionSet& u);
FlatForm translate(const RankedQuery& q);

}  // namespace phi
}  // namespace solq
