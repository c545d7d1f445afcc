#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solq/cdr.hpp"
#include "solq/expr.hpp"
#include "solq/relation.hpp"

namespace solq {

enum class IExprKind { Candidate, Data, Cdr, Join, Select, Project, Rename, GroupAgg };

struct IExprNode;

// Relational expression over the candidate relation of a solution set.
class IExpr {
 public:
  static IExpr candidate();
  static IExpr data(Relation r);
  static IExpr cdr(CompleteRelation c);
  static IExpr join(IExpr l, IExpr r);
  static IExpr select(Expr theta, IExpr in);
  static IExpr project(std::vector<std::string> attrs, IExpr in);
  static IExpr rename(RenameSpec spec, IExpr in);
  static IExpr group(std::vector<std::string> group, std::vector<adr::AggSpec> specs, IExpr in);

  IExprKind kind() const;
  const Relation& relation() const;
  const CompleteRelation& complete() const;
  const IExpr& left() const;
  const IExpr& right() const;
  const IExpr& input() const { return left(); }
  const Expr& predicate() const;
  const std::vector<std::string>& attrs() const;
  const RenameSpec& renames() const;
  const std::vector<adr::AggSpec>& specs() const;

  bool contains_candidate() const;
  std::string to_string() const;

 private:
  explicit IExpr(std::shared_ptr<const IExprNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const IExprNode> n_;
};

enum class ChiKind { Const, Atom, And, Or, Not, ForAll };

// Boolean tree over aggregate atoms. An atom is an IExpr rooted at
// gamma[][spec -> name] producing a single boolean.
class ChiExpr {
 public:
  ChiExpr();
  static ChiExpr constant(bool b);
  static ChiExpr atom(IExpr e);
  static ChiExpr conj(ChiExpr a, ChiExpr b);
  static ChiExpr disj(ChiExpr a, ChiExpr b);
  static ChiExpr negate(ChiExpr a);
  // Holds iff child holds on every partition of the candidate by attrs.
  static ChiExpr for_all(std::vector<std::string> attrs, ChiExpr child);

  ChiKind kind() const { return kind_; }
  bool value() const { return value_; }
  const IExpr& iexpr() const { return *atom_; }
  const std::vector<ChiExpr>& kids() const { return kids_; }
  const std::vector<std::string>& attrs() const { return attrs_; }

  bool is_conjunctive() const;
  std::string to_string() const;

 private:
  ChiKind kind_ = ChiKind::Const;
  bool value_ = true;
  std::shared_ptr<const IExpr> atom_;
  std::vector<ChiExpr> kids_;
  std::vector<std::string> attrs_;
};

struct SolutionSet {
  std::string name;
  Relation base;
  CompleteRelation decision;
  ChiExpr chi;

  Schema candidate_schema() const;
};

struct Objective {
  adr::Direction dir = adr::Direction::Asc;
  IExpr atom;  // gamma[][orderable spec -> name](...)
};

struct RankedQuery {
  SolutionSet set;
  std::optional<Objective> objective;
  std::optional<std::size_t> limit;
};

struct SolProjection {
  RankedQuery query;
  std::optional<std::string> rank_attr;
  std::vector<std::string> attrs;
};

namespace sol {

enum class AttrCategory { Constant, Decision };

struct IExprShape {
  std::vector<std::string> attrs;
  std::vector<AttrCategory> category;
  bool has(const std::string& a) const;
  AttrCategory of(const std::string& a) const;
};

// Output attributes of e over U's candidate with their dependence on
// decision values. Enforces the IExpr restrictions: selections and
// groupings only over constant attributes, at most one candidate operand
// per join.
IExprShape shape(const IExpr& e, const SolutionSet& u);

// Checks an atom's form; `boolean` selects chi atoms versus objectives.
void check_atom(const IExpr& atom, const SolutionSet& u, bool boolean);
void check_chi(const ChiExpr& chi, const SolutionSet& u);

SolutionSet construct(std::optional<Relation> base = std::nullopt,
                      std::optional<CompleteRelation> decision = std::nullopt,
                      ChiExpr chi = ChiExpr::constant(true));
SolutionSet select(const ChiExpr& theta, const SolutionSet& u);
SolutionSet join(const SolutionSet& u, const SolutionSet& v);
SolutionSet cross(const SolutionSet& u, const SolutionSet& v);

enum class SetOp { Union, Intersect, Difference };
SolutionSet set_op(SetOp op, const SolutionSet& u, const SolutionSet& v);
SolutionSet rename(const RenameSpec& spec, const SolutionSet& u);

// Rescopes chi over a candidate extended by other_base attributes.
ChiExpr lift(const ChiExpr& chi, const std::vector<std::string>& own_attrs,
             const std::vector<std::string>& other_base);

RankedQuery order_limit(std::optional<Objective> objective, std::optional<std::size_t> limit,
                        const SolutionSet& u);
RankedQuery limit(std::size_t n, const RankedQuery& q);
RankedQuery as_query(const SolutionSet& u);

// Name of the objective column (the atom's spec output), if any.
std::optional<std::string> objective_name(const RankedQuery& q);
SolProjection project(std::optional<std::string> rank_attr, std::vector<std::string> attrs,
                      const RankedQuery& q);

// Decision extension in canonical order.
Relation decision_extension(const SolutionSet& u, std::uint64_t cap = kDefaultCap);
// |ext(D)|^|B|, saturating at UINT64_MAX.
std::uint64_t domain_cardinality(const SolutionSet& u, std::uint64_t cap = kDefaultCap);

// All candidates in index order, last base tuple varying fastest.
std::vector<Relation> enumerate_domain(const SolutionSet& u, std::uint64_t cap = kDefaultCap);
// Candidates satisfying chi, in the same order.
std::vector<Relation> enumerate(const SolutionSet& u, std::uint64_t cap = kDefaultCap);

Relation eval_iexpr(const IExpr& e, const Relation& candidate);
Value eval_atom(const IExpr& atom, const Relation& candidate);
bool eval_chi(const ChiExpr& chi, const Relation& candidate);

struct RankedCandidate {
  Relation candidate;
  std::optional<Value> objective;
};

// Reference evaluation of a query by enumeration: filter, stable sort by
// objective, truncate.
std::vector<RankedCandidate> solve_by_enumeration(const RankedQuery& q, std::uint64_t cap = kDefaultCap);

}  // namespace sol
}  // namespace solq
