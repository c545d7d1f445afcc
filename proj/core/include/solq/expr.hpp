#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "solq/schema.hpp"
#include "solq/value.hpp"

namespace solq {

enum class AggFn : std::uint8_t {
  BoolAnd,
  BoolOr,
  AllDifferent,
  HasSubset,
  Sum,
  Min,
  Max,
  Count,
};

// Accepts the usual spellings: Bool_And, bool_and, alldiff, AllDifferent, ...
std::optional<AggFn> agg_fn_from_name(std::string_view name);
const char* agg_fn_name(AggFn fn);
bool is_boolean_agg(AggFn fn);

// A constant relation referenced from inside an expression (hasSubset's
// argument).
struct Table {
  std::string label;
  std::vector<std::string> attrs;
  std::vector<Tuple> rows;
};

// A relation encoded as a functional dependency key -> dependent values.
class LookupTable {
 public:
  LookupTable(std::string label, std::vector<std::string> key_attrs,
              std::vector<std::string> dependent_attrs, std::vector<Tuple> keys,
              std::vector<Tuple> dependents);

  const std::string& label() const { return label_; }
  const std::vector<std::string>& key_attrs() const { return key_attrs_; }
  const std::vector<std::string>& dependent_attrs() const { return dependent_attrs_; }
  std::size_t size() const { return keys_.size(); }
  const std::vector<Tuple>& keys() const { return keys_; }
  const std::vector<Tuple>& dependents() const { return dependents_; }
  std::optional<std::size_t> dependent_index(const std::string& attr) const;

  // Dependent tuple for a key, or nullptr when the key is absent.
  const Tuple* find(const Tuple& key) const;

 private:
  std::string label_;
  std::vector<std::string> key_attrs_;
  std::vector<std::string> dependent_attrs_;
  std::vector<Tuple> keys_;
  std::vector<Tuple> dependents_;
};

enum class ExprKind : std::uint8_t {
  Const,
  Attr,
  SymRef,
  Unary,
  Binary,
  Between,
  AggCall,
  Collect,
  Lookup,
};

enum class UnaryOp : std::uint8_t { Neg, Not, Abs, Sqrt, Exp, Sin };

enum class BinaryOp : std::uint8_t {
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  And,
  Or,
};

const char* unary_op_name(UnaryOp op);
const char* binary_op_symbol(BinaryOp op);
bool is_comparison(BinaryOp op);
bool is_arithmetic(BinaryOp op);

struct ExprNode;

// Immutable expression tree with shared structure.
//
//   Const      a scalar
//   Attr       attribute reference resolved against a binding
//   SymRef     symbolic reference <name> to a flat attribute
//   AggCall    aggregate inside a grouping spec; args are evaluated per row
//   Collect    aggregate over explicit rows of expressions
//   Lookup     project[dep](select[keys = k](R)) over a LookupTable
class Expr {
 public:
  Expr();

  static Expr constant(Value v);
  static Expr boolean(bool b) { return constant(Value::boolean(b)); }
  static Expr integer(std::int64_t v) { return constant(Value::integer(v)); }
  static Expr floating(double v) { return constant(Value::floating(v)); }
  static Expr attr(std::string name);
  static Expr sym(std::string name);
  static Expr unary(UnaryOp op, Expr e);
  static Expr binary(BinaryOp op, Expr l, Expr r);
  static Expr between(Expr x, Expr lo, Expr hi);
  static Expr agg_call(AggFn fn, std::vector<Expr> args,
                       std::shared_ptr<const Table> subset = nullptr);
  static Expr collect(AggFn fn, std::vector<std::vector<Expr>> rows,
                      std::shared_ptr<const Table> subset = nullptr);
  static Expr lookup(std::shared_ptr<const LookupTable> table, std::size_t dependent,
                     std::vector<Expr> keys);

  ExprKind kind() const;
  const ExprNode& node() const { return *n_; }

  bool is_const() const { return kind() == ExprKind::Const; }
  bool is_true() const;
  bool is_false() const;
  const Value& value() const;
  const std::string& name() const;
  UnaryOp unary_op() const;
  BinaryOp binary_op() const;
  AggFn agg_fn() const;
  const std::vector<Expr>& kids() const;
  const Expr& kid(std::size_t i) const { return kids()[i]; }
  const std::vector<std::vector<Expr>>& rows() const;
  const std::shared_ptr<const Table>& subset() const;
  const std::shared_ptr<const LookupTable>& table() const;
  std::size_t dependent() const;

  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : n_(std::move(n)) {}
  std::shared_ptr<const ExprNode> n_;
};

struct ExprNode {
  ExprKind kind = ExprKind::Const;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  AggFn fn = AggFn::Sum;
  Value value;
  std::string name;
  std::vector<Expr> kids;
  std::vector<std::vector<Expr>> rows;
  std::shared_ptr<const Table> subset;
  std::shared_ptr<const LookupTable> table;
  std::size_t dependent = 0;
};

Expr operator&&(const Expr& a, const Expr& b);
Expr operator||(const Expr& a, const Expr& b);
Expr operator!(const Expr& a);

class Bindings {
 public:
  virtual ~Bindings() = default;
  virtual const Value* find(std::string_view name) const = 0;
};

class MapBindings : public Bindings {
 public:
  MapBindings() = default;
  explicit MapBindings(std::map<std::string, Value, std::less<>> m) : m_(std::move(m)) {}
  void set(const std::string& name, Value v) { m_[name] = std::move(v); }
  const Value* find(std::string_view name) const override;

 private:
  std::map<std::string, Value, std::less<>> m_;
};

// Binds names[i] to row[i]; both must outlive the binding.
class RowBindings : public Bindings {
 public:
  RowBindings(const std::vector<std::string>& names, const Tuple& row)
      : names_(&names), row_(&row) {}
  const Value* find(std::string_view name) const override;

 private:
  const std::vector<std::string>* names_;
  const Tuple* row_;
};

// Looks up in `first`, then `second`.
class ChainBindings : public Bindings {
 public:
  ChainBindings(const Bindings& first, const Bindings& second) : a_(first), b_(second) {}
  const Value* find(std::string_view name) const override {
    if (auto* v = a_.find(name)) return v;
    return b_.find(name);
  }

 private:
  const Bindings& a_;
  const Bindings& b_;
};

class EmptyBindings : public Bindings {
 public:
  const Value* find(std::string_view) const override { return nullptr; }
};

struct EvalOptions {
  // Relative tolerance for float equality; 0 means exact.
  double float_eq_tolerance = 0.0;
};

Value eval_scalar(const Expr& e, const Bindings& b, const EvalOptions& opts = {});
bool eval_bool(const Expr& e, const Bindings& b, const EvalOptions& opts = {});

// Evaluates f over argument tuples (one per row). For HasSubset the rows
// are the group projected onto subset->attrs.
Value apply_aggregate(AggFn fn, const std::vector<Tuple>& rows, const Table* subset = nullptr);

// Applies a binary operator to constants.
Value apply_binary(BinaryOp op, const Value& a, const Value& b, const EvalOptions& opts = {});
Value apply_unary(UnaryOp op, const Value& a);

// Rewrites bottom-up: f sees each rebuilt node and may replace it.
Expr transform(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& f);

Expr substitute_attrs(const Expr& e,
                      const std::function<std::optional<Expr>(const std::string&)>& f);
Expr rename_attrs(const Expr& e, const RenameSpec& spec);
Expr symrefs_to_attrs(const Expr& e);

// Constant folding with Boolean short-circuit identities. Constant factors
// are moved to the left of products.
Expr fold(const Expr& e);

std::set<std::string> attrs_of(const Expr& e);
std::set<std::string> symrefs_of(const Expr& e);
bool contains_agg_call(const Expr& e);
bool contains_kind(const Expr& e, ExprKind kind);

// Top-level conjuncts with True literals dropped.
std::vector<Expr> conjuncts(const Expr& e);
std::vector<Expr> disjuncts(const Expr& e);
Expr conjoin(const std::vector<Expr>& parts);
Expr disjoin(const std::vector<Expr>& parts);

// Left-associated sum of terms; empty gives 0.
Expr sum_of(const std::vector<Expr>& terms);

}  // namespace solq
