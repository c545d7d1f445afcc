#include "solq/expr.hpp"

#include <algorithm>
#include <cmath>

#include "solq/error.hpp"

namespace solq {

namespace {

std::shared_ptr<ExprNode> make(ExprKind kind) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  return n;
}

std::shared_ptr<const ExprNode> true_node() {
  static const std::shared_ptr<const ExprNode> t = [] {
    auto n = make(ExprKind::Const);
    n->value = Value::boolean(true);
    return n;
  }();
  return t;
}

}  // namespace

const char* unary_op_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Not: return "NOT";
    case UnaryOp::Abs: return "abs";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Sin: return "sin";
  }
  return "?";
}

const char* binary_op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "AND";
    case BinaryOp::Or: return "OR";
  }
  return "?";
}

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return true;
    default: return false;
  }
}

bool is_arithmetic(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Pow: return true;
    default: return false;
  }
}

Expr::Expr() : n_(true_node()) {}

Expr Expr::constant(Value v) {
  auto n = make(ExprKind::Const);
  n->value = std::move(v);
  return Expr(std::move(n));
}

Expr Expr::attr(std::string name) {
  auto n = make(ExprKind::Attr);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::sym(std::string name) {
  auto n = make(ExprKind::SymRef);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr e) {
  auto n = make(ExprKind::Unary);
  n->uop = op;
  n->kids.push_back(std::move(e));
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr l, Expr r) {
  auto n = make(ExprKind::Binary);
  n->bop = op;
  n->kids.push_back(std::move(l));
  n->kids.push_back(std::move(r));
  return Expr(std::move(n));
}

Expr Expr::between(Expr x, Expr lo, Expr hi) {
  auto n = make(ExprKind::Between);
  n->kids = {std::move(x), std::move(lo), std::move(hi)};
  return Expr(std::move(n));
}

Expr Expr::agg_call(AggFn fn, std::vector<Expr> args, std::shared_ptr<const Table> subset) {
  if (fn == AggFn::HasSubset && !subset) fail(ErrorKind::Type, "hasSubset needs a relation argument");
  auto n = make(ExprKind::AggCall);
  n->fn = fn;
  n->kids = std::move(args);
  n->subset = std::move(subset);
  return Expr(std::move(n));
}

Expr Expr::collect(AggFn fn, std::vector<std::vector<Expr>> rows,
                   std::shared_ptr<const Table> subset) {
  if (fn == AggFn::HasSubset && !subset) fail(ErrorKind::Type, "hasSubset needs a relation argument");
  auto n = make(ExprKind::Collect);
  n->fn = fn;
  n->rows = std::move(rows);
  n->subset = std::move(subset);
  return Expr(std::move(n));
}

Expr Expr::lookup(std::shared_ptr<const LookupTable> table, std::size_t dependent,
                  std::vector<Expr> keys) {
  if (!table || dependent >= table->dependent_attrs().size()) {
    fail(ErrorKind::Type, "lookup dependent attribute out of range");
  }
  if (keys.size() != table->key_attrs().size() || keys.empty()) {
    fail(ErrorKind::Type, "lookup key arity mismatch");
  }
  auto n = make(ExprKind::Lookup);
  n->table = std::move(table);
  n->dependent = dependent;
  n->kids = std::move(keys);
  return Expr(std::move(n));
}

ExprKind Expr::kind() const { return n_->kind; }
bool Expr::is_true() const { return is_const() && n_->value.is_bool() && n_->value.as_bool(); }
bool Expr::is_false() const { return is_const() && n_->value.is_bool() && !n_->value.as_bool(); }
const Value& Expr::value() const { return n_->value; }
const std::string& Expr::name() const { return n_->name; }
UnaryOp Expr::unary_op() const { return n_->uop; }
BinaryOp Expr::binary_op() const { return n_->bop; }
AggFn Expr::agg_fn() const { return n_->fn; }
const std::vector<Expr>& Expr::kids() const { return n_->kids; }
const std::vector<std::vector<Expr>>& Expr::rows() const { return n_->rows; }
const std::shared_ptr<const Table>& Expr::subset() const { return n_->subset; }
const std::shared_ptr<const LookupTable>& Expr::table() const { return n_->table; }
std::size_t Expr::dependent() const { return n_->dependent; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.n_ == b.n_) return true;
  const ExprNode& x = *a.n_;
  const ExprNode& y = *b.n_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case ExprKind::Const:
      return x.value.kind() == y.value.kind() && x.value == y.value;
    case ExprKind::Attr:
    case ExprKind::SymRef: return x.name == y.name;
    case ExprKind::Unary:
      if (x.uop != y.uop) return false;
      break;
    case ExprKind::Binary:
      if (x.bop != y.bop) return false;
      break;
    case ExprKind::Between: break;
    case ExprKind::AggCall:
      if (x.fn != y.fn || x.subset != y.subset) return false;
      break;
    case ExprKind::Collect:
      if (x.fn != y.fn || x.subset != y.subset || x.rows != y.rows) return false;
      break;
    case ExprKind::Lookup:
      if (x.table != y.table || x.dependent != y.dependent) return false;
      break;
  }
  return x.kids == y.kids;
}

Expr operator&&(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::And, a, b); }
Expr operator||(const Expr& a, const Expr& b) { return Expr::binary(BinaryOp::Or, a, b); }
Expr operator!(const Expr& a) { return Expr::unary(UnaryOp::Not, a); }

// ---------------------------------------------------------------- printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const:
      if (e.value().is_numeric() && e.value().as_float() < 0) return 7;
      return 9;
    case ExprKind::Unary:
      if (e.unary_op() == UnaryOp::Not) return 3;
      if (e.unary_op() == UnaryOp::Neg) return 7;
      return 9;
    case ExprKind::Between: return 4;
    case ExprKind::Binary:
      switch (e.binary_op()) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        case BinaryOp::Add:
        case BinaryOp::Sub: return 5;
        case BinaryOp::Mul:
        case BinaryOp::Div: return 6;
        case BinaryOp::Pow: return 8;
        default: return 4;
      }
    default: return 9;
  }
}

void print(const Expr& e, int need, std::string& out);

void print_list(const std::vector<Expr>& xs, std::string& out) {
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    print(xs[i], 0, out);
  }
}

void print(const Expr& e, int need, std::string& out) {
  int p = precedence(e);
  bool paren = p < need;
  if (paren) out += "(";
  switch (e.kind()) {
    case ExprKind::Const: out += e.value().to_literal(); break;
    case ExprKind::Attr: out += e.name(); break;
    case ExprKind::SymRef: out += "<" + e.name() + ">"; break;
    case ExprKind::Unary:
      switch (e.unary_op()) {
        case UnaryOp::Not:
          out += "NOT ";
          print(e.kid(0), 3, out);
          break;
        case UnaryOp::Neg:
          out += "-";
          print(e.kid(0), 8, out);
          break;
        default:
          out += unary_op_name(e.unary_op());
          out += "(";
          print(e.kid(0), 0, out);
          out += ")";
      }
      break;
    case ExprKind::Binary: {
      BinaryOp op = e.binary_op();
      int lp = p, rp = p + 1;
      if (op == BinaryOp::Pow) {
        lp = p + 1;
        rp = p;
      } else if (is_comparison(op)) {
        lp = p + 1;
      }
      print(e.kid(0), lp, out);
      out += " ";
      out += binary_op_symbol(op);
      out += " ";
      print(e.kid(1), rp, out);
      break;
    }
    case ExprKind::Between:
      print(e.kid(0), 5, out);
      out += " BETWEEN ";
      print(e.kid(1), 5, out);
      out += " AND ";
      print(e.kid(2), 5, out);
      break;
    case ExprKind::AggCall:
      out += agg_fn_name(e.agg_fn());
      out += "(";
      if (e.agg_fn() == AggFn::HasSubset) {
        out += e.subset()->label;
      } else {
        print_list(e.kids(), out);
      }
      out += ")";
      break;
    case ExprKind::Collect: {
      bool set_like = e.agg_fn() == AggFn::AllDifferent || e.agg_fn() == AggFn::HasSubset;
      out += agg_fn_name(e.agg_fn());
      out += set_like ? "({" : "([";
      for (std::size_t i = 0; i < e.rows().size(); ++i) {
        if (i) out += ", ";
        const auto& row = e.rows()[i];
        if (row.size() == 1) {
          print(row[0], 0, out);
        } else {
          out += "<";
          print_list(row, out);
          out += ">";
        }
      }
      out += set_like ? "}" : "]";
      if (e.agg_fn() == AggFn::HasSubset) out += ", " + e.subset()->label;
      out += ")";
      break;
    }
    case ExprKind::Lookup: {
      const auto& t = *e.table();
      out += "project[" + t.dependent_attrs()[e.dependent()] + "](select[";
      for (std::size_t i = 0; i < e.kids().size(); ++i) {
        if (i) out += " AND ";
        out += t.key_attrs()[i] + " = ";
        print(e.kid(i), 5, out);
      }
      out += "](" + t.label() + "))";
      break;
    }
  }
  if (paren) out += ")";
}

}  // namespace

std::string Expr::to_string() const {
  std::string out;
  print(*this, 0, out);
  return out;
}

// -------------------------------------------------------------- bindings

const Value* MapBindings::find(std::string_view name) const {
  auto it = m_.find(name);
  return it == m_.end() ? nullptr : &it->second;
}

const Value* RowBindings::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i) {
    if ((*names_)[i] == name) return &(*row_)[i];
  }
  return nullptr;
}

// ------------------------------------------------------------ evaluation

namespace {

[[noreturn]] void type_error(const std::string& what, const Value& a) {
  fail(ErrorKind::Type, what + " (got " + a.to_literal() + ")");
}

bool tolerant_equal(const Value& a, const Value& b, const EvalOptions& opts) {
  if (!comparable_kinds(a.kind(), b.kind())) {
    fail(ErrorKind::Type, "cannot compare " + a.to_literal() + " with " + b.to_literal());
  }
  if (opts.float_eq_tolerance > 0 && a.is_numeric() &&
      (a.kind() == ValueKind::Float || b.kind() == ValueKind::Float)) {
    double x = a.as_float(), y = b.as_float();
    double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    return std::fabs(x - y) <= opts.float_eq_tolerance * scale;
  }
  return a == b;
}

void need_numeric(const Value& a, const char* op) {
  if (!a.is_numeric()) type_error(std::string("operator ") + op + " needs numbers", a);
}

Value arith(BinaryOp op, const Value& a, const Value& b) {
  need_numeric(a, binary_op_symbol(op));
  need_numeric(b, binary_op_symbol(op));
  bool ints = a.kind() == ValueKind::Int && b.kind() == ValueKind::Int;
  switch (op) {
    case BinaryOp::Add:
    case BinaryOp::Sub:
    case BinaryOp::Mul: {
      if (ints) {
        std::int64_t r = 0;
        bool ovf = op == BinaryOp::Add   ? __builtin_add_overflow(a.as_int(), b.as_int(), &r)
                   : op == BinaryOp::Sub ? __builtin_sub_overflow(a.as_int(), b.as_int(), &r)
                                         : __builtin_mul_overflow(a.as_int(), b.as_int(), &r);
        if (ovf) fail(ErrorKind::Evaluation, "integer overflow");
        return Value::integer(r);
      }
      double x = a.as_float(), y = b.as_float();
      return Value::floating(op == BinaryOp::Add ? x + y : op == BinaryOp::Sub ? x - y : x * y);
    }
    case BinaryOp::Div:
      if (b.as_float() == 0.0) fail(ErrorKind::Evaluation, "division by zero");
      return Value::floating(a.as_float() / b.as_float());
    case BinaryOp::Pow: {
      if (ints && b.as_int() >= 0) {
        std::int64_t r = 1, base = a.as_int();
        for (std::int64_t i = 0; i < b.as_int(); ++i) {
          if (__builtin_mul_overflow(r, base, &r)) fail(ErrorKind::Evaluation, "integer overflow");
        }
        return Value::integer(r);
      }
      return Value::floating(std::pow(a.as_float(), b.as_float()));
    }
    default: break;
  }
  fail(ErrorKind::Type, "not an arithmetic operator");
}

}  // namespace

Value apply_unary(UnaryOp op, const Value& a) {
  switch (op) {
    case UnaryOp::Not:
      if (!a.is_bool()) type_error("NOT needs a boolean", a);
      return Value::boolean(!a.as_bool());
    case UnaryOp::Neg:
      need_numeric(a, "-");
      if (a.kind() == ValueKind::Int) {
        if (a.as_int() == INT64_MIN) fail(ErrorKind::Evaluation, "integer overflow");
        return Value::integer(-a.as_int());
      }
      return Value::floating(-a.as_float());
    case UnaryOp::Abs:
      need_numeric(a, "abs");
      if (a.kind() == ValueKind::Int) {
        if (a.as_int() == INT64_MIN) fail(ErrorKind::Evaluation, "integer overflow");
        return Value::integer(a.as_int() < 0 ? -a.as_int() : a.as_int());
      }
      return Value::floating(std::fabs(a.as_float()));
    case UnaryOp::Sqrt:
      need_numeric(a, "sqrt");
      if (a.as_float() < 0) fail(ErrorKind::Evaluation, "sqrt of a negative number");
      return Value::floating(std::sqrt(a.as_float()));
    case UnaryOp::Exp:
      need_numeric(a, "exp");
      return Value::floating(std::exp(a.as_float()));
    case UnaryOp::Sin:
      need_numeric(a, "sin");
      return Value::floating(std::sin(a.as_float()));
  }
  fail(ErrorKind::Type, "unknown unary operator");
}

Value apply_binary(BinaryOp op, const Value& a, const Value& b, const EvalOptions& opts) {
  switch (op) {
    case BinaryOp::And:
    case BinaryOp::Or:
      if (!a.is_bool()) type_error(std::string(binary_op_symbol(op)) + " needs booleans", a);
      if (!b.is_bool()) type_error(std::string(binary_op_symbol(op)) + " needs booleans", b);
      return Value::boolean(op == BinaryOp::And ? a.as_bool() && b.as_bool()
                                                : a.as_bool() || b.as_bool());
    case BinaryOp::Eq: return Value::boolean(tolerant_equal(a, b, opts));
    case BinaryOp::Ne: return Value::boolean(!tolerant_equal(a, b, opts));
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: {
      if (!comparable_kinds(a.kind(), b.kind())) {
        fail(ErrorKind::Type, "cannot compare " + a.to_literal() + " with " + b.to_literal());
      }
      int c = compare(a, b);
      bool r = op == BinaryOp::Lt ? c < 0 : op == BinaryOp::Le ? c <= 0 : op == BinaryOp::Gt ? c > 0 : c >= 0;
      return Value::boolean(r);
    }
    default: return arith(op, a, b);
  }
}

Value eval_scalar(const Expr& e, const Bindings& b, const EvalOptions& opts) {
  switch (e.kind()) {
    case ExprKind::Const: return e.value();
    case ExprKind::Attr:
    case ExprKind::SymRef: {
      const Value* v = b.find(e.name());
      if (!v) fail(ErrorKind::Name, "unbound attribute '" + e.name() + "'");
      return *v;
    }
    case ExprKind::Unary: return apply_unary(e.unary_op(), eval_scalar(e.kid(0), b, opts));
    case ExprKind::Binary: {
      BinaryOp op = e.binary_op();
      if (op == BinaryOp::And || op == BinaryOp::Or) {
        Value l = eval_scalar(e.kid(0), b, opts);
        if (!l.is_bool()) type_error(std::string(binary_op_symbol(op)) + " needs booleans", l);
        if (op == BinaryOp::And && !l.as_bool()) return l;
        if (op == BinaryOp::Or && l.as_bool()) return l;
        Value r = eval_scalar(e.kid(1), b, opts);
        if (!r.is_bool()) type_error(std::string(binary_op_symbol(op)) + " needs booleans", r);
        return r;
      }
      return apply_binary(op, eval_scalar(e.kid(0), b, opts), eval_scalar(e.kid(1), b, opts), opts);
    }
    case ExprKind::Between: {
      Value x = eval_scalar(e.kid(0), b, opts);
      Value lo = eval_scalar(e.kid(1), b, opts);
      Value hi = eval_scalar(e.kid(2), b, opts);
      return Value::boolean(apply_binary(BinaryOp::Le, lo, x).as_bool() &&
                            apply_binary(BinaryOp::Le, x, hi).as_bool());
    }
    case ExprKind::AggCall:
      fail(ErrorKind::Type, std::string("aggregate ") + agg_fn_name(e.agg_fn()) +
                                " used outside a grouping context");
    case ExprKind::Collect: {
      std::vector<Tuple> rows;
      rows.reserve(e.rows().size());
      for (const auto& r : e.rows()) {
        Tuple t;
        t.reserve(r.size());
        for (const auto& c : r) t.push_back(eval_scalar(c, b, opts));
        rows.push_back(std::move(t));
      }
      return apply_aggregate(e.agg_fn(), rows, e.subset().get());
    }
    case ExprKind::Lookup: {
      Tuple key;
      for (const auto& k : e.kids()) key.push_back(eval_scalar(k, b, opts));
      const Tuple* dep = e.table()->find(key);
      if (!dep) {
        std::string k;
        for (const auto& v : key) k += (k.empty() ? "" : ", ") + v.to_literal();
        fail(ErrorKind::DataDependency, "functional dependency violated by data: no row of " +
                                            e.table()->label() + " with key (" + k + ")");
      }
      return (*dep)[e.dependent()];
    }
  }
  fail(ErrorKind::Type, "unknown expression");
}

bool eval_bool(const Expr& e, const Bindings& b, const EvalOptions& opts) {
  Value v = eval_scalar(e, b, opts);
  if (!v.is_bool()) type_error("expected a boolean condition", v);
  return v.as_bool();
}

// --------------------------------------------------------------- rewriting

Expr transform(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& f) {
  const ExprNode& n = e.node();
  bool changed = false;
  std::vector<Expr> kids;
  kids.reserve(n.kids.size());
  for (const auto& k : n.kids) {
    kids.push_back(transform(k, f));
    if (&kids.back().node() != &k.node()) changed = true;
  }
  std::vector<std::vector<Expr>> rows;
  if (!n.rows.empty()) {
    rows.reserve(n.rows.size());
    for (const auto& r : n.rows) {
      std::vector<Expr> row;
      for (const auto& c : r) {
        row.push_back(transform(c, f));
        if (&row.back().node() != &c.node()) changed = true;
      }
      rows.push_back(std::move(row));
    }
  }
  Expr rebuilt = e;
  if (changed) {
    switch (n.kind) {
      case ExprKind::Unary: rebuilt = Expr::unary(n.uop, kids[0]); break;
      case ExprKind::Binary: rebuilt = Expr::binary(n.bop, kids[0], kids[1]); break;
      case ExprKind::Between: rebuilt = Expr::between(kids[0], kids[1], kids[2]); break;
      case ExprKind::AggCall: rebuilt = Expr::agg_call(n.fn, kids, n.subset); break;
      case ExprKind::Collect: rebuilt = Expr::collect(n.fn, rows, n.subset); break;
      case ExprKind::Lookup: rebuilt = Expr::lookup(n.table, n.dependent, kids); break;
      default: break;
    }
  }
  if (auto r = f(rebuilt)) return *r;
  return rebuilt;
}

Expr substitute_attrs(const Expr& e,
                      const std::function<std::optional<Expr>(const std::string&)>& f) {
  return transform(e, [&](const Expr& x) -> std::optional<Expr> {
    if (x.kind() == ExprKind::Attr) return f(x.name());
    return std::nullopt;
  });
}

Expr rename_attrs(const Expr& e, const RenameSpec& spec) {
  if (spec.empty()) return e;
  return substitute_attrs(e, [&](const std::string& name) -> std::optional<Expr> {
    for (const auto& [from, to] : spec) {
      if (from == name) return Expr::attr(to);
    }
    return std::nullopt;
  });
}

Expr symrefs_to_attrs(const Expr& e) {
  return transform(e, [](const Expr& x) -> std::optional<Expr> {
    if (x.kind() == ExprKind::SymRef) return Expr::attr(x.name());
    return std::nullopt;
  });
}

namespace {

bool all_const(const std::vector<Expr>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Expr& x) { return x.is_const(); });
}

const EmptyBindings kNoBindings;

Expr fold_node(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Unary:
      if (e.kid(0).is_const()) return Expr::constant(apply_unary(e.unary_op(), e.kid(0).value()));
      if (e.unary_op() == UnaryOp::Not && e.kid(0).kind() == ExprKind::Unary &&
          e.kid(0).unary_op() == UnaryOp::Not) {
        return e.kid(0).kid(0);
      }
      return e;
    case ExprKind::Binary: {
      const Expr& l = e.kid(0);
      const Expr& r = e.kid(1);
      switch (e.binary_op()) {
        case BinaryOp::And:
          if (l.is_false() || r.is_false()) return Expr::boolean(false);
          if (l.is_true()) return r;
          if (r.is_true()) return l;
          return e;
        case BinaryOp::Or:
          if (l.is_true() || r.is_true()) return Expr::boolean(true);
          if (l.is_false()) return r;
          if (r.is_false()) return l;
          return e;
        default: break;
      }
      if (l.is_const() && r.is_const()) return Expr::constant(apply_binary(e.binary_op(), l.value(), r.value()));
      if (e.binary_op() == BinaryOp::Mul && r.is_const() && !l.is_const()) {
        if (l.kind() == ExprKind::Binary && l.binary_op() == BinaryOp::Mul && l.kid(0).is_const()) {
          return Expr::binary(BinaryOp::Mul,
                              Expr::constant(apply_binary(BinaryOp::Mul, l.kid(0).value(), r.value())),
                              l.kid(1));
        }
        return Expr::binary(BinaryOp::Mul, r, l);
      }
      if (e.binary_op() == BinaryOp::Mul && l.is_const() && r.kind() == ExprKind::Binary &&
          r.binary_op() == BinaryOp::Mul && r.kid(0).is_const()) {
        return Expr::binary(BinaryOp::Mul,
                            Expr::constant(apply_binary(BinaryOp::Mul, l.value(), r.kid(0).value())),
                            r.kid(1));
      }
      return e;
    }
    case ExprKind::Between:
      if (all_const(e.kids())) return Expr::constant(eval_scalar(e, kNoBindings));
      return e;
    case ExprKind::Collect: {
      for (const auto& r : e.rows()) {
        if (!all_const(r)) return e;
      }
      return Expr::constant(eval_scalar(e, kNoBindings));
    }
    case ExprKind::Lookup:
      if (all_const(e.kids())) return Expr::constant(eval_scalar(e, kNoBindings));
      return e;
    default: return e;
  }
}

}  // namespace

Expr fold(const Expr& e) {
  return transform(e, [](const Expr& x) -> std::optional<Expr> {
    Expr y = fold_node(x);
    if (&y.node() == &x.node()) return std::nullopt;
    return y;
  });
}

namespace {

void visit(const Expr& e, const std::function<void(const Expr&)>& f) {
  f(e);
  for (const auto& k : e.kids()) visit(k, f);
  for (const auto& r : e.rows()) {
    for (const auto& c : r) visit(c, f);
  }
}

}  // namespace

std::set<std::string> attrs_of(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& x) {
    if (x.kind() == ExprKind::Attr) out.insert(x.name());
  });
  return out;
}

std::set<std::string> symrefs_of(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& x) {
    if (x.kind() == ExprKind::SymRef) out.insert(x.name());
  });
  return out;
}

bool contains_kind(const Expr& e, ExprKind kind) {
  bool found = false;
  visit(e, [&](const Expr& x) {
    if (x.kind() == kind) found = true;
  });
  return found;
}

bool contains_agg_call(const Expr& e) { return contains_kind(e, ExprKind::AggCall); }

namespace {

void flatten(const Expr& e, BinaryOp op, std::vector<Expr>& out) {
  if (e.kind() == ExprKind::Binary && e.binary_op() == op) {
    flatten(e.kid(0), op, out);
    flatten(e.kid(1), op, out);
  } else {
    out.push_back(e);
  }
}

}  // namespace

std::vector<Expr> conjuncts(const Expr& e) {
  std::vector<Expr> all, out;
  flatten(e, BinaryOp::And, all);
  for (auto& x : all) {
    if (!x.is_true()) out.push_back(std::move(x));
  }
  return out;
}

std::vector<Expr> disjuncts(const Expr& e) {
  std::vector<Expr> all, out;
  flatten(e, BinaryOp::Or, all);
  for (auto& x : all) {
    if (!x.is_false()) out.push_back(std::move(x));
  }
  return out;
}

Expr conjoin(const std::vector<Expr>& parts) {
  std::optional<Expr> acc;
  for (const auto& p : parts) {
    if (p.is_true()) continue;
    acc = acc ? Expr::binary(BinaryOp::And, *acc, p) : p;
  }
  return acc ? *acc : Expr::boolean(true);
}

Expr disjoin(const std::vector<Expr>& parts) {
  std::optional<Expr> acc;
  for (const auto& p : parts) {
    if (p.is_false()) continue;
    acc = acc ? Expr::binary(BinaryOp::Or, *acc, p) : p;
  }
  return acc ? *acc : Expr::boolean(false);
}

Expr sum_of(const std::vector<Expr>& terms) {
  std::optional<Expr> acc;
  for (const auto& t : terms) acc = acc ? Expr::binary(BinaryOp::Add, *acc, t) : t;
  return acc ? *acc : Expr::integer(0);
}

}  // namespace solq
