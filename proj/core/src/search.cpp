#include <set>

#include "solq/cdr.hpp"
#include "solq/error.hpp"

namespace solq {

namespace {

bool mentions(const Expr& e, const std::string& x) {
  if ((e.kind() == ExprKind::Attr || e.kind() == ExprKind::SymRef) && e.name() == x) return true;
  for (const auto& k : e.kids()) {
    if (mentions(k, x)) return true;
  }
  for (const auto& r : e.rows()) {
    for (const auto& c : r) {
      if (mentions(c, x)) return true;
    }
  }
  return false;
}

std::size_t occurrences(const Expr& e, const std::string& x) {
  std::size_t n = (e.kind() == ExprKind::Attr && e.name() == x) ? 1 : 0;
  for (const auto& k : e.kids()) n += occurrences(k, x);
  for (const auto& r : e.rows()) {
    for (const auto& c : r) n += occurrences(c, x);
  }
  return n;
}

Expr bin(BinaryOp op, const Expr& a, const Expr& b) { return fold(Expr::binary(op, a, b)); }

bool is_zero(const Expr& e) { return e.is_const() && e.value().is_numeric() && e.value().as_float() == 0.0; }

std::optional<Expr> isolate_once(const Expr& side, const std::string& x, const Expr& target) {
  if (side.kind() == ExprKind::Attr && side.name() == x) return fold(target);
  if (side.kind() == ExprKind::Unary && side.unary_op() == UnaryOp::Neg) {
    return isolate_once(side.kid(0), x, fold(Expr::unary(UnaryOp::Neg, target)));
  }
  if (side.kind() != ExprKind::Binary) return std::nullopt;
  const Expr& l = side.kid(0);
  const Expr& r = side.kid(1);
  bool in_l = mentions(l, x);
  switch (side.binary_op()) {
    case BinaryOp::Add:
      return in_l ? isolate_once(l, x, bin(BinaryOp::Sub, target, r)) : isolate_once(r, x, bin(BinaryOp::Sub, target, l));
    case BinaryOp::Sub:
      return in_l ? isolate_once(l, x, bin(BinaryOp::Add, target, r)) : isolate_once(r, x, bin(BinaryOp::Sub, l, target));
    case BinaryOp::Mul: {
      const Expr& coeff = in_l ? r : l;
      if (is_zero(coeff)) return std::nullopt;
      return isolate_once(in_l ? l : r, x, bin(BinaryOp::Div, target, coeff));
    }
    case BinaryOp::Div:
      if (in_l) return isolate_once(l, x, bin(BinaryOp::Mul, target, r));
      if (is_zero(target)) return std::nullopt;
      return isolate_once(r, x, bin(BinaryOp::Div, l, target));
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<Expr> isolate(const Expr& side, const std::string& x, const Expr& target) {
  if (occurrences(side, x) != 1) return std::nullopt;
  return isolate_once(side, x, target);
}

namespace {

class Searcher {
 public:
  Searcher(const Schema& schema, const SearchOptions& opts) : schema_(schema), opts_(opts) {
    names_ = schema.names();
  }

  void run(const std::vector<Expr>& conj, std::vector<std::optional<Value>> binding) {
    if (++nodes_ > opts_.cap) {
      fail(ErrorKind::Limit, "search exceeded the enumeration cap of " + std::to_string(opts_.cap));
    }
    if (!propagate(conj, binding)) return;
    if (!consistent(conj, binding)) return;
    if (has_unbound_infinite(binding)) {
      for (std::size_t k = 0; k < conj.size(); ++k) {
        const Expr& c = conj[k];
        if (c.kind() != ExprKind::Binary || c.binary_op() != BinaryOp::Or) continue;
        if (unbound_in(c, binding).empty()) continue;
        for (const auto& d : disjuncts(c)) {
          std::vector<Expr> next;
          for (std::size_t j = 0; j < conj.size(); ++j) {
            if (j != k) next.push_back(conj[j]);
          }
          for (auto& p : conjuncts(d)) next.push_back(std::move(p));
          run(next, binding);
        }
        return;
      }
    }
    std::optional<std::size_t> infinite;
    for (std::size_t i = 0; i < binding.size(); ++i) {
      if (binding[i]) continue;
      const auto& dom = schema_[i].domain;
      if (!dom.is_finite()) {
        if (!infinite) infinite = i;
        continue;
      }
      for (const auto& v : dom.enumerate()) {
        auto next = binding;
        next[i] = v;
        run(conj, std::move(next));
      }
      return;
    }
    if (infinite) {
      fail(ErrorKind::Unbounded, "attribute '" + schema_[*infinite].name + "' of infinite domain " +
                                     schema_[*infinite].domain.to_string() + " is not determined by the constraints");
    }
    Tuple t;
    t.reserve(binding.size());
    for (auto& v : binding) t.push_back(*v);
    results_.insert(std::move(t));
  }

  std::set<Tuple, TupleLess>& results() { return results_; }

 private:
  bool has_unbound_infinite(const std::vector<std::optional<Value>>& binding) const {
    for (std::size_t i = 0; i < binding.size(); ++i) {
      if (!binding[i] && !schema_[i].domain.is_finite()) return true;
    }
    return false;
  }

  Expr substitute_bound(const Expr& e, const std::vector<std::optional<Value>>& binding) {
    return fold(substitute_attrs(e, [&](const std::string& n) -> std::optional<Expr> {
      auto i = schema_.find(n);
      if (i && binding[*i]) return Expr::constant(*binding[*i]);
      return std::nullopt;
    }));
  }

  std::vector<std::size_t> unbound_in(const Expr& e, const std::vector<std::optional<Value>>& binding) {
    std::vector<std::size_t> out;
    for (const auto& a : attrs_of(e)) {
      auto i = schema_.find(a);
      if (i && !binding[*i]) out.push_back(*i);
    }
    return out;
  }

  // Returns false on a conflict.
  bool pin(std::size_t i, const Value& v, std::vector<std::optional<Value>>& binding) {
    auto cv = schema_[i].domain.coerce(v);
    if (!cv) return false;
    binding[i] = *cv;
    return true;
  }

  bool propagate(const std::vector<Expr>& conj, std::vector<std::optional<Value>>& binding) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& c : conj) {
        auto unbound = unbound_in(c, binding);
        if (unbound.size() != 1) continue;
        std::size_t i = unbound.front();
        const std::string& x = schema_[i].name;
        if (c.kind() == ExprKind::Attr) {
          if (!pin(i, Value::boolean(true), binding)) return false;
          changed = true;
          continue;
        }
        if (c.kind() == ExprKind::Unary && c.unary_op() == UnaryOp::Not && c.kid(0).kind() == ExprKind::Attr) {
          if (!pin(i, Value::boolean(false), binding)) return false;
          changed = true;
          continue;
        }
        if (c.kind() != ExprKind::Binary || c.binary_op() != BinaryOp::Eq) continue;
        if (occurrences(c, x) != 1) continue;
        bool in_l = mentions(c.kid(0), x);
        try {
          Expr side = substitute_bound(in_l ? c.kid(0) : c.kid(1), binding);
          Expr target = substitute_bound(in_l ? c.kid(1) : c.kid(0), binding);
          if (!target.is_const()) continue;
          auto sol = isolate(side, x, target);
          if (!sol || !sol->is_const()) continue;
          if (!pin(i, sol->value(), binding)) return false;
          changed = true;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::Evaluation) throw;
        }
      }
    }
    return true;
  }

  bool consistent(const std::vector<Expr>& conj, const std::vector<std::optional<Value>>& binding) {
    MapBindings b;
    for (std::size_t i = 0; i < binding.size(); ++i) {
      if (binding[i]) b.set(names_[i], *binding[i]);
    }
    EvalOptions eo{opts_.float_tolerance};
    for (const auto& c : conj) {
      if (!unbound_in(c, binding).empty()) continue;
      try {
        if (!eval_bool(c, b, eo)) return false;
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Evaluation) return false;
        throw;
      }
    }
    return true;
  }

  const Schema& schema_;
  SearchOptions opts_;
  std::vector<std::string> names_;
  std::set<Tuple, TupleLess> results_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::vector<Tuple> solve_cdr(const Schema& schema, const Expr& chi,
                             const std::vector<std::optional<Value>>& fixed, const SearchOptions& opts) {
  if (fixed.size() != schema.size()) fail(ErrorKind::Schema, "binding arity mismatch");
  std::vector<std::optional<Value>> start(schema.size());
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (!fixed[i]) continue;
    auto v = schema[i].domain.coerce(*fixed[i]);
    if (!v) return {};
    start[i] = *v;
  }
  Searcher s(schema, opts);
  for (const auto& d : disjuncts(chi)) s.run(conjuncts(d), start);
  return std::vector<Tuple>(s.results().begin(), s.results().end());
}

}  // namespace solq
