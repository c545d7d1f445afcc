#include "solq/dnf.hpp"

#include <algorithm>
#include <map>

#include "solq/error.hpp"

namespace solq {

namespace {

struct Lits {
  std::optional<Value> eq;
  std::vector<Value> ne;  // sorted, unique; empty when eq is set
};

using Conj = std::map<std::string, Lits>;
using Terms = std::vector<Conj>;

bool add_literal(Conj& c, const std::string& attr, bool equal, const Value& v) {
  Lits& l = c[attr];
  if (equal) {
    if (l.eq) return *l.eq == v;
    if (std::binary_search(l.ne.begin(), l.ne.end(), v)) return false;
    l.eq = v;
    l.ne.clear();
    return true;
  }
  if (l.eq) return !(*l.eq == v);
  auto it = std::lower_bound(l.ne.begin(), l.ne.end(), v);
  if (it == l.ne.end() || !(*it == v)) l.ne.insert(it, v);
  return true;
}

int compare_lits(const Lits& a, const Lits& b) {
  if (a.eq.has_value() != b.eq.has_value()) return a.eq ? -1 : 1;
  if (a.eq) {
    int c = compare(*a.eq, *b.eq);
    if (c) return c;
  }
  return compare_tuples(a.ne, b.ne);
}

bool conj_less(const Conj& a, const Conj& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return ia->first < ib->first;
    int c = compare_lits(ia->second, ib->second);
    if (c) return c < 0;
  }
  return a.size() < b.size();
}

void normalize(Terms& t) {
  for (const auto& c : t) {
    if (c.empty()) {
      t = Terms{Conj{}};
      return;
    }
  }
  std::sort(t.begin(), t.end(), conj_less);
  t.erase(std::unique(t.begin(), t.end(),
                      [](const Conj& a, const Conj& b) { return !conj_less(a, b) && !conj_less(b, a); }),
          t.end());
}

// Converts e under polarity and conjoins it onto ctx. Threading the
// context through keeps intermediate DNFs as small as the pinned literals
// allow (e.g. R AND NOT S over ADR encodings never expands NOT S alone).
class Converter {
 public:
  Converter(const Schema& schema, std::size_t limit) : schema_(schema), limit_(limit) {}

  Terms run(const Expr& e, bool positive, Terms ctx) {
    if (ctx.empty()) return ctx;
    switch (e.kind()) {
      case ExprKind::Const:
        if (!e.value().is_bool()) reject(e);
        return (e.value().as_bool() == positive) ? ctx : Terms{};
      case ExprKind::Attr: {
        auto i = schema_.find(e.name());
        if (!i || schema_[*i].domain.kind() != DomainKind::Bool) reject(e);
        return literal(std::move(ctx), e.name(), true, Value::boolean(positive));
      }
      case ExprKind::Unary:
        if (e.unary_op() != UnaryOp::Not) reject(e);
        return run(e.kid(0), !positive, std::move(ctx));
      case ExprKind::Binary: break;
      default: reject(e);
    }
    BinaryOp op = e.binary_op();
    if (op == BinaryOp::And || op == BinaryOp::Or) {
      bool product = (op == BinaryOp::And) == positive;
      if (product) return run(e.kid(1), positive, run(e.kid(0), positive, std::move(ctx)));
      Terms l = run(e.kid(0), positive, ctx);
      Terms r = run(e.kid(1), positive, std::move(ctx));
      return join(std::move(l), std::move(r));
    }
    if (op != BinaryOp::Eq && op != BinaryOp::Ne) reject(e);
    const Expr* a = &e.kid(0);
    const Expr* c = &e.kid(1);
    if (a->kind() == ExprKind::Const) std::swap(a, c);
    if (a->kind() != ExprKind::Attr || c->kind() != ExprKind::Const) reject(e);
    bool equal = (op == BinaryOp::Eq) == positive;
    Value v = c->value();
    if (auto i = schema_.find(a->name())) {
      const auto& dom = schema_[*i].domain;
      if (auto cv = dom.coerce(v)) v = *cv;
      if (dom.kind() == DomainKind::Bool && v.is_bool() && !equal) {
        return literal(std::move(ctx), a->name(), true, Value::boolean(!v.as_bool()));
      }
    }
    return literal(std::move(ctx), a->name(), equal, v);
  }

 private:
  [[noreturn]] void reject(const Expr& e) {
    fail(ErrorKind::Type, "not DNF-convertible: " + e.to_string());
  }

  Terms literal(Terms ctx, const std::string& attr, bool equal, const Value& v) {
    Terms out;
    out.reserve(ctx.size());
    for (auto& c : ctx) {
      if (add_literal(c, attr, equal, v)) out.push_back(std::move(c));
    }
    normalize(out);
    return out;
  }

  Terms join(Terms l, Terms r) {
    for (auto& c : r) l.push_back(std::move(c));
    normalize(l);
    if (l.size() > limit_) {
      fail(ErrorKind::Limit, "DNF exceeds " + std::to_string(limit_) + " disjuncts");
    }
    return l;
  }

  const Schema& schema_;
  std::size_t limit_;
};

std::size_t attr_rank(const Schema& schema, const std::string& name) {
  auto i = schema.find(name);
  return i ? *i : schema.size();
}

}  // namespace

Dnf dnf_terms(const Expr& e, const Schema& schema, std::size_t limit) {
  Converter conv(schema, limit);
  Terms t = conv.run(e, true, Terms{Conj{}});
  Dnf out;
  for (const auto& c : t) {
    DnfConjunct conj;
    for (const auto& [attr, l] : c) {
      if (l.eq) conj.push_back({attr, true, *l.eq});
      for (const auto& v : l.ne) conj.push_back({attr, false, v});
    }
    std::stable_sort(conj.begin(), conj.end(), [&](const DnfLiteral& a, const DnfLiteral& b) {
      auto ra = attr_rank(schema, a.attr), rb = attr_rank(schema, b.attr);
      if (ra != rb) return ra < rb;
      return a.attr < b.attr;
    });
    out.disjuncts.push_back(std::move(conj));
  }
  return out;
}

Expr dnf_to_expr(const Dnf& dnf, const Schema&) {
  std::vector<Expr> ors;
  for (const auto& conj : dnf.disjuncts) {
    if (conj.empty()) return Expr::boolean(true);
    std::vector<Expr> ands;
    for (const auto& l : conj) {
      ands.push_back(Expr::binary(l.equal ? BinaryOp::Eq : BinaryOp::Ne, Expr::attr(l.attr),
                                  Expr::constant(l.value)));
    }
    ors.push_back(conjoin(ands));
  }
  return disjoin(ors);
}

Expr to_dnf(const Expr& e, const Schema& schema, std::size_t limit) {
  return dnf_to_expr(dnf_terms(e, schema, limit), schema);
}

namespace {

void flatten_op(const Expr& e, BinaryOp op, std::vector<Expr>& out) {
  if (e.kind() == ExprKind::Binary && e.binary_op() == op) {
    flatten_op(e.kid(0), op, out);
    flatten_op(e.kid(1), op, out);
  } else {
    out.push_back(e);
  }
}

}  // namespace

bool is_adr_dnf(const Expr& e, const Schema& schema) {
  if (e.is_false()) return true;
  std::vector<Expr> ds;
  flatten_op(e, BinaryOp::Or, ds);
  for (const auto& d : ds) {
    if (schema.empty()) {
      if (!d.is_true()) return false;
      continue;
    }
    std::vector<Expr> parts;
    flatten_op(d, BinaryOp::And, parts);
    if (parts.size() != schema.size()) return false;
    std::vector<bool> seen(schema.size(), false);
    for (const auto& p : parts) {
      if (p.kind() != ExprKind::Binary || p.binary_op() != BinaryOp::Eq) return false;
      const Expr* a = &p.kid(0);
      const Expr* c = &p.kid(1);
      if (a->kind() == ExprKind::Const) std::swap(a, c);
      if (a->kind() != ExprKind::Attr || c->kind() != ExprKind::Const) return false;
      auto i = schema.find(a->name());
      if (!i || seen[*i]) return false;
      seen[*i] = true;
    }
  }
  return true;
}

}  // namespace solq
