#include "solq/frontend/ast.hpp"

namespace solq::frontend {

namespace {

bool same_ptr(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  return same(*a, *b);
}

bool same_list(const std::vector<NodePtr>& a, const std::vector<NodePtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_ptr(a[i], b[i])) return false;
  }
  return true;
}

bool same_value(const Value& a, const Value& b) { return a.kind() == b.kind() && a == b; }

bool same_domain(const DomainSpec& a, const DomainSpec& b) {
  return a.kind == b.kind && a.name == b.name && same_value(a.lo, b.lo) && same_value(a.hi, b.hi) &&
         same_ptr(a.in, b.in) && a.tags == b.tags;
}

bool same_decls(const std::vector<Decl>& a, const std::vector<Decl>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || !same_domain(a[i].domain, b[i].domain)) return false;
  }
  return true;
}

}  // namespace

bool same(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.op != b.op || a.sol != b.sol || !same_value(a.literal, b.literal) ||
      a.names != b.names || a.rank != b.rank || a.renames != b.renames || a.count != b.count) {
    return false;
  }
  if (!same_list(a.kids, b.kids) || !same_decls(a.decls, b.decls)) return false;
  if (a.tuples.has_value() != b.tuples.has_value()) return false;
  if (a.tuples) {
    if (a.tuples->size() != b.tuples->size()) return false;
    for (std::size_t i = 0; i < a.tuples->size(); ++i) {
      if (!same_list((*a.tuples)[i], (*b.tuples)[i])) return false;
    }
  }
  if (a.specs.size() != b.specs.size() || a.keys.size() != b.keys.size()) return false;
  for (std::size_t i = 0; i < a.specs.size(); ++i) {
    if (a.specs[i].name != b.specs[i].name || !same_ptr(a.specs[i].expr, b.specs[i].expr)) return false;
  }
  for (std::size_t i = 0; i < a.keys.size(); ++i) {
    if (a.keys[i].dir != b.keys[i].dir || !same_ptr(a.keys[i].expr, b.keys[i].expr)) return false;
  }
  return true;
}

bool same(const Program& a, const Program& b) {
  if (a.stmts.size() != b.stmts.size()) return false;
  for (std::size_t i = 0; i < a.stmts.size(); ++i) {
    const Stmt& x = a.stmts[i];
    const Stmt& y = b.stmts[i];
    if (x.kind != y.kind || x.name != y.name || x.path != y.path || x.format != y.format ||
        !same_ptr(x.expr, y.expr) || !same_ptr(x.rhs, y.rhs) || !same_decls(x.decls, y.decls) ||
        x.probes.size() != y.probes.size()) {
      return false;
    }
    for (std::size_t j = 0; j < x.probes.size(); ++j) {
      if (x.probes[j].attr != y.probes[j].attr || !same_list(x.probes[j].values, y.probes[j].values)) return false;
    }
  }
  return true;
}

}  // namespace solq::frontend
