#include "solq/translate.hpp"

#include <algorithm>
#include <set>

#include "solq/error.hpp"

namespace solq {

std::optional<std::size_t> SymbolicRelation::index(const std::string& a) const {
  auto it = std::find(attrs.begin(), attrs.end(), a);
  if (it == attrs.end()) return std::nullopt;
  return static_cast<std::size_t>(it - attrs.begin());
}

std::string SymbolicRelation::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < attrs.size(); ++i) s += (i ? " | " : "") + attrs[i];
  s += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? " | " : "") + r[i].to_string();
    s += "\n";
  }
  return s;
}

namespace phi {
namespace {

using Cells = std::vector<Expr>;

bool all_const(const Cells& cells) {
  return std::all_of(cells.begin(), cells.end(), [](const Expr& e) { return e.is_const(); });
}

Tuple values_of(const Cells& cells) {
  Tuple t;
  t.reserve(cells.size());
  for (const auto& c : cells) t.push_back(c.value());
  return t;
}

bool same_value(const Value& a, const Value& b) { return comparable_kinds(a.kind(), b.kind()) && compare(a, b) == 0; }

// Replaces attribute references with the row's cells.
Expr bind_row(const Expr& e, const std::vector<std::string>& attrs, const Cells& row) {
  return fold(substitute_attrs(e, [&](const std::string& a) -> std::optional<Expr> {
    auto it = std::find(attrs.begin(), attrs.end(), a);
    if (it == attrs.end()) return std::nullopt;
    return row[static_cast<std::size_t>(it - attrs.begin())];
  }));
}

// Sum with the symbolic terms first and constants folded into one trailing term.
Expr symbolic_sum(const std::vector<Expr>& terms) {
  std::vector<Expr> sym;
  std::optional<Value> acc;
  for (const auto& t : terms) {
    if (t.is_const()) {
      acc = acc ? apply_binary(BinaryOp::Add, *acc, t.value()) : t.value();
    } else {
      sym.push_back(t);
    }
  }
  if (acc && !(acc->is_numeric() && acc->as_float() == 0.0 && !sym.empty())) sym.push_back(Expr::constant(*acc));
  return sym.empty() ? Expr::integer(0) : sum_of(sym);
}

Expr lower_aggregate(const Expr& call, const SymbolicRelation& in, const std::vector<const Cells*>& group) {
  AggFn fn = call.agg_fn();
  if (fn == AggFn::Count) return Expr::integer(static_cast<std::int64_t>(group.size()));
  if (fn == AggFn::HasSubset) {
    const Table& sub = *call.subset();
    std::vector<std::size_t> idx;
    for (const auto& a : sub.attrs) {
      auto i = in.index(a);
      if (!i) fail(ErrorKind::Name, "hasSubset(" + sub.label + "): attribute '" + a + "' not available");
      idx.push_back(*i);
    }
    std::vector<Expr> need;
    for (const auto& s : sub.rows) {
      std::vector<Expr> any;
      for (const Cells* r : group) {
        std::vector<Expr> eqs;
        for (std::size_t k = 0; k < idx.size(); ++k) {
          eqs.push_back(fold(Expr::binary(BinaryOp::Eq, (*r)[idx[k]], Expr::constant(s[k]))));
        }
        any.push_back(fold(conjoin(eqs)));
      }
      need.push_back(fold(disjoin(any)));
    }
    return fold(conjoin(need));
  }
  std::vector<Cells> args;
  args.reserve(group.size());
  bool constant = true;
  for (const Cells* r : group) {
    Cells a;
    for (const auto& k : call.kids()) {
      a.push_back(bind_row(k, in.attrs, *r));
      constant = constant && a.back().is_const();
    }
    args.push_back(std::move(a));
  }
  if (constant) {
    std::vector<Tuple> rows;
    for (const auto& a : args) rows.push_back(values_of(a));
    return Expr::constant(apply_aggregate(fn, rows));
  }
  auto firsts = [&] {
    std::vector<Expr> xs;
    for (const auto& a : args) {
      if (a.size() != 1) fail(ErrorKind::Type, std::string(agg_fn_name(fn)) + " takes one argument");
      xs.push_back(a[0]);
    }
    return xs;
  };
  switch (fn) {
    case AggFn::BoolAnd: return fold(conjoin(firsts()));
    case AggFn::BoolOr: return fold(disjoin(firsts()));
    case AggFn::Sum: return symbolic_sum(firsts());
    default: return fold(Expr::collect(fn, args));
  }
}

Expr lower_spec(const Expr& spec, const SymbolicRelation& in, const std::vector<const Cells*>& group) {
  Expr lowered = transform(spec, [&](const Expr& x) -> std::optional<Expr> {
    if (x.kind() != ExprKind::AggCall) return std::nullopt;
    return lower_aggregate(x, in, group);
  });
  if (!attrs_of(lowered).empty()) {
    if (group.empty()) fail(ErrorKind::Evaluation, "attribute outside an aggregate in an empty group");
    lowered = bind_row(lowered, in.attrs, *group.front());
  }
  return fold(lowered);
}

SymbolicRelation constant_relation(const Relation& r) {
  SymbolicRelation out;
  out.attrs = r.schema().names();
  for (const auto& t : r.tuples()) {
    Cells row;
    for (const auto& v : t) row.push_back(Expr::constant(v));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<std::string> shared_attrs(const SymbolicRelation& l, const std::vector<std::string>& r) {
  std::vector<std::string> out;
  for (const auto& a : l.attrs) {
    if (std::find(r.begin(), r.end(), a) != r.end()) out.push_back(a);
  }
  return out;
}

// O joined with a CDR: each row's shared cells pin the CDR attributes.
SymbolicRelation join_cdr(const SymbolicRelation& o, const CompleteRelation& c) {
  const Schema& cs = c.schema();
  auto shared = shared_attrs(o, cs.names());
  SymbolicRelation out;
  out.attrs = o.attrs;
  std::vector<std::size_t> extra;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (!o.index(cs[j].name)) {
      out.attrs.push_back(cs[j].name);
      extra.push_back(j);
    }
  }
  for (const auto& row : o.rows) {
    std::vector<std::optional<Value>> fixed(cs.size());
    std::map<std::string, Expr> known;
    bool constant = true, outside = false;
    for (const auto& a : shared) {
      const Expr& cell = row[*o.index(a)];
      known.emplace(a, cell);
      if (cell.is_const()) {
        auto v = cs.at(a).domain.coerce(cell.value());
        if (!v) {
          outside = true;
          break;
        }
        fixed[*cs.find(a)] = *v;
      } else {
        constant = false;
      }
    }
    if (outside) continue;
    if (constant) {
      std::vector<Tuple> sols;
      try {
        sols = solve_cdr(cs, c.chi(), fixed);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Unbounded) throw;
        fail(ErrorKind::DataDependency, "cannot establish functional dependency: " + std::string(e.what()));
      }
      for (const auto& s : sols) {
        Cells r = row;
        for (auto j : extra) r.push_back(Expr::constant(s[j]));
        out.rows.push_back(std::move(r));
      }
    } else {
      auto parts = conjuncts(c.chi());
      std::vector<bool> used(parts.size(), false);
      auto substitute_known = [&](const Expr& e) {
        return fold(substitute_attrs(e, [&](const std::string& a) -> std::optional<Expr> {
          auto it = known.find(a);
          if (it == known.end()) return std::nullopt;
          return it->second;
        }));
      };
      bool progress = true;
      bool dropped = false;
      while (progress && !dropped) {
        progress = false;
        for (std::size_t k = 0; k < parts.size(); ++k) {
          if (used[k]) continue;
          Expr p = substitute_known(parts[k]);
          auto free = attrs_of(p);
          if (free.empty()) {
            used[k] = true;
            progress = true;
            if (p.is_false()) dropped = true;
            if (!p.is_const()) {
              fail(ErrorKind::DataDependency, "cannot establish functional dependency: constraint " +
                                                  parts[k].to_string() + " of " + c.name() +
                                                  " depends on decision values");
            }
            continue;
          }
          if (free.size() != 1 || p.kind() != ExprKind::Binary || p.binary_op() != BinaryOp::Eq) continue;
          const std::string& x = *free.begin();
          bool in_l = attrs_of(p.kid(0)).count(x) > 0;
          auto v = in_l ? isolate(p.kid(0), x, p.kid(1)) : isolate(p.kid(1), x, p.kid(0));
          if (!v) continue;
          known.emplace(x, *v);
          used[k] = true;
          progress = true;
        }
      }
      if (dropped) continue;
      Cells r = row;
      for (auto j : extra) {
        auto it = known.find(cs[j].name);
        if (it == known.end()) {
          fail(ErrorKind::DataDependency, "cannot establish functional dependency: attribute '" + cs[j].name +
                                              "' of " + c.name() + " is not determined by the join");
        }
        r.push_back(it->second);
      }
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

SymbolicRelation join_symbolic(const SymbolicRelation& l, const SymbolicRelation& r, const std::string& label) {
  auto shared = shared_attrs(l, r.attrs);
  std::vector<std::size_t> li, ri, rextra;
  for (const auto& a : shared) {
    li.push_back(*l.index(a));
    ri.push_back(*r.index(a));
  }
  for (std::size_t j = 0; j < r.attrs.size(); ++j) {
    if (!l.index(r.attrs[j])) rextra.push_back(j);
  }
  SymbolicRelation out;
  out.attrs = l.attrs;
  for (auto j : rextra) out.attrs.push_back(r.attrs[j]);

  auto symbolic_keys = [](const SymbolicRelation& s, const std::vector<std::size_t>& idx) {
    for (const auto& row : s.rows) {
      for (auto i : idx) {
        if (!row[i].is_const()) return true;
      }
    }
    return false;
  };
  bool lsym = symbolic_keys(l, li), rsym = symbolic_keys(r, ri);
  if (lsym && rsym) {
    fail(ErrorKind::Restriction, "both join operands carry decision-dependent join attributes");
  }
  if (!lsym && !rsym) {
    for (const auto& a : l.rows) {
      for (const auto& b : r.rows) {
        bool match = true;
        for (std::size_t k = 0; k < li.size() && match; ++k) {
          match = same_value(a[li[k]].value(), b[ri[k]].value());
        }
        if (!match) continue;
        Cells row = a;
        for (auto j : rextra) row.push_back(b[j]);
        out.rows.push_back(std::move(row));
      }
    }
    return out;
  }
  // One side joins on decision values: the other side becomes a functional
  // lookup keyed by the shared attributes.
  const SymbolicRelation& x = lsym ? l : r;
  const SymbolicRelation& y = lsym ? r : l;
  const auto& xi = lsym ? li : ri;
  const auto& yi = lsym ? ri : li;
  for (const auto& row : y.rows) {
    if (!all_const(row)) fail(ErrorKind::Restriction, "lookup relation must be constant");
  }
  std::vector<std::size_t> ydep;
  std::vector<std::string> dep_names;
  for (std::size_t j = 0; j < y.attrs.size(); ++j) {
    if (std::find(yi.begin(), yi.end(), j) == yi.end()) {
      ydep.push_back(j);
      dep_names.push_back(y.attrs[j]);
    }
  }
  std::vector<Tuple> keys, deps;
  for (const auto& row : y.rows) {
    Tuple k, d;
    for (auto i : yi) k.push_back(row[i].value());
    for (auto j : ydep) d.push_back(row[j].value());
    keys.push_back(std::move(k));
    deps.push_back(std::move(d));
  }
  auto table = std::make_shared<const LookupTable>(label, shared, dep_names, keys, deps);

  for (const auto& xrow : x.rows) {
    Cells key;
    for (auto i : xi) key.push_back(xrow[i]);
    Cells ycells(y.attrs.size());
    if (all_const(key)) {
      const Tuple* d = table->find(values_of(key));
      if (!d) continue;
      for (std::size_t k = 0; k < ydep.size(); ++k) ycells[ydep[k]] = Expr::constant((*d)[k]);
    } else {
      for (std::size_t k = 0; k < ydep.size(); ++k) ycells[ydep[k]] = Expr::lookup(table, k, key);
    }
    for (std::size_t k = 0; k < yi.size(); ++k) ycells[yi[k]] = key[k];
    const Cells& lrow = lsym ? xrow : ycells;
    const Cells& rrow = lsym ? ycells : xrow;
    Cells row = lrow;
    for (auto j : rextra) row.push_back(rrow[j]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string leaf_label(const IExpr& e) {
  switch (e.kind()) {
    case IExprKind::Data: return e.relation().name();
    case IExprKind::Cdr: return e.complete().name();
    case IExprKind::Candidate: return "";
    default:
      if (e.kind() == IExprKind::Join) {
        auto l = leaf_label(e.left());
        return l.empty() ? leaf_label(e.right()) : l;
      }
      return leaf_label(e.input());
  }
}

}  // namespace

CompleteRelation build_flat(const SolutionSet& u) {
  FlatForm ff = translate(SolutionSet{u.name, u.base, u.decision, ChiExpr::constant(true)});
  return ff.flat;
}

namespace {

struct Layout {
  std::vector<std::vector<std::string>> names;
  std::vector<Attribute> attrs;
};

Layout flat_layout(const SolutionSet& u) {
  std::set<std::string> taken;
  Schema cand = u.candidate_schema();
  for (const auto& a : cand.attrs()) taken.insert(a.name);
  Layout l;
  for (std::size_t i = 0; i < u.base.size(); ++i) {
    std::vector<std::string> row;
    for (const auto& a : u.decision.schema().attrs()) {
      std::string n = a.name + std::to_string(i + 1);
      while (taken.count(n)) n += "_";
      taken.insert(n);
      row.push_back(n);
      l.attrs.push_back({n, a.domain});
    }
    l.names.push_back(std::move(row));
  }
  return l;
}

}  // namespace

SymbolicRelation build_symI(const SolutionSet& u) {
  Layout l = flat_layout(u);
  SymbolicRelation s;
  s.attrs = u.candidate_schema().names();
  for (std::size_t i = 0; i < u.base.size(); ++i) {
    Cells row;
    for (const auto& v : u.base.tuples()[i]) row.push_back(Expr::constant(v));
    for (const auto& n : l.names[i]) row.push_back(Expr::sym(n));
    s.rows.push_back(std::move(row));
  }
  return s;
}

SymbolicRelation encode_fd_lookup(const Relation& r, const std::vector<std::string>& matched) {
  if (matched.empty()) fail(ErrorKind::Schema, "lookup encoding needs at least one matched attribute");
  SymbolicRelation key;
  for (const auto& m : matched) {
    if (!r.schema().contains(m)) fail(ErrorKind::Name, "relation " + r.name() + " has no attribute '" + m + "'");
    key.attrs.push_back(m);
  }
  Cells k;
  for (const auto& m : matched) k.push_back(Expr::sym(m));
  key.rows.push_back(std::move(k));
  // A symbolic key row forces the lookup path of the join.
  SymbolicRelation joined = join_symbolic(key, constant_relation(r), r.name());
  SymbolicRelation out;
  out.attrs = r.schema().names();
  Cells row;
  for (const auto& a : out.attrs) row.push_back(joined.rows.at(0)[*joined.index(a)]);
  out.rows.push_back(std::move(row));
  return out;
}

SymbolicRelation translate_iexpr(const IExpr& e, const Context& ctx) {
  switch (e.kind()) {
    case IExprKind::Candidate: return *ctx.candidate;
    case IExprKind::Data: return constant_relation(e.relation());
    case IExprKind::Cdr: return constant_relation(cdr::project_eval(e.complete().schema().names(), e.complete()));
    case IExprKind::Join: {
      if (e.right().kind() == IExprKind::Cdr) return join_cdr(translate_iexpr(e.left(), ctx), e.right().complete());
      if (e.left().kind() == IExprKind::Cdr) return join_cdr(translate_iexpr(e.right(), ctx), e.left().complete());
      std::string label = e.left().contains_candidate() ? leaf_label(e.right()) : leaf_label(e.left());
      return join_symbolic(translate_iexpr(e.left(), ctx), translate_iexpr(e.right(), ctx),
                           label.empty() ? "R" : label);
    }
    case IExprKind::Select: {
      SymbolicRelation in = translate_iexpr(e.input(), ctx), out;
      out.attrs = in.attrs;
      for (auto& row : in.rows) {
        Expr t = bind_row(e.predicate(), in.attrs, row);
        if (!t.is_const() || !t.value().is_bool()) {
          fail(ErrorKind::Restriction, "selection condition depends on decision values: " +
                                           e.predicate().to_string());
        }
        if (t.value().as_bool()) out.rows.push_back(std::move(row));
      }
      return out;
    }
    case IExprKind::Project: {
      SymbolicRelation in = translate_iexpr(e.input(), ctx), out;
      std::vector<std::size_t> idx;
      for (const auto& a : e.attrs()) {
        auto i = in.index(a);
        if (!i) fail(ErrorKind::Name, "projection onto unknown attribute '" + a + "'");
        idx.push_back(*i);
        out.attrs.push_back(a);
      }
      for (const auto& row : in.rows) {
        Cells p;
        for (auto i : idx) p.push_back(row[i]);
        bool dup = false;
        for (const auto& q : out.rows) {
          if (q == p) {
            dup = true;
            break;
          }
          bool may_merge = true, symbolic = false;
          for (std::size_t k = 0; k < p.size() && may_merge; ++k) {
            if (p[k].is_const() && q[k].is_const()) {
              may_merge = same_value(p[k].value(), q[k].value());
            } else {
              symbolic = true;
            }
          }
          if (may_merge && symbolic) {
            fail(ErrorKind::Restriction, "projection onto [" + e.to_string() +
                                             "] may merge rows depending on decision values");
          }
        }
        if (!dup) out.rows.push_back(std::move(p));
      }
      return out;
    }
    case IExprKind::Rename: {
      SymbolicRelation in = translate_iexpr(e.input(), ctx);
      std::vector<Attribute> attrs;
      for (const auto& a : in.attrs) attrs.push_back({a, AttrDomain::integer()});
      in.attrs = apply_rename(e.renames(), Schema(std::move(attrs))).names();
      return in;
    }
    case IExprKind::GroupAgg: {
      SymbolicRelation in = translate_iexpr(e.input(), ctx), out;
      std::vector<std::size_t> gidx;
      for (const auto& g : e.attrs()) {
        auto i = in.index(g);
        if (!i) fail(ErrorKind::Name, "grouping by unknown attribute '" + g + "'");
        gidx.push_back(*i);
        out.attrs.push_back(g);
      }
      for (const auto& s : e.specs()) out.attrs.push_back(s.name);
      std::map<Tuple, std::vector<const Cells*>, TupleLess> groups;
      for (const auto& row : in.rows) {
        Tuple key;
        for (auto i : gidx) {
          if (!row[i].is_const()) {
            fail(ErrorKind::Restriction, "grouping attribute '" + in.attrs[i] + "' depends on decision values");
          }
          key.push_back(row[i].value());
        }
        groups[key].push_back(&row);
      }
      if (gidx.empty() && groups.empty()) groups[Tuple{}];
      for (const auto& [key, rows] : groups) {
        Cells r;
        for (const auto& v : key) r.push_back(Expr::constant(v));
        for (const auto& s : e.specs()) r.push_back(lower_spec(s.expr, in, rows));
        out.rows.push_back(std::move(r));
      }
      return out;
    }
  }
  fail(ErrorKind::Type, "unknown relational expression");
}

namespace {

Expr translate_atom(const IExpr& atom, const Context& ctx) {
  SymbolicRelation r = translate_iexpr(atom, ctx);
  if (r.rows.size() != 1 || r.attrs.size() != 1) {
    fail(ErrorKind::Evaluation, "aggregate atom did not produce a single value: " + atom.to_string());
  }
  return r.rows[0][0];
}

}  // namespace

Expr translate_chi_expr(const ChiExpr& chi, const Context& ctx) {
  switch (chi.kind()) {
    case ChiKind::Const: return Expr::boolean(chi.value());
    case ChiKind::Atom: return translate_atom(chi.iexpr(), ctx);
    case ChiKind::And:
      return fold(Expr::binary(BinaryOp::And, translate_chi_expr(chi.kids()[0], ctx),
                               translate_chi_expr(chi.kids()[1], ctx)));
    case ChiKind::Or:
      return fold(Expr::binary(BinaryOp::Or, translate_chi_expr(chi.kids()[0], ctx),
                               translate_chi_expr(chi.kids()[1], ctx)));
    case ChiKind::Not: return fold(Expr::unary(UnaryOp::Not, translate_chi_expr(chi.kids()[0], ctx)));
    case ChiKind::ForAll: {
      const SymbolicRelation& cand = *ctx.candidate;
      std::vector<std::size_t> idx;
      for (const auto& a : chi.attrs()) {
        auto i = cand.index(a);
        if (!i) fail(ErrorKind::Name, "partition attribute '" + a + "' not in candidate");
        idx.push_back(*i);
      }
      std::map<Tuple, SymbolicRelation, TupleLess> parts;
      for (const auto& row : cand.rows) {
        Tuple key;
        for (auto i : idx) key.push_back(row[i].value());
        auto& p = parts[key];
        p.attrs = cand.attrs;
        p.rows.push_back(row);
      }
      std::vector<Expr> all;
      for (const auto& [key, part] : parts) {
        Context sub{&part};
        all.push_back(translate_chi_expr(chi.kids()[0], sub));
      }
      return fold(conjoin(all));
    }
  }
  return Expr::boolean(true);
}

FlatForm translate(const SolutionSet& u) {
  FlatForm ff;
  Layout l = flat_layout(u);
  ff.base_schema = u.base.schema();
  ff.decision_schema = u.decision.schema();
  ff.decision_attrs = u.decision.schema().names();
  ff.flat_names = l.names;
  for (std::size_t i = 0; i < u.base.size(); ++i) ff.base_index.emplace(u.base.tuples()[i], i);
  ff.symI = build_symI(u);

  std::vector<Expr> parts;
  for (std::size_t i = 0; i < u.base.size(); ++i) {
    RenameSpec spec;
    for (std::size_t j = 0; j < ff.decision_attrs.size(); ++j) spec.emplace_back(ff.decision_attrs[j], l.names[i][j]);
    for (auto& c : conjuncts(rename_attrs(u.decision.chi(), spec))) parts.push_back(std::move(c));
  }
  Context ctx{&ff.symI};
  Expr chi = symrefs_to_attrs(translate_chi_expr(u.chi, ctx));
  if (chi.is_false()) {
    parts.push_back(chi);
  } else {
    for (auto& c : conjuncts(chi)) parts.push_back(std::move(c));
  }
  ff.flat = CompleteRelation("flat" + u.name, Schema(l.attrs), conjoin(parts));
  return ff;
}

FlatForm translate(const RankedQuery& q) {
  FlatForm ff = translate(q.set);
  ff.meta.limit = q.limit;
  if (q.objective) {
    const IExpr& atom = q.objective->atom;
    Context ctx{&ff.symI};
    ff.meta.direction = q.objective->dir;
    ff.meta.objective = symrefs_to_attrs(translate_atom(atom, ctx));
    ff.meta.objective_name = atom.specs().front().name;
    const Expr& spec = atom.specs().front().expr;
    if (atom.input().kind() == IExprKind::Candidate && spec.kind() == ExprKind::AggCall &&
        spec.agg_fn() == AggFn::Sum && spec.kids().size() == 1) {
      for (const auto& row : ff.symI.rows) {
        ff.meta.row_objective.push_back(symrefs_to_attrs(bind_row(spec.kid(0), ff.symI.attrs, row)));
      }
    }
  }
  return ff;
}

}  // namespace phi
}  // namespace solq
