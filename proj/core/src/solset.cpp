#include "solq/solset.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "solq/error.hpp"

namespace solq {

struct IExprNode {
  IExprKind kind = IExprKind::Candidate;
  std::optional<Relation> rel;
  std::optional<CompleteRelation> cdr;
  std::vector<IExpr> kids;
  Expr predicate;
  std::vector<std::string> attrs;
  RenameSpec renames;
  std::vector<adr::AggSpec> specs;
};

namespace {

std::shared_ptr<IExprNode> node(IExprKind k) {
  auto n = std::make_shared<IExprNode>();
  n->kind = k;
  return n;
}

std::string join_names(const std::vector<std::string>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + xs[i];
  return s;
}

}  // namespace

IExpr IExpr::candidate() { return IExpr(node(IExprKind::Candidate)); }

IExpr IExpr::data(Relation r) {
  auto n = node(IExprKind::Data);
  n->rel = std::move(r);
  return IExpr(std::move(n));
}

IExpr IExpr::cdr(CompleteRelation c) {
  auto n = node(IExprKind::Cdr);
  n->cdr = std::move(c);
  return IExpr(std::move(n));
}

IExpr IExpr::join(IExpr l, IExpr r) {
  auto n = node(IExprKind::Join);
  n->kids = {std::move(l), std::move(r)};
  return IExpr(std::move(n));
}

IExpr IExpr::select(Expr theta, IExpr in) {
  auto n = node(IExprKind::Select);
  n->predicate = std::move(theta);
  n->kids = {std::move(in)};
  return IExpr(std::move(n));
}

IExpr IExpr::project(std::vector<std::string> attrs, IExpr in) {
  auto n = node(IExprKind::Project);
  n->attrs = std::move(attrs);
  n->kids = {std::move(in)};
  return IExpr(std::move(n));
}

IExpr IExpr::rename(RenameSpec spec, IExpr in) {
  auto n = node(IExprKind::Rename);
  n->renames = std::move(spec);
  n->kids = {std::move(in)};
  return IExpr(std::move(n));
}

IExpr IExpr::group(std::vector<std::string> group, std::vector<adr::AggSpec> specs, IExpr in) {
  auto n = node(IExprKind::GroupAgg);
  n->attrs = std::move(group);
  n->specs = std::move(specs);
  n->kids = {std::move(in)};
  return IExpr(std::move(n));
}

IExprKind IExpr::kind() const { return n_->kind; }
const Relation& IExpr::relation() const { return *n_->rel; }
const CompleteRelation& IExpr::complete() const { return *n_->cdr; }
const IExpr& IExpr::left() const { return n_->kids.at(0); }
const IExpr& IExpr::right() const { return n_->kids.at(1); }
const Expr& IExpr::predicate() const { return n_->predicate; }
const std::vector<std::string>& IExpr::attrs() const { return n_->attrs; }
const RenameSpec& IExpr::renames() const { return n_->renames; }
const std::vector<adr::AggSpec>& IExpr::specs() const { return n_->specs; }

bool IExpr::contains_candidate() const {
  if (kind() == IExprKind::Candidate) return true;
  for (const auto& k : n_->kids) {
    if (k.contains_candidate()) return true;
  }
  return false;
}

std::string IExpr::to_string() const {
  switch (kind()) {
    case IExprKind::Candidate: return "I";
    case IExprKind::Data: return relation().name().empty() ? "<relation>" : relation().name();
    case IExprKind::Cdr: return complete().name().empty() ? "<cdr>" : complete().name();
    case IExprKind::Join: return "(" + left().to_string() + " join " + right().to_string() + ")";
    case IExprKind::Select:
      return "select[" + predicate().to_string() + "](" + input().to_string() + ")";
    case IExprKind::Project: return "project[" + join_names(attrs()) + "](" + input().to_string() + ")";
    case IExprKind::Rename: {
      std::string s = "rename[";
      for (std::size_t i = 0; i < renames().size(); ++i) {
        s += (i ? ", " : "") + renames()[i].first + " -> " + renames()[i].second;
      }
      return s + "](" + input().to_string() + ")";
    }
    case IExprKind::GroupAgg: {
      std::string s = "gamma[" + join_names(attrs()) + "][";
      for (std::size_t i = 0; i < specs().size(); ++i) {
        s += (i ? ", " : "") + specs()[i].expr.to_string() + " -> " + specs()[i].name;
      }
      return s + "](" + input().to_string() + ")";
    }
  }
  return "?";
}

ChiExpr::ChiExpr() = default;

ChiExpr ChiExpr::constant(bool b) {
  ChiExpr c;
  c.kind_ = ChiKind::Const;
  c.value_ = b;
  return c;
}

ChiExpr ChiExpr::atom(IExpr e) {
  ChiExpr c;
  c.kind_ = ChiKind::Atom;
  c.atom_ = std::make_shared<const IExpr>(std::move(e));
  return c;
}

ChiExpr ChiExpr::conj(ChiExpr a, ChiExpr b) {
  if (a.kind_ == ChiKind::Const) return a.value_ ? b : a;
  if (b.kind_ == ChiKind::Const) return b.value_ ? a : b;
  ChiExpr c;
  c.kind_ = ChiKind::And;
  c.kids_ = {std::move(a), std::move(b)};
  return c;
}

ChiExpr ChiExpr::disj(ChiExpr a, ChiExpr b) {
  ChiExpr c;
  c.kind_ = ChiKind::Or;
  c.kids_ = {std::move(a), std::move(b)};
  return c;
}

ChiExpr ChiExpr::negate(ChiExpr a) {
  ChiExpr c;
  c.kind_ = ChiKind::Not;
  c.kids_ = {std::move(a)};
  return c;
}

ChiExpr ChiExpr::for_all(std::vector<std::string> attrs, ChiExpr child) {
  if (attrs.empty()) return child;
  ChiExpr c;
  c.kind_ = ChiKind::ForAll;
  c.attrs_ = std::move(attrs);
  c.kids_ = {std::move(child)};
  return c;
}

bool ChiExpr::is_conjunctive() const {
  switch (kind_) {
    case ChiKind::Const:
    case ChiKind::Atom: return true;
    case ChiKind::And: return kids_[0].is_conjunctive() && kids_[1].is_conjunctive();
    default: return false;
  }
}

std::string ChiExpr::to_string() const {
  switch (kind_) {
    case ChiKind::Const: return value_ ? "True" : "False";
    case ChiKind::Atom: return atom_->to_string();
    case ChiKind::And: return "(" + kids_[0].to_string() + " AND " + kids_[1].to_string() + ")";
    case ChiKind::Or: return "(" + kids_[0].to_string() + " OR " + kids_[1].to_string() + ")";
    case ChiKind::Not: return "NOT " + kids_[0].to_string();
    case ChiKind::ForAll: return "forall[" + join_names(attrs_) + "](" + kids_[0].to_string() + ")";
  }
  return "?";
}

Schema SolutionSet::candidate_schema() const {
  std::vector<Attribute> attrs = base.schema().attrs();
  for (const auto& a : decision.schema().attrs()) attrs.push_back(a);
  return Schema(std::move(attrs));
}

namespace sol {

bool IExprShape::has(const std::string& a) const {
  return std::find(attrs.begin(), attrs.end(), a) != attrs.end();
}

AttrCategory IExprShape::of(const std::string& a) const {
  auto it = std::find(attrs.begin(), attrs.end(), a);
  if (it == attrs.end()) fail(ErrorKind::Name, "unknown attribute '" + a + "'");
  return category[static_cast<std::size_t>(it - attrs.begin())];
}

namespace {

IExprShape leaf_shape(const Schema& s) {
  IExprShape sh;
  sh.attrs = s.names();
  sh.category.assign(sh.attrs.size(), AttrCategory::Constant);
  return sh;
}

bool is_boolean_expr(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Const: return e.value().is_bool();
    case ExprKind::AggCall:
    case ExprKind::Collect: return is_boolean_agg(e.agg_fn());
    case ExprKind::Between: return true;
    case ExprKind::Unary: return e.unary_op() == UnaryOp::Not;
    case ExprKind::Binary:
      return is_comparison(e.binary_op()) || e.binary_op() == BinaryOp::And || e.binary_op() == BinaryOp::Or;
    default: return false;
  }
}

}  // namespace

IExprShape shape(const IExpr& e, const SolutionSet& u) {
  switch (e.kind()) {
    case IExprKind::Candidate: {
      IExprShape sh;
      for (const auto& a : u.base.schema().attrs()) {
        sh.attrs.push_back(a.name);
        sh.category.push_back(AttrCategory::Constant);
      }
      for (const auto& a : u.decision.schema().attrs()) {
        sh.attrs.push_back(a.name);
        sh.category.push_back(AttrCategory::Decision);
      }
      return sh;
    }
    case IExprKind::Data: return leaf_shape(e.relation().schema());
    case IExprKind::Cdr: return leaf_shape(e.complete().schema());
    case IExprKind::Join: {
      if (e.left().contains_candidate() && e.right().contains_candidate()) {
        fail(ErrorKind::Restriction, "a join inside a solution-set condition may reference the candidate only once");
      }
      IExprShape l = shape(e.left(), u), r = shape(e.right(), u);
      bool dec_from_l = false, dec_from_r = false;
      for (std::size_t i = 0; i < l.attrs.size(); ++i) {
        if (!r.has(l.attrs[i])) continue;
        dec_from_l |= l.category[i] == AttrCategory::Decision;
        dec_from_r |= r.of(l.attrs[i]) == AttrCategory::Decision;
      }
      IExprShape out;
      for (std::size_t i = 0; i < l.attrs.size(); ++i) {
        bool shared = r.has(l.attrs[i]);
        bool dec = l.category[i] == AttrCategory::Decision ||
                   (shared && r.of(l.attrs[i]) == AttrCategory::Decision) || (!shared && dec_from_r);
        out.attrs.push_back(l.attrs[i]);
        out.category.push_back(dec ? AttrCategory::Decision : AttrCategory::Constant);
      }
      for (std::size_t i = 0; i < r.attrs.size(); ++i) {
        if (l.has(r.attrs[i])) continue;
        bool dec = r.category[i] == AttrCategory::Decision || dec_from_l;
        out.attrs.push_back(r.attrs[i]);
        out.category.push_back(dec ? AttrCategory::Decision : AttrCategory::Constant);
      }
      return out;
    }
    case IExprKind::Select: {
      IExprShape in = shape(e.input(), u);
      for (const auto& a : attrs_of(e.predicate())) {
        if (!in.has(a)) fail(ErrorKind::Name, "selection references unknown attribute '" + a + "'");
        if (in.of(a) == AttrCategory::Decision) {
          fail(ErrorKind::Restriction, "selection condition references decision-dependent attribute '" + a +
                                           "'; restrictions on a candidate may only use base attributes");
        }
      }
      return in;
    }
    case IExprKind::Project: {
      IExprShape in = shape(e.input(), u), out;
      std::set<std::string> seen;
      for (const auto& a : e.attrs()) {
        if (!seen.insert(a).second) fail(ErrorKind::Schema, "attribute '" + a + "' projected twice");
        out.attrs.push_back(a);
        out.category.push_back(in.of(a));
      }
      return out;
    }
    case IExprKind::Rename: {
      IExprShape in = shape(e.input(), u);
      std::vector<Attribute> attrs;
      for (const auto& a : in.attrs) attrs.push_back({a, AttrDomain::integer()});
      Schema renamed = apply_rename(e.renames(), Schema(std::move(attrs)));
      in.attrs = renamed.names();
      return in;
    }
    case IExprKind::GroupAgg: {
      IExprShape in = shape(e.input(), u), out;
      std::set<std::string> names;
      for (const auto& g : e.attrs()) {
        if (!in.has(g)) fail(ErrorKind::Name, "grouping by unknown attribute '" + g + "'");
        if (in.of(g) == AttrCategory::Decision) {
          fail(ErrorKind::Restriction, "grouping by decision-dependent attribute '" + g +
                                           "' is not supported inside a solution-set condition");
        }
        if (!names.insert(g).second) fail(ErrorKind::Schema, "duplicate grouping attribute '" + g + "'");
        out.attrs.push_back(g);
        out.category.push_back(AttrCategory::Constant);
      }
      for (const auto& s : e.specs()) {
        bool dec = false;
        for (const auto& a : attrs_of(s.expr)) {
          if (!in.has(a)) fail(ErrorKind::Name, "aggregate references unknown attribute '" + a + "'");
          dec |= in.of(a) == AttrCategory::Decision;
        }
        if (s.expr.kind() == ExprKind::AggCall && s.expr.agg_fn() == AggFn::HasSubset) {
          for (const auto& a : s.expr.subset()->attrs) {
            if (!in.has(a)) fail(ErrorKind::Name, "hasSubset(" + s.expr.subset()->label + "): attribute '" + a + "' not available");
            dec |= in.of(a) == AttrCategory::Decision;
          }
        }
        if (!names.insert(s.name).second) {
          fail(ErrorKind::Schema, "aggregate output '" + s.name + "' collides with another attribute");
        }
        out.attrs.push_back(s.name);
        out.category.push_back(dec ? AttrCategory::Decision : AttrCategory::Constant);
      }
      return out;
    }
  }
  fail(ErrorKind::Type, "unknown relational expression");
}

void check_atom(const IExpr& atom, const SolutionSet& u, bool boolean) {
  if (atom.kind() != IExprKind::GroupAgg || !atom.attrs().empty() || atom.specs().size() != 1) {
    fail(ErrorKind::Restriction,
         std::string(boolean ? "a solution-set condition" : "an objective") +
             " must have the form gamma[][agg(...) -> name](...), got " + atom.to_string());
  }
  bool b = is_boolean_expr(atom.specs().front().expr);
  if (boolean && !b) {
    fail(ErrorKind::Type, "the outermost aggregate of a condition must be boolean-valued: " +
                              atom.specs().front().expr.to_string());
  }
  if (!boolean && b) {
    fail(ErrorKind::Type, "an objective must be orderable (sum/min/max/count), got boolean " +
                              atom.specs().front().expr.to_string());
  }
  shape(atom, u);
}

void check_chi(const ChiExpr& chi, const SolutionSet& u) {
  switch (chi.kind()) {
    case ChiKind::Const: return;
    case ChiKind::Atom: check_atom(chi.iexpr(), u, true); return;
    case ChiKind::ForAll:
      for (const auto& a : chi.attrs()) {
        if (!u.base.schema().contains(a)) {
          fail(ErrorKind::Name, "partition attribute '" + a + "' is not a base attribute");
        }
      }
      [[fallthrough]];
    default:
      for (const auto& k : chi.kids()) check_chi(k, u);
  }
}

SolutionSet construct(std::optional<Relation> base, std::optional<CompleteRelation> decision, ChiExpr chi) {
  SolutionSet u;
  u.base = base ? *base : adr::nullary_singleton();
  u.decision = decision ? *decision : CompleteRelation("", Schema(), Expr::boolean(true));
  for (const auto& a : u.decision.schema().attrs()) {
    if (u.base.schema().contains(a.name)) {
      fail(ErrorKind::Schema, "base and decision schemas overlap on '" + a.name + "'");
    }
  }
  u.chi = std::move(chi);
  check_chi(u.chi, u);
  return u;
}

SolutionSet select(const ChiExpr& theta, const SolutionSet& u) {
  check_chi(theta, u);
  SolutionSet out = u;
  out.name.clear();
  out.chi = ChiExpr::conj(u.chi, theta);
  return out;
}

namespace {

IExpr map_candidate(const IExpr& e, const std::function<IExpr()>& repl) {
  switch (e.kind()) {
    case IExprKind::Candidate: return repl();
    case IExprKind::Data:
    case IExprKind::Cdr: return e;
    case IExprKind::Join: return IExpr::join(map_candidate(e.left(), repl), map_candidate(e.right(), repl));
    case IExprKind::Select: return IExpr::select(e.predicate(), map_candidate(e.input(), repl));
    case IExprKind::Project: return IExpr::project(e.attrs(), map_candidate(e.input(), repl));
    case IExprKind::Rename: return IExpr::rename(e.renames(), map_candidate(e.input(), repl));
    case IExprKind::GroupAgg: return IExpr::group(e.attrs(), e.specs(), map_candidate(e.input(), repl));
  }
  return e;
}

ChiExpr map_atoms(const ChiExpr& chi, const std::function<IExpr(const IExpr&)>& f) {
  switch (chi.kind()) {
    case ChiKind::Const: return chi;
    case ChiKind::Atom: return ChiExpr::atom(f(chi.iexpr()));
    case ChiKind::And: return ChiExpr::conj(map_atoms(chi.kids()[0], f), map_atoms(chi.kids()[1], f));
    case ChiKind::Or: return ChiExpr::disj(map_atoms(chi.kids()[0], f), map_atoms(chi.kids()[1], f));
    case ChiKind::Not: return ChiExpr::negate(map_atoms(chi.kids()[0], f));
    case ChiKind::ForAll: return ChiExpr::for_all(chi.attrs(), map_atoms(chi.kids()[0], f));
  }
  return chi;
}

std::vector<std::string> with_extra(std::vector<std::string> xs, const std::vector<std::string>& extra) {
  for (const auto& p : extra) {
    if (std::find(xs.begin(), xs.end(), p) == xs.end()) xs.push_back(p);
  }
  return xs;
}

void check_no_collision(const std::vector<std::string>& names, const std::vector<std::string>& p, const std::string& where) {
  for (const auto& n : names) {
    if (std::find(p.begin(), p.end(), n) != p.end()) {
      fail(ErrorKind::Schema, "attribute '" + n + "' of " + where +
                                  " collides with a base attribute of the joined solution set");
    }
  }
}

IExpr push_grouping(const IExpr& e, const std::vector<std::string>& p) {
  switch (e.kind()) {
    case IExprKind::Candidate: return e;
    case IExprKind::Data:
      check_no_collision(e.relation().schema().names(), p, "relation " + e.relation().name());
      return e;
    case IExprKind::Cdr:
      check_no_collision(e.complete().schema().names(), p, "relation " + e.complete().name());
      return e;
    case IExprKind::Join: return IExpr::join(push_grouping(e.left(), p), push_grouping(e.right(), p));
    case IExprKind::Select: return IExpr::select(e.predicate(), push_grouping(e.input(), p));
    case IExprKind::Project:
      if (!e.contains_candidate()) return e;
      return IExpr::project(with_extra(e.attrs(), p), push_grouping(e.input(), p));
    case IExprKind::Rename: {
      if (!e.contains_candidate()) return e;
      for (const auto& [from, to] : e.renames()) check_no_collision({from, to}, p, "a rename");
      return IExpr::rename(e.renames(), push_grouping(e.input(), p));
    }
    case IExprKind::GroupAgg: {
      if (!e.contains_candidate()) return e;
      std::vector<std::string> names;
      for (const auto& s : e.specs()) names.push_back(s.name);
      check_no_collision(names, p, "an aggregate output");
      return IExpr::group(with_extra(e.attrs(), p), e.specs(), push_grouping(e.input(), p));
    }
  }
  return e;
}

IExpr lift_atom(const IExpr& atom, const std::vector<std::string>& p) {
  const auto& spec = atom.specs().front();
  std::string inner = spec.name;
  while (std::find(p.begin(), p.end(), inner) != p.end()) inner += "_";
  IExpr grouped = IExpr::group(p, {{spec.expr, inner}}, push_grouping(atom.input(), p));
  Expr all = Expr::agg_call(AggFn::BoolAnd, {Expr::attr(inner)});
  return IExpr::group({}, {{all, spec.name}}, grouped);
}

void check_join_shapes(const SolutionSet& u, const SolutionSet& v) {
  for (const auto& a : u.decision.schema().attrs()) {
    if (v.base.schema().contains(a.name)) {
      fail(ErrorKind::Schema, "decision attribute '" + a.name + "' collides with a base attribute");
    }
  }
  for (const auto& a : v.decision.schema().attrs()) {
    if (u.base.schema().contains(a.name)) {
      fail(ErrorKind::Schema, "decision attribute '" + a.name + "' collides with a base attribute");
    }
  }
}

}  // namespace

ChiExpr lift(const ChiExpr& chi, const std::vector<std::string>& own_attrs,
             const std::vector<std::string>& other_base) {
  std::vector<std::string> p;
  for (const auto& a : other_base) {
    if (std::find(own_attrs.begin(), own_attrs.end(), a) == own_attrs.end()) p.push_back(a);
  }
  std::vector<std::string> visible = with_extra(own_attrs, p);
  ChiExpr restricted = map_atoms(chi, [&](const IExpr& atom) {
    return map_candidate(atom, [&] { return IExpr::project(visible, IExpr::candidate()); });
  });
  if (p.empty()) return restricted;
  if (chi.is_conjunctive()) {
    return map_atoms(restricted, [&](const IExpr& atom) { return lift_atom(atom, p); });
  }
  return ChiExpr::for_all(p, restricted);
}

SolutionSet join(const SolutionSet& u, const SolutionSet& v) {
  check_join_shapes(u, v);
  SolutionSet out;
  out.base = adr::natural_join(u.base, v.base);
  out.decision = cdr::combine(cdr::Combine::Join, u.decision, v.decision);
  for (const auto& a : out.decision.schema().attrs()) {
    if (out.base.schema().contains(a.name)) {
      fail(ErrorKind::Schema, "base and decision schemas overlap on '" + a.name + "'");
    }
  }
  auto own_u = u.candidate_schema().names();
  auto own_v = v.candidate_schema().names();
  out.chi = ChiExpr::conj(lift(u.chi, own_u, v.base.schema().names()),
                          lift(v.chi, own_v, u.base.schema().names()));
  check_chi(out.chi, out);
  return out;
}

SolutionSet cross(const SolutionSet& u, const SolutionSet& v) {
  Schema us = u.candidate_schema(), vs = v.candidate_schema();
  for (const auto& a : us.attrs()) {
    if (vs.contains(a.name)) {
      fail(ErrorKind::Schema, "cross product of solution sets requires disjoint schemas; '" + a.name + "' is shared");
    }
  }
  return join(u, v);
}

SolutionSet set_op(SetOp op, const SolutionSet& u, const SolutionSet& v) {
  if (!same_extension(u.base, v.base)) {
    fail(ErrorKind::Schema, "solution-set union/intersect/difference require equal bases");
  }
  if (!same_attribute_names(u.decision.schema(), v.decision.schema())) {
    fail(ErrorKind::Schema, "solution-set union/intersect/difference require equal decision schemas");
  }
  SolutionSet out = u;
  out.name.clear();
  switch (op) {
    case SetOp::Union: out.chi = ChiExpr::disj(u.chi, v.chi); break;
    case SetOp::Intersect: out.chi = ChiExpr::conj(u.chi, v.chi); break;
    case SetOp::Difference: out.chi = ChiExpr::conj(u.chi, ChiExpr::negate(v.chi)); break;
  }
  return out;
}

SolutionSet rename(const RenameSpec& spec, const SolutionSet& u) {
  RenameSpec base_spec, dec_spec, inverse;
  for (const auto& [from, to] : spec) {
    if (u.base.schema().contains(from)) {
      base_spec.emplace_back(from, to);
    } else if (u.decision.schema().contains(from)) {
      dec_spec.emplace_back(from, to);
    } else {
      fail(ErrorKind::Name, "rename of unknown attribute '" + from + "'");
    }
    inverse.emplace_back(to, from);
  }
  apply_rename(spec, u.candidate_schema());
  SolutionSet out;
  out.base = adr::rename(base_spec, u.base);
  out.decision = cdr::rename(dec_spec, u.decision);
  out.chi = spec.empty() ? u.chi : map_atoms(u.chi, [&](const IExpr& atom) {
    return map_candidate(atom, [&] { return IExpr::rename(inverse, IExpr::candidate()); });
  });
  check_chi(out.chi, out);
  return out;
}

RankedQuery order_limit(std::optional<Objective> objective, std::optional<std::size_t> limit,
                        const SolutionSet& u) {
  if (objective) check_atom(objective->atom, u, false);
  if (limit && *limit == 0) fail(ErrorKind::Restriction, "limit must be positive");
  return RankedQuery{u, std::move(objective), limit};
}

RankedQuery limit(std::size_t n, const RankedQuery& q) {
  if (q.limit) fail(ErrorKind::Restriction, "a limit has already been applied to this query");
  if (n == 0) fail(ErrorKind::Restriction, "limit must be positive");
  RankedQuery out = q;
  out.limit = n;
  return out;
}

RankedQuery as_query(const SolutionSet& u) { return RankedQuery{u, std::nullopt, std::nullopt}; }

std::optional<std::string> objective_name(const RankedQuery& q) {
  if (!q.objective) return std::nullopt;
  return q.objective->atom.specs().front().name;
}

SolProjection project(std::optional<std::string> rank_attr, std::vector<std::string> attrs,
                      const RankedQuery& q) {
  Schema cand = q.set.candidate_schema();
  auto obj = objective_name(q);
  std::set<std::string> seen;
  for (const auto& a : attrs) {
    if (!seen.insert(a).second) fail(ErrorKind::Schema, "attribute '" + a + "' projected twice");
    if (!cand.contains(a) && !(obj && *obj == a)) {
      fail(ErrorKind::Name, "projected attribute '" + a + "' is neither a base, decision nor objective attribute");
    }
  }
  if (rank_attr && seen.count(*rank_attr)) {
    fail(ErrorKind::Schema, "rank attribute '" + *rank_attr + "' collides with a projected attribute");
  }
  return SolProjection{q, std::move(rank_attr), std::move(attrs)};
}

Relation decision_extension(const SolutionSet& u, std::uint64_t cap) {
  cdr::ProjectOptions po;
  po.cap = cap;
  return cdr::project_eval(u.decision.schema().names(), u.decision, po);
}

std::uint64_t domain_cardinality(const SolutionSet& u, std::uint64_t cap) {
  std::uint64_t m = decision_extension(u, cap).size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < u.base.size(); ++i) {
    if (m != 0 && total > UINT64_MAX / m) return UINT64_MAX;
    total *= m;
  }
  return total;
}

std::vector<Relation> enumerate_domain(const SolutionSet& u, std::uint64_t cap) {
  Relation ext = decision_extension(u, cap);
  std::uint64_t total = domain_cardinality(u, cap);
  if (total > cap) {
    fail(ErrorKind::Limit, "solution-set domain has more than " + std::to_string(cap) + " candidates");
  }
  Schema schema = u.candidate_schema();
  const auto& base = u.base.tuples();
  std::size_t n = base.size(), m = ext.size();
  std::vector<Relation> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<std::size_t> digit(n, 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    std::vector<Tuple> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Tuple t = base[i];
      const auto& d = ext.tuples()[digit[i]];
      t.insert(t.end(), d.begin(), d.end());
      rows.push_back(std::move(t));
    }
    out.emplace_back(u.name, schema, std::move(rows));
    for (std::size_t i = n; i-- > 0;) {
      if (++digit[i] < m) break;
      digit[i] = 0;
    }
  }
  return out;
}

std::vector<Relation> enumerate(const SolutionSet& u, std::uint64_t cap) {
  std::vector<Relation> out;
  for (auto& c : enumerate_domain(u, cap)) {
    if (eval_chi(u.chi, c)) out.push_back(std::move(c));
  }
  return out;
}

Relation eval_iexpr(const IExpr& e, const Relation& candidate) {
  switch (e.kind()) {
    case IExprKind::Candidate: return candidate;
    case IExprKind::Data: return e.relation();
    case IExprKind::Cdr: return cdr::project_eval(e.complete().schema().names(), e.complete());
    case IExprKind::Join:
      if (e.right().kind() == IExprKind::Cdr) return cdr::join_adr(eval_iexpr(e.left(), candidate), e.right().complete());
      if (e.left().kind() == IExprKind::Cdr) return cdr::join_adr(eval_iexpr(e.right(), candidate), e.left().complete());
      return adr::natural_join(eval_iexpr(e.left(), candidate), eval_iexpr(e.right(), candidate));
    case IExprKind::Select: return adr::select(e.predicate(), eval_iexpr(e.input(), candidate));
    case IExprKind::Project: return adr::project(e.attrs(), eval_iexpr(e.input(), candidate));
    case IExprKind::Rename: return adr::rename(e.renames(), eval_iexpr(e.input(), candidate));
    case IExprKind::GroupAgg:
      return adr::group_aggregate(e.attrs(), e.specs(), eval_iexpr(e.input(), candidate));
  }
  fail(ErrorKind::Type, "unknown relational expression");
}

Value eval_atom(const IExpr& atom, const Relation& candidate) {
  Relation r = eval_iexpr(atom, candidate);
  if (r.size() != 1 || r.schema().size() != 1) {
    fail(ErrorKind::Evaluation, "aggregate atom did not produce a single value: " + atom.to_string());
  }
  return r.tuples().front().front();
}

bool eval_chi(const ChiExpr& chi, const Relation& candidate) {
  switch (chi.kind()) {
    case ChiKind::Const: return chi.value();
    case ChiKind::Atom: {
      Value v = eval_atom(chi.iexpr(), candidate);
      if (!v.is_bool()) fail(ErrorKind::Evaluation, "aggregate atom did not produce a single boolean");
      return v.as_bool();
    }
    case ChiKind::And: return eval_chi(chi.kids()[0], candidate) && eval_chi(chi.kids()[1], candidate);
    case ChiKind::Or: return eval_chi(chi.kids()[0], candidate) || eval_chi(chi.kids()[1], candidate);
    case ChiKind::Not: return !eval_chi(chi.kids()[0], candidate);
    case ChiKind::ForAll: {
      std::vector<std::size_t> idx;
      for (const auto& a : chi.attrs()) idx.push_back(*candidate.schema().find(a));
      std::map<Tuple, std::vector<Tuple>, TupleLess> parts;
      for (const auto& t : candidate.tuples()) {
        Tuple key;
        for (auto i : idx) key.push_back(t[i]);
        parts[key].push_back(t);
      }
      for (auto& [key, rows] : parts) {
        if (!eval_chi(chi.kids()[0], Relation(candidate.name(), candidate.schema(), std::move(rows)))) return false;
      }
      return true;
    }
  }
  return false;
}

std::vector<RankedCandidate> solve_by_enumeration(const RankedQuery& q, std::uint64_t cap) {
  std::vector<RankedCandidate> out;
  for (auto& c : enumerate(q.set, cap)) {
    RankedCandidate rc{std::move(c), std::nullopt};
    if (q.objective) rc.objective = eval_atom(q.objective->atom, rc.candidate);
    out.push_back(std::move(rc));
  }
  if (q.objective) {
    bool desc = q.objective->dir == adr::Direction::Desc;
    std::stable_sort(out.begin(), out.end(), [&](const RankedCandidate& a, const RankedCandidate& b) {
      int c = compare(*a.objective, *b.objective);
      return desc ? c > 0 : c < 0;
    });
  }
  if (q.limit && out.size() > *q.limit) out.resize(*q.limit);
  return out;
}

}  // namespace sol
}  // namespace solq
