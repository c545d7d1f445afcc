#include "solq/relation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

#include "solq/error.hpp"

namespace solq {

Relation::Relation(std::string name, Schema schema, std::vector<Tuple> tuples)
    : name_(std::move(name)), schema_(std::move(schema)), tuples_(std::move(tuples)) {
  for (const auto& t : tuples_) {
    if (t.size() != schema_.size()) {
      fail(ErrorKind::Schema, "tuple arity " + std::to_string(t.size()) + " does not match schema arity " +
                                  std::to_string(schema_.size()));
    }
  }
  std::sort(tuples_.begin(), tuples_.end(), TupleLess{});
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end(),
                            [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) == 0; }),
                tuples_.end());
}

bool Relation::contains(const Tuple& t) const {
  return std::binary_search(tuples_.begin(), tuples_.end(), t, TupleLess{});
}

Relation Relation::with_name(std::string name) const {
  Relation r = *this;
  r.name_ = std::move(name);
  return r;
}

bool same_extension(const Relation& a, const Relation& b) {
  if (!same_attribute_names(a.schema(), b.schema())) return false;
  Relation bb = adr::reorder(b, a.schema().names());
  return a.tuples() == bb.tuples();
}

namespace adr {

namespace {

std::vector<std::size_t> indices(const Schema& schema, const std::vector<std::string>& attrs) {
  std::vector<std::size_t> out;
  for (const auto& a : attrs) {
    auto i = schema.find(a);
    if (!i) fail(ErrorKind::Name, "unknown attribute '" + a + "'");
    out.push_back(*i);
  }
  return out;
}

Tuple pick(const Tuple& t, const std::vector<std::size_t>& idx) {
  Tuple out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(t[i]);
  return out;
}

void require_same_schema(const Relation& r, const Relation& s, const char* op) {
  if (!same_attribute_names(r.schema(), s.schema())) {
    fail(ErrorKind::Schema, std::string(op) + " requires identical schemas: (" + r.schema().to_string() +
                                ") vs (" + s.schema().to_string() + ")");
  }
  for (const auto& a : r.schema().attrs()) {
    if (!comparable_kinds(a.domain.value_kind(), s.schema().at(a.name).domain.value_kind())) {
      fail(ErrorKind::Schema, std::string(op) + ": attribute '" + a.name + "' has incompatible domains");
    }
  }
}

}  // namespace

void check_attrs(const Expr& e, const Schema& schema, const char* context) {
  for (const auto& a : attrs_of(e)) {
    if (!schema.contains(a)) {
      fail(ErrorKind::Name, std::string(context) + " references unknown attribute '" + a + "'");
    }
  }
}

Relation construct(std::string name, Schema schema, std::vector<Tuple> tuples) {
  for (std::size_t row = 0; row < tuples.size(); ++row) {
    auto& t = tuples[row];
    if (t.size() != schema.size()) {
      fail(ErrorKind::Schema, "tuple " + std::to_string(row + 1) + " has " + std::to_string(t.size()) +
                                  " values, schema has " + std::to_string(schema.size()));
    }
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& attr = schema[i];
      auto v = attr.domain.coerce(t[i]);
      if (!v) {
        fail(ErrorKind::Domain, "value " + t[i].to_literal() + " is outside the domain " +
                                    attr.domain.to_string() + " of attribute '" + attr.name + "'");
      }
      t[i] = std::move(*v);
    }
  }
  return Relation(std::move(name), std::move(schema), std::move(tuples));
}

Relation nullary_singleton() { return Relation("", Schema(), {Tuple{}}); }

Relation natural_join(const Relation& r, const Relation& s) {
  std::vector<std::string> shared;
  for (const auto& a : r.schema().attrs()) {
    if (auto j = s.schema().find(a.name)) {
      if (!comparable_kinds(a.domain.value_kind(), s.schema()[*j].domain.value_kind())) {
        fail(ErrorKind::Schema, "join attribute '" + a.name + "' has conflicting domains " +
                                    a.domain.to_string() + " and " + s.schema()[*j].domain.to_string());
      }
      shared.push_back(a.name);
    }
  }
  auto ri = indices(r.schema(), shared);
  auto si = indices(s.schema(), shared);
  std::vector<std::size_t> s_extra;
  std::vector<Attribute> attrs = r.schema().attrs();
  for (std::size_t j = 0; j < s.schema().size(); ++j) {
    if (!r.schema().contains(s.schema()[j].name)) {
      s_extra.push_back(j);
      attrs.push_back(s.schema()[j]);
    }
  }
  std::unordered_map<Tuple, std::vector<const Tuple*>, TupleHash> index;
  for (const auto& t : s.tuples()) index[pick(t, si)].push_back(&t);
  std::vector<Tuple> out;
  for (const auto& t : r.tuples()) {
    auto it = index.find(pick(t, ri));
    if (it == index.end()) continue;
    for (const Tuple* u : it->second) {
      Tuple x = t;
      for (auto j : s_extra) x.push_back((*u)[j]);
      out.push_back(std::move(x));
    }
  }
  return Relation("", Schema(std::move(attrs)), std::move(out));
}

Relation cross(const Relation& r, const Relation& s) {
  for (const auto& a : r.schema().attrs()) {
    if (s.schema().contains(a.name)) {
      fail(ErrorKind::Schema, "cross product requires disjoint schemas; '" + a.name + "' is shared");
    }
  }
  return natural_join(r, s);
}

Relation set_op(SetOp op, const Relation& r, const Relation& s) {
  const char* name = op == SetOp::Union ? "union" : op == SetOp::Intersect ? "intersect" : "difference";
  require_same_schema(r, s, name);
  Relation ss = reorder(s, r.schema().names());
  std::vector<Tuple> out;
  const auto& a = r.tuples();
  const auto& b = ss.tuples();
  switch (op) {
    case SetOp::Union:
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), TupleLess{});
      break;
    case SetOp::Intersect:
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), TupleLess{});
      break;
    case SetOp::Difference:
      std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), TupleLess{});
      break;
  }
  return Relation("", r.schema(), std::move(out));
}

Relation select(const Expr& theta, const Relation& r) {
  check_attrs(theta, r.schema(), "selection");
  auto names = r.schema().names();
  std::vector<Tuple> out;
  for (const auto& t : r.tuples()) {
    if (eval_bool(theta, RowBindings(names, t))) out.push_back(t);
  }
  return Relation("", r.schema(), std::move(out));
}

Relation project(const std::vector<std::string>& attrs, const Relation& r) {
  std::set<std::string> seen;
  for (const auto& a : attrs) {
    if (!seen.insert(a).second) fail(ErrorKind::Schema, "attribute '" + a + "' projected twice");
  }
  auto idx = indices(r.schema(), attrs);
  std::vector<Attribute> out_attrs;
  for (auto i : idx) out_attrs.push_back(r.schema()[i]);
  std::vector<Tuple> out;
  out.reserve(r.size());
  for (const auto& t : r.tuples()) out.push_back(pick(t, idx));
  return Relation("", Schema(std::move(out_attrs)), std::move(out));
}

Relation rename(const RenameSpec& spec, const Relation& r) {
  return Relation(r.name(), apply_rename(spec, r.schema()), r.tuples());
}

Value eval_agg_spec(const Expr& spec, const std::vector<std::string>& attrs,
                    const std::vector<const Tuple*>& group) {
  Expr folded = transform(spec, [&](const Expr& e) -> std::optional<Expr> {
    if (e.kind() != ExprKind::AggCall) return std::nullopt;
    std::vector<Tuple> rows;
    rows.reserve(group.size());
    if (e.agg_fn() == AggFn::HasSubset) {
      std::vector<std::size_t> idx;
      for (const auto& a : e.subset()->attrs) {
        auto it = std::find(attrs.begin(), attrs.end(), a);
        if (it == attrs.end()) {
          fail(ErrorKind::Name, "hasSubset(" + e.subset()->label + "): attribute '" + a + "' not in group");
        }
        idx.push_back(static_cast<std::size_t>(it - attrs.begin()));
      }
      for (const Tuple* t : group) rows.push_back(pick(*t, idx));
    } else if (e.agg_fn() == AggFn::Count) {
      rows.assign(group.size(), Tuple{});
    } else {
      for (const Tuple* t : group) {
        RowBindings b(attrs, *t);
        Tuple args;
        for (const auto& a : e.kids()) args.push_back(eval_scalar(a, b));
        rows.push_back(std::move(args));
      }
    }
    return Expr::constant(apply_aggregate(e.agg_fn(), rows, e.subset().get()));
  });
  if (group.empty()) return eval_scalar(folded, EmptyBindings{});
  return eval_scalar(folded, RowBindings(attrs, *group.front()));
}

namespace {

// Attributes referenced outside any AggCall.
void outer_attrs(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == ExprKind::AggCall) return;
  if (e.kind() == ExprKind::Attr) out.insert(e.name());
  for (const auto& k : e.kids()) outer_attrs(k, out);
  for (const auto& r : e.rows()) {
    for (const auto& c : r) outer_attrs(c, out);
  }
}

AttrDomain infer_domain(const std::vector<Value>& vs, const Expr& spec) {
  if (vs.empty()) {
    if (spec.kind() == ExprKind::AggCall) {
      if (is_boolean_agg(spec.agg_fn())) return AttrDomain::boolean();
      if (spec.agg_fn() == AggFn::Count) return AttrDomain::integer();
    }
    if (spec.kind() == ExprKind::Binary && (is_comparison(spec.binary_op()) ||
                                            spec.binary_op() == BinaryOp::And ||
                                            spec.binary_op() == BinaryOp::Or)) {
      return AttrDomain::boolean();
    }
    return AttrDomain::floating();
  }
  bool any_float = false, all_numeric = true;
  for (const auto& v : vs) {
    any_float |= v.kind() == ValueKind::Float;
    all_numeric &= v.is_numeric();
  }
  if (all_numeric) return any_float ? AttrDomain::floating() : AttrDomain::integer();
  for (const auto& v : vs) {
    if (!comparable_kinds(v.kind(), vs.front().kind())) {
      fail(ErrorKind::Type, "aggregate produced values of mixed kinds");
    }
  }
  return domain_for_kind(vs.front().kind(), vs);
}

}  // namespace

Relation group_aggregate(const std::vector<std::string>& group, const std::vector<AggSpec>& specs,
                         const Relation& r) {
  auto gidx = indices(r.schema(), group);
  std::set<std::string> out_names(group.begin(), group.end());
  if (out_names.size() != group.size()) fail(ErrorKind::Schema, "duplicate grouping attribute");
  std::set<std::string> group_set(group.begin(), group.end());
  for (const auto& s : specs) {
    if (!out_names.insert(s.name).second) {
      fail(ErrorKind::Schema, "aggregate output '" + s.name + "' collides with another attribute");
    }
    check_attrs(s.expr, r.schema(), "aggregate");
    std::set<std::string> outer;
    outer_attrs(s.expr, outer);
    for (const auto& a : outer) {
      if (!group_set.count(a)) {
        fail(ErrorKind::Schema, "attribute '" + a + "' must be grouped or aggregated in " + s.expr.to_string());
      }
    }
  }
  std::map<Tuple, std::vector<const Tuple*>, TupleLess> groups;
  for (const auto& t : r.tuples()) groups[pick(t, gidx)].push_back(&t);
  if (group.empty() && groups.empty()) groups[Tuple{}];

  auto names = r.schema().names();
  std::vector<Tuple> out;
  std::vector<std::vector<Value>> cols(specs.size());
  for (const auto& [key, rows] : groups) {
    Tuple t = key;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      Value v = eval_agg_spec(specs[i].expr, names, rows);
      cols[i].push_back(v);
      t.push_back(std::move(v));
    }
    out.push_back(std::move(t));
  }
  std::vector<Attribute> attrs;
  for (auto i : gidx) attrs.push_back(r.schema()[i]);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    AttrDomain d = infer_domain(cols[i], specs[i].expr);
    if (d.kind() == DomainKind::Float) {
      for (auto& t : out) t[gidx.size() + i] = Value::floating(t[gidx.size() + i].as_float());
    }
    attrs.push_back({specs[i].name, d});
  }
  return Relation("", Schema(std::move(attrs)), std::move(out));
}

Sequence order_limit(const std::vector<OrderKey>& order, std::optional<std::size_t> limit,
                     const Relation& r) {
  auto names = r.schema().names();
  for (const auto& k : order) check_attrs(k.expr, r.schema(), "ordering");
  std::vector<std::pair<Tuple, const Tuple*>> keyed;
  for (const auto& t : r.tuples()) {
    RowBindings b(names, t);
    Tuple key;
    for (const auto& k : order) key.push_back(eval_scalar(k.expr, b));
    keyed.emplace_back(std::move(key), &t);
  }
  for (std::size_t i = 1; i < keyed.size(); ++i) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (!comparable_kinds(keyed[i].first[k].kind(), keyed[0].first[k].kind())) {
        fail(ErrorKind::Type, "ordering expression " + order[k].expr.to_string() + " is not orderable");
      }
    }
  }
  std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      int c = compare(a.first[k], b.first[k]);
      if (c != 0) return order[k].dir == Direction::Asc ? c < 0 : c > 0;
    }
    return false;
  });
  Sequence seq{r.name(), r.schema(), {}};
  std::size_t n = limit ? std::min(*limit, keyed.size()) : keyed.size();
  for (std::size_t i = 0; i < n; ++i) seq.tuples.push_back(*keyed[i].second);
  return seq;
}

Relation reorder(const Relation& r, const std::vector<std::string>& order) {
  if (r.schema().names() == order) return r;
  auto idx = indices(r.schema(), order);
  std::vector<Attribute> attrs;
  for (auto i : idx) attrs.push_back(r.schema()[i]);
  std::vector<Tuple> out;
  for (const auto& t : r.tuples()) out.push_back(pick(t, idx));
  return Relation(r.name(), Schema(std::move(attrs)), std::move(out));
}

}  // namespace adr
}  // namespace solq
