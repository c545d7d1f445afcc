#include "solq/cdr.hpp"

#include <algorithm>
#include <set>

#include "solq/error.hpp"

namespace solq::cdr {

namespace {

void validate_chi(const Expr& chi, const Schema& schema) {
  adr::check_attrs(chi, schema, "characteristic function");
  if (contains_agg_call(chi)) {
    fail(ErrorKind::Type, "aggregates are not allowed in a characteristic function: " + chi.to_string());
  }
}

void require_identical(const CompleteRelation& c, const CompleteRelation& d, const char* op) {
  if (!same_attribute_names(c.schema(), d.schema())) {
    fail(ErrorKind::Schema, std::string(op) + " requires identical schemas: (" + c.schema().to_string() +
                                ") vs (" + d.schema().to_string() + ")");
  }
  for (const auto& a : c.schema().attrs()) {
    if (!(a.domain == d.schema().at(a.name).domain)) {
      fail(ErrorKind::Schema, std::string(op) + ": attribute '" + a.name + "' has different domains");
    }
  }
}

}  // namespace

CompleteRelation construct(std::string name, Schema schema, Expr chi) {
  validate_chi(chi, schema);
  return CompleteRelation(std::move(name), std::move(schema), std::move(chi));
}

CompleteRelation combine(Combine kind, const CompleteRelation& c, const CompleteRelation& d) {
  switch (kind) {
    case Combine::Join:
    case Combine::Cross: {
      std::vector<Attribute> attrs = c.schema().attrs();
      for (const auto& a : d.schema().attrs()) {
        if (auto i = c.schema().find(a.name)) {
          if (kind == Combine::Cross) {
            fail(ErrorKind::Schema, "cross product requires disjoint schemas; '" + a.name + "' is shared");
          }
          if (!(c.schema()[*i].domain == a.domain)) {
            fail(ErrorKind::Schema, "join attribute '" + a.name + "' has conflicting domains " +
                                        c.schema()[*i].domain.to_string() + " and " + a.domain.to_string());
          }
          continue;
        }
        attrs.push_back(a);
      }
      return CompleteRelation("", Schema(std::move(attrs)), c.chi() && d.chi());
    }
    case Combine::Intersect:
      require_identical(c, d, "intersect");
      return CompleteRelation("", c.schema(), c.chi() && d.chi());
    case Combine::Difference:
      require_identical(c, d, "difference");
      return CompleteRelation("", c.schema(), c.chi() && !d.chi());
    case Combine::Union:
      require_identical(c, d, "union");
      return CompleteRelation("", c.schema(), c.chi() || d.chi());
  }
  fail(ErrorKind::Type, "unknown combination");
}

CompleteRelation select(const Expr& theta, const CompleteRelation& c) {
  validate_chi(theta, c.schema());
  return CompleteRelation("", c.schema(), c.chi() && theta);
}

CompleteRelation rename(const RenameSpec& spec, const CompleteRelation& c) {
  return CompleteRelation(c.name(), apply_rename(spec, c.schema()), rename_attrs(c.chi(), spec));
}

CompleteRelation from_adr(const Relation& r) {
  std::vector<Expr> ors;
  const auto& attrs = r.schema().attrs();
  for (const auto& t : r.tuples()) {
    std::vector<Expr> ands;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      ands.push_back(Expr::binary(BinaryOp::Eq, Expr::attr(attrs[i].name), Expr::constant(t[i])));
    }
    ors.push_back(conjoin(ands));
  }
  return CompleteRelation(r.name(), r.schema(), disjoin(ors));
}

CompleteRelation decision_from_adr(const Relation& r) {
  std::vector<Attribute> attrs;
  for (std::size_t i = 0; i < r.schema().size(); ++i) {
    std::vector<Value> col;
    for (const auto& t : r.tuples()) col.push_back(t[i]);
    const auto& a = r.schema()[i];
    attrs.push_back({a.name, AttrDomain::reference(r.name(), a.name, std::move(col))});
  }
  Expr chi = r.schema().size() == 1 ? Expr::boolean(true) : from_adr(r).chi();
  return CompleteRelation(r.name(), Schema(std::move(attrs)), chi);
}

Relation project_eval(const std::vector<std::string>& attrs, const CompleteRelation& c,
                      const ProjectOptions& opts) {
  for (const auto& a : attrs) {
    if (!c.schema().contains(a)) fail(ErrorKind::Name, "unknown attribute '" + a + "' in projection");
  }
  std::vector<Tuple> sols;
  try {
    SearchOptions so;
    so.cap = opts.cap;
    sols = solve_cdr(c.schema(), c.chi(), std::vector<std::optional<Value>>(c.schema().size()), so);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Unbounded) fail(ErrorKind::Unbounded, std::string("unbounded projection: ") + e.what());
    throw;
  }
  Relation full("", c.schema(), std::move(sols));
  if (!opts.order.empty() || opts.limit) {
    auto seq = adr::order_limit(opts.order, opts.limit, full);
    full = Relation("", c.schema(), std::move(seq.tuples));
  }
  return adr::project(attrs, full);
}

Relation join_adr(const Relation& r, const CompleteRelation& c, std::uint64_t cap) {
  std::vector<std::optional<std::size_t>> from_r(c.schema().size());
  std::vector<Attribute> attrs = r.schema().attrs();
  std::vector<std::size_t> extra;
  for (std::size_t j = 0; j < c.schema().size(); ++j) {
    const auto& a = c.schema()[j];
    if (auto i = r.schema().find(a.name)) {
      if (!comparable_kinds(r.schema()[*i].domain.value_kind(), a.domain.value_kind())) {
        fail(ErrorKind::Schema, "join attribute '" + a.name + "' has conflicting domains");
      }
      from_r[j] = *i;
    } else {
      extra.push_back(j);
      attrs.push_back(a);
    }
  }
  SearchOptions so;
  so.cap = cap;
  std::vector<Tuple> out;
  for (const auto& t : r.tuples()) {
    std::vector<std::optional<Value>> fixed(c.schema().size());
    for (std::size_t j = 0; j < fixed.size(); ++j) {
      if (from_r[j]) fixed[j] = t[*from_r[j]];
    }
    std::vector<Tuple> sols;
    try {
      sols = solve_cdr(c.schema(), c.chi(), fixed, so);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Unbounded) {
        fail(ErrorKind::Unbounded, "cannot establish functional dependency: " + std::string(e.what()));
      }
      throw;
    }
    for (const auto& s : sols) {
      Tuple x = t;
      for (auto j : extra) x.push_back(s[j]);
      out.push_back(std::move(x));
    }
  }
  return Relation("", Schema(std::move(attrs)), std::move(out));
}

namespace {

void add_unique(std::vector<Value>& vs, const Value& v) {
  for (const auto& x : vs) {
    if (x.kind() == v.kind() && x == v) return;
  }
  vs.push_back(v);
}

constexpr std::size_t kProbeLimit = 1'000'000;

void for_each_assignment(const std::vector<std::vector<Value>>& doms,
                         const std::function<void(const std::vector<Value>&)>& f) {
  std::size_t total = 1;
  for (const auto& d : doms) {
    if (d.empty()) return;
    total *= d.size();
    if (total > kProbeLimit) fail(ErrorKind::Limit, "probe space exceeds " + std::to_string(kProbeLimit));
  }
  std::vector<std::size_t> idx(doms.size(), 0);
  std::vector<Value> cur(doms.size());
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t i = 0; i < doms.size(); ++i) cur[i] = doms[i][idx[i]];
    f(cur);
    for (std::size_t i = doms.size(); i-- > 0;) {
      if (++idx[i] < doms[i].size()) break;
      idx[i] = 0;
    }
  }
}

}  // namespace

bool equivalent(const CompleteRelation& c, const CompleteRelation& d, const ProbeDomains& probes) {
  if (!same_attribute_names(c.schema(), d.schema())) {
    fail(ErrorKind::Schema, "equivalence requires identical schemas: (" + c.schema().to_string() + ") vs (" +
                                d.schema().to_string() + ")");
  }
  const Schema& schema = c.schema();
  std::size_t n = schema.size();
  std::vector<std::vector<Value>> doms(n);
  std::vector<bool> probed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = schema[i];
    auto it = probes.find(a.name);
    if (it != probes.end()) {
      probed[i] = true;
      for (const auto& v : it->second) {
        if (auto cv = a.domain.coerce(v)) add_unique(doms[i], *cv);
      }
    } else if (a.domain.is_finite()) {
      doms[i] = a.domain.enumerate();
    }
  }
  std::vector<std::vector<Value>> seed_doms;
  std::vector<std::size_t> seed_idx;
  for (std::size_t i = 0; i < n; ++i) {
    if (probed[i]) {
      seed_doms.push_back(doms[i]);
      seed_idx.push_back(i);
    }
  }
  bool needs_completion = false;
  for (std::size_t i = 0; i < n; ++i) needs_completion |= doms[i].empty();
  if (needs_completion) {
    for (std::size_t i = 0; i < n; ++i) {
      if (doms[i].empty()) {
        if (auto cv = schema[i].domain.coerce(Value::integer(0))) doms[i].push_back(*cv);
      }
    }
    const CompleteRelation aligned_d(d.name(), schema, d.chi());
    for_each_assignment(seed_doms, [&](const std::vector<Value>& seed) {
      std::vector<std::optional<Value>> fixed(n);
      for (std::size_t k = 0; k < seed_idx.size(); ++k) fixed[seed_idx[k]] = seed[k];
      for (const CompleteRelation* rel : {&c, &aligned_d}) {
        try {
          for (const auto& sol : solve_cdr(schema, rel->chi(), fixed)) {
            for (std::size_t i = 0; i < n; ++i) {
              if (!probed[i] && !schema[i].domain.is_finite()) add_unique(doms[i], sol[i]);
            }
          }
        } catch (const Error&) {
        }
      }
    });
  }
  auto names = schema.names();
  EvalOptions eo{1e-9};
  bool agree = true;
  for_each_assignment(doms, [&](const std::vector<Value>& row) {
    if (!agree) return;
    RowBindings b(names, row);
    auto holds = [&](const Expr& chi) {
      try {
        return eval_bool(chi, b, eo);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Evaluation) return false;
        throw;
      }
    };
    if (holds(c.chi()) != holds(d.chi())) agree = false;
  });
  return agree;
}

}  // namespace solq::cdr
