#include "solq/eval.hpp"

#include <algorithm>
#include <memory>
#include <thread>

#include "solq/error.hpp"

namespace solq {

const char* query_kind_name(QueryKind k) {
  switch (k) {
    case QueryKind::Decision: return "decision";
    case QueryKind::SatisfactionLimited: return "satisfaction (limited)";
    case QueryKind::SatisfactionAll: return "satisfaction (all)";
    case QueryKind::Optimization: return "optimization";
  }
  return "?";
}

const char* status_name(Status s) {
  switch (s) {
    case Status::Satisfied: return "SATISFIED";
    case Status::Unsatisfiable: return "UNSATISFIABLE";
    case Status::Optimal: return "OPTIMAL";
    case Status::LimitReached: return "LIMIT_REACHED";
  }
  return "?";
}

std::optional<Status> status_from_name(std::string_view s) {
  for (Status st : {Status::Satisfied, Status::Unsatisfiable, Status::Optimal, Status::LimitReached}) {
    if (s == status_name(st)) return st;
  }
  return std::nullopt;
}

QueryClass classify(const QueryMeta& meta, const CompleteRelation& flat) {
  QueryClass qc;
  if (meta.objective) {
    qc.kind = QueryKind::Optimization;
    qc.objective = *meta.objective;
    qc.direction = meta.direction.value_or(adr::Direction::Asc);
    qc.limit = meta.limit.value_or(0);
    if (!meta.limit && !flat.schema().all_finite()) {
      fail(ErrorKind::Unbounded, "ordering over an infinite domain requires a limit");
    }
    return qc;
  }
  if (!meta.limit) {
    qc.kind = QueryKind::SatisfactionAll;
  } else if (*meta.limit == 1) {
    qc.kind = QueryKind::Decision;
    qc.limit = 1;
  } else {
    qc.kind = QueryKind::SatisfactionLimited;
    qc.limit = *meta.limit;
  }
  return qc;
}

namespace {

struct Found {
  Tuple values;
  std::optional<Value> objective;
};

struct Problem {
  std::vector<std::string> names;
  std::vector<std::vector<Value>> domains;
  // checks[d]: conjuncts decidable once attributes 0..d are assigned.
  std::vector<std::vector<Expr>> checks;
  std::vector<Expr> root_checks;
};

bool holds(const Expr& c, const Bindings& b) {
  try {
    return eval_bool(c, b);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Evaluation) return false;
    throw;
  }
}

Problem prepare(const CompleteRelation& flat, std::uint64_t cap) {
  Problem p;
  p.names = flat.schema().names();
  std::uint64_t total = 1;
  for (const auto& a : flat.schema().attrs()) {
    if (!a.domain.is_finite()) {
      fail(ErrorKind::Unbounded, "brute force needs finite domains; attribute '" + a.name + "' has domain " +
                                     a.domain.to_string());
    }
    p.domains.push_back(a.domain.enumerate());
    std::uint64_t m = p.domains.back().size();
    if (m != 0 && total > cap / m) total = cap + 1;
    else total *= m;
    if (total > cap) {
      fail(ErrorKind::Limit, "search space exceeds the enumeration cap of " + std::to_string(cap) + " assignments");
    }
  }
  p.checks.resize(p.names.size());
  for (const auto& c : conjuncts(flat.chi())) {
    int level = -1;
    for (const auto& a : attrs_of(c)) {
      auto it = std::find(p.names.begin(), p.names.end(), a);
      if (it == p.names.end()) fail(ErrorKind::Name, "constraint references unknown attribute '" + a + "'");
      level = std::max(level, static_cast<int>(it - p.names.begin()));
    }
    if (level < 0) p.root_checks.push_back(c);
    else p.checks[static_cast<std::size_t>(level)].push_back(c);
  }
  if (flat.chi().is_false()) p.root_checks.push_back(flat.chi());
  return p;
}

class Worker {
 public:
  Worker(const Problem& p, const QueryClass& qc) : p_(p), qc_(qc), row_(p.names.size()), bind_(p.names, row_) {}

  // Explores assignments whose first attribute takes values in [lo, hi).
  void run(std::size_t lo, std::size_t hi) {
    for (const auto& c : p_.root_checks) {
      if (!holds(c, bind_)) return;
    }
    if (p_.names.empty()) {
      if (lo == 0 && hi > 0) leaf();
      return;
    }
    for (std::size_t v = lo; v < hi && !done_; ++v) visit(0, v);
  }

  std::vector<Found> found;
  std::uint64_t visited = 0;
  bool stopped_early = false;

 private:
  void visit(std::size_t d, std::size_t v) {
    ++visited;
    row_[d] = p_.domains[d][v];
    for (const auto& c : p_.checks[d]) {
      if (!holds(c, bind_)) return;
    }
    if (d + 1 == p_.names.size()) {
      leaf();
      return;
    }
    for (std::size_t w = 0; w < p_.domains[d + 1].size() && !done_; ++w) visit(d + 1, w);
  }

  void leaf() {
    if (qc_.kind == QueryKind::Optimization) {
      Value obj = eval_scalar(qc_.objective, bind_);
      if (qc_.limit == 1) {
        if (found.empty() || better(obj, *found.front().objective)) {
          found.clear();
          found.push_back({row_, obj});
        }
      } else {
        found.push_back({row_, obj});
      }
      return;
    }
    found.push_back({row_, std::nullopt});
    if ((qc_.kind == QueryKind::Decision || qc_.kind == QueryKind::SatisfactionLimited) &&
        found.size() >= qc_.limit) {
      done_ = true;
      stopped_early = true;
    }
  }

  bool better(const Value& a, const Value& b) const {
    int c = compare(a, b);
    return qc_.direction == adr::Direction::Desc ? c > 0 : c < 0;
  }

  const Problem& p_;
  const QueryClass& qc_;
  Tuple row_;
  RowBindings bind_;
  bool done_ = false;
};

}  // namespace

EvalOutcome brute_force_solve(const CompleteRelation& flat, const QueryClass& qc, const BruteForceOptions& opts) {
  Problem p = prepare(flat, opts.cap);
  std::size_t width = p.names.empty() ? 1 : p.domains[0].size();
  bool parallel = opts.jobs > 1 && width > 1 &&
                  (qc.kind == QueryKind::SatisfactionAll || qc.kind == QueryKind::Optimization);
  std::vector<std::unique_ptr<Worker>> workers;
  if (!parallel) {
    workers.push_back(std::make_unique<Worker>(p, qc));
    workers.back()->run(0, width);
  } else {
    std::size_t jobs = std::min<std::size_t>(opts.jobs, width);
    for (std::size_t j = 0; j < jobs; ++j) workers.push_back(std::make_unique<Worker>(p, qc));
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
      std::size_t lo = width * j / jobs, hi = width * (j + 1) / jobs;
      threads.emplace_back([&, j, lo, hi] {
        try {
          workers[j]->run(lo, hi);
        } catch (...) {
          errors[j] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EvalOutcome out;
  std::vector<Found> all;
  bool stopped = false;
  for (auto& w : workers) {
    out.assignments_visited += w->visited;
    stopped = stopped || w->stopped_early;
    for (auto& f : w->found) all.push_back(std::move(f));
  }
  if (qc.kind == QueryKind::Optimization) {
    bool desc = qc.direction == adr::Direction::Desc;
    std::stable_sort(all.begin(), all.end(), [&](const Found& a, const Found& b) {
      int c = compare(*a.objective, *b.objective);
      return desc ? c > 0 : c < 0;
    });
    if (qc.limit > 0 && all.size() > qc.limit) all.resize(qc.limit);
  }
  for (auto& f : all) {
    Assignment a;
    for (std::size_t i = 0; i < p.names.size(); ++i) a.emplace(p.names[i], f.values[i]);
    out.candidates.push_back(std::move(a));
    if (f.objective) out.objective_values.push_back(*f.objective);
  }
  if (out.candidates.empty()) {
    out.status = Status::Unsatisfiable;
  } else if (qc.kind == QueryKind::Optimization) {
    out.status = Status::Optimal;
  } else if (qc.kind == QueryKind::SatisfactionLimited && stopped) {
    out.status = Status::LimitReached;
  } else {
    out.status = Status::Satisfied;
  }
  return out;
}

namespace {

MapBindings bindings_of(const Assignment& a) {
  MapBindings b;
  for (const auto& [k, v] : a) b.set(k, v);
  return b;
}

}  // namespace

bool check_feasible(const CompleteRelation& flat, const Assignment& a) {
  for (const auto& attr : flat.schema().attrs()) {
    auto it = a.find(attr.name);
    if (it == a.end()) fail(ErrorKind::Evaluation, "assignment does not cover attribute '" + attr.name + "'");
    if (!attr.domain.contains(it->second)) return false;
  }
  return holds(flat.chi(), bindings_of(a));
}

Value evaluate_objective(const Expr& objective, const Assignment& a) {
  return eval_scalar(objective, bindings_of(a));
}

Relation reinstantiate(const EvalOutcome& outcome, const FlatForm& ff, const std::vector<std::string>& attrs,
                       const std::optional<std::string>& rank_attr, const std::string& name) {
  enum class Source { Rank, Base, Decision, Objective };
  struct Column {
    Source src;
    std::size_t index = 0;
  };
  std::vector<Column> cols;
  std::vector<std::string> names;
  if (rank_attr) {
    cols.push_back({Source::Rank});
    names.push_back(*rank_attr);
  }
  for (const auto& a : attrs) {
    if (auto i = ff.base_schema.find(a)) {
      cols.push_back({Source::Base, *i});
    } else if (auto j = ff.decision_schema.find(a)) {
      cols.push_back({Source::Decision, *j});
    } else if (ff.meta.objective && a == ff.meta.objective_name) {
      cols.push_back({Source::Objective});
    } else {
      fail(ErrorKind::Name, "cannot reinstantiate unknown attribute '" + a + "'");
    }
    names.push_back(a);
  }

  std::vector<Tuple> rows;
  std::vector<Value> objective_seen;
  for (std::size_t c = 0; c < outcome.candidates.size(); ++c) {
    const Assignment& a = outcome.candidates[c];
    MapBindings b = bindings_of(a);
    std::optional<Value> total;
    for (std::size_t i = 0; i < ff.symI.rows.size(); ++i) {
      Tuple t;
      for (const auto& col : cols) {
        switch (col.src) {
          case Source::Rank: t.push_back(Value::integer(static_cast<std::int64_t>(c + 1))); break;
          case Source::Base: t.push_back(ff.symI.rows[i][col.index].value()); break;
          case Source::Decision: {
            const std::string& flat_name = ff.flat_names[i][col.index];
            auto it = a.find(flat_name);
            if (it == a.end()) fail(ErrorKind::Solver, "result lacks a value for '" + flat_name + "'");
            const auto& dom = ff.decision_schema[col.index].domain;
            auto v = dom.coerce(it->second);
            if (!v) {
              fail(ErrorKind::Solver, "value " + it->second.to_string() + " for '" + flat_name +
                                          "' is outside its domain " + dom.to_string());
            }
            t.push_back(*v);
            break;
          }
          case Source::Objective: {
            Value v;
            if (!ff.meta.row_objective.empty()) {
              v = eval_scalar(ff.meta.row_objective[i], b);
            } else {
              if (!total) {
                total = c < outcome.objective_values.size() ? outcome.objective_values[c]
                                                            : eval_scalar(*ff.meta.objective, b);
              }
              v = *total;
            }
            objective_seen.push_back(v);
            t.push_back(std::move(v));
            break;
          }
        }
      }
      rows.push_back(std::move(t));
    }
  }

  std::vector<Attribute> schema;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    AttrDomain d;
    switch (cols[k].src) {
      case Source::Rank: d = AttrDomain::integer(); break;
      case Source::Base: d = ff.base_schema[cols[k].index].domain; break;
      case Source::Decision: d = ff.decision_schema[cols[k].index].domain; break;
      case Source::Objective: {
        bool any_float = false;
        for (const auto& v : objective_seen) any_float = any_float || v.kind() == ValueKind::Float;
        d = any_float ? AttrDomain::floating()
                      : domain_for_kind(objective_seen.empty() ? ValueKind::Int : objective_seen.front().kind());
        if (any_float) {
          for (auto& r : rows) {
            if (r[k].kind() == ValueKind::Int) r[k] = Value::floating(r[k].as_float());
          }
        }
        break;
      }
    }
    schema.push_back({names[k], d});
  }
  return Relation(name, Schema(std::move(schema)), std::move(rows));
}

EvalOutcome BruteForceBackend::solve(const FlatForm& ff) {
  return brute_force_solve(ff.flat, classify(ff.meta, ff.flat), opts_);
}

Relation materialize(const SolProjection& p, Backend& backend, const std::string& name) {
  FlatForm ff = phi::translate(p.query);
  EvalOutcome out = backend.solve(ff);
  std::vector<std::string> attrs = p.attrs;
  if (attrs.empty()) attrs = p.query.set.candidate_schema().names();
  return reinstantiate(out, ff, attrs, p.rank_attr, name);
}

}  // namespace solq
