#include "solq/frontend/elaborate.hpp"

#include <algorithm>

#include "solq/error.hpp"
#include "solq/eval.hpp"
#include "solq/frontend/lexer.hpp"
#include "solq/frontend/loader.hpp"
#include "solq/frontend/printer.hpp"

namespace solq::frontend {

Namespace namespace_of(const Object& o) {
  switch (o.index()) {
    case 0:
    case 5: return Namespace::Data;
    case 1: return Namespace::Complete;
    case 2: return Namespace::Solution;
    default: return Namespace::Query;
  }
}

const char* namespace_name(Namespace ns) {
  switch (ns) {
    case Namespace::Data: return "data relations";
    case Namespace::Complete: return "complete relations";
    case Namespace::Solution: return "solution sets";
    case Namespace::Query: return "queries";
  }
  return "?";
}

const char* object_kind_name(const Object& o) {
  switch (o.index()) {
    case 0: return "relation";
    case 1: return "complete relation";
    case 2: return "solution set";
    case 3: return "ranked query";
    case 4: return "solution projection";
    case 5: return "ordered sequence";
  }
  return "?";
}

void Catalog::define(const std::string& name, Object value) {
  if (auto it = objects_.find(name); it != objects_.end()) {
    fail(ErrorKind::Name, "'" + name + "' is already defined among the " +
                              namespace_name(frontend::namespace_of(it->second)));
  }
  objects_.emplace(name, std::move(value));
}

const Object* Catalog::find(const std::string& name) const {
  auto it = objects_.find(name);
  return it == objects_.end() ? nullptr : &it->second;
}

std::optional<Namespace> Catalog::namespace_of(const std::string& name) const {
  const Object* o = find(name);
  if (!o) return std::nullopt;
  return frontend::namespace_of(*o);
}

std::vector<std::string> Catalog::names(Namespace ns) const {
  std::vector<std::string> out;
  for (const auto& [name, o] : objects_) {
    if (frontend::namespace_of(o) == ns) out.push_back(name);
  }
  return out;
}

namespace {

struct Scope {
  std::string candidate;
  bool any_solution = false;  // input was not a plain name
};

const char* kind_word(const Node& n) {
  switch (n.kind) {
    case NodeKind::Select: return n.sol ? "select_sol" : "select";
    case NodeKind::Project: return "project";
    case NodeKind::ProjectSol: return "project_sol";
    case NodeKind::Rename: return n.sol ? "rename_sol" : "rename";
    case NodeKind::Gamma: return "gamma";
    case NodeKind::Tau: return n.sol ? "tau_sol" : "tau";
    case NodeKind::TauSol: return "tau_sol";
    case NodeKind::Lambda: return n.sol ? "lambda_sol" : "lambda";
    case NodeKind::Omega: return "omega";
    case NodeKind::OmegaSol: return "omega_sol";
    case NodeKind::SetOp: return "set operator";
    default: return "expression";
  }
}

class Elaborator {
 public:
  Elaborator(const Catalog& cat, const ElabOptions& opts) : cat_(cat), opts_(opts) {}

  Object eval(const Node& n) {
    try {
      return eval_impl(n);
    } catch (const Error& e) {
      throw e.at(n.pos);
    }
  }

  Expr scalar(const Node& n) {
    try {
      return scalar_impl(n);
    } catch (const Error& e) {
      throw e.at(n.pos);
    }
  }

  Value constant(const Node& n) {
    Expr e = fold(scalar(n));
    if (!e.is_const()) throw Error(ErrorKind::Type, "expected a constant, found " + print(n), n.pos);
    return e.value();
  }

  Schema schema(const std::vector<Decl>& decls) {
    std::vector<Attribute> attrs;
    for (const auto& d : decls) {
      try {
        attrs.push_back(Attribute{d.name, domain(d)});
      } catch (const Error& e) {
        throw e.at(d.pos);
      }
    }
    return Schema(std::move(attrs));
  }

 private:
  // --- helpers ------------------------------------------------------------

  [[noreturn]] static void type_error(const std::string& msg) { fail(ErrorKind::Type, msg); }

  Relation finite(const Object& o, const char* op) {
    if (auto* r = std::get_if<Relation>(&o)) return *r;
    if (auto* c = std::get_if<CompleteRelation>(&o)) {
      cdr::ProjectOptions po;
      po.cap = opts_.cap;
      return cdr::project_eval(c->schema().names(), *c, po);
    }
    if (auto* s = std::get_if<adr::Sequence>(&o)) return Relation(s->name, s->schema, s->tuples);
    if (auto* p = std::get_if<SolProjection>(&o)) {
      BruteForceBackend bf(BruteForceOptions{opts_.cap, 1});
      return materialize(*p, bf);
    }
    type_error(std::string(op) + " needs a relation, found a " + object_kind_name(o));
  }

  static CompleteRelation complete(const Object& o) {
    if (auto* c = std::get_if<CompleteRelation>(&o)) return *c;
    if (auto* r = std::get_if<Relation>(&o)) return cdr::from_adr(*r);
    if (auto* s = std::get_if<adr::Sequence>(&o)) return cdr::from_adr(Relation(s->name, s->schema, s->tuples));
    type_error(std::string("expected a relation, found a ") + object_kind_name(o));
  }

  // Finite relations, including materializable solution projections.
  static bool is_relation(const Object& o) {
    return std::holds_alternative<Relation>(o) || std::holds_alternative<adr::Sequence>(o) ||
           std::holds_alternative<SolProjection>(o);
  }

  static const SolutionSet& solution(const Object& o, const char* op) {
    if (auto* u = std::get_if<SolutionSet>(&o)) return *u;
    if (std::holds_alternative<RankedQuery>(o) || std::holds_alternative<SolProjection>(o)) {
      fail(ErrorKind::Type, std::string(op) + " cannot be applied after an outer operator (tau_sol, lambda_sol, "
                                              "project_sol): its input is a " + object_kind_name(o));
    }
    type_error(std::string(op) + " needs a solution set, found a " + object_kind_name(o));
  }

  static std::string leaf_name(const Node& n) {
    if (n.kind == NodeKind::Name) return n.op;
    for (const auto& k : n.kids) {
      std::string s = leaf_name(*k);
      if (!s.empty()) return s;
    }
    return "";
  }

  AttrDomain domain(const Decl& d) {
    const DomainSpec& s = d.domain;
    switch (s.kind) {
      case DomainSpec::Kind::Named: {
        const std::string& w = s.name;
        if (iequals(w, "INT") || iequals(w, "INTEGER")) return AttrDomain::integer();
        if (iequals(w, "FLOAT") || iequals(w, "REAL") || iequals(w, "DOUBLE")) return AttrDomain::floating();
        if (iequals(w, "BOOL") || iequals(w, "BOOLEAN")) return AttrDomain::boolean();
        return AttrDomain::varchar();
      }
      case DomainSpec::Kind::IntRange: return AttrDomain::int_range(s.lo.as_int(), s.hi.as_int());
      case DomainSpec::Kind::FloatRange: return AttrDomain::float_range(s.lo.as_float(), s.hi.as_float());
      case DomainSpec::Kind::Enum: return AttrDomain::enumeration(s.tags);
      case DomainSpec::Kind::In: {
        Relation r = finite(eval(*s.in), "IN");
        if (r.schema().size() != 1) {
          fail(ErrorKind::Schema, "IN needs a single-attribute relation, found " + r.schema().to_string());
        }
        std::vector<Value> members;
        for (const auto& t : r.tuples()) members.push_back(t[0]);
        std::string label = s.in->kind == NodeKind::Name ? s.in->op : leaf_name(*s.in);
        return AttrDomain::reference(label, r.schema()[0].name, std::move(members));
      }
    }
    fail(ErrorKind::Type, "unknown domain");
  }

  // --- scalars ------------------------------------------------------------

  Expr scalar_impl(const Node& n) {
    switch (n.kind) {
      case NodeKind::Literal: return Expr::constant(n.literal);
      case NodeKind::Name: return Expr::attr(n.op);
      case NodeKind::Unary: {
        Expr k = scalar(n.kid(0));
        if (n.op == "NOT") return Expr::unary(UnaryOp::Not, k);
        if (k.is_const() && k.value().is_numeric()) return fold(Expr::unary(UnaryOp::Neg, k));
        return Expr::unary(UnaryOp::Neg, k);
      }
      case NodeKind::Binary: {
        static const std::pair<const char*, BinaryOp> ops[] = {
            {"+", BinaryOp::Add}, {"-", BinaryOp::Sub}, {"*", BinaryOp::Mul}, {"/", BinaryOp::Div},
            {"^", BinaryOp::Pow}, {"=", BinaryOp::Eq},  {"!=", BinaryOp::Ne}, {"<", BinaryOp::Lt},
            {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},  {">=", BinaryOp::Ge}, {"AND", BinaryOp::And},
            {"OR", BinaryOp::Or}};
        for (const auto& [sym, op] : ops) {
          if (n.op == sym) return Expr::binary(op, scalar(n.kid(0)), scalar(n.kid(1)));
        }
        fail(ErrorKind::Syntax, "unknown operator '" + n.op + "'");
      }
      case NodeKind::Between: return Expr::between(scalar(n.kid(0)), scalar(n.kid(1)), scalar(n.kid(2)));
      case NodeKind::Call: return call(n);
      default:
        type_error(std::string("expected a scalar expression, found ") + kind_word(n) + " " + print(n));
    }
  }

  Expr call(const Node& n) {
    if (auto fn = agg_fn_from_name(n.op)) {
      if (*fn == AggFn::HasSubset) {
        if (n.kids.size() != 1 || n.kid(0).kind != NodeKind::Name) {
          type_error("hasSubset takes the name of a relation");
        }
        Relation r = finite(resolve(n.kid(0)), "hasSubset");
        auto t = std::make_shared<const Table>(Table{n.kid(0).op, r.schema().names(), r.tuples()});
        return Expr::agg_call(AggFn::HasSubset, {}, t);
      }
      std::vector<Expr> args;
      for (const auto& k : n.kids) args.push_back(scalar(*k));
      if (*fn != AggFn::Count && args.empty()) type_error(std::string(agg_fn_name(*fn)) + " needs an argument");
      return Expr::agg_call(*fn, std::move(args));
    }
    static const std::pair<const char*, UnaryOp> fns[] = {
        {"abs", UnaryOp::Abs}, {"sqrt", UnaryOp::Sqrt}, {"exp", UnaryOp::Exp}, {"sin", UnaryOp::Sin}};
    for (const auto& [name, op] : fns) {
      if (iequals(n.op, name)) {
        if (n.kids.size() != 1) type_error(std::string(name) + " takes one argument");
        return Expr::unary(op, scalar(n.kid(0)));
      }
    }
    fail(ErrorKind::Name, "unknown function '" + n.op + "'");
  }

  // --- relational values ----------------------------------------------------

  const Object& resolve(const Node& name) {
    const Object* o = cat_.find(name.op);
    if (!o) throw Error(ErrorKind::Name, "unknown name '" + name.op + "'", name.pos);
    return *o;
  }

  static Scope scope_for(const Node& input) {
    Scope s;
    if (input.kind == NodeKind::Name) s.candidate = input.op;
    else s.any_solution = true;
    return s;
  }

  Object eval_impl(const Node& n) {
    switch (n.kind) {
      case NodeKind::Name: return resolve(n);
      case NodeKind::Omega: return omega(n);
      case NodeKind::OmegaSol: {
        std::optional<Relation> base;
        std::optional<CompleteRelation> decision;
        if (n.kids.size() == 2) base = finite(eval(n.kid(0)), "omega_sol base");
        if (!n.kids.empty()) {
          Object d = eval(*n.kids.back());
          if (auto* r = std::get_if<Relation>(&d)) decision = cdr::decision_from_adr(*r);
          else decision = complete(d);
        }
        return sol::construct(base, decision);
      }
      case NodeKind::Select: {
        Object in = eval(n.input());
        if (n.sol || std::holds_alternative<SolutionSet>(in) || std::holds_alternative<RankedQuery>(in)) {
          const SolutionSet& u = solution(in, kind_word(n));
          return sol::select(chi(n.kid(0), scope_for(n.input())), u);
        }
        Expr theta = scalar(n.kid(0));
        if (auto* c = std::get_if<CompleteRelation>(&in)) return cdr::select(theta, *c);
        return adr::select(theta, finite(in, "select"));
      }
      case NodeKind::Project: {
        Object in = eval(n.input());
        if (auto* c = std::get_if<CompleteRelation>(&in)) {
          cdr::ProjectOptions po;
          po.cap = opts_.cap;
          return cdr::project_eval(n.names, *c, po);
        }
        if (!is_relation(in)) {
          type_error(std::string("project needs a relation, found a ") + object_kind_name(in) +
                     "; use project_sol for solution sets");
        }
        return adr::project(n.names, finite(in, "project"));
      }
      case NodeKind::ProjectSol: {
        Object in = eval(n.input());
        RankedQuery q;
        if (auto* u = std::get_if<SolutionSet>(&in)) q = sol::as_query(*u);
        else if (auto* rq = std::get_if<RankedQuery>(&in)) q = *rq;
        else if (std::holds_alternative<SolProjection>(in)) type_error("project_sol cannot be applied twice");
        else type_error(std::string("project_sol needs a solution set, found a ") + object_kind_name(in));
        return sol::project(n.rank, n.names, q);
      }
      case NodeKind::Rename: {
        Object in = eval(n.input());
        if (auto* u = std::get_if<SolutionSet>(&in)) return sol::rename(n.renames, *u);
        if (n.sol) solution(in, "rename_sol");
        if (auto* c = std::get_if<CompleteRelation>(&in)) return cdr::rename(n.renames, *c);
        return adr::rename(n.renames, finite(in, "rename"));
      }
      case NodeKind::Gamma: {
        Object in = eval(n.input());
        if (!is_relation(in) && !std::holds_alternative<CompleteRelation>(in)) {
          type_error(std::string("gamma needs a relation, found a ") + object_kind_name(in) +
                     "; aggregate a solution set inside select_sol or tau_sol");
        }
        std::vector<adr::AggSpec> specs;
        for (const auto& s : n.specs) specs.push_back(adr::AggSpec{scalar(*s.expr), s.name});
        return adr::group_aggregate(n.names, specs, finite(in, "gamma"));
      }
      case NodeKind::Tau: {
        Object in = eval(n.input());
        if (std::holds_alternative<CompleteRelation>(in)) {
          type_error("tau over a complete relation must be limited: write lambda[n](tau[...](...))");
        }
        return adr::order_limit(keys(n), std::nullopt, finite(in, "tau"));
      }
      case NodeKind::TauSol: {
        Object in = eval(n.input());
        if (std::holds_alternative<RankedQuery>(in)) {
          const auto& q = std::get<RankedQuery>(in);
          if (q.objective) type_error("multiple objectives are not supported");
          type_error("tau_sol cannot follow lambda_sol");
        }
        const SolutionSet& u = solution(in, "tau_sol");
        Objective obj{n.keys[0].dir, iexpr(*n.keys[0].expr, scope_for(n.input()))};
        return sol::order_limit(obj, std::nullopt, u);
      }
      case NodeKind::Lambda: return lambda(n);
      case NodeKind::SetOp: return setop(n);
      default:
        type_error(std::string("expected a relational expression, found ") + print(n));
    }
  }

  std::vector<adr::OrderKey> keys(const Node& n) {
    std::vector<adr::OrderKey> out;
    for (const auto& k : n.keys) out.push_back(adr::OrderKey{scalar(*k.expr), k.dir});
    return out;
  }

  Object omega(const Node& n) {
    Schema s = schema(n.decls);
    if (!n.tuples) return cdr::construct("", s, scalar(n.kid(0)));
    std::vector<Tuple> tuples;
    for (const auto& row : *n.tuples) {
      Tuple t;
      for (const auto& cell : row) t.push_back(constant(*cell));
      if (t.size() != s.size()) {
        throw Error(ErrorKind::Schema,
                    "tuple has " + std::to_string(t.size()) + " values for " + std::to_string(s.size()) + " attributes",
                    row.empty() ? n.pos : row.front()->pos);
      }
      tuples.push_back(std::move(t));
    }
    return adr::construct("", s, std::move(tuples));
  }

  Object lambda(const Node& n) {
    if (n.count < 0) type_error("lambda needs a non-negative count");
    auto count = static_cast<std::size_t>(n.count);
    const Node& input = n.input();
    if (input.kind == NodeKind::Tau && !input.sol) {
      Object inner = eval(input.input());
      if (auto* c = std::get_if<CompleteRelation>(&inner)) {
        cdr::ProjectOptions po;
        po.cap = opts_.cap;
        po.order = keys(input);
        po.limit = count;
        Relation r = cdr::project_eval(c->schema().names(), *c, po);
        return adr::order_limit(po.order, count, r);
      }
    }
    Object in = eval(input);
    if (auto* u = std::get_if<SolutionSet>(&in)) return sol::order_limit(std::nullopt, count, *u);
    if (auto* q = std::get_if<RankedQuery>(&in)) return sol::limit(count, *q);
    if (n.sol) solution(in, "lambda_sol");
    if (auto* seq = std::get_if<adr::Sequence>(&in)) {
      adr::Sequence out = *seq;
      if (out.tuples.size() > count) out.tuples.resize(count);
      return out;
    }
    if (std::holds_alternative<SolProjection>(in)) type_error("lambda cannot follow project_sol");
    return adr::order_limit({}, count, finite(in, "lambda"));
  }

  Object setop(const Node& n) {
    Object l = eval(n.kid(0));
    Object r = eval(n.kid(1));
    bool lsol = std::holds_alternative<SolutionSet>(l), rsol = std::holds_alternative<SolutionSet>(r);
    std::string name = n.op + (n.sol ? "_sol" : "");
    if (n.sol || lsol || rsol) {
      const SolutionSet& u = solution(l, name.c_str());
      const SolutionSet& v = solution(r, name.c_str());
      if (n.op == "join") return sol::join(u, v);
      if (n.op == "cross") return sol::cross(u, v);
      if (n.op == "union") return sol::set_op(sol::SetOp::Union, u, v);
      if (n.op == "intersect") return sol::set_op(sol::SetOp::Intersect, u, v);
      return sol::set_op(sol::SetOp::Difference, u, v);
    }
    bool lc = std::holds_alternative<CompleteRelation>(l), rc = std::holds_alternative<CompleteRelation>(r);
    if (!lc && !rc) {
      Relation a = finite(l, name.c_str()), b = finite(r, name.c_str());
      if (n.op == "join") return adr::natural_join(a, b);
      if (n.op == "cross") return adr::cross(a, b);
      if (n.op == "union") return adr::set_op(adr::SetOp::Union, a, b);
      if (n.op == "intersect") return adr::set_op(adr::SetOp::Intersect, a, b);
      return adr::set_op(adr::SetOp::Difference, a, b);
    }
    if ((n.op == "join" || n.op == "cross") && lc != rc) {
      // A finite side drives the join; the result is finite.
      const Object& fin = lc ? r : l;
      const auto& c = std::get<CompleteRelation>(lc ? l : r);
      Relation a = finite(fin, name.c_str());
      if (n.op == "cross") {
        for (const auto& attr : a.schema().names()) {
          if (c.schema().contains(attr)) fail(ErrorKind::Schema, "cross needs disjoint schemas; '" + attr + "' is shared");
        }
      }
      Relation joined = cdr::join_adr(a, c, opts_.cap);
      if (!lc) return joined;
      std::vector<std::string> order = c.schema().names();
      for (const auto& attr : a.schema().names()) {
        if (!c.schema().contains(attr)) order.push_back(attr);
      }
      return adr::reorder(joined, order);
    }
    CompleteRelation a = complete(l), b = complete(r);
    cdr::Combine k = n.op == "join"        ? cdr::Combine::Join
                     : n.op == "cross"     ? cdr::Combine::Cross
                     : n.op == "union"     ? cdr::Combine::Union
                     : n.op == "intersect" ? cdr::Combine::Intersect
                                           : cdr::Combine::Difference;
    return cdr::combine(k, a, b);
  }

  // --- expressions over the candidate ----------------------------------------

  bool is_candidate(const Node& name, const Scope& scope) {
    if (name.op == scope.candidate) return true;
    return scope.any_solution && cat_.namespace_of(name.op) == Namespace::Solution;
  }

  bool mentions_candidate(const Node& n, const Scope& scope) {
    if (n.kind == NodeKind::Name) return is_candidate(n, scope);
    if (n.kind == NodeKind::Omega || n.kind == NodeKind::Literal) return false;
    for (const auto& k : n.kids) {
      if (mentions_candidate(*k, scope)) return true;
    }
    return false;
  }

  IExpr leaf(const Object& o) {
    if (auto* c = std::get_if<CompleteRelation>(&o)) return IExpr::cdr(*c);
    if (is_relation(o)) return IExpr::data(finite(o, "predicate"));
    fail(ErrorKind::Restriction,
         std::string("a ") + object_kind_name(o) + " cannot appear inside a solution-set predicate");
  }

  IExpr iexpr(const Node& n, const Scope& scope) {
    try {
      return iexpr_impl(n, scope);
    } catch (const Error& e) {
      throw e.at(n.pos);
    }
  }

  IExpr iexpr_impl(const Node& n, const Scope& scope) {
    if (n.kind == NodeKind::Name) {
      if (is_candidate(n, scope)) return IExpr::candidate();
      const Object& o = resolve(n);
      if (std::holds_alternative<SolutionSet>(o)) {
        fail(ErrorKind::Restriction, "solution set '" + n.op + "' is not the candidate of this predicate" +
                                         (scope.candidate.empty() ? "" : " (expected '" + scope.candidate + "')"));
      }
      return leaf(o);
    }
    if (!mentions_candidate(n, scope)) return leaf(eval(n));
    switch (n.kind) {
      case NodeKind::Select:
        if (n.sol) break;
        return IExpr::select(scalar(n.kid(0)), iexpr(n.input(), scope));
      case NodeKind::Project: return IExpr::project(n.names, iexpr(n.input(), scope));
      case NodeKind::Rename:
        if (n.sol) break;
        return IExpr::rename(n.renames, iexpr(n.input(), scope));
      case NodeKind::Gamma: {
        std::vector<adr::AggSpec> specs;
        for (const auto& s : n.specs) specs.push_back(adr::AggSpec{scalar(*s.expr), s.name});
        return IExpr::group(n.names, std::move(specs), iexpr(n.input(), scope));
      }
      case NodeKind::SetOp:
        if (n.sol || (n.op != "join" && n.op != "cross")) break;
        return IExpr::join(iexpr(n.kid(0), scope), iexpr(n.kid(1), scope));
      default: break;
    }
    fail(ErrorKind::Restriction, std::string(kind_word(n)) + " is not allowed over the candidate relation");
  }

  ChiExpr chi(const Node& n, const Scope& scope) {
    try {
      if (n.kind == NodeKind::Literal && n.literal.is_bool()) return ChiExpr::constant(n.literal.as_bool());
      if (n.kind == NodeKind::Binary && n.op == "AND") return ChiExpr::conj(chi(n.kid(0), scope), chi(n.kid(1), scope));
      if (n.kind == NodeKind::Binary && n.op == "OR") return ChiExpr::disj(chi(n.kid(0), scope), chi(n.kid(1), scope));
      if (n.kind == NodeKind::Unary && n.op == "NOT") return ChiExpr::negate(chi(n.kid(0), scope));
      if (n.kind == NodeKind::Literal || n.kind == NodeKind::Unary || n.kind == NodeKind::Binary ||
          n.kind == NodeKind::Between || n.kind == NodeKind::Call) {
        fail(ErrorKind::Type, "a solution-set predicate combines gamma[][...] atoms; found " + print(n));
      }
      return ChiExpr::atom(iexpr(n, scope));
    } catch (const Error& e) {
      throw e.at(n.pos);
    }
  }

  const Catalog& cat_;
  const ElabOptions& opts_;
};

template <class T>
void set_name(T& obj, const std::string& name) {
  obj = obj.with_name(name);
}

Object named(Object o, const std::string& name) {
  std::visit(
      [&](auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Relation> || std::is_same_v<T, CompleteRelation>) set_name(v, name);
        else if constexpr (std::is_same_v<T, SolutionSet> || std::is_same_v<T, adr::Sequence>) v.name = name;
      },
      o);
  return o;
}

std::string sink_name(const Node& n) { return n.kind == NodeKind::Name ? n.op : "result"; }

}  // namespace

Object elaborate_expression(const Node& n, const Catalog& catalog, const ElabOptions& opts) {
  return Elaborator(catalog, opts).eval(n);
}

std::vector<Directive> elaborate(const Program& program, Catalog& catalog, const ElabOptions& opts) {
  std::vector<Directive> out;
  Elaborator el(catalog, opts);
  for (const auto& s : program.stmts) {
    try {
      switch (s.kind) {
        case Stmt::Kind::Define: catalog.define(s.name, named(el.eval(*s.expr), s.name)); break;
        case Stmt::Kind::Load: {
          Schema schema = el.schema(s.decls);
          std::filesystem::path path = s.path;
          if (path.is_relative()) path = opts.base_dir / path;
          std::string fmt = s.format;
          if (fmt.empty()) fmt = path.extension() == ".json" ? "json" : "csv";
          catalog.define(s.name, load_table(path.string(), fmt == "json" ? TableFormat::Json : TableFormat::Csv,
                                            schema, s.name));
          break;
        }
        case Stmt::Kind::Run:
        case Stmt::Kind::Emit: {
          Directive d;
          d.kind = s.kind == Stmt::Kind::Run ? Directive::Kind::Run : Directive::Kind::Emit;
          d.pos = s.pos;
          d.sink = sink_name(*s.expr);
          d.value = el.eval(*s.expr);
          d.path = s.path;
          out.push_back(std::move(d));
          break;
        }
        case Stmt::Kind::Check: {
          Directive d;
          d.kind = Directive::Kind::Check;
          d.pos = s.pos;
          d.sink = print(*s.expr);
          d.other_name = print(*s.rhs);
          d.value = el.eval(*s.expr);
          d.other = el.eval(*s.rhs);
          for (const auto& p : s.probes) {
            auto& vs = d.probes[p.attr];
            for (const auto& v : p.values) vs.push_back(el.constant(*v));
          }
          out.push_back(std::move(d));
          break;
        }
      }
    } catch (const Error& e) {
      throw e.at(s.pos);
    }
  }
  return out;
}

}  // namespace solq::frontend
