#include "solq/mzn.hpp"

#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "solq/error.hpp"

namespace solq::mzn {

namespace {

const std::set<std::string, std::less<>>& reserved() {
  static const std::set<std::string, std::less<>> words = {
      "ann",       "annotation", "any",      "array",  "bool",    "case",     "constraint", "diff",
      "div",       "else",       "elseif",   "endif",  "enum",    "false",    "float",      "function",
      "if",        "in",         "include",  "int",    "intersect", "let",    "list",       "maximize",
      "minimize",  "mod",        "not",      "of",     "op",      "opt",      "output",     "par",
      "predicate", "record",     "satisfy",  "set",    "solve",   "string",   "subset",     "superset",
      "symdiff",   "test",       "then",     "true",   "tuple",   "type",     "union",      "var",
      "where",     "xor",        "between",  "all_different", "sum", "abs",   "min",        "max",
      "pow",       "sqrt",       "exp",      "sin",    "int2float"};
  return words;
}

struct TableInfo {
  const LookupTable* table;
  std::string index_set;
  std::vector<std::string> arrays;  // per dependent column; empty when not emitted
};

class Emitter {
 public:
  explicit Emitter(const FlatForm& ff) : ff_(ff) {
    for (const auto& a : ff.flat.schema().attrs()) model_.var_names[a.name] = claim(mangle(a.name));
    model_.flat_schema = ff.flat.schema();
  }

  MznModel run() {
    std::vector<std::string> constraints;
    auto parts = conjuncts(ff_.flat.chi());
    if (ff_.flat.chi().is_false()) parts = {ff_.flat.chi()};
    for (const auto& c : parts) constraints.push_back("constraint " + print(c, 0) + ";");
    std::string solve = "solve satisfy;";
    if (ff_.meta.objective) {
      bool desc = ff_.meta.direction == adr::Direction::Desc;
      solve = std::string("solve ") + (desc ? "maximize " : "minimize ") + print(*ff_.meta.objective, 0) + ";";
    }
    std::vector<std::string> vars;
    for (const auto& a : ff_.flat.schema().attrs()) {
      vars.push_back("var " + domain(a) + ": " + model_.var_names.at(a.name) + ";");
    }

    std::string& s = model_.source;
    if (uses_alldiff_) s += "include \"globals.mzn\";\n\n";
    if (uses_between_) {
      s += "predicate between(var float: x, float: lower, float: upper) =\n    lower <= x /\\ x <= upper;\n\n";
    }
    if (!data_.empty()) {
      for (const auto& d : data_) s += d + "\n";
      s += "\n";
    }
    if (!sets_.empty()) {
      for (const auto& d : sets_) s += d + "\n";
      s += "\n";
    }
    for (const auto& v : vars) s += v + "\n";
    s += "\n";
    for (const auto& c : constraints) s += c + "\n";
    if (!constraints.empty()) s += "\n";
    s += solve + "\n";
    return std::move(model_);
  }

 private:
  std::string claim(std::string name) {
    while (used_.count(name)) name += "_";
    used_.insert(name);
    return name;
  }

  [[noreturn]] static void unsupported(const std::string& what) {
    fail(ErrorKind::Domain, "cannot emit MiniZinc: " + what);
  }

  std::string domain(const Attribute& a) {
    const AttrDomain& d = a.domain;
    switch (d.kind()) {
      case DomainKind::Int: return "int";
      case DomainKind::Float: return "float";
      case DomainKind::Bool: return "bool";
      case DomainKind::IntRange: return std::to_string(d.int_lo()) + ".." + std::to_string(d.int_hi());
      case DomainKind::FloatRange: return format_double(d.float_lo()) + ".." + format_double(d.float_hi());
      case DomainKind::Ref: {
        std::string key = d.ref_relation() + "." + d.ref_attr();
        auto it = ref_sets_.find(key);
        if (it != ref_sets_.end()) return it->second;
        std::string lit = "{";
        for (std::size_t i = 0; i < d.members().size(); ++i) {
          const Value& v = d.members()[i];
          if (v.kind() != ValueKind::Int) unsupported("attribute '" + a.name + "' references non-integer values");
          lit += (i ? "," : "") + v.to_string();
        }
        lit += "}";
        std::string name = claim(mangle(d.ref_relation().empty() ? a.name + "_dom" : d.ref_relation()));
        sets_.push_back("set of int: " + name + " = " + lit + ";");
        ref_sets_.emplace(key, name);
        return name;
      }
      case DomainKind::Varchar:
      case DomainKind::Enum: unsupported("attribute '" + a.name + "' has domain " + d.to_string());
    }
    unsupported("unknown domain");
  }

  bool is_float(const Expr& e) const {
    switch (e.kind()) {
      case ExprKind::Const: return e.value().kind() == ValueKind::Float;
      case ExprKind::Attr: {
        auto i = ff_.flat.schema().find(e.name());
        if (!i) return false;
        auto k = ff_.flat.schema()[*i].domain.kind();
        return k == DomainKind::Float || k == DomainKind::FloatRange ||
               (k == DomainKind::Ref && !ff_.flat.schema()[*i].domain.members().empty() &&
                ff_.flat.schema()[*i].domain.members().front().kind() == ValueKind::Float);
      }
      case ExprKind::Unary:
        return e.unary_op() == UnaryOp::Sqrt || e.unary_op() == UnaryOp::Exp || e.unary_op() == UnaryOp::Sin ||
               ((e.unary_op() == UnaryOp::Neg || e.unary_op() == UnaryOp::Abs) && is_float(e.kid(0)));
      case ExprKind::Binary:
        if (e.binary_op() == BinaryOp::Div) return true;
        if (is_arithmetic(e.binary_op())) return is_float(e.kid(0)) || is_float(e.kid(1));
        return false;
      case ExprKind::Lookup: {
        const auto& t = *e.table();
        for (const auto& d : t.dependents()) {
          if (d[e.dependent()].kind() == ValueKind::Float) return true;
        }
        return false;
      }
      case ExprKind::Collect:
        for (const auto& r : e.rows()) {
          for (const auto& c : r) {
            if (is_float(c)) return true;
          }
        }
        return false;
      default: return false;
    }
  }

  static int prec(const Expr& e) {
    switch (e.kind()) {
      case ExprKind::Const:
        return e.value().is_numeric() && e.value().as_float() < 0 ? 7 : 9;
      case ExprKind::Unary: return e.unary_op() == UnaryOp::Not ? 3 : e.unary_op() == UnaryOp::Neg ? 7 : 9;
      case ExprKind::Binary:
        switch (e.binary_op()) {
          case BinaryOp::Or: return 1;
          case BinaryOp::And: return 2;
          case BinaryOp::Add:
          case BinaryOp::Sub: return simple_sum(e) ? 5 : 9;
          case BinaryOp::Mul:
          case BinaryOp::Div: return 6;
          case BinaryOp::Pow: return 9;
          default: return 4;
        }
      default: return 9;
    }
  }

  static bool simple_term(const Expr& e) {
    if (e.kind() == ExprKind::Attr || e.kind() == ExprKind::Const) return true;
    if (e.kind() == ExprKind::Unary && e.unary_op() == UnaryOp::Neg) return e.kid(0).kind() == ExprKind::Attr;
    if (e.kind() == ExprKind::Binary && e.binary_op() == BinaryOp::Mul) {
      return e.kid(0).is_const() && e.kid(1).kind() == ExprKind::Attr;
    }
    return false;
  }

  static void sum_terms(const Expr& e, std::vector<Expr>& out) {
    if (e.kind() == ExprKind::Binary && e.binary_op() == BinaryOp::Add) {
      sum_terms(e.kid(0), out);
      out.push_back(e.kid(1));
    } else {
      out.push_back(e);
    }
  }

  static bool simple_sum(const Expr& e) {
    if (e.binary_op() == BinaryOp::Sub) return true;
    std::vector<Expr> terms;
    sum_terms(e, terms);
    return std::all_of(terms.begin(), terms.end(), simple_term);
  }

  std::string wrap(const Expr& e, int min_prec) {
    std::string s = print(e, min_prec);
    return prec(e) < min_prec ? "(" + s + ")" : s;
  }

  std::string as_float_operand(const Expr& e, int min_prec) {
    if (is_float(e)) return wrap(e, min_prec);
    return "int2float(" + print(e, 0) + ")";
  }

  std::string list(const std::vector<Expr>& xs, const char* sep) {
    std::string s = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + print(xs[i], 0);
    return s + "]";
  }

  std::string constant(const Value& v) {
    switch (v.kind()) {
      case ValueKind::Bool: return v.as_bool() ? "true" : "false";
      case ValueKind::Int:
      case ValueKind::Float: return v.to_string();
      default: unsupported("text constant " + v.to_literal());
    }
  }

  std::string print(const Expr& e, int) {
    switch (e.kind()) {
      case ExprKind::Const: return constant(e.value());
      case ExprKind::Attr: {
        auto it = model_.var_names.find(e.name());
        if (it == model_.var_names.end()) unsupported("unknown attribute '" + e.name() + "'");
        return it->second;
      }
      case ExprKind::SymRef: unsupported("unresolved symbolic reference <" + e.name() + ">");
      case ExprKind::Unary:
        switch (e.unary_op()) {
          case UnaryOp::Neg: return "-" + wrap(e.kid(0), 8);
          case UnaryOp::Not: return "not " + wrap(e.kid(0), 4);
          case UnaryOp::Abs: return "abs(" + print(e.kid(0), 0) + ")";
          case UnaryOp::Sqrt: return "sqrt(" + as_float_operand(e.kid(0), 0) + ")";
          case UnaryOp::Exp: return "exp(" + as_float_operand(e.kid(0), 0) + ")";
          case UnaryOp::Sin: return "sin(" + as_float_operand(e.kid(0), 0) + ")";
        }
        break;
      case ExprKind::Binary: {
        BinaryOp op = e.binary_op();
        const Expr& l = e.kid(0);
        const Expr& r = e.kid(1);
        int p = prec(e);
        switch (op) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
            if (op == BinaryOp::Add && !simple_sum(e)) {
              std::vector<Expr> terms;
              sum_terms(e, terms);
              return "sum(" + list(terms, ",") + ")";
            }
            return wrap(l, 5) + (op == BinaryOp::Add ? "+" : "-") + wrap(r, 6);
          case BinaryOp::Mul: return wrap(l, 6) + "*" + wrap(r, 7);
          case BinaryOp::Div:
            if (!is_float(l) && !is_float(r)) return as_float_operand(l, 6) + "/" + as_float_operand(r, 7);
            return wrap(l, 6) + "/" + wrap(r, 7);
          case BinaryOp::Pow: return "pow(" + print(l, 0) + ", " + print(r, 0) + ")";
          case BinaryOp::And: return wrap(l, 2) + " /\\ " + wrap(r, 3);
          case BinaryOp::Or: return wrap(l, 1) + " \\/ " + wrap(r, 2);
          default: return wrap(l, p + 1) + " " + binary_op_symbol(op) + " " + wrap(r, p + 1);
        }
      }
      case ExprKind::Between:
        uses_between_ = true;
        return "between(" + print(e.kid(0), 0) + ", " + print(e.kid(1), 0) + ", " + print(e.kid(2), 0) + ")";
      case ExprKind::AggCall: unsupported("aggregate outside a grouping");
      case ExprKind::Collect: {
        std::vector<Expr> items;
        for (const auto& row : e.rows()) {
          if (row.size() != 1) unsupported(std::string(agg_fn_name(e.agg_fn())) + " over tuples");
          items.push_back(row[0]);
        }
        switch (e.agg_fn()) {
          case AggFn::AllDifferent: uses_alldiff_ = true; return "all_different(" + list(items, ", ") + ")";
          case AggFn::Min: return "min(" + list(items, ", ") + ")";
          case AggFn::Max: return "max(" + list(items, ", ") + ")";
          case AggFn::Sum: return "sum(" + list(items, ",") + ")";
          case AggFn::BoolAnd: return "forall(" + list(items, ", ") + ")";
          case AggFn::BoolOr: return "exists(" + list(items, ", ") + ")";
          default: unsupported(std::string(agg_fn_name(e.agg_fn())) + " over decision values");
        }
      }
      case ExprKind::Lookup: {
        const TableInfo& t = table(*e.table());
        std::string arr = t.arrays[e.dependent()];
        if (arr.empty()) {
          unsupported("lookup of text attribute '" + e.table()->dependent_attrs()[e.dependent()] + "'");
        }
        return arr + "[" + print(e.kid(0), 0) + "]";
      }
    }
    unsupported("expression " + e.to_string());
  }

  static bool same_table(const LookupTable& a, const LookupTable& b) {
    return a.label() == b.label() && a.key_attrs() == b.key_attrs() && a.dependent_attrs() == b.dependent_attrs() &&
           a.keys() == b.keys() && a.dependents() == b.dependents();
  }

  const TableInfo& table(const LookupTable& t) {
    for (const auto& info : tables_) {
      if (info.table == &t || same_table(*info.table, t)) return info;
    }
    if (t.key_attrs().size() != 1) unsupported("lookup on a composite key in " + t.label());
    const auto& keys = t.keys();
    if (keys.empty()) unsupported("lookup into empty relation " + t.label());
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (keys[i][0].kind() != ValueKind::Int ||
          keys[i][0].as_int() != keys[0][0].as_int() + static_cast<std::int64_t>(i)) {
        unsupported("lookup key of " + t.label() + " is not a contiguous integer range");
      }
    }
    TableInfo info{&t, claim(mangle(t.key_attrs()[0])), {}};
    data_.push_back("set of int: " + info.index_set + " = " + keys.front()[0].to_string() + ".." +
                    keys.back()[0].to_string() + ";");
    for (std::size_t d = 0; d < t.dependent_attrs().size(); ++d) {
      bool any_float = false, text = false, all_bool = true;
      for (const auto& row : t.dependents()) {
        any_float = any_float || row[d].kind() == ValueKind::Float;
        text = text || row[d].is_text();
        all_bool = all_bool && row[d].is_bool();
      }
      if (text || (all_bool == false && std::any_of(t.dependents().begin(), t.dependents().end(),
                                                    [&](const Tuple& r) { return r[d].is_bool(); }))) {
        info.arrays.emplace_back();
        continue;
      }
      std::string type = all_bool ? "bool" : any_float ? "float" : "int";
      std::string name = claim(mangle(t.dependent_attrs()[d]));
      std::string lit;
      for (std::size_t i = 0; i < t.dependents().size(); ++i) {
        const Value& v = t.dependents()[i][d];
        lit += (i ? ", " : "") + (any_float ? format_double(v.as_float()) : constant(v));
      }
      data_.push_back("array[" + info.index_set + "] of " + type + ": " + name + " = [" + lit + "];");
      info.arrays.push_back(name);
    }
    tables_.push_back(std::move(info));
    return tables_.back();
  }

  const FlatForm& ff_;
  MznModel model_;
  std::set<std::string> used_;
  std::deque<TableInfo> tables_;
  std::vector<std::string> data_, sets_;
  std::map<std::string, std::string> ref_sets_;
  bool uses_alldiff_ = false, uses_between_ = false;
};

}  // namespace

std::string mangle(std::string_view name) {
  std::string s;
  for (char c : name) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    s += ok ? c : '_';
  }
  if (s.empty() || (s[0] >= '0' && s[0] <= '9') || s[0] == '_') s = "v_" + s;
  if (reserved().count(s)) s += "_v";
  return s;
}

MznModel emit(const FlatForm& ff) {
  Emitter e(ff);
  return e.run();
}

EvalOutcome parse_solver_result(std::string_view text, const MznModel& model) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& ex) {
    fail(ErrorKind::Solver, std::string("malformed solver result: ") + ex.what());
  }
  if (!doc.is_object() || !doc.contains("candidates") || !doc.contains("status") || !doc["candidates"].is_array() ||
      !doc["status"].is_string()) {
    fail(ErrorKind::Solver, "malformed solver result: expected {\"candidates\": [...], \"status\": \"...\"}");
  }
  auto status = status_from_name(doc["status"].get<std::string>());
  if (!status) fail(ErrorKind::Solver, "unknown solver status '" + doc["status"].get<std::string>() + "'");

  std::map<std::string, std::string> by_ident;
  for (const auto& [flat, ident] : model.var_names) by_ident[ident] = flat;

  EvalOutcome out;
  out.status = *status;
  bool objectives = true;
  for (const auto& cand : doc["candidates"]) {
    if (!cand.is_object()) fail(ErrorKind::Solver, "malformed solver result: candidate is not an object");
    Assignment a;
    std::optional<Value> objective;
    for (const auto& [key, val] : cand.items()) {
      Value v;
      if (val.is_boolean()) v = Value::boolean(val.get<bool>());
      else if (val.is_number_integer()) v = Value::integer(val.get<std::int64_t>());
      else if (val.is_number()) v = Value::floating(val.get<double>());
      else if (val.is_string()) v = Value::string(val.get<std::string>());
      else fail(ErrorKind::Solver, "malformed solver result: unsupported value for '" + key + "'");
      if (key == "_objective") {
        objective = v;
        continue;
      }
      std::string flat;
      if (auto it = by_ident.find(key); it != by_ident.end()) flat = it->second;
      else if (model.var_names.count(key)) flat = key;
      else if (!key.empty() && key[0] == '_') continue;
      else fail(ErrorKind::Solver, "solver result names unknown variable '" + key + "'");
      if (auto i = model.flat_schema.find(flat)) {
        if (auto c = model.flat_schema[*i].domain.coerce(v)) v = *c;
      }
      a[flat] = v;
    }
    objectives = objectives && objective.has_value();
    if (objective) out.objective_values.push_back(*objective);
    out.candidates.push_back(std::move(a));
  }
  if (!objectives) out.objective_values.clear();
  if (out.candidates.empty() != (out.status == Status::Unsatisfiable)) {
    fail(ErrorKind::Solver, "solver result status " + std::string(status_name(out.status)) + " disagrees with " +
                                std::to_string(out.candidates.size()) + " candidates");
  }
  return out;
}

namespace {

std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') q += "'\\''";
    else q += c;
  }
  return q + "'";
}

}  // namespace

EvalOutcome SolverBackend::solve(const FlatForm& ff) {
  MznModel model = emit(ff);
  QueryClass qc = classify(ff.meta, ff.flat);
  std::string tmpl = (std::filesystem::temp_directory_path() / "solq-XXXXXX.mzn").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  int fd = mkstemps(buf.data(), 4);
  if (fd < 0) fail(ErrorKind::Io, "cannot create temporary model file");
  std::string path(buf.data());
  {
    std::ofstream f(path);
    f << model.source;
  }
  ::close(fd);

  std::string cmd = shell_quote(path_);
  if (qc.kind == QueryKind::SatisfactionAll) cmd += " --all";
  if (qc.kind == QueryKind::SatisfactionLimited) cmd += " --limit " + std::to_string(qc.limit);
  cmd += " " + shell_quote(path) + " 2>&1";

  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    std::filesystem::remove(path);
    fail(ErrorKind::Solver, "cannot run solver " + path_);
  }
  std::array<char, 4096> chunk{};
  std::size_t n;
  while ((n = fread(chunk.data(), 1, chunk.size(), pipe)) > 0) output.append(chunk.data(), n);
  int rc = pclose(pipe);
  std::filesystem::remove(path);
  if (rc != 0) fail(ErrorKind::Solver, "solver " + path_ + " failed: " + output);
  return parse_solver_result(output, model);
}

}  // namespace solq::mzn
