#include "solq/frontend/printer.hpp"

namespace solq::frontend {

namespace {

int prec(const Node& n) {
  switch (n.kind) {
    case NodeKind::SetOp: return 0;
    case NodeKind::Binary:
      if (n.op == "OR") return 1;
      if (n.op == "AND") return 2;
      if (n.op == "+" || n.op == "-") return 5;
      if (n.op == "*" || n.op == "/") return 6;
      if (n.op == "^") return 7;
      return 4;
    case NodeKind::Unary: return n.op == "NOT" ? 3 : 8;
    case NodeKind::Between: return 4;
    default: return 9;
  }
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "''";
    else out += c;
  }
  return out + "'";
}

std::string literal(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Bool: return v.as_bool() ? "True" : "False";
    case ValueKind::String:
    case ValueKind::Enum: return quote(v.as_text());
    default: return v.to_string();
  }
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? ", " : "") + names[i];
  return out;
}

std::string sub(const Node& n, int min_prec) {
  std::string s = print(n);
  return prec(n) < min_prec ? "(" + s + ")" : s;
}

std::string decls(const std::vector<Decl>& ds) {
  std::string out;
  for (std::size_t i = 0; i < ds.size(); ++i) out += (i ? ", " : "") + ds[i].name + ": " + print(ds[i].domain);
  return out;
}

std::string word(const char* base, bool sol) { return std::string(base) + (sol ? "_sol" : ""); }

}  // namespace

std::string print(const DomainSpec& d) {
  switch (d.kind) {
    case DomainSpec::Kind::Named: return d.name;
    case DomainSpec::Kind::IntRange:
    case DomainSpec::Kind::FloatRange: return d.lo.to_string() + ".." + d.hi.to_string();
    case DomainSpec::Kind::In: return "IN " + print(*d.in);
    case DomainSpec::Kind::Enum: {
      std::string out = "ENUM(";
      for (std::size_t i = 0; i < d.tags.size(); ++i) out += (i ? ", " : "") + quote(d.tags[i]);
      return out + ")";
    }
  }
  return "?";
}

std::string print(const Node& n) {
  switch (n.kind) {
    case NodeKind::Literal: return literal(n.literal);
    case NodeKind::Name: return n.op;
    case NodeKind::Unary:
      if (n.op == "NOT") return "NOT " + sub(n.kid(0), 3);
      return "-" + sub(n.kid(0), 8);
    case NodeKind::Binary: {
      int p = prec(n);
      if (n.op == "^") return sub(n.kid(0), 9) + "^" + sub(n.kid(1), p);
      int lp = p == 4 ? p + 1 : p;
      return sub(n.kid(0), lp) + " " + n.op + " " + sub(n.kid(1), p + 1);
    }
    case NodeKind::Between:
      return sub(n.kid(0), 5) + " BETWEEN " + sub(n.kid(1), 5) + " AND " + sub(n.kid(2), 5);
    case NodeKind::Call: {
      std::string out = n.op + "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? ", " : "") + print(n.kid(i));
      return out + ")";
    }
    case NodeKind::Omega: {
      std::string out = "omega[" + decls(n.decls) + "]";
      if (!n.tuples) return out + "(" + print(n.kid(0)) + ")";
      out += "{";
      for (std::size_t i = 0; i < n.tuples->size(); ++i) {
        out += i ? ", (" : "(";
        const auto& row = (*n.tuples)[i];
        for (std::size_t j = 0; j < row.size(); ++j) out += (j ? ", " : "") + print(*row[j]);
        out += ")";
      }
      return out + "}";
    }
    case NodeKind::OmegaSol: {
      std::string out = "omega_sol(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) out += (i ? ", " : "") + print(n.kid(i));
      return out + ")";
    }
    case NodeKind::Select:
      return word("select", n.sol) + "[" + print(n.kid(0)) + "](" + print(n.input()) + ")";
    case NodeKind::Project:
      return word("project", n.sol) + "[" + join_names(n.names) + "](" + print(n.input()) + ")";
    case NodeKind::ProjectSol:
      return "project_sol[" + n.rank.value_or("") + "][" + join_names(n.names) + "](" + print(n.input()) + ")";
    case NodeKind::Rename: {
      std::string out = word("rename", n.sol) + "[";
      for (std::size_t i = 0; i < n.renames.size(); ++i) {
        out += (i ? ", " : "") + n.renames[i].first + " -> " + n.renames[i].second;
      }
      return out + "](" + print(n.input()) + ")";
    }
    case NodeKind::Gamma: {
      std::string out = "gamma[" + join_names(n.names) + "][";
      for (std::size_t i = 0; i < n.specs.size(); ++i) {
        out += (i ? ", " : "") + print(*n.specs[i].expr) + " -> " + n.specs[i].name;
      }
      return out + "](" + print(n.input()) + ")";
    }
    case NodeKind::Tau: {
      std::string out = word("tau", n.sol) + "[";
      for (std::size_t i = 0; i < n.keys.size(); ++i) {
        out += (i ? ", " : "") + print(*n.keys[i].expr) + (n.keys[i].dir == adr::Direction::Desc ? " DESC" : " ASC");
      }
      return out + "](" + print(n.input()) + ")";
    }
    case NodeKind::TauSol:
      return word("tau", n.sol) + (n.keys[0].dir == adr::Direction::Desc ? "[DESC][" : "[ASC][") +
             print(*n.keys[0].expr) + "](" + print(n.input()) + ")";
    case NodeKind::Lambda:
      return word("lambda", n.sol) + "[" + std::to_string(n.count) + "](" + print(n.input()) + ")";
    case NodeKind::SetOp:
      return sub(n.kid(0), 0) + " " + word(n.op.c_str(), n.sol) + " " + sub(n.kid(1), 1);
  }
  return "?";
}

std::string print(const Stmt& s) {
  switch (s.kind) {
    case Stmt::Kind::Define: return s.name + " := " + print(*s.expr);
    case Stmt::Kind::Load: {
      std::string out = "load " + s.name + "[" + decls(s.decls) + "] from " + quote(s.path);
      if (!s.format.empty()) out += " as " + s.format;
      return out;
    }
    case Stmt::Kind::Run: return "run " + print(*s.expr);
    case Stmt::Kind::Emit: return "emit " + print(*s.expr) + (s.path.empty() ? "" : " to " + quote(s.path));
    case Stmt::Kind::Check: {
      std::string out = "check " + print(*s.expr) + " == " + print(*s.rhs);
      if (!s.probes.empty()) {
        out += " probe [";
        for (std::size_t i = 0; i < s.probes.size(); ++i) {
          out += (i ? ", " : "") + s.probes[i].attr + ": ";
          for (std::size_t j = 0; j < s.probes[i].values.size(); ++j) {
            out += (j ? ", " : "") + print(*s.probes[i].values[j]);
          }
        }
        out += "]";
      }
      return out;
    }
  }
  return "?";
}

std::string print(const Program& p) {
  std::string out;
  for (const auto& s : p.stmts) out += print(s) + "\n";
  return out;
}

}  // namespace solq::frontend
