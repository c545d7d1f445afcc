#include "solq/frontend/parser.hpp"

#include <charconv>
#include <cstdlib>

#include "solq/frontend/lexer.hpp"

namespace solq::frontend {

namespace {

bool is_setop_word(const std::string& w) {
  for (const char* k : {"join", "cross", "union", "intersect", "diff"}) {
    if (w == k || w == std::string(k) + "_sol") return true;
  }
  return false;
}

bool is_operator_word(const std::string& w) {
  for (const char* k : {"omega", "omega_sol", "select", "select_sol", "project", "project_sol", "rename",
                        "rename_sol", "gamma", "tau", "tau_sol", "lambda", "lambda_sol"}) {
    if (w == k) return true;
  }
  return is_setop_word(w);
}

bool is_logic_word(const std::string& w) {
  for (const char* k : {"AND", "OR", "NOT", "BETWEEN", "TRUE", "FALSE"}) {
    if (iequals(w, k)) return true;
  }
  return false;
}

std::string strip_sol(const std::string& w, bool& sol) {
  sol = w.size() > 4 && w.compare(w.size() - 4, 4, "_sol") == 0;
  return sol ? w.substr(0, w.size() - 4) : w;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Program program() {
    Program p;
    while (!at_end()) {
      if (accept_op(";")) continue;
      p.stmts.push_back(statement());
    }
    return p;
  }

  NodePtr lone_expression() {
    NodePtr e = expr();
    if (!at_end()) error("unexpected '" + cur().text + "' after expression");
    return e;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  const Token& look(std::size_t k) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at_end() const { return cur().kind == TokKind::End; }
  const Token& take() {
    const Token& t = toks_[i_];
    if (t.kind != TokKind::End) ++i_;
    return t;
  }

  [[noreturn]] void error(const std::string& msg) const { throw Error(ErrorKind::Syntax, msg, cur().pos); }

  static std::string describe(const Token& t) {
    if (t.kind == TokKind::End) return "end of input";
    if (t.kind == TokKind::String) return "string '" + t.text + "'";
    return "'" + t.text + "'";
  }

  bool is_op(const char* op, std::size_t k = 0) const {
    return look(k).kind == TokKind::Op && look(k).text == op;
  }
  bool is_word(const char* w, std::size_t k = 0) const {
    return look(k).kind == TokKind::Ident && iequals(look(k).text, w);
  }
  bool accept_op(const char* op) {
    if (!is_op(op)) return false;
    take();
    return true;
  }
  bool accept_word(const char* w) {
    if (!is_word(w)) return false;
    take();
    return true;
  }
  void expect_op(const char* op) {
    if (!accept_op(op)) error(std::string("expected '") + op + "', found " + describe(cur()));
  }
  std::string ident(const char* what) {
    if (cur().kind != TokKind::Ident || is_logic_word(cur().text) || is_operator_word(cur().text)) {
      error(std::string("expected ") + what + ", found " + describe(cur()));
    }
    return take().text;
  }

  // --- statements ---------------------------------------------------------

  Stmt statement() {
    Stmt s;
    s.pos = cur().pos;
    if (cur().kind == TokKind::Ident && (is_op(":=", 1) || is_op("=", 1))) {
      s.kind = Stmt::Kind::Define;
      s.name = ident("definition name");
      take();
      s.expr = expr();
      return s;
    }
    if (cur().kind == TokKind::Ident && is_op("==", 1)) {
      s.kind = Stmt::Kind::Check;
      return check(s);
    }
    if (accept_word("load")) {
      s.kind = Stmt::Kind::Load;
      s.name = ident("relation name");
      expect_op("[");
      s.decls = decls();
      expect_op("]");
      if (!accept_word("from")) error("expected 'from', found " + describe(cur()));
      if (cur().kind != TokKind::String) error("expected a file path string, found " + describe(cur()));
      s.path = take().text;
      if (accept_word("as")) {
        if (!is_word("csv") && !is_word("json")) error("expected csv or json, found " + describe(cur()));
        s.format = take().text;
        for (auto& c : s.format) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      }
      return s;
    }
    if (accept_word("run")) {
      s.kind = Stmt::Kind::Run;
      s.expr = expr();
      return s;
    }
    if (accept_word("emit")) {
      s.kind = Stmt::Kind::Emit;
      s.expr = expr();
      if (accept_word("to")) {
        if (cur().kind != TokKind::String) error("expected a file path string, found " + describe(cur()));
        s.path = take().text;
      }
      return s;
    }
    if (accept_word("check")) {
      s.kind = Stmt::Kind::Check;
      return check(s);
    }
    error("expected a statement, found " + describe(cur()));
  }

  Stmt check(Stmt s) {
    s.expr = expr();
    expect_op("==");
    s.rhs = expr();
    if (accept_word("probe")) {
      expect_op("[");
      while (!is_op("]")) {
        Probe p;
        p.attr = ident("probe attribute");
        expect_op(":");
        p.values.push_back(additive());
        while (is_op(",") && !(look(1).kind == TokKind::Ident && is_op(":", 2))) {
          take();
          p.values.push_back(additive());
        }
        s.probes.push_back(std::move(p));
        if (!accept_op(",")) break;
      }
      expect_op("]");
    }
    return s;
  }

  // --- declarations -------------------------------------------------------

  std::vector<Decl> decls() {
    std::vector<Decl> out;
    if (is_op("]")) return out;
    for (;;) {
      std::vector<std::pair<std::string, SourcePos>> group;
      for (;;) {
        SourcePos pos = cur().pos;
        group.emplace_back(ident("attribute name"), pos);
        if (!accept_op(",")) break;
      }
      expect_op(":");
      DomainSpec d = domain();
      for (auto& [name, pos] : group) out.push_back(Decl{name, d, pos});
      if (!accept_op(",")) break;
    }
    return out;
  }

  Value signed_number() {
    bool neg = accept_op("-");
    const Token& t = cur();
    if (t.kind != TokKind::Int && t.kind != TokKind::Float) error("expected a number, found " + describe(t));
    take();
    if (t.kind == TokKind::Int) {
      std::int64_t v = 0;
      auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (r.ec != std::errc()) throw Error(ErrorKind::Syntax, "integer out of range", t.pos);
      return Value::integer(neg ? -v : v);
    }
    double v = std::strtod(t.text.c_str(), nullptr);
    return Value::floating(neg ? -v : v);
  }

  DomainSpec domain() {
    DomainSpec d;
    if (accept_word("IN")) {
      d.kind = DomainSpec::Kind::In;
      d.in = expr();
      return d;
    }
    if (is_word("ENUM")) {
      take();
      d.kind = DomainSpec::Kind::Enum;
      expect_op("(");
      for (;;) {
        if (cur().kind != TokKind::Ident && cur().kind != TokKind::String) {
          error("expected an enum tag, found " + describe(cur()));
        }
        d.tags.push_back(take().text);
        if (!accept_op(",")) break;
      }
      expect_op(")");
      return d;
    }
    if (cur().kind == TokKind::Ident) {
      static const char* names[] = {"INT", "INTEGER", "FLOAT", "REAL", "DOUBLE", "BOOL",
                                    "BOOLEAN", "VARCHAR", "TEXT", "STRING"};
      for (const char* n : names) {
        if (is_word(n)) {
          d.kind = DomainSpec::Kind::Named;
          d.name = n;
          take();
          if (accept_op("(")) {
            if (cur().kind != TokKind::Int) error("expected a length, found " + describe(cur()));
            take();
            expect_op(")");
          }
          return d;
        }
      }
      error("unknown domain '" + cur().text + "'");
    }
    d.lo = signed_number();
    expect_op("..");
    d.hi = signed_number();
    bool fl = d.lo.kind() == ValueKind::Float || d.hi.kind() == ValueKind::Float;
    d.kind = fl ? DomainSpec::Kind::FloatRange : DomainSpec::Kind::IntRange;
    if (fl) {
      d.lo = Value::floating(d.lo.as_float());
      d.hi = Value::floating(d.hi.as_float());
    }
    return d;
  }

  // --- expressions --------------------------------------------------------

  static NodePtr finish(Node n) { return std::make_shared<const Node>(std::move(n)); }

  Node start(NodeKind k) const {
    Node n;
    n.kind = k;
    n.pos = cur().pos;
    return n;
  }

  NodePtr binary(std::string op, NodePtr l, NodePtr r, SourcePos pos) {
    Node n;
    n.kind = NodeKind::Binary;
    n.pos = pos;
    n.op = std::move(op);
    n.kids = {std::move(l), std::move(r)};
    return finish(std::move(n));
  }

  NodePtr expr() {
    NodePtr l = logical_or();
    while (cur().kind == TokKind::Ident && is_setop_word(cur().text)) {
      Node n = start(NodeKind::SetOp);
      n.op = strip_sol(take().text, n.sol);
      NodePtr r = logical_or();
      n.pos = l->pos;
      n.kids = {l, r};
      l = finish(std::move(n));
    }
    return l;
  }

  NodePtr logical_or() {
    NodePtr l = logical_and();
    while (is_word("OR")) {
      SourcePos pos = l->pos;
      take();
      l = binary("OR", l, logical_and(), pos);
    }
    return l;
  }

  NodePtr logical_and() {
    NodePtr l = logical_not();
    while (is_word("AND")) {
      SourcePos pos = l->pos;
      take();
      l = binary("AND", l, logical_not(), pos);
    }
    return l;
  }

  NodePtr logical_not() {
    if (is_word("NOT")) {
      Node n = start(NodeKind::Unary);
      take();
      n.op = "NOT";
      n.kids = {logical_not()};
      return finish(std::move(n));
    }
    return comparison();
  }

  bool at_comparison() const {
    if (cur().kind != TokKind::Op) return false;
    for (const char* op : {"=", "!=", "<", "<=", ">", ">="}) {
      if (cur().text == op) return true;
    }
    return false;
  }

  NodePtr comparison() {
    NodePtr first = additive();
    if (is_word("BETWEEN")) {
      Node n;
      n.kind = NodeKind::Between;
      n.pos = first->pos;
      take();
      NodePtr lo = additive();
      if (!accept_word("AND")) error("expected AND in BETWEEN, found " + describe(cur()));
      NodePtr hi = additive();
      n.kids = {first, lo, hi};
      return finish(std::move(n));
    }
    std::vector<NodePtr> operands{first};
    std::vector<std::string> ops;
    while (at_comparison()) {
      ops.push_back(take().text);
      operands.push_back(additive());
    }
    if (ops.empty()) return first;
    if (ops.size() == 2 && ops[0] == ops[1] && (ops[0] == "<=" || ops[0] == ">=")) {
      Node n;
      n.kind = NodeKind::Between;
      n.pos = first->pos;
      bool asc = ops[0] == "<=";
      n.kids = {operands[1], asc ? operands[0] : operands[2], asc ? operands[2] : operands[0]};
      return finish(std::move(n));
    }
    NodePtr out;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      NodePtr c = binary(ops[i], operands[i], operands[i + 1], operands[i]->pos);
      out = out ? binary("AND", out, c, first->pos) : c;
    }
    return out;
  }

  NodePtr additive() {
    NodePtr l = multiplicative();
    while (is_op("+") || is_op("-")) {
      std::string op = take().text;
      l = binary(op, l, multiplicative(), l->pos);
    }
    return l;
  }

  NodePtr multiplicative() {
    NodePtr l = unary();
    while (is_op("*") || is_op("/")) {
      std::string op = take().text;
      l = binary(op, l, unary(), l->pos);
    }
    return l;
  }

  NodePtr unary() {
    if (is_op("-")) {
      Node n = start(NodeKind::Unary);
      take();
      n.op = "-";
      n.kids = {unary()};
      return finish(std::move(n));
    }
    NodePtr base = primary();
    if (is_op("^")) {
      take();
      return binary("^", base, unary(), base->pos);
    }
    return base;
  }

  NodePtr primary() {
    const Token& t = cur();
    switch (t.kind) {
      case TokKind::Int:
      case TokKind::Float: {
        Node n = start(NodeKind::Literal);
        n.literal = signed_number();
        return finish(std::move(n));
      }
      case TokKind::String: {
        Node n = start(NodeKind::Literal);
        n.literal = Value::string(take().text);
        return finish(std::move(n));
      }
      case TokKind::Op:
        if (t.text == "(") {
          take();
          NodePtr e = expr();
          expect_op(")");
          return e;
        }
        error("expected an expression, found " + describe(t));
      case TokKind::End: error("expected an expression, found end of input");
      case TokKind::Ident: break;
    }
    if (is_word("TRUE") || is_word("FALSE")) {
      Node n = start(NodeKind::Literal);
      n.literal = Value::boolean(is_word("TRUE"));
      take();
      return finish(std::move(n));
    }
    if (is_operator_word(t.text) && !is_setop_word(t.text)) return relational();
    if (is_logic_word(t.text) || is_setop_word(t.text)) error("expected an expression, found " + describe(t));
    if (is_op("[", 1)) error("unknown operator '" + t.text + "'");
    if (is_op("(", 1)) {
      Node n = start(NodeKind::Call);
      n.op = take().text;
      take();
      if (!is_op(")")) {
        for (;;) {
          n.kids.push_back(expr());
          if (!accept_op(",")) break;
        }
      }
      expect_op(")");
      return finish(std::move(n));
    }
    Node n = start(NodeKind::Name);
    n.op = take().text;
    return finish(std::move(n));
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> out;
    if (accept_op("EMPTY") || is_op("]")) return out;
    for (;;) {
      out.push_back(ident("attribute name"));
      if (!accept_op(",")) break;
    }
    return out;
  }

  NodePtr parenthesized_input() {
    expect_op("(");
    NodePtr e = expr();
    expect_op(")");
    return e;
  }

  adr::Direction direction() {
    if (accept_word("DESC")) return adr::Direction::Desc;
    accept_word("ASC");
    return adr::Direction::Asc;
  }

  NodePtr relational() {
    Node n = start(NodeKind::Name);
    std::string word = strip_sol(take().text, n.sol);
    if (word == "omega" && n.sol) {
      n.kind = NodeKind::OmegaSol;
      n.sol = false;
      expect_op("(");
      if (!is_op(")")) {
        n.kids.push_back(expr());
        if (accept_op(",")) n.kids.push_back(expr());
      }
      expect_op(")");
      return finish(std::move(n));
    }
    expect_op("[");
    if (word == "omega") {
      n.kind = NodeKind::Omega;
      n.decls = decls();
      expect_op("]");
      if (accept_op("{")) {
        std::vector<std::vector<NodePtr>> rows;
        while (!is_op("}")) {
          std::vector<NodePtr> row;
          if (accept_op("(")) {
            if (!is_op(")")) {
              for (;;) {
                row.push_back(additive());
                if (!accept_op(",")) break;
              }
            }
            expect_op(")");
          } else {
            row.push_back(additive());
          }
          rows.push_back(std::move(row));
          if (!accept_op(",")) break;
        }
        expect_op("}");
        n.tuples = std::move(rows);
      } else {
        n.kids.push_back(parenthesized_input());
      }
    } else if (word == "select") {
      n.kind = NodeKind::Select;
      n.kids.push_back(expr());
      expect_op("]");
      n.kids.push_back(parenthesized_input());
    } else if (word == "project" && n.sol) {
      n.kind = NodeKind::ProjectSol;
      n.sol = false;
      if (!accept_op("EMPTY") && !is_op("]")) n.rank = ident("rank attribute");
      expect_op("]");
      expect_op("[");
      n.names = name_list();
      expect_op("]");
      n.kids.push_back(parenthesized_input());
    } else if (word == "project") {
      n.kind = NodeKind::Project;
      n.names = name_list();
      expect_op("]");
      n.kids.push_back(parenthesized_input());
    } else if (word == "rename") {
      n.kind = NodeKind::Rename;
      for (;;) {
        std::string from = ident("attribute name");
        expect_op("->");
        n.renames.emplace_back(from, ident("attribute name"));
        if (!accept_op(",")) break;
      }
      expect_op("]");
      n.kids.push_back(parenthesized_input());
    } else if (word == "gamma") {
      if (n.sol) error("gamma has no _sol form");
      n.kind = NodeKind::Gamma;
      n.names = name_list();
      expect_op("]");
      expect_op("[");
      for (;;) {
        SpecNode s;
        s.expr = expr();
        s.name = accept_op("->") ? ident("output name") : "ret";
        n.specs.push_back(std::move(s));
        if (!accept_op(",")) break;
      }
      expect_op("]");
      n.kids.push_back(parenthesized_input());
    } else if (word == "tau") {
      bool sol_form = n.sol || ((is_word("ASC") || is_word("DESC")) && is_op("]", 1) && is_op("[", 2));
      if (sol_form) {
        n.kind = NodeKind::TauSol;
        KeyNode k;
        k.dir = direction();
        expect_op("]");
        expect_op("[");
        k.expr = expr();
        expect_op("]");
        n.keys.push_back(std::move(k));
      } else {
        n.kind = NodeKind::Tau;
        for (;;) {
          KeyNode k;
          k.expr = expr();
          k.dir = direction();
          n.keys.push_back(std::move(k));
          if (!accept_op(",")) break;
        }
        expect_op("]");
      }
      n.kids.push_back(parenthesized_input());
    } else if (word == "lambda") {
      n.kind = NodeKind::Lambda;
      if (cur().kind != TokKind::Int) error("expected a row count, found " + describe(cur()));
      n.count = signed_number().as_int();
      expect_op("]");
      n.kids.push_back(parenthesized_input());
    }
    return finish(std::move(n));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace

Program parse_program(std::string_view source) { return Parser(source).program(); }

NodePtr parse_expression(std::string_view source) { return Parser(source).lone_expression(); }

}  // namespace solq::frontend
