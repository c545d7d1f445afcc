#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "solq/error.hpp"
#include "solq/relation.hpp"
#include "solq/schema.hpp"
#include "solq/value.hpp"

namespace solq::frontend {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind {
  Literal,   // literal
  Name,      // op = identifier
  Unary,     // op in {-, NOT}; kids = {operand}
  Binary,    // op in {+ - * / ^ = != < <= > >= AND OR}
  Between,   // kids = {x, lo, hi}
  Call,      // op = function name; kids = args
  Omega,     // decls; kids = {chi} or tuples
  OmegaSol,  // kids = {} | {decision} | {base, decision}
  Select,    // kids = {predicate, input}
  Project,   // names; kids = {input}
  ProjectSol,  // rank, names; kids = {input}
  Rename,    // renames; kids = {input}
  Gamma,     // names = group, specs; kids = {input}
  Tau,       // keys; kids = {input}
  TauSol,    // keys = {{atom, dir}}; kids = {input}
  Lambda,    // count; kids = {input}
  SetOp,     // op in {join cross union intersect diff}; kids = {l, r}
};

struct DomainSpec {
  enum class Kind { Named, IntRange, FloatRange, In, Enum };
  Kind kind = Kind::Named;
  std::string name;  // INT, FLOAT, ... as written
  Value lo, hi;
  NodePtr in;
  std::vector<std::string> tags;
};

struct Decl {
  std::string name;
  DomainSpec domain;
  SourcePos pos;
};

struct SpecNode {
  NodePtr expr;
  std::string name;
};

struct KeyNode {
  NodePtr expr;
  adr::Direction dir = adr::Direction::Asc;
};

struct Node {
  NodeKind kind = NodeKind::Literal;
  SourcePos pos;
  std::string op;
  bool sol = false;  // explicit _sol spelling
  Value literal;
  std::vector<NodePtr> kids;
  std::vector<Decl> decls;
  std::optional<std::vector<std::vector<NodePtr>>> tuples;
  std::vector<std::string> names;
  std::optional<std::string> rank;
  RenameSpec renames;
  std::vector<SpecNode> specs;
  std::vector<KeyNode> keys;
  std::int64_t count = 0;

  const Node& kid(std::size_t i) const { return *kids[i]; }
  const Node& input() const { return *kids.back(); }
};

struct Probe {
  std::string attr;
  std::vector<NodePtr> values;
};

struct Stmt {
  enum class Kind { Define, Load, Run, Emit, Check };
  Kind kind = Kind::Define;
  SourcePos pos;
  std::string name;  // Define/Load target
  NodePtr expr;      // Define body, Run/Emit/Check subject
  NodePtr rhs;       // Check
  std::vector<Decl> decls;  // Load schema
  std::string path;         // Load source, Emit target (empty = stdout)
  std::string format;       // Load: csv | json (empty = by extension)
  std::vector<Probe> probes;
};

struct Program {
  std::vector<Stmt> stmts;
};

// Structural equality ignoring source positions.
bool same(const Node& a, const Node& b);
bool same(const Program& a, const Program& b);

}  // namespace solq::frontend
