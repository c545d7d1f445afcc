#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "solq/cdr.hpp"
#include "solq/frontend/ast.hpp"
#include "solq/relation.hpp"
#include "solq/solset.hpp"

namespace solq::frontend {

// What a name or expression denotes after elaboration.
using Object = std::variant<Relation, CompleteRelation, SolutionSet, RankedQuery, SolProjection, adr::Sequence>;

enum class Namespace { Data, Complete, Solution, Query };

Namespace namespace_of(const Object& o);
const char* namespace_name(Namespace ns);
const char* object_kind_name(const Object& o);

// Named objects; each name lives in exactly one namespace.
class Catalog {
 public:
  void define(const std::string& name, Object value);
  const Object* find(const std::string& name) const;
  std::optional<Namespace> namespace_of(const std::string& name) const;
  std::vector<std::string> names(Namespace ns) const;

 private:
  std::map<std::string, Object> objects_;
};

struct Directive {
  enum class Kind { Run, Emit, Check };
  Kind kind = Kind::Run;
  SourcePos pos;
  std::string sink;
  Object value;
  std::optional<Object> other;  // Check right-hand side
  std::string other_name;
  std::string path;  // Emit target
  cdr::ProbeDomains probes;
};

struct ElabOptions {
  std::filesystem::path base_dir = ".";
  std::uint64_t cap = kDefaultCap;
};

// Definitions are evaluated in order into the catalog; directives come
// back for the driver.
std::vector<Directive> elaborate(const Program& program, Catalog& catalog, const ElabOptions& opts = {});

// Elaborates one expression against the catalog.
Object elaborate_expression(const Node& n, const Catalog& catalog, const ElabOptions& opts = {});

}  // namespace solq::frontend
