#pragma once

#include <string>

#include "solq/frontend/ast.hpp"

namespace solq::frontend {

// Canonical ASCII form; parse(print(p)) is structurally equal to p.
std::string print(const Node& n);
std::string print(const DomainSpec& d);
std::string print(const Stmt& s);
std::string print(const Program& p);

}  // namespace solq::frontend
