#pragma once

#include <string_view>

#include "solq/frontend/ast.hpp"

namespace solq::frontend {

// Throws Error(Syntax) with the offending token's position.
Program parse_program(std::string_view source);
NodePtr parse_expression(std::string_view source);

}  // namespace solq::frontend
