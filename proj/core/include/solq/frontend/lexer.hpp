#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "solq/error.hpp"

namespace solq::frontend {

enum class TokKind { Ident, Int, Float, String, Op, End };

// Greek operator letters and Unicode symbols are normalized to their ASCII
// spellings here (ω -> omega, σ_sol -> select_sol, ⋈ -> join, → -> ->,
// ≤ -> <=, ∅ -> EMPTY, ⟨ ⟩ -> ( ), ...), so the parser only sees ASCII.
struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  SourcePos pos;
};

std::vector<Token> lex(std::string_view source);

// Case-insensitive comparison for word operators (AND, between, True, ...).
bool iequals(std::string_view a, std::string_view b);

}  // namespace solq::frontend
