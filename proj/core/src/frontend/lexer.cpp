#include "solq/frontend/lexer.hpp"

#include <cctype>
#include <utility>

namespace solq::frontend {

namespace {

struct Alias {
  std::string_view utf8;
  std::string_view ascii;
  bool word;  // operator word that may take a _sol suffix
};

constexpr Alias kAliases[] = {
    {"ω", "omega", true},     {"Ω", "omega", true},       {"σ", "select", true},
    {"π", "project", true},   {"ρ", "rename", true},      {"γ", "gamma", true},
    {"τ", "tau", true},       {"λ", "lambda", true},      {"⋈", "join", true},
    {"×", "cross", true},     {"∪", "union", true},       {"∩", "intersect", true},
    {"∖", "diff", true},      {"→", "->", false},         {"≤", "<=", false},
    {"≥", ">=", false},       {"≠", "!=", false},         {"∧", "AND", false},
    {"∨", "OR", false},       {"¬", "NOT", false},        {"∅", "EMPTY", false},
    {"⟨", "(", false},        {"⟩", ")", false},          {"−", "-", false},
    {"∗", "*", false},        {"·", "*", false},
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      start_ = pos_;
      start_line_ = line_;
      start_col_ = col_;
      if (pos_ >= s_.size()) {
        out.push_back(make(TokKind::End, ""));
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  [[noreturn]] void error(const std::string& msg) {
    throw Error(ErrorKind::Syntax, msg, SourcePos{start_line_, start_col_, static_cast<int>(start_),
                                                  static_cast<int>(std::max<std::size_t>(pos_ - start_, 1))});
  }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i) {
      char c = s_[pos_++];
      if (c == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  char peek(std::size_t k = 0) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
  bool starts(std::string_view p) const { return s_.substr(pos_, p.size()) == p; }

  void skip_space() {
    for (;;) {
      if (pos_ >= s_.size()) return;
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (starts("--")) {
        while (pos_ < s_.size() && peek() != '\n') advance();
      } else if (starts("\xEF\xBB\xBF")) {
        advance(3);
      } else {
        return;
      }
    }
  }

  Token make(TokKind k, std::string text) {
    return Token{k, std::move(text),
                 SourcePos{start_line_, start_col_, static_cast<int>(start_), static_cast<int>(pos_ - start_)}};
  }

  Token next() {
    char c = peek();
    if (ident_start(c)) {
      while (ident_char(peek())) advance();
      std::string word(s_.substr(start_, pos_ - start_));
      // EMPTY is the ASCII spelling of an empty attribute list.
      TokKind kind = word == "EMPTY" ? TokKind::Op : TokKind::Ident;
      return make(kind, std::move(word));
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '\'' || c == '"') return string(c);
    if (static_cast<unsigned char>(c) >= 0x80) {
      for (const auto& a : kAliases) {
        if (!starts(a.utf8)) continue;
        advance(a.utf8.size());
        std::string text(a.ascii);
        if (a.word && starts("_sol") && !ident_char(peek(4))) {
          advance(4);
          text += "_sol";
        }
        bool ident = a.word || text == "AND" || text == "OR" || text == "NOT";
        return make(ident ? TokKind::Ident : TokKind::Op, text);
      }
      advance();
      while (pos_ < s_.size() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) advance();
      error("unexpected character '" + std::string(s_.substr(start_, pos_ - start_)) + "'");
    }
    static constexpr std::string_view two[] = {":=", "==", "!=", "<>", "<=", ">=", "->", ".."};
    for (auto op : two) {
      if (starts(op)) {
        advance(2);
        return make(TokKind::Op, op == "<>" ? "!=" : std::string(op));
      }
    }
    static constexpr std::string_view one = "+-*/^()[]{},;:=<>";
    if (one.find(c) != std::string_view::npos) {
      advance();
      return make(TokKind::Op, std::string(1, c));
    }
    advance();
    error(std::string("unexpected character '") + c + "'");
  }

  Token number() {
    bool is_float = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t k = 1;
      if (peek(1) == '+' || peek(1) == '-') k = 2;
      if (std::isdigit(static_cast<unsigned char>(peek(k)))) {
        is_float = true;
        advance(k);
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      }
    }
    if (ident_start(peek())) {
      advance();
      error("malformed number");
    }
    return make(is_float ? TokKind::Float : TokKind::Int, std::string(s_.substr(start_, pos_ - start_)));
  }

  Token string(char quote) {
    advance();
    std::string text;
    for (;;) {
      if (pos_ >= s_.size() || peek() == '\n') error("unterminated string");
      char c = peek();
      if (c == quote) {
        if (peek(1) == quote) {
          text += quote;
          advance(2);
          continue;
        }
        advance();
        break;
      }
      if (c == '\\' && (peek(1) == quote || peek(1) == '\\')) {
        text += peek(1);
        advance(2);
        continue;
      }
      text += c;
      advance();
    }
    return make(TokKind::String, text);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  std::size_t start_ = 0;
  int start_line_ = 1, start_col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
  }
  return true;
}

}  // namespace solq::frontend
