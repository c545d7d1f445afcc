#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace solq {

struct SourcePos {
  int line = 0;
  int column = 0;
  int offset = 0;
  int length = 0;
};

enum class ErrorKind {
  Syntax,
  Type,
  Schema,
  Domain,
  Name,
  Restriction,
  Io,
  Evaluation,
  Unbounded,
  Limit,
  DataDependency,
  Solver,
};

const char* error_kind_name(ErrorKind kind);

// User errors map to exit status 1, evaluation failures to 2.
bool is_user_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Error(ErrorKind kind, const std::string& message, SourcePos pos)
      : std::runtime_error(message), kind_(kind), pos_(pos) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<SourcePos>& pos() const { return pos_; }

  Error at(SourcePos pos) const {
    return pos_ ? *this : Error(kind_, what(), pos);
  }

 private:
  ErrorKind kind_;
  std::optional<SourcePos> pos_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace solq
