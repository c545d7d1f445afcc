#include "solq/value.hpp"

#include <charconv>
#include <cmath>

#include "solq/error.hpp"

namespace solq {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "syntax error";
    case ErrorKind::Type: return "type error";
    case ErrorKind::Schema: return "schema error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Name: return "name error";
    case ErrorKind::Restriction: return "restriction error";
    case ErrorKind::Io: return "i/o error";
    case ErrorKind::Evaluation: return "evaluation error";
    case ErrorKind::Unbounded: return "unbounded error";
    case ErrorKind::Limit: return "limit error";
    case ErrorKind::DataDependency: return "data dependency error";
    case ErrorKind::Solver: return "solver error";
  }
  return "error";
}

bool is_user_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax:
    case ErrorKind::Type:
    case ErrorKind::Schema:
    case ErrorKind::Domain:
    case ErrorKind::Name:
    case ErrorKind::Restriction:
    case ErrorKind::Io:
      return true;
    default:
      return false;
  }
}

const char* value_kind_name(ValueKind kind) {
  switch (kind) {
    case ValueKind::Bool: return "bool";
    case ValueKind::Int: return "int";
    case ValueKind::Float: return "float";
    case ValueKind::String: return "string";
    case ValueKind::Enum: return "enum";
  }
  return "?";
}

ValueKind Value::kind() const {
  switch (v_.index()) {
    case 0: return ValueKind::Bool;
    case 1: return ValueKind::Int;
    case 2: return ValueKind::Float;
    case 3: return ValueKind::String;
    default: return ValueKind::Enum;
  }
}

std::int64_t Value::as_int() const {
  if (auto* p = std::get_if<std::int64_t>(&v_)) return *p;
  fail(ErrorKind::Type, "expected an integer, got " + to_literal());
}

double Value::as_float() const {
  if (auto* p = std::get_if<double>(&v_)) return *p;
  if (auto* p = std::get_if<std::int64_t>(&v_)) return static_cast<double>(*p);
  fail(ErrorKind::Type, "expected a number, got " + to_literal());
}

bool Value::as_bool() const {
  if (auto* p = std::get_if<bool>(&v_)) return *p;
  fail(ErrorKind::Type, "expected a boolean, got " + to_literal());
}

const std::string& Value::as_text() const {
  if (auto* p = std::get_if<std::string>(&v_)) return *p;
  if (auto* p = std::get_if<EnumTag>(&v_)) return p->tag;
  fail(ErrorKind::Type, "expected text, got " + to_literal());
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string Value::to_string() const {
  switch (kind()) {
    case ValueKind::Bool: return std::get<bool>(v_) ? "True" : "False";
    case ValueKind::Int: return std::to_string(std::get<std::int64_t>(v_));
    case ValueKind::Float: return format_double(std::get<double>(v_));
    case ValueKind::String: return std::get<std::string>(v_);
    case ValueKind::Enum: return std::get<EnumTag>(v_).tag;
  }
  return "";
}

std::string Value::to_literal() const {
  if (kind() != ValueKind::String) return to_string();
  std::string out = "'";
  for (char c : std::get<std::string>(v_)) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::size_t Value::hash() const {
  switch (kind()) {
    case ValueKind::Bool: return std::get<bool>(v_) ? 0x9e37u : 0x7f4au;
    case ValueKind::Int:
    case ValueKind::Float: {
      double d = as_float();
      if (d == 0.0) d = 0.0;
      return std::hash<double>{}(d);
    }
    default: return std::hash<std::string>{}(as_text());
  }
}

namespace {

int group(ValueKind k) {
  switch (k) {
    case ValueKind::Bool: return 0;
    case ValueKind::Int:
    case ValueKind::Float: return 1;
    default: return 2;
  }
}

int cmp_numeric(const Value& a, const Value& b) {
  if (a.kind() == ValueKind::Int && b.kind() == ValueKind::Int) {
    auto x = a.as_int(), y = b.as_int();
    return x < y ? -1 : (x > y ? 1 : 0);
  }
  double x = a.as_float(), y = b.as_float();
  if (x < y) return -1;
  if (x > y) return 1;
  return 0;
}

}  // namespace

bool comparable_kinds(ValueKind a, ValueKind b) { return group(a) == group(b); }

int compare(const Value& a, const Value& b) {
  int ga = group(a.kind()), gb = group(b.kind());
  if (ga != gb) return ga < gb ? -1 : 1;
  switch (ga) {
    case 0: return static_cast<int>(a.as_bool()) - static_cast<int>(b.as_bool());
    case 1: return cmp_numeric(a, b);
    default: {
      int c = a.as_text().compare(b.as_text());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
}

bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

int compare_tuples(const Tuple& a, const Tuple& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

std::size_t TupleHash::operator()(const Tuple& t) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (const auto& v : t) h = (h ^ v.hash()) * 0x100000001b3ull;
  return h;
}

}  // namespace solq
