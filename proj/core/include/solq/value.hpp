#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace solq {

enum class ValueKind : std::uint8_t { Bool, Int, Float, String, Enum };

const char* value_kind_name(ValueKind kind);

struct EnumTag {
  std::string tag;
};

// A constant scalar. Ints and floats compare numerically with each other;
// strings and enum tags compare by text.
class Value {
 public:
  Value() : v_(std::int64_t{0}) {}

  static Value integer(std::int64_t v) { return Value(Storage(v)); }
  static Value floating(double v) { return Value(Storage(v)); }
  static Value boolean(bool v) { return Value(Storage(v)); }
  static Value string(std::string v) { return Value(Storage(std::move(v))); }
  static Value enum_tag(std::string v) {
    return Value(Storage(EnumTag{std::move(v)}));
  }

  ValueKind kind() const;
  bool is_numeric() const {
    auto k = kind();
    return k == ValueKind::Int || k == ValueKind::Float;
  }
  bool is_text() const {
    auto k = kind();
    return k == ValueKind::String || k == ValueKind::Enum;
  }
  bool is_bool() const { return kind() == ValueKind::Bool; }

  std::int64_t as_int() const;
  double as_float() const;
  bool as_bool() const;
  const std::string& as_text() const;

  // Display form: shortest round-trip floats, strings unquoted.
  std::string to_string() const;
  // Source-literal form: strings single-quoted.
  std::string to_literal() const;

  std::size_t hash() const;

  friend bool operator==(const Value& a, const Value& b);
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
  friend bool operator<(const Value& a, const Value& b);

 private:
  using Storage = std::variant<bool, std::int64_t, double, std::string, EnumTag>;
  explicit Value(Storage v) : v_(std::move(v)) {}
  Storage v_;
};

// -1, 0, 1 under the canonical total order: Bool < numeric < text.
int compare(const Value& a, const Value& b);

// True when a and b may meet in a comparison or join (same kind group).
bool comparable_kinds(ValueKind a, ValueKind b);

std::string format_double(double v);

using Tuple = std::vector<Value>;

int compare_tuples(const Tuple& a, const Tuple& b);

struct TupleLess {
  bool operator()(const Tuple& a, const Tuple& b) const {
    return compare_tuples(a, b) < 0;
  }
};

struct ValueHash {
  std::size_t operator()(const Value& v) const { return v.hash(); }
};

struct TupleHash {
  std::size_t operator()(const Tuple& t) const;
};

}  // namespace solq
