#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "solq/value.hpp"

namespace solq {

enum class DomainKind : std::uint8_t {
  Int,
  Float,
  Bool,
  Varchar,
  Enum,
  IntRange,
  FloatRange,
  Ref,
};

// Attribute domain. Ref domains are resolved when constructed: they carry
// the sorted member values of the referenced column.
class AttrDomain {
 public:
  AttrDomain() = default;

  static AttrDomain integer();
  static AttrDomain floating();
  static AttrDomain boolean();
  static AttrDomain varchar();
  static AttrDomain enumeration(std::vector<std::string> tags);
  static AttrDomain int_range(std::int64_t lo, std::int64_t hi);
  static AttrDomain float_range(double lo, double hi);
  static AttrDomain reference(std::string relation, std::string attr,
                              std::vector<Value> members);

  DomainKind kind() const { return kind_; }
  ValueKind value_kind() const;
  bool is_finite() const;
  // Number of values; only meaningful when finite.
  std::size_t cardinality() const;
  // Sorted member values; throws for infinite domains.
  std::vector<Value> enumerate() const;
  bool contains(const Value& v) const;
  // Converts v into this domain's value kind (e.g. 3 -> 3.0 for floats,
  // a string to an enum tag) if it is a member.
  std::optional<Value> coerce(const Value& v) const;

  std::int64_t int_lo() const { return ilo_; }
  std::int64_t int_hi() const { return ihi_; }
  double float_lo() const { return flo_; }
  double float_hi() const { return fhi_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::string& ref_relation() const { return ref_rel_; }
  const std::string& ref_attr() const { return ref_attr_; }
  const std::vector<Value>& members() const { return members_; }

  std::string to_string() const;

  friend bool operator==(const AttrDomain& a, const AttrDomain& b);

 private:
  DomainKind kind_ = DomainKind::Int;
  std::int64_t ilo_ = 0, ihi_ = 0;
  double flo_ = 0, fhi_ = 0;
  std::vector<std::string> tags_;
  std::string ref_rel_, ref_attr_;
  std::vector<Value> members_;
};

// Default domain for values of a kind (Int, Float, Bool, Varchar, Enum).
AttrDomain domain_for_kind(ValueKind kind, const std::vector<Value>& seen = {});

struct Attribute {
  std::string name;
  AttrDomain domain;
  friend bool operator==(const Attribute&, const Attribute&) = default;
};

class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Attribute> attrs);

  std::size_t size() const { return attrs_.size(); }
  bool empty() const { return attrs_.empty(); }
  const std::vector<Attribute>& attrs() const { return attrs_; }
  const Attribute& operator[](std::size_t i) const { return attrs_[i]; }
  std::optional<std::size_t> find(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name).has_value(); }
  const Attribute& at(const std::string& name) const;
  std::vector<std::string> names() const;
  bool all_finite() const;

  std::string to_string() const;

  friend bool operator==(const Schema& a, const Schema& b) { return a.attrs_ == b.attrs_; }

 private:
  std::vector<Attribute> attrs_;
};

bool same_attribute_names(const Schema& a, const Schema& b);

using RenameSpec = std::vector<std::pair<std::string, std::string>>;

// Validates a rename against a schema and returns the renamed schema.
Schema apply_rename(const RenameSpec& spec, const Schema& schema);

}  // namespace solq
