#include "solq/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "solq/error.hpp"

namespace solq {

AttrDomain AttrDomain::integer() {
  AttrDomain d;
  d.kind_ = DomainKind::Int;
  return d;
}

AttrDomain AttrDomain::floating() {
  AttrDomain d;
  d.kind_ = DomainKind::Float;
  return d;
}

AttrDomain AttrDomain::boolean() {
  AttrDomain d;
  d.kind_ = DomainKind::Bool;
  return d;
}

AttrDomain AttrDomain::varchar() {
  AttrDomain d;
  d.kind_ = DomainKind::Varchar;
  return d;
}

AttrDomain AttrDomain::enumeration(std::vector<std::string> tags) {
  if (tags.empty()) fail(ErrorKind::Domain, "ENUM needs at least one tag");
  std::set<std::string> seen;
  for (const auto& t : tags) {
    if (!seen.insert(t).second) fail(ErrorKind::Domain, "duplicate ENUM tag '" + t + "'");
  }
  AttrDomain d;
  d.kind_ = DomainKind::Enum;
  d.tags_ = std::move(tags);
  return d;
}

AttrDomain AttrDomain::int_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) {
    fail(ErrorKind::Domain, "empty range " + std::to_string(lo) + ".." + std::to_string(hi));
  }
  AttrDomain d;
  d.kind_ = DomainKind::IntRange;
  d.ilo_ = lo;
  d.ihi_ = hi;
  return d;
}

AttrDomain AttrDomain::float_range(double lo, double hi) {
  if (!(lo <= hi)) {
    fail(ErrorKind::Domain, "empty range " + format_double(lo) + ".." + format_double(hi));
  }
  AttrDomain d;
  d.kind_ = DomainKind::FloatRange;
  d.flo_ = lo;
  d.fhi_ = hi;
  return d;
}

AttrDomain AttrDomain::reference(std::string relation, std::string attr,
                                 std::vector<Value> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  AttrDomain d;
  d.kind_ = DomainKind::Ref;
  d.ref_rel_ = std::move(relation);
  d.ref_attr_ = std::move(attr);
  d.members_ = std::move(members);
  return d;
}

ValueKind AttrDomain::value_kind() const {
  switch (kind_) {
    case DomainKind::Int:
    case DomainKind::IntRange: return ValueKind::Int;
    case DomainKind::Float:
    case DomainKind::FloatRange: return ValueKind::Float;
    case DomainKind::Bool: return ValueKind::Bool;
    case DomainKind::Varchar: return ValueKind::String;
    case DomainKind::Enum: return ValueKind::Enum;
    case DomainKind::Ref:
      return members_.empty() ? ValueKind::Int : members_.front().kind();
  }
  return ValueKind::Int;
}

bool AttrDomain::is_finite() const {
  switch (kind_) {
    case DomainKind::Bool:
    case DomainKind::Enum:
    case DomainKind::IntRange:
    case DomainKind::Ref: return true;
    case DomainKind::FloatRange: return flo_ == fhi_;
    default: return false;
  }
}

std::size_t AttrDomain::cardinality() const {
  switch (kind_) {
    case DomainKind::Bool: return 2;
    case DomainKind::Enum: return tags_.size();
    case DomainKind::IntRange: return static_cast<std::size_t>(ihi_ - ilo_) + 1;
    case DomainKind::Ref: return members_.size();
    case DomainKind::FloatRange: return flo_ == fhi_ ? 1 : SIZE_MAX;
    default: return SIZE_MAX;
  }
}

std::vector<Value> AttrDomain::enumerate() const {
  std::vector<Value> out;
  switch (kind_) {
    case DomainKind::Bool:
      out = {Value::boolean(false), Value::boolean(true)};
      break;
    case DomainKind::Enum:
      for (const auto& t : tags_) out.push_back(Value::enum_tag(t));
      std::sort(out.begin(), out.end());
      break;
    case DomainKind::IntRange:
      out.reserve(cardinality());
      for (auto v = ilo_; v <= ihi_; ++v) out.push_back(Value::integer(v));
      break;
    case DomainKind::Ref:
      out = members_;
      break;
    case DomainKind::FloatRange:
      if (flo_ == fhi_) {
        out.push_back(Value::floating(flo_));
        break;
      }
      [[fallthrough]];
    default:
      fail(ErrorKind::Unbounded, "domain " + to_string() + " is infinite");
  }
  return out;
}

std::optional<Value> AttrDomain::coerce(const Value& v) const {
  switch (kind_) {
    case DomainKind::Int:
    case DomainKind::IntRange: {
      std::int64_t x;
      if (v.kind() == ValueKind::Int) {
        x = v.as_int();
      } else if (v.kind() == ValueKind::Float) {
        double d = v.as_float();
        if (!std::isfinite(d) || std::floor(d) != d || std::fabs(d) > 9.0e18) return std::nullopt;
        x = static_cast<std::int64_t>(d);
      } else {
        return std::nullopt;
      }
      if (kind_ == DomainKind::IntRange && (x < ilo_ || x > ihi_)) return std::nullopt;
      return Value::integer(x);
    }
    case DomainKind::Float:
    case DomainKind::FloatRange: {
      if (!v.is_numeric()) return std::nullopt;
      double d = v.as_float();
      if (kind_ == DomainKind::FloatRange && (d < flo_ || d > fhi_)) return std::nullopt;
      return Value::floating(d);
    }
    case DomainKind::Bool:
      if (!v.is_bool()) return std::nullopt;
      return v;
    case DomainKind::Varchar:
      if (!v.is_text()) return std::nullopt;
      return Value::string(v.as_text());
    case DomainKind::Enum:
      if (!v.is_text()) return std::nullopt;
      if (std::find(tags_.begin(), tags_.end(), v.as_text()) == tags_.end()) return std::nullopt;
      return Value::enum_tag(v.as_text());
    case DomainKind::Ref: {
      auto it = std::lower_bound(members_.begin(), members_.end(), v);
      if (it == members_.end() || !(*it == v)) return std::nullopt;
      if (!comparable_kinds(it->kind(), v.kind())) return std::nullopt;
      return *it;
    }
  }
  return std::nullopt;
}

bool AttrDomain::contains(const Value& v) const { return coerce(v).has_value(); }

std::string AttrDomain::to_string() const {
  switch (kind_) {
    case DomainKind::Int: return "INT";
    case DomainKind::Float: return "FLOAT";
    case DomainKind::Bool: return "BOOL";
    case DomainKind::Varchar: return "VARCHAR";
    case DomainKind::Enum: {
      std::string s = "ENUM(";
      for (std::size_t i = 0; i < tags_.size(); ++i) s += (i ? ", " : "") + tags_[i];
      return s + ")";
    }
    case DomainKind::IntRange: return std::to_string(ilo_) + ".." + std::to_string(ihi_);
    case DomainKind::FloatRange: return format_double(flo_) + ".." + format_double(fhi_);
    case DomainKind::Ref: return "IN project[" + ref_attr_ + "](" + ref_rel_ + ")";
  }
  return "?";
}

bool operator==(const AttrDomain& a, const AttrDomain& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case DomainKind::Enum: return a.tags_ == b.tags_;
    case DomainKind::IntRange: return a.ilo_ == b.ilo_ && a.ihi_ == b.ihi_;
    case DomainKind::FloatRange: return a.flo_ == b.flo_ && a.fhi_ == b.fhi_;
    case DomainKind::Ref: return a.members_ == b.members_;
    default: return true;
  }
}

AttrDomain domain_for_kind(ValueKind kind, const std::vector<Value>& seen) {
  switch (kind) {
    case ValueKind::Bool: return AttrDomain::boolean();
    case ValueKind::Int: return AttrDomain::integer();
    case ValueKind::Float: return AttrDomain::floating();
    case ValueKind::String: return AttrDomain::varchar();
    case ValueKind::Enum: {
      std::vector<std::string> tags;
      for (const auto& v : seen) {
        if (std::find(tags.begin(), tags.end(), v.as_text()) == tags.end()) tags.push_back(v.as_text());
      }
      if (tags.empty()) return AttrDomain::varchar();
      return AttrDomain::enumeration(std::move(tags));
    }
  }
  return AttrDomain::integer();
}

Schema::Schema(std::vector<Attribute> attrs) : attrs_(std::move(attrs)) {
  std::set<std::string> seen;
  for (const auto& a : attrs_) {
    if (a.name.empty()) fail(ErrorKind::Schema, "empty attribute name");
    if (!seen.insert(a.name).second) fail(ErrorKind::Schema, "duplicate attribute '" + a.name + "'");
  }
}

std::optional<std::size_t> Schema::find(const std::string& name) const {
  for (std::size_t i = 0; i < attrs_.size(); ++i) {
    if (attrs_[i].name == name) return i;
  }
  return std::nullopt;
}

const Attribute& Schema::at(const std::string& name) const {
  auto i = find(name);
  if (!i) fail(ErrorKind::Name, "unknown attribute '" + name + "'");
  return attrs_[*i];
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(attrs_.size());
  for (const auto& a : attrs_) out.push_back(a.name);
  return out;
}

bool Schema::all_finite() const {
  return std::all_of(attrs_.begin(), attrs_.end(),
                     [](const Attribute& a) { return a.domain.is_finite(); });
}

std::string Schema::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < attrs_.size(); ++i) {
    if (i) s += ", ";
    s += attrs_[i].name + ": " + attrs_[i].domain.to_string();
  }
  return s;
}

bool same_attribute_names(const Schema& a, const Schema& b) {
  if (a.size() != b.size()) return false;
  for (const auto& attr : a.attrs()) {
    if (!b.contains(attr.name)) return false;
  }
  return true;
}

Schema apply_rename(const RenameSpec& spec, const Schema& schema) {
  std::vector<Attribute> attrs = schema.attrs();
  std::set<std::string> sources;
  for (const auto& [from, to] : spec) {
    if (!schema.contains(from)) fail(ErrorKind::Name, "rename of unknown attribute '" + from + "'");
    if (!sources.insert(from).second) fail(ErrorKind::Schema, "attribute '" + from + "' renamed twice");
  }
  for (auto& a : attrs) {
    for (const auto& [from, to] : spec) {
      if (a.name == from) {
        a.name = to;
        break;
      }
    }
  }
  std::set<std::string> seen;
  for (const auto& a : attrs) {
    if (!seen.insert(a.name).second) {
      fail(ErrorKind::Schema, "rename collides on attribute '" + a.name + "'");
    }
  }
  return Schema(std::move(attrs));
}

}  // namespace solq
