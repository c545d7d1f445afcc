#include "solq/frontend/loader.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "solq/error.hpp"
#include "solq/frontend/lexer.hpp"

namespace solq::frontend {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

ValueKind cell_kind(const AttrDomain& d) {
  if (d.kind() == DomainKind::Ref && !d.members().empty()) return d.members().front().kind();
  return d.value_kind();
}

std::optional<Value> parse_cell(const std::string& raw, const AttrDomain& d) {
  std::string t = trim(raw);
  switch (cell_kind(d)) {
    case ValueKind::Int: {
      std::int64_t v = 0;
      auto r = std::from_chars(t.data(), t.data() + t.size(), v);
      if (r.ec == std::errc() && r.ptr == t.data() + t.size() && !t.empty()) return Value::integer(v);
      return std::nullopt;
    }
    case ValueKind::Float: {
      if (t.empty()) return std::nullopt;
      char* end = nullptr;
      double v = std::strtod(t.c_str(), &end);
      if (end != t.c_str() + t.size()) return std::nullopt;
      return Value::floating(v);
    }
    case ValueKind::Bool:
      for (const char* w : {"true", "t", "1", "yes"}) {
        if (iequals(t, w)) return Value::boolean(true);
      }
      for (const char* w : {"false", "f", "0", "no"}) {
        if (iequals(t, w)) return Value::boolean(false);
      }
      return std::nullopt;
    case ValueKind::String: return Value::string(raw);
    case ValueKind::Enum: return Value::enum_tag(t);
  }
  return std::nullopt;
}

[[noreturn]] void row_error(ErrorKind kind, std::size_t row, const std::string& msg) {
  fail(kind, "row " + std::to_string(row) + ": " + msg);
}

Value checked(const Value& v, const Attribute& a, std::size_t row, const std::string& shown) {
  auto c = a.domain.coerce(v);
  if (!c) {
    row_error(ErrorKind::Domain, row,
              "value '" + shown + "' of attribute '" + a.name + "' is not in domain " + a.domain.to_string());
  }
  return *c;
}

Relation from_csv(std::string_view text, const Schema& schema, const std::string& name) {
  auto rows = parse_csv(text);
  if (rows.empty()) fail(ErrorKind::Io, "CSV input has no header row");
  const auto& header = rows.front();
  std::vector<std::size_t> column(schema.size(), header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::string h = trim(header[c]);
    auto i = schema.find(h);
    if (!i) fail(ErrorKind::Schema, "CSV header names unknown attribute '" + h + "'");
    if (column[*i] != header.size()) fail(ErrorKind::Schema, "CSV header repeats attribute '" + h + "'");
    column[*i] = c;
  }
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (column[i] == header.size()) fail(ErrorKind::Schema, "CSV header lacks attribute '" + schema[i].name + "'");
  }
  std::vector<Tuple> tuples;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && trim(row[0]).empty() && header.size() > 1) continue;
    if (row.size() != header.size()) {
      row_error(ErrorKind::Io, r,
                "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(row.size()));
    }
    Tuple t;
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const std::string& cell = row[column[i]];
      auto v = parse_cell(cell, schema[i].domain);
      if (!v) {
        row_error(ErrorKind::Type, r,
                  "cannot read '" + cell + "' as " + value_kind_name(cell_kind(schema[i].domain)) + " for attribute '" +
                      schema[i].name + "'");
      }
      t.push_back(checked(*v, schema[i], r, cell));
    }
    tuples.push_back(std::move(t));
  }
  return Relation(name, schema, std::move(tuples));
}

Relation from_json(std::string_view text, const Schema& schema, const std::string& name) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::Io, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array()) fail(ErrorKind::Io, "JSON table must be an array of objects");
  std::vector<Tuple> tuples;
  std::size_t r = 0;
  for (const auto& obj : doc) {
    ++r;
    if (!obj.is_object()) row_error(ErrorKind::Io, r, "expected an object");
    for (const auto& [key, _] : obj.items()) {
      if (!schema.contains(key)) row_error(ErrorKind::Schema, r, "unknown attribute '" + key + "'");
    }
    Tuple t;
    for (const auto& a : schema.attrs()) {
      if (!obj.contains(a.name)) row_error(ErrorKind::Schema, r, "missing attribute '" + a.name + "'");
      const auto& j = obj[a.name];
      std::optional<Value> v;
      if (j.is_boolean()) v = Value::boolean(j.get<bool>());
      else if (j.is_number_integer()) v = Value::integer(j.get<std::int64_t>());
      else if (j.is_number()) v = Value::floating(j.get<double>());
      else if (j.is_string()) v = parse_cell(j.get<std::string>(), a.domain);
      if (!v) row_error(ErrorKind::Type, r, "cannot read " + j.dump() + " for attribute '" + a.name + "'");
      t.push_back(checked(*v, a, r, j.is_string() ? j.get<std::string>() : j.dump()));
    }
    tuples.push_back(std::move(t));
  }
  return Relation(name, schema, std::move(tuples));
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  std::size_t i = 0;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  while (i < text.size()) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      field += c;
      any = true;
    }
    ++i;
  }
  if (quoted) fail(ErrorKind::Io, "unterminated quoted CSV field");
  if (any || !field.empty() || !row.empty()) end_row();
  return rows;
}

Relation parse_table(std::string_view text, TableFormat format, const Schema& schema, const std::string& name) {
  return format == TableFormat::Csv ? from_csv(text, schema, name) : from_json(text, schema, name);
}

Relation load_table(const std::string& path, TableFormat format, const Schema& schema, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_table(ss.str(), format, schema, name);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

}  // namespace solq::frontend
