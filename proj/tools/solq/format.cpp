#include <algorithm>

#include <nlohmann/json.hpp>

#include "solq/driver.hpp"

namespace solq::cli {

namespace {

std::string rule(const std::vector<std::size_t>& widths) {
  std::string s = "+";
  for (auto w : widths) s += std::string(w + 2, '-') + "+";
  return s + "\n";
}

std::string line(const std::vector<std::string>& cells, const std::vector<std::size_t>& widths) {
  std::string s = "|";
  for (std::size_t i = 0; i < cells.size(); ++i) s += " " + cells[i] + std::string(widths[i] - cells[i].size(), ' ') + " |";
  return s + "\n";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json to_json(const Value& v) {
  switch (v.kind()) {
    case ValueKind::Bool: return v.as_bool();
    case ValueKind::Int: return v.as_int();
    case ValueKind::Float: return v.as_float();
    default: return v.as_text();
  }
}

}  // namespace

std::string format_table(const Sink& s) {
  std::vector<std::string> header = s.schema.names();
  std::vector<std::size_t> widths;
  for (const auto& h : header) widths.push_back(h.size());
  std::vector<std::vector<std::string>> rows;
  for (const auto& t : s.tuples) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < t.size(); ++i) {
      cells.push_back(t[i].to_string());
      widths[i] = std::max(widths[i], cells.back().size());
    }
    rows.push_back(std::move(cells));
  }
  std::string out = s.name + "\n";
  if (header.empty()) {
    return out + "(" + std::to_string(s.tuples.size()) + (s.tuples.size() == 1 ? " row" : " rows") +
           ", no attributes)\n";
  }
  out += rule(widths) + line(header, widths) + rule(widths);
  for (const auto& r : rows) out += line(r, widths);
  if (!rows.empty()) out += rule(widths);
  return out;
}

std::string format_csv(const Sink& s) {
  std::string out;
  auto names = s.schema.names();
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + csv_field(names[i]);
  out += "\n";
  for (const auto& t : s.tuples) {
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "," : "") + csv_field(t[i].to_string());
    out += "\n";
  }
  return out;
}

std::string format_json(const std::vector<Sink>& sinks) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& s : sinks) {
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["attributes"] = s.schema.names();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& t : s.tuples) {
      nlohmann::ordered_json row;
      for (std::size_t i = 0; i < t.size(); ++i) row[s.schema[i].name] = to_json(t[i]);
      rows.push_back(std::move(row));
    }
    j["tuples"] = std::move(rows);
    if (s.status) j["status"] = *s.status;
    doc.push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

}  // namespace solq::cli
