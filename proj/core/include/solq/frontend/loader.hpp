#pragma once

#include <string>
#include <string_view>

#include "solq/relation.hpp"
#include "solq/schema.hpp"

namespace solq::frontend {

enum class TableFormat { Csv, Json };

// CSV: comma separated, header row naming the schema attributes (any
// order), RFC 4180 quoting. JSON: array of objects keyed by attribute.
// Errors carry the 1-based data row number.
Relation load_table(const std::string& path, TableFormat format, const Schema& schema,
                    const std::string& name);
Relation parse_table(std::string_view text, TableFormat format, const Schema& schema,
                     const std::string& name);

std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace solq::frontend
