#include <algorithm>
#include <cctype>

#include "solq/error.hpp"
#include "solq/expr.hpp"

namespace solq {

std::optional<AggFn> agg_fn_from_name(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (key == "booland" || key == "forall") return AggFn::BoolAnd;
  if (key == "boolor" || key == "exists") return AggFn::BoolOr;
  if (key == "alldifferent" || key == "alldiff") return AggFn::AllDifferent;
  if (key == "hassubset") return AggFn::HasSubset;
  if (key == "sum") return AggFn::Sum;
  if (key == "min") return AggFn::Min;
  if (key == "max") return AggFn::Max;
  if (key == "count") return AggFn::Count;
  return std::nullopt;
}

const char* agg_fn_name(AggFn fn) {
  switch (fn) {
    case AggFn::BoolAnd: return "Bool_And";
    case AggFn::BoolOr: return "Bool_Or";
    case AggFn::AllDifferent: return "AllDifferent";
    case AggFn::HasSubset: return "hasSubset";
    case AggFn::Sum: return "sum";
    case AggFn::Min: return "min";
    case AggFn::Max: return "max";
    case AggFn::Count: return "count";
  }
  return "?";
}

bool is_boolean_agg(AggFn fn) {
  switch (fn) {
    case AggFn::BoolAnd:
    case AggFn::BoolOr:
    case AggFn::AllDifferent:
    case AggFn::HasSubset: return true;
    default: return false;
  }
}

LookupTable::LookupTable(std::string label, std::vector<std::string> key_attrs,
                         std::vector<std::string> dependent_attrs, std::vector<Tuple> keys,
                         std::vector<Tuple> dependents)
    : label_(std::move(label)),
      key_attrs_(std::move(key_attrs)),
      dependent_attrs_(std::move(dependent_attrs)) {
  if (keys.size() != dependents.size()) fail(ErrorKind::Type, "lookup table row count mismatch");
  std::vector<std::size_t> order(keys.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return compare_tuples(keys[a], keys[b]) < 0; });
  for (std::size_t i : order) {
    if (!keys_.empty() && compare_tuples(keys_.back(), keys[i]) == 0) {
      std::string k;
      for (const auto& v : keys[i]) k += (k.empty() ? "" : ", ") + v.to_literal();
      fail(ErrorKind::DataDependency, "relation " + label_ + " is not functional in its key: (" +
                                          k + ") appears more than once");
    }
    keys_.push_back(keys[i]);
    dependents_.push_back(dependents[i]);
  }
}

std::optional<std::size_t> LookupTable::dependent_index(const std::string& attr) const {
  for (std::size_t i = 0; i < dependent_attrs_.size(); ++i) {
    if (dependent_attrs_[i] == attr) return i;
  }
  return std::nullopt;
}

const Tuple* LookupTable::find(const Tuple& key) const {
  auto it = std::lower_bound(keys_.begin(), keys_.end(), key,
                             [](const Tuple& a, const Tuple& b) { return compare_tuples(a, b) < 0; });
  if (it == keys_.end() || compare_tuples(*it, key) != 0) return nullptr;
  return &dependents_[static_cast<std::size_t>(it - keys_.begin())];
}

namespace {

void need_arity(AggFn fn, const std::vector<Tuple>& rows, std::size_t n) {
  for (const auto& r : rows) {
    if (r.size() != n) {
      fail(ErrorKind::Type, std::string(agg_fn_name(fn)) + " expects " + std::to_string(n) +
                                " argument(s)");
    }
  }
}

}  // namespace

Value apply_aggregate(AggFn fn, const std::vector<Tuple>& rows, const Table* subset) {
  switch (fn) {
    case AggFn::BoolAnd:
    case AggFn::BoolOr: {
      need_arity(fn, rows, 1);
      bool conj = fn == AggFn::BoolAnd;
      bool acc = conj;
      for (const auto& r : rows) {
        if (!r[0].is_bool()) {
          fail(ErrorKind::Type, std::string(agg_fn_name(fn)) + " over non-boolean value " +
                                    r[0].to_literal());
        }
        acc = conj ? (acc && r[0].as_bool()) : (acc || r[0].as_bool());
      }
      return Value::boolean(acc);
    }
    case AggFn::AllDifferent: {
      if (!rows.empty()) need_arity(fn, rows, rows.front().size());
      std::vector<Tuple> sorted = rows;
      std::sort(sorted.begin(), sorted.end(), TupleLess{});
      for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (compare_tuples(sorted[i - 1], sorted[i]) == 0) return Value::boolean(false);
      }
      return Value::boolean(true);
    }
    case AggFn::HasSubset: {
      if (!subset) fail(ErrorKind::Type, "hasSubset needs a relation argument");
      need_arity(fn, rows, subset->attrs.size());
      std::vector<Tuple> sorted = rows;
      std::sort(sorted.begin(), sorted.end(), TupleLess{});
      for (const auto& want : subset->rows) {
        if (!std::binary_search(sorted.begin(), sorted.end(), want, TupleLess{})) {
          return Value::boolean(false);
        }
      }
      return Value::boolean(true);
    }
    case AggFn::Sum: {
      need_arity(fn, rows, 1);
      Value acc = Value::integer(0);
      for (const auto& r : rows) acc = apply_binary(BinaryOp::Add, acc, r[0]);
      return acc;
    }
    case AggFn::Min:
    case AggFn::Max: {
      need_arity(fn, rows, 1);
      if (rows.empty()) fail(ErrorKind::Evaluation, std::string(agg_fn_name(fn)) + " over an empty group");
      Value best = rows.front()[0];
      for (const auto& r : rows) {
        if (!comparable_kinds(best.kind(), r[0].kind())) {
          fail(ErrorKind::Type, std::string(agg_fn_name(fn)) + " over mixed value kinds");
        }
        int c = compare(r[0], best);
        if (fn == AggFn::Min ? c < 0 : c > 0) best = r[0];
      }
      return best;
    }
    case AggFn::Count: return Value::integer(static_cast<std::int64_t>(rows.size()));
  }
  fail(ErrorKind::Type, "unknown aggregate");
}

}  // namespace solq
