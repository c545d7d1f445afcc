#pragma once

#include <optional>
#include <string>
#include <vector>

#include "solq/expr.hpp"
#include "solq/schema.hpp"
#include "solq/value.hpp"

namespace solq {

// Active domain relation: schema plus a finite set of tuples, kept sorted
// in canonical (lexicographic, schema order) order without duplicates.
class Relation {
 public:
  Relation() = default;
  // Sorts and deduplicates; checks arity only. Use adr::construct to
  // validate values against domains.
  Relation(std::string name, Schema schema, std::vector<Tuple> tuples);

  const std::string& name() const { return name_; }
  const Schema& schema() const { return schema_; }
  const std::vector<Tuple>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }
  bool contains(const Tuple& t) const;

  Relation with_name(std::string name) const;
  std::vector<std::string> attr_names() const { return schema_.names(); }

  // Same attribute names (in any order) and same tuples.
  friend bool same_extension(const Relation& a, const Relation& b);
  friend bool operator==(const Relation& a, const Relation& b) {
    return a.schema_ == b.schema_ && a.tuples_ == b.tuples_;
  }

 private:
  std::string name_;
  Schema schema_;
  std::vector<Tuple> tuples_;
};

bool same_extension(const Relation& a, const Relation& b);

namespace adr {

enum class Direction { Asc, Desc };

struct AggSpec {
  Expr expr;  // contains AggCall nodes; group attributes may appear bare
  std::string name;
};

struct OrderKey {
  Expr expr;
  Direction dir = Direction::Asc;
};

struct Sequence {
  std::string name;
  Schema schema;
  std::vector<Tuple> tuples;
};

enum class SetOp { Union, Intersect, Difference };

// Validates every value against its domain (coercing, e.g. 1 -> 1.0 for
// FLOAT) and removes duplicates.
Relation construct(std::string name, Schema schema, std::vector<Tuple> tuples);

Relation nullary_singleton();

Relation natural_join(const Relation& r, const Relation& s);
Relation cross(const Relation& r, const Relation& s);
Relation set_op(SetOp op, const Relation& r, const Relation& s);
Relation select(const Expr& theta, const Relation& r);
Relation project(const std::vector<std::string>& attrs, const Relation& r);
Relation rename(const RenameSpec& spec, const Relation& r);
Relation group_aggregate(const std::vector<std::string>& group, const std::vector<AggSpec>& specs,
                         const Relation& r);
Sequence order_limit(const std::vector<OrderKey>& order, std::optional<std::size_t> limit,
                     const Relation& r);

// Evaluates an aggregate spec expression for one group.
Value eval_agg_spec(const Expr& spec, const std::vector<std::string>& attrs,
                    const std::vector<const Tuple*>& group);

// Canonical reordering of columns: tuples of r rearranged into `order`.
Relation reorder(const Relation& r, const std::vector<std::string>& order);

void check_attrs(const Expr& e, const Schema& schema, const char* context);

}  // namespace adr
}  // namespace solq
