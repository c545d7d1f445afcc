#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "solq/eval.hpp"
#include "solq/frontend/elaborate.hpp"
#include "solq/frontend/parser.hpp"
#include "solq/solset.hpp"
#include "solq/translate.hpp"

namespace solq::test {

inline std::string program_path(const std::string& name) { return std::string(SOLQ_PROGRAMS_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  frontend::Catalog catalog;
  std::vector<frontend::Directive> directives;

  template <class T>
  const T& get(const std::string& name) const {
    const frontend::Object* o = catalog.find(name);
    if (!o) throw std::runtime_error("no object named " + name);
    return std::get<T>(*o);
  }
};

// Elaborates a program from programs/, optionally after textual edits.
inline Loaded load_program(const std::string& name,
                           const std::vector<std::pair<std::string, std::string>>& edits = {}) {
  std::string text = read_text(program_path(name));
  for (const auto& [from, to] : edits) {
    auto at = text.find(from);
    if (at == std::string::npos) throw std::runtime_error("edit target not found: " + from);
    text.replace(at, from.size(), to);
  }
  Loaded l;
  frontend::ElabOptions opts;
  opts.base_dir = SOLQ_PROGRAMS_DIR;
  l.directives = frontend::elaborate(frontend::parse_program(text), l.catalog, opts);
  return l;
}

inline Loaded load_source(const std::string& text) {
  Loaded l;
  frontend::ElabOptions opts;
  opts.base_dir = SOLQ_PROGRAMS_DIR;
  l.directives = frontend::elaborate(frontend::parse_program(text), l.catalog, opts);
  return l;
}

// A candidate relation as sorted tuples over alphabetically ordered attributes.
inline std::vector<Tuple> canonical(const Relation& r) {
  auto names = r.schema().names();
  std::sort(names.begin(), names.end());
  return adr::reorder(r, names).tuples();
}

// Splits a ranked result (rank attribute first) into candidate relations.
inline std::vector<Relation> split_by_rank(const Relation& ranked, const Schema& candidate) {
  std::map<std::int64_t, std::vector<Tuple>> groups;
  for (const auto& t : ranked.tuples()) groups[t[0].as_int()].push_back(Tuple(t.begin() + 1, t.end()));
  std::vector<Relation> out;
  for (auto& [rank, rows] : groups) out.emplace_back("", candidate, std::move(rows));
  return out;
}

// Candidates found through translation and brute force, in rank order.
inline std::vector<Relation> phi_candidates(const RankedQuery& q, EvalOutcome* outcome_out = nullptr) {
  FlatForm ff = phi::translate(q);
  EvalOutcome outcome = brute_force_solve(ff.flat, classify(ff.meta, ff.flat));
  Schema cand = q.set.candidate_schema();
  Relation ranked = reinstantiate(outcome, ff, cand.names(), std::string("rank_"));
  if (outcome_out) *outcome_out = outcome;
  return split_by_rank(ranked, cand);
}

inline Relation rel(const std::string& name, std::vector<std::pair<std::string, AttrDomain>> attrs,
                    std::vector<Tuple> rows) {
  std::vector<Attribute> as;
  for (auto& [n, d] : attrs) as.push_back(Attribute{n, d});
  return adr::construct(name, Schema(std::move(as)), std::move(rows));
}

inline Value I(std::int64_t v) { return Value::integer(v); }
inline Value F(double v) { return Value::floating(v); }
inline Value S(const std::string& v) { return Value::string(v); }
inline Value B(bool v) { return Value::boolean(v); }

}  // namespace solq::test
