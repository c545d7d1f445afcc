// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "solq/dnf.hpp"
#include "solq/driver.hpp"
#include "solq/frontend/printer.hpp"
#include "solq/mzn.hpp"
#include "support.hpp"

using namespace solq;
namespace fe = solq::frontend;
using solq::test::canonical;
using solq::test::F;
using solq::test::I;
using solq::test::load_program;
using solq::test::program_path;
using solq::test::read_text;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects the first failure of a criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok && v_.pass) {
      v_.pass = false;
      v_.detail = what;
    }
  }
  void note(const std::string& s) {
    if (v_.pass) v_.detail = s;
  }
  Verdict verdict() const { return v_; }

 private:
  Verdict v_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::vector<Tuple>> canonical_set(const std::vector<Relation>& rs) {
  std::vector<std::vector<Tuple>> out;
  for (const auto& r : rs) out.push_back(canonical(r));
  std::sort(out.begin(), out.end());
  return out;
}

int run_cli(const std::string& program, std::string& out, std::string& err,
            cli::BackendKind backend = cli::BackendKind::Brute) {
  cli::RunConfig cfg;
  cfg.program_path = program_path(program);
  cfg.backend = backend;
  std::ostringstream o, e;
  int code = cli::run(cfg, o, e);
  out = o.str();
  err = e.str();
  return code;
}

bool has_minizinc() { return std::system("command -v minizinc > /dev/null 2>&1") == 0; }

// ---------------------------------------------------------------------------

Verdict latin_square() {
  Check c;
  const std::string expected =
      "solutionAsRelation\n"
      "+-----+-----+-------+\n"
      "| row | col | value |\n"
      "+-----+-----+-------+\n"
      "| 1   | 1   | 1     |\n"
      "| 1   | 2   | 2     |\n"
      "| 2   | 1   | 2     |\n"
      "| 2   | 2   | 1     |\n"
      "+-----+-----+-------+\n";
  auto t0 = std::chrono::steady_clock::now();
  std::string out, err;
  int code = run_cli("latin.ra", out, err);
  double secs = seconds_since(t0);
  c.expect(code == 0, "exit status " + std::to_string(code) + ": " + err);
  c.expect(out == expected, "table differs:\n" + out);
  c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");

  auto l = load_program("latin.ra");
  FlatForm ff = phi::translate(l.get<SolProjection>("solutionAsRelation").query);
  EvalOutcome outcome = brute_force_solve(ff.flat, classify(ff.meta, ff.flat));
  c.expect(outcome.candidates.size() == 1, std::to_string(outcome.candidates.size()) + " candidates");
  c.note("1 candidate, byte-exact table, " + std::to_string(secs) + " s");
  return c.verdict();
}

Verdict cakes() {
  Check c;
  const std::string expected =
      "LetsMakeBatch\n"
      "+-----------+-----+--------+\n"
      "| cake      | qty | profit |\n"
      "+-----------+-----+--------+\n"
      "| Banana    | 2   | 800    |\n"
      "| Chocolate | 2   | 900    |\n"
      "+-----------+-----+--------+\n";
  auto t0 = std::chrono::steady_clock::now();
  std::string out, err;
  int code = run_cli("cakes.ra", out, err);
  double secs = seconds_since(t0);
  c.expect(code == 0, "exit status " + std::to_string(code) + ": " + err);
  c.expect(out == expected, "table differs:\n" + out);
  c.expect(secs < 5.0, "took " + std::to_string(secs) + " s");

  auto l = load_program("cakes.ra");
  const auto& q = l.get<SolProjection>("LetsMakeBatch").query;
  FlatForm ff = phi::translate(q);
  c.expect(ff.flat.schema()[0].domain == AttrDomain::int_range(0, 100) &&
               ff.flat.schema()[1].domain == AttrDomain::int_range(0, 100),
           "flat domains are not 0..100");
  EvalOutcome outcome = brute_force_solve(ff.flat, classify(ff.meta, ff.flat));
  c.expect(outcome.status == Status::Optimal, std::string("status ") + status_name(outcome.status));
  c.expect(outcome.objective_values.size() == 1, "expected one objective value");
  if (!outcome.objective_values.empty()) {
    const Value& obj = outcome.objective_values[0];
    c.expect(obj.kind() == ValueKind::Int && obj.as_int() == 1700, "objective " + obj.to_string());
  }
  c.note("objective 1700 (integer), " + std::to_string(secs) + " s");
  return c.verdict();
}

Verdict meal_planner() {
  Check c;
  auto l = load_program("meal.ra");
  const auto& p = l.get<SolProjection>("LetsUsePlans");
  const Relation& recipes = l.get<Relation>("Recipes");
  std::map<std::int64_t, double> kcal;
  auto ri = *recipes.schema().find("recipe"), ki = *recipes.schema().find("kCal");
  for (const auto& t : recipes.tuples()) kcal[t[ri].as_int()] = t[ki].as_float();

  std::vector<Relation> cands = solq::test::phi_candidates(p.query);
  c.expect(cands.size() == 12, std::to_string(cands.size()) + " candidates");
  std::map<std::vector<std::int64_t>, std::set<std::vector<std::int64_t>>> by_triple;
  for (const auto& cand : cands) {
    auto r = adr::reorder(cand, {"meal", "recipe"});
    std::vector<std::int64_t> assignment, triple;
    double total = 0;
    for (const auto& t : r.tuples()) {
      assignment.push_back(t[1].as_int());
      total += kcal.at(t[1].as_int());
    }
    triple = assignment;
    std::sort(triple.begin(), triple.end());
    by_triple[triple].insert(assignment);
    c.expect(total >= 2.0 - 1e-9 && total <= 2.5 + 1e-9, "kCal total " + std::to_string(total));
  }
  std::map<std::vector<std::int64_t>, std::size_t> counts;
  for (const auto& [triple, ways] : by_triple) counts[triple] = ways.size();
  std::map<std::vector<std::int64_t>, std::size_t> want{{{1, 2, 6}, 6}, {{2, 4, 6}, 6}};
  c.expect(counts == want, "recipe triples differ");
  c.note("12 candidates: {1,2,6} and {2,4,6}, 6 assignments each");
  return c.verdict();
}

Verdict three_sat() {
  Check c;
  auto l = load_program("threesat.ra");
  const auto& cdr = l.get<CompleteRelation>("ThreeSAT");
  Relation r = cdr::project_eval({"x1", "x2", "x3"}, cdr);
  std::set<Tuple, TupleLess> oracle;
  for (int m = 0; m < 8; ++m) {
    bool x1 = m & 4, x2 = m & 2, x3 = m & 1;
    bool sat = (x1 || x2 || x3) && (!x1 || x2 || !x3) && (x1 || !x2 || x3);
    if (sat) oracle.insert({Value::boolean(x1), Value::boolean(x2), Value::boolean(x3)});
  }
  std::set<Tuple, TupleLess> got(r.tuples().begin(), r.tuples().end());
  c.expect(oracle.size() == 5, "oracle found " + std::to_string(oracle.size()));
  c.expect(got == oracle, "project_eval returned " + std::to_string(got.size()) + " assignments");
  c.note("5 of 8 assignments, matches truth table");
  return c.verdict();
}

// Statements of a model with whitespace removed.
std::multiset<std::string> statements(const std::string& text, const std::string& prefix) {
  static const std::regex ws("\\s+");
  std::string flat = std::regex_replace(text, ws, " ");
  std::multiset<std::string> out;
  std::size_t start = 0;
  while (start < flat.size()) {
    std::size_t end = flat.find(';', start);
    if (end == std::string::npos) end = flat.size();
    std::string st = std::regex_replace(flat.substr(start, end - start), ws, "");
    if (st.rfind(prefix, 0) == 0) out.insert(st);
    start = end + 1;
  }
  return out;
}

Verdict energy() {
  Check c;
  auto l = load_program("energy.ra");
  const auto& q = l.get<SolProjection>("LetsUseE").query;
  FlatForm ff = phi::translate(q);
  std::string model = mzn::emit(ff).source;
  std::string reference = read_text(std::string(SOLQ_TESTS_DIR) + "/oracles/energy.mzn");
  c.expect(statements(model, "var") == statements(reference, "var"), "variable set differs");
  auto cons = statements(model, "constraint");
  c.expect(cons.size() == 6, std::to_string(cons.size()) + " constraints");
  c.expect(cons == statements(reference, "constraint"), "constraints differ");
  c.expect(statements(model, "solve") == statements(reference, "solve"), "objective differs");

  Assignment known{{"e1", F(1.1)}, {"e2", F(-2.5)}, {"e3", F(3.2)}, {"e4", F(2.5)}, {"e5", F(-3.2)}, {"e6", F(1.4)}};
  c.expect(check_feasible(ff.flat, known), "reference solution infeasible");
  double obj = evaluate_objective(*ff.meta.objective, known).as_float();
  c.expect(std::abs(obj - 2.5) <= 1e-6, "reference objective " + std::to_string(obj));

  // Grid probe: the objective is a sum of terms over disjoint variables, so
  // the grid minimum is the sum of per-term minima over each term's box.
  std::vector<Expr> terms;
  std::function<void(const Expr&)> split = [&](const Expr& e) {
    if (e.kind() == ExprKind::Binary && e.binary_op() == BinaryOp::Add) {
      split(e.kid(0));
      split(e.kid(1));
    } else if (e.kind() == ExprKind::Collect && e.agg_fn() == AggFn::Sum) {
      for (const auto& row : e.rows()) split(row[0]);
    } else {
      terms.push_back(e);
    }
  };
  split(*ff.meta.objective);
  std::map<std::string, std::pair<double, double>> box;
  for (const auto& con : conjuncts(ff.flat.chi())) {
    bool bound = con.kind() == ExprKind::Between &&
                 (con.kid(0).kind() == ExprKind::SymRef || con.kid(0).kind() == ExprKind::Attr);
    c.expect(bound, "unexpected constraint " + con.to_string());
    if (con.kind() != ExprKind::Between) continue;
    box[con.kid(0).name()] = {eval_scalar(con.kid(1), EmptyBindings()).as_float(),
                              eval_scalar(con.kid(2), EmptyBindings()).as_float()};
  }
  std::set<std::string> seen;
  double grid_min = 0;
  std::uint64_t points = 0;
  for (const auto& term : terms) {
    std::set<std::string> vars = symrefs_of(term);
    for (const auto& a : attrs_of(term)) vars.insert(a);
    for (const auto& v : vars) c.expect(seen.insert(v).second, "objective terms share " + v);
    std::vector<std::string> names(vars.begin(), vars.end());
    std::vector<std::vector<double>> axes;
    for (const auto& n : names) {
      auto [lo, hi] = box.at(n);
      std::vector<double> axis;
      for (long k = std::lround(lo * 10); k <= std::lround(hi * 10); ++k) axis.push_back(k / 10.0);
      axes.push_back(axis);
    }
    double best = INFINITY;
    std::vector<std::size_t> idx(names.size(), 0);
    for (;;) {
      MapBindings b;
      for (std::size_t i = 0; i < names.size(); ++i) b.set(names[i], F(axes[i][idx[i]]));
      best = std::min(best, eval_scalar(symrefs_to_attrs(term), b).as_float());
      ++points;
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == axes[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    grid_min += best;
  }
  c.expect(terms.size() == 4, std::to_string(terms.size()) + " objective terms");
  c.expect(seen.size() == 6, "terms cover " + std::to_string(seen.size()) + " variables");
  c.expect(grid_min >= 2.5 - 1e-6, "grid minimum " + std::to_string(grid_min));

  std::string solver_note = "MiniZinc not installed, solver run skipped";
  if (has_minizinc()) {
    mzn::SolverBackend backend(std::string(SOLQ_TOOLS_DIR) + "/minizinc_json.py");
    EvalOutcome out = backend.solve(ff);
    c.expect(out.candidates.size() == 1, "solver returned " + std::to_string(out.candidates.size()));
    if (!out.candidates.empty()) {
      double v = evaluate_objective(*ff.meta.objective, out.candidates[0]).as_float();
      c.expect(std::abs(v - 2.5) <= 1e-3, "solver objective " + std::to_string(v));
    }
    solver_note = "MiniZinc objective within 1e-3";
  }
  c.note("model matches reference, reference solution feasible at 2.5, grid minimum " +
         std::to_string(grid_min) + " over " + std::to_string(points) + " term points; " + solver_note);
  return c.verdict();
}

Verdict gst() {
  Check c;
  auto l = load_program("gst.ra");
  const Relation& r = l.get<Relation>("PricesWithGST");
  Relation want = solq::test::rel("want", {{"price", AttrDomain::floating()}, {"gst", AttrDomain::floating()},
                                           {"exgst", AttrDomain::floating()}},
                                  {{F(110), F(10), F(100)}, {F(55), F(5), F(50)}});
  c.expect(r.schema().names() == want.schema().names(), "schema " + r.schema().to_string());
  c.expect(r.tuples() == want.tuples(), "tuples differ");
  cdr::ProbeDomains probes{{"price", {I(0), I(55), I(110), I(1000)}}};
  c.expect(cdr::equivalent(l.get<CompleteRelation>("GST"), l.get<CompleteRelation>("GST2"), probes),
           "GST and GST2 differ on the probes");
  c.note("2-row table exact; GST == GST2 on prices {0, 55, 110, 1000}");
  return c.verdict();
}

Verdict dnf_safety() {
  Check c;
  std::mt19937 rng(20240611);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const std::vector<std::string> pool{"a", "b", "c", "d"};
  int cases = 0;
  auto random_rel = [&](const std::string& name, const std::vector<std::string>& attrs,
                        const std::map<std::string, int>& dom) {
    std::vector<Attribute> as;
    for (const auto& a : attrs) as.push_back({a, AttrDomain::int_range(0, dom.at(a) - 1)});
    std::vector<Tuple> rows;
    int n = pick(0, 6);
    for (int i = 0; i < n; ++i) {
      Tuple t;
      for (const auto& a : attrs) t.push_back(I(pick(0, dom.at(a) - 1)));
      rows.push_back(t);
    }
    return adr::construct(name, Schema(as), rows);
  };
  auto widen = [](const CompleteRelation& c0, bool unbounded) {
    std::vector<Attribute> as;
    for (const auto& a : c0.schema().attrs()) {
      as.push_back({a.name, unbounded ? AttrDomain::integer() : AttrDomain::int_range(-3, 9)});
    }
    return CompleteRelation(c0.name(), Schema(as), c0.chi());
  };
  auto widening_keeps = [&](const CompleteRelation& cd, const Relation& expect) {
    auto names = cd.schema().names();
    Relation narrow = cdr::project_eval(names, cd);
    c.expect(narrow.tuples() == adr::reorder(expect, names).tuples(), "project_eval differs from ADR result");
    c.expect(cdr::project_eval(names, widen(cd, false)).tuples() == narrow.tuples(), "widening to -3..9 changed output");
    c.expect(cdr::project_eval(names, widen(cd, true)).tuples() == narrow.tuples(), "widening to INT changed output");
  };
  for (int iter = 0; iter < 1200; ++iter) {
    std::map<std::string, int> dom;
    for (const auto& a : pool) dom[a] = pick(1, 4);
    auto choose = [&]() {
      std::vector<std::string> attrs = pool;
      std::shuffle(attrs.begin(), attrs.end(), rng);
      attrs.resize(pick(1, 3));
      return attrs;
    };
    std::vector<std::string> ra = choose(), sa = choose();
    Relation r = random_rel("R", ra, dom), s = random_rel("S", sa, dom);
    CompleteRelation cr = cdr::from_adr(r), cs = cdr::from_adr(s);
    c.expect(is_adr_dnf(cr.chi(), cr.schema()), "adr_as_cdr outside the region");

    CompleteRelation j = cdr::combine(cdr::Combine::Join, cr, cs);
    Expr jd = to_dnf(j.chi(), j.schema());
    c.expect(is_adr_dnf(jd, j.schema()), "join left the region: " + jd.to_string());
    c.expect(disjuncts(jd).size() <= r.size() * s.size() || jd.is_false(), "join disjunct bound exceeded");
    widening_keeps(CompleteRelation("J", j.schema(), jd), adr::natural_join(r, s));

    Relation s2 = random_rel("S2", ra, dom);
    CompleteRelation u = cdr::combine(cdr::Combine::Union, cr, cdr::from_adr(s2));
    Expr ud = to_dnf(u.chi(), u.schema());
    c.expect(is_adr_dnf(ud, u.schema()), "union left the region: " + ud.to_string());
    c.expect(disjuncts(ud).size() <= r.size() + s2.size() || ud.is_false(), "union disjunct bound exceeded");
    widening_keeps(CompleteRelation("U", u.schema(), ud), adr::set_op(adr::SetOp::Union, r, s2));

    CompleteRelation d = cdr::combine(cdr::Combine::Difference, cr, cdr::from_adr(s2));
    widening_keeps(d, adr::set_op(adr::SetOp::Difference, r, s2));
    ++cases;
    if (!c.verdict().pass) break;
  }
  c.note(std::to_string(cases) + " random cases, zero failures");
  return c.verdict();
}

Verdict exponentiation() {
  Check c;
  int pairs = 0;
  for (int nb = 1; nb <= 3; ++nb) {
    for (int nd = 1; nd <= 3; ++nd) {
      std::vector<Tuple> brows;
      for (int i = 0; i < nb; ++i) brows.push_back({I(10 + i)});
      Relation base = solq::test::rel("B", {{"b", AttrDomain::integer()}}, brows);
      CompleteRelation decision = cdr::construct("D", Schema({{"d", AttrDomain::int_range(1, nd)}}));
      SolutionSet u = sol::construct(base, decision);

      std::uint64_t expect = 1;
      for (int i = 0; i < nb; ++i) expect *= static_cast<std::uint64_t>(nd);
      auto eq2 = sol::enumerate_domain(u);
      c.expect(sol::domain_cardinality(u) == expect, "cardinality for " + std::to_string(nb) + "x" + std::to_string(nd));
      c.expect(eq2.size() == expect, "enumeration size for " + std::to_string(nb) + "x" + std::to_string(nd));

      // Subsets of Base x ext(D) that are total functions of the base tuple.
      std::vector<Tuple> prod;
      for (const auto& bt : base.tuples()) {
        for (int d = 1; d <= nd; ++d) prod.push_back({bt[0], I(d)});
      }
      std::vector<std::vector<Tuple>> eq1;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << prod.size()); ++mask) {
        std::vector<Tuple> subset;
        std::map<Value, int> per_base;
        for (std::size_t k = 0; k < prod.size(); ++k) {
          if (mask >> k & 1) {
            subset.push_back(prod[k]);
            ++per_base[prod[k][0]];
          }
        }
        bool total = per_base.size() == base.size();
        for (const auto& [b, n] : per_base) total = total && n == 1;
        if (total) {
          std::sort(subset.begin(), subset.end(), TupleLess{});
          eq1.push_back(subset);
        }
      }
      std::sort(eq1.begin(), eq1.end());
      c.expect(eq1 == canonical_set(eq2), "definitions disagree for " + std::to_string(nb) + "x" + std::to_string(nd));
      ++pairs;
    }
  }
  c.note(std::to_string(pairs) + " size pairs: |ext(D)|^|B| candidates, both definitions agree");
  return c.verdict();
}

Verdict lift_join() {
  Check c;
  auto l = load_program("latin_join.ra");
  auto a = sol::enumerate(l.get<SolutionSet>("EffectiveSearchSpace2"));
  auto b = sol::enumerate(l.get<SolutionSet>("EffectiveSearchSpace"));
  c.expect(a.size() == 2, std::to_string(a.size()) + " candidates from join_sol");
  c.expect(canonical_set(a) == canonical_set(b), "candidate sets differ");
  std::string out, err;
  int code = run_cli("latin_join.ra", out, err);
  c.expect(code == 0 && out.find("check EffectiveSearchSpace2 == EffectiveSearchSpace: true") != std::string::npos,
           "program check failed: " + err);
  c.note("both enumerate the same 2 candidates");
  return c.verdict();
}

Verdict phi_oracle() {
  Check c;
  std::vector<std::string> done;
  auto compare = [&](const std::string& label, const RankedQuery& q) {
    std::vector<Relation> direct;
    for (auto& rc : sol::solve_by_enumeration(q)) direct.push_back(rc.candidate);
    std::vector<Relation> viaphi = solq::test::phi_candidates(q);
    c.expect(!direct.empty(), label + ": no candidates");
    c.expect(canonical_set(viaphi) == canonical_set(direct),
             label + ": " + std::to_string(viaphi.size()) + " vs " + std::to_string(direct.size()) + " candidates");
    done.push_back(label + " " + std::to_string(direct.size()));
  };
  {
    auto l = load_program("latin.ra");
    compare("latin", sol::as_query(l.get<SolutionSet>("LatinSquare")));
    compare("latin-rows-cols", sol::as_query(l.get<SolutionSet>("EffectiveSearchSpace")));
  }
  {
    auto l = load_program("cakes.ra", {{"qty: 0..100", "qty: 0..5"}});
    compare("cakes-feasible", sol::as_query(l.get<SolutionSet>("MakableBatches")));
    compare("cakes-best", l.get<RankedQuery>("ProfitableBatch"));
  }
  {
    auto l = load_program("meal.ra");
    compare("meal", l.get<SolProjection>("LetsUsePlans").query);
  }
  std::string summary;
  for (const auto& d : done) summary += (summary.empty() ? "" : ", ") + d;
  c.note("brute force over flat equals enumeration: " + summary);
  return c.verdict();
}

Verdict corpus() {
  Check c;
  int n = 0;
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(SOLQ_PROGRAMS_DIR)) {
    if (e.path().extension() == ".ra") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string name = f.filename().string();
    try {
      fe::Program a = fe::parse_program(read_text(f.string()));
      std::string printed = fe::print(a);
      fe::Program b = fe::parse_program(printed);
      c.expect(fe::same(a, b), name + ": reparse differs");
      c.expect(fe::print(b) == printed, name + ": second print differs");
      fe::Catalog cat;
      fe::ElabOptions opts;
      opts.base_dir = SOLQ_PROGRAMS_DIR;
      fe::elaborate(b, cat, opts);
      ++n;
    } catch (const Error& e) {
      c.expect(false, name + ": " + e.what());
    }
  }
  c.expect(n >= 10, "only " + std::to_string(n) + " programs");
  c.note(std::to_string(n) + " programs parse, print, reparse and elaborate");
  return c.verdict();
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"Latin square end to end", latin_square},
      {"Cakes optimization", cakes},
      {"Meal planner", meal_planner},
      {"3-SAT complete relation", three_sat},
      {"Energy balance", energy},
      {"GST", gst},
      {"DNF safety properties", dnf_safety},
      {"Exponentiation law", exponentiation},
      {"Lift and join_sol", lift_join},
      {"Translation oracle", phi_oracle},
      {"Corpus round trip", corpus},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::cout << "criterion " << (i + 1) << " " << (v.pass ? "PASS" : "FAIL") << ": " << criteria[i].title
              << " (" << v.detail << ")" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
