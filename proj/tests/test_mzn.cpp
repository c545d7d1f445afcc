#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <regex>
#include <set>

#include "solq/error.hpp"
#include "solq/mzn.hpp"
#include "support.hpp"

using namespace solq;
using solq::test::I;
using solq::test::load_program;
using solq::test::read_text;

namespace {

std::string tests_dir() { return SOLQ_TESTS_DIR; }

// Statements with whitespace removed and trailing fractional zeros dropped.
std::multiset<std::string> statements(const std::string& text) {
  static const std::regex ws("\\s+");
  static const std::regex zeros("(\\d\\.\\d*?)0+(?=\\D|$)");
  std::multiset<std::string> out;
  std::string flat = std::regex_replace(text, ws, "");
  std::size_t start = 0;
  while (start < flat.size()) {
    std::size_t end = flat.find(';', start);
    if (end == std::string::npos) end = flat.size();
    std::string st = flat.substr(start, end - start);
    if (!st.empty()) out.insert(std::regex_replace(st, zeros, "$1"));
    start = end + 1;
  }
  return out;
}

mzn::MznModel model_of(const std::string& program, const std::string& name) {
  auto l = load_program(program);
  const solq::frontend::Object* o = l.catalog.find(name);
  const RankedQuery* q = nullptr;
  if (auto* p = std::get_if<SolProjection>(o)) q = &p->query;
  if (!q) throw std::runtime_error(name + " is not a projection");
  return mzn::emit(phi::translate(*q));
}

FlatForm flat_of(const std::string& program, const std::string& name) {
  auto l = load_program(program);
  return phi::translate(l.get<SolProjection>(name).query);
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Solver;
}

struct ScopedEnv {
  std::string name;
  ScopedEnv(std::string n, const std::string& v) : name(std::move(n)) { setenv(name.c_str(), v.c_str(), 1); }
  ~ScopedEnv() { unsetenv(name.c_str()); }
};

std::string temp_file(const std::string& stem, const std::string& contents) {
  auto p = std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(::getpid()));
  std::ofstream(p) << contents;
  return p.string();
}

}  // namespace

TEST(MznEmit, EnergyMatchesReferenceExactly) {
  EXPECT_EQ(model_of("energy.ra", "LetsUseE").source, read_text(tests_dir() + "/oracles/energy.mzn"));
}

TEST(MznEmit, LatinMatchesReferenceStatements) {
  EXPECT_EQ(statements(model_of("latin.ra", "solutionAsRelation").source),
            statements(read_text(tests_dir() + "/oracles/latin.mzn")));
}

TEST(MznEmit, CakesMatchesReferenceStatements) {
  EXPECT_EQ(statements(model_of("cakes.ra", "LetsMakeBatch").source),
            statements(read_text(tests_dir() + "/oracles/cakes.mzn")));
}

TEST(MznEmit, MealMatchesReferenceStatements) {
  EXPECT_EQ(statements(model_of("meal.ra", "LetsUsePlans").source),
            statements(read_text(tests_dir() + "/oracles/meal.mzn")));
}

TEST(MznEmit, GoldenFiles) {
  EXPECT_EQ(model_of("latin.ra", "solutionAsRelation").source, read_text(tests_dir() + "/golden/latin.mzn"));
  EXPECT_EQ(model_of("cakes.ra", "LetsMakeBatch").source, read_text(tests_dir() + "/golden/cakes.mzn"));
  EXPECT_EQ(model_of("meal.ra", "LetsUsePlans").source, read_text(tests_dir() + "/golden/meal.mzn"));
}

TEST(MznEmit, VariableNames) {
  auto m = model_of("latin.ra", "solutionAsRelation");
  EXPECT_EQ(m.var_names.at("value3"), "value3");
  EXPECT_EQ(m.flat_schema.size(), 4u);
}

TEST(MznEmit, TextDomainsRejected) {
  auto l = solq::test::load_source(
      "D := omega[c: ENUM(red, green)](True)\n"
      "B := omega[k: INT]{(1), (2)}\n"
      "U := omega_sol(B, D)\n"
      "P := project_sol[][k, c](select_sol[gamma[][AllDifferent(c)](U)](U))\n");
  FlatForm ff = phi::translate(l.get<SolProjection>("P").query);
  EXPECT_EQ(kind_of([&] { mzn::emit(ff); }), ErrorKind::Domain);
}

TEST(MznMangle, Identifiers) {
  EXPECT_EQ(mzn::mangle("value1"), "value1");
  EXPECT_EQ(mzn::mangle("kCal"), "kCal");
  EXPECT_EQ(mzn::mangle("net-cost"), "net_cost");
  EXPECT_EQ(mzn::mangle("1st"), "v_1st");
  EXPECT_EQ(mzn::mangle("_x"), "v__x");
  EXPECT_EQ(mzn::mangle("var"), "var_v");
  EXPECT_EQ(mzn::mangle("constraint"), "constraint_v");
  EXPECT_EQ(mzn::mangle("sum"), "sum_v");
}

TEST(MznResult, LatinCandidate) {
  auto m = model_of("latin.ra", "solutionAsRelation");
  EvalOutcome out = mzn::parse_solver_result(
      R"({"candidates": [{"value1": 1, "value2": 2, "value3": 2, "value4": 1}], "status": "SATISFIED"})", m);
  EXPECT_EQ(out.status, Status::Satisfied);
  ASSERT_EQ(out.candidates.size(), 1u);
  EXPECT_EQ(out.candidates[0].at("value2"), I(2));
  FlatForm ff = flat_of("latin.ra", "solutionAsRelation");
  Relation r = reinstantiate(out, ff, {"row", "col", "value"}, std::nullopt);
  EXPECT_EQ(r.tuples(), (std::vector<Tuple>{{I(1), I(1), I(1)}, {I(1), I(2), I(2)},
                                            {I(2), I(1), I(2)}, {I(2), I(2), I(1)}}));
}

TEST(MznResult, Unsatisfiable) {
  auto m = model_of("latin.ra", "solutionAsRelation");
  EvalOutcome out = mzn::parse_solver_result(R"({"candidates": [], "status": "UNSATISFIABLE"})", m);
  EXPECT_EQ(out.status, Status::Unsatisfiable);
  EXPECT_TRUE(out.candidates.empty());
}

TEST(MznResult, ObjectiveAndPrivateKeys) {
  auto m = model_of("cakes.ra", "LetsMakeBatch");
  EvalOutcome out = mzn::parse_solver_result(
      R"({"candidates": [{"qty1": 2, "qty2": 2, "_objective": 1700, "_checker": ""}], "status": "OPTIMAL"})", m);
  EXPECT_EQ(out.status, Status::Optimal);
  ASSERT_EQ(out.objective_values.size(), 1u);
  EXPECT_EQ(out.objective_values[0], I(1700));
}

TEST(MznResult, MealTwelveCandidates) {
  auto m = model_of("meal.ra", "LetsUsePlans");
  std::string doc = R"({"status": "SATISFIED", "candidates": [)";
  std::vector<std::array<int, 3>> perms;
  for (auto base : {std::array<int, 3>{1, 2, 6}, std::array<int, 3>{2, 4, 6}}) {
    std::sort(base.begin(), base.end());
    do perms.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
  }
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (i) doc += ",";
    doc += "{\"recipe1\":" + std::to_string(perms[i][0]) + ",\"recipe2\":" + std::to_string(perms[i][1]) +
           ",\"recipe3\":" + std::to_string(perms[i][2]) + "}";
  }
  doc += "]}";
  EvalOutcome out = mzn::parse_solver_result(doc, m);
  EXPECT_EQ(out.candidates.size(), 12u);
}

TEST(MznResult, Malformed) {
  auto m = model_of("latin.ra", "solutionAsRelation");
  EXPECT_EQ(kind_of([&] { mzn::parse_solver_result("not json", m); }), ErrorKind::Solver);
  EXPECT_EQ(kind_of([&] { mzn::parse_solver_result(R"({"candidates": []})", m); }), ErrorKind::Solver);
  EXPECT_EQ(kind_of([&] { mzn::parse_solver_result(R"({"candidates": [], "status": "MAYBE"})", m); }),
            ErrorKind::Solver);
  EXPECT_EQ(kind_of([&] {
              mzn::parse_solver_result(R"({"candidates": [{"value9": 1}], "status": "SATISFIED"})", m);
            }),
            ErrorKind::Solver);
  EXPECT_EQ(kind_of([&] {
              mzn::parse_solver_result(R"({"candidates": [{"value1": 1, "value2": 2, "value3": 2, "value4": 1}],
                                          "status": "UNSATISFIABLE"})",
                                       m);
            }),
            ErrorKind::Solver);
}

TEST(MznSolver, FakeSolverPlumbing) {
  std::string result = temp_file("solq-fake-out",
                                 R"({"candidates": [{"value1": 1, "value2": 2, "value3": 2, "value4": 1}], "status": "SATISFIED"})");
  std::string args = temp_file("solq-fake-args", "");
  ScopedEnv e1("FAKE_SOLVER_OUTPUT", result), e2("FAKE_SOLVER_ARGS", args);
  FlatForm ff = flat_of("latin.ra", "solutionAsRelation");
  mzn::SolverBackend backend(tests_dir() + "/fake_solver.py");
  EvalOutcome out = backend.solve(ff);
  EXPECT_EQ(out.status, Status::Satisfied);
  EXPECT_EQ(out.candidates.size(), 1u);
  std::string seen = read_text(args);
  EXPECT_EQ(seen.rfind("--all\n", 0), 0u);
  EXPECT_NE(seen.find("all_different([value1, value2])"), std::string::npos);
  std::filesystem::remove(result);
  std::filesystem::remove(args);
}

TEST(MznSolver, FailingSolverIsSolverError) {
  ScopedEnv e("FAKE_SOLVER_EXIT", "3");
  FlatForm ff = flat_of("latin.ra", "solutionAsRelation");
  mzn::SolverBackend backend(tests_dir() + "/fake_solver.py");
  EXPECT_EQ(kind_of([&] { backend.solve(ff); }), ErrorKind::Solver);
  mzn::SolverBackend missing("/nonexistent/solver");
  EXPECT_EQ(kind_of([&] { missing.solve(ff); }), ErrorKind::Solver);
}

TEST(MznSolver, MiniZincRoundTrip) {
  if (std::system("command -v minizinc > /dev/null 2>&1") != 0) GTEST_SKIP() << "minizinc not installed";
  FlatForm ff = flat_of("cakes.ra", "LetsMakeBatch");
  mzn::SolverBackend backend(std::string(SOLQ_TOOLS_DIR) + "/minizinc_json.py");
  EvalOutcome out = backend.solve(ff);
  EXPECT_EQ(out.status, Status::Optimal);
  ASSERT_EQ(out.candidates.size(), 1u);
  EXPECT_EQ(out.candidates[0].at("qty1"), I(2));
  EXPECT_EQ(out.candidates[0].at("qty2"), I(2));
}
