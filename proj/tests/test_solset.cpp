#include <gtest/gtest.h>

#include "solq/error.hpp"
#include "solq/solset.hpp"
#include "support.hpp"

using namespace solq;
using solq::test::I;
using solq::test::load_program;
using solq::test::rel;

namespace {

Expr a(const char* n) { return Expr::attr(n); }

Relation base(std::int64_t n) {
  std::vector<Tuple> rows;
  for (std::int64_t i = 1; i <= n; ++i) rows.push_back({I(i)});
  return rel("B", {{"b", AttrDomain::integer()}}, rows);
}

CompleteRelation decision(std::int64_t hi) {
  return cdr::construct("D", Schema({{"d", AttrDomain::int_range(1, hi)}}));
}

// gamma[][fn(d) -> ret](candidate)
IExpr whole(AggFn fn, Expr arg) {
  return IExpr::group({}, {{Expr::agg_call(fn, {std::move(arg)}), "ret"}}, IExpr::candidate());
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

}  // namespace

TEST(SolSet, CandidateSchemaIsBaseThenDecision) {
  SolutionSet u = sol::construct(base(2), decision(3));
  EXPECT_EQ(u.candidate_schema().names(), (std::vector<std::string>{"b", "d"}));
}

TEST(SolSet, DomainCardinalityIsExponential) {
  EXPECT_EQ(sol::domain_cardinality(sol::construct(base(2), decision(3))), 9u);
  EXPECT_EQ(sol::domain_cardinality(sol::construct(base(3), decision(2))), 8u);
  EXPECT_EQ(sol::domain_cardinality(sol::construct(base(0), decision(2))), 1u);
  EXPECT_EQ(sol::enumerate_domain(sol::construct(base(3), decision(3))).size(), 27u);
}

TEST(SolSet, EnumerationOrderLastBaseTupleFastest) {
  auto cands = sol::enumerate_domain(sol::construct(base(2), decision(2)));
  ASSERT_EQ(cands.size(), 4u);
  EXPECT_EQ(cands[0].tuples(), (std::vector<Tuple>{{I(1), I(1)}, {I(2), I(1)}}));
  EXPECT_EQ(cands[1].tuples(), (std::vector<Tuple>{{I(1), I(1)}, {I(2), I(2)}}));
  EXPECT_EQ(cands[2].tuples(), (std::vector<Tuple>{{I(1), I(2)}, {I(2), I(1)}}));
}

TEST(SolSet, DefaultsAreNullaryAndEmptyBase) {
  SolutionSet u = sol::construct();
  EXPECT_EQ(u.base.size(), 1u);
  EXPECT_EQ(sol::enumerate_domain(u).size(), 1u);
}

TEST(SolSet, OverlappingSchemasRejected) {
  auto d = cdr::construct("D", Schema({{"b", AttrDomain::int_range(1, 2)}}));
  EXPECT_EQ(kind_of([&] { sol::construct(base(2), d); }), ErrorKind::Schema);
}

TEST(SolSet, SelectFiltersBySum) {
  SolutionSet u = sol::construct(base(3), decision(2));
  ChiExpr chi = ChiExpr::atom(IExpr::group(
      {}, {{Expr::binary(BinaryOp::Eq, Expr::agg_call(AggFn::Sum, {a("d")}), Expr::integer(4)), "ret"}},
      IExpr::candidate()));
  SolutionSet v = sol::select(chi, u);
  // d values over three rows summing to 4: one 2 and two 1s.
  EXPECT_EQ(sol::enumerate(v).size(), 3u);
}

TEST(SolSet, SelectOnDecisionAttributeIsRestricted) {
  SolutionSet u = sol::construct(base(2), decision(2));
  IExpr sel = IExpr::select(Expr::binary(BinaryOp::Eq, a("d"), Expr::integer(1)), IExpr::candidate());
  ChiExpr chi = ChiExpr::atom(IExpr::group({}, {{Expr::agg_call(AggFn::BoolAnd, {Expr::boolean(true)}), "ret"}}, sel));
  EXPECT_EQ(kind_of([&] { sol::select(chi, u); }), ErrorKind::Restriction);
}

TEST(SolSet, GroupByDecisionAttributeIsRestricted) {
  SolutionSet u = sol::construct(base(2), decision(2));
  IExpr g = IExpr::group({"d"}, {{Expr::agg_call(AggFn::Count, {a("b")}), "n"}}, IExpr::candidate());
  ChiExpr chi = ChiExpr::atom(IExpr::group({}, {{Expr::agg_call(AggFn::BoolAnd, {Expr::boolean(true)}), "ret"}}, g));
  EXPECT_EQ(kind_of([&] { sol::select(chi, u); }), ErrorKind::Restriction);
}

TEST(SolSet, NonBooleanConditionIsTypeError) {
  SolutionSet u = sol::construct(base(2), decision(2));
  EXPECT_EQ(kind_of([&] { sol::select(ChiExpr::atom(whole(AggFn::Sum, a("d"))), u); }), ErrorKind::Type);
}

TEST(SolSet, ShapeTracksDecisionDependence) {
  SolutionSet u = sol::construct(base(2), decision(2));
  auto shape = sol::shape(IExpr::candidate(), u);
  EXPECT_EQ(shape.of("b"), sol::AttrCategory::Constant);
  EXPECT_EQ(shape.of("d"), sol::AttrCategory::Decision);
}

TEST(SolSet, CompositeConditions) {
  SolutionSet u = sol::construct(base(2), decision(3));
  ChiExpr alldiff = ChiExpr::atom(whole(AggFn::AllDifferent, a("d")));
  auto n = [&](ChiExpr c) { return sol::enumerate(sol::select(c, u)).size(); };
  EXPECT_EQ(n(alldiff), 6u);
  EXPECT_EQ(n(ChiExpr::negate(alldiff)), 3u);
  EXPECT_EQ(n(ChiExpr::disj(alldiff, ChiExpr::negate(alldiff))), 9u);
  EXPECT_EQ(n(ChiExpr::conj(alldiff, ChiExpr::constant(false))), 0u);
}

TEST(SolSet, CandidatesSatisfyFunctionalDependency) {
  SolutionSet u = sol::construct(base(3), decision(2));
  for (const auto& c : sol::enumerate_domain(u)) {
    EXPECT_EQ(c.size(), 3u);
    EXPECT_EQ(adr::project({"b"}, c).size(), 3u);
  }
}

TEST(SolSet, RenameRewritesConditions) {
  SolutionSet u = sol::select(ChiExpr::atom(whole(AggFn::AllDifferent, a("d"))), sol::construct(base(2), decision(2)));
  SolutionSet r = sol::rename({{"d", "colour"}}, u);
  EXPECT_EQ(r.candidate_schema().names(), (std::vector<std::string>{"b", "colour"}));
  auto cands = sol::enumerate(r);
  ASSERT_EQ(cands.size(), 2u);
  EXPECT_EQ(cands[0].schema().names(), (std::vector<std::string>{"b", "colour"}));
}

TEST(SolSet, SetOperationsOnConditions) {
  SolutionSet u = sol::construct(base(2), decision(2));
  SolutionSet diff = sol::select(ChiExpr::atom(whole(AggFn::AllDifferent, a("d"))), u);
  SolutionSet sum3 = sol::select(
      ChiExpr::atom(IExpr::group(
          {}, {{Expr::binary(BinaryOp::Ge, Expr::agg_call(AggFn::Sum, {a("d")}), Expr::integer(3)), "ret"}},
          IExpr::candidate())),
      u);
  EXPECT_EQ(sol::enumerate(sol::set_op(sol::SetOp::Intersect, diff, sum3)).size(), 2u);
  EXPECT_EQ(sol::enumerate(sol::set_op(sol::SetOp::Union, diff, sum3)).size(), 3u);
  EXPECT_EQ(sol::enumerate(sol::set_op(sol::SetOp::Difference, sum3, diff)).size(), 1u);
}

TEST(SolSet, CrossMultipliesDomains) {
  SolutionSet u = sol::construct(base(2), decision(2));
  SolutionSet v = sol::construct(rel("C", {{"c", AttrDomain::integer()}}, {{I(7)}}),
                                 cdr::construct("E", Schema({{"e", AttrDomain::int_range(0, 2)}})));
  SolutionSet x = sol::cross(u, v);
  EXPECT_EQ(x.candidate_schema().names(), (std::vector<std::string>{"b", "c", "d", "e"}));
  // Two base tuples (b x c), each choosing one of 2 x 3 decision pairs.
  EXPECT_EQ(sol::domain_cardinality(x), 36u);
}

TEST(SolSet, OrderLimitAndEnumerationReference) {
  SolutionSet u = sol::construct(base(2), decision(3));
  Objective obj{adr::Direction::Desc, whole(AggFn::Sum, a("d"))};
  RankedQuery q = sol::order_limit(obj, 2, u);
  auto ranked = sol::solve_by_enumeration(q);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].objective->as_int(), 6);
  EXPECT_EQ(ranked[1].objective->as_int(), 5);
  EXPECT_EQ(sol::objective_name(q), "ret");
  EXPECT_EQ(kind_of([&] { sol::limit(1, q); }), ErrorKind::Restriction);
  EXPECT_EQ(kind_of([&] { sol::order_limit(std::nullopt, 0, u); }), ErrorKind::Restriction);
}

TEST(SolSet, BooleanObjectiveRejected) {
  SolutionSet u = sol::construct(base(2), decision(3));
  Objective obj{adr::Direction::Asc, whole(AggFn::AllDifferent, a("d"))};
  EXPECT_EQ(kind_of([&] { sol::order_limit(obj, 1, u); }), ErrorKind::Type);
}

TEST(SolSet, ProjectValidatesAttributes) {
  RankedQuery q = sol::as_query(sol::construct(base(2), decision(2)));
  EXPECT_EQ(kind_of([&] { sol::project(std::nullopt, {"nope"}, q); }), ErrorKind::Name);
  EXPECT_EQ(kind_of([&] { sol::project(std::string("b"), {"b"}, q); }), ErrorKind::Schema);
  SolProjection p = sol::project(std::string("i"), {"b", "d"}, q);
  EXPECT_EQ(p.rank_attr, "i");
}

TEST(SolSet, CapIsEnforced) {
  SolutionSet u = sol::construct(base(20), decision(3));
  EXPECT_EQ(kind_of([&] { sol::enumerate_domain(u, 1000); }), ErrorKind::Limit);
}

TEST(SolSet, LatinSquareEnumeratesToOneCandidate) {
  auto l = load_program("latin.ra");
  auto cands = sol::enumerate(l.get<SolutionSet>("LatinSquare"));
  ASSERT_EQ(cands.size(), 1u);
  EXPECT_EQ(cands[0].tuples(), (std::vector<Tuple>{{I(1), I(1), I(1)}, {I(1), I(2), I(2)},
                                                   {I(2), I(1), I(2)}, {I(2), I(2), I(1)}}));
  EXPECT_EQ(sol::enumerate(l.get<SolutionSet>("EffectiveSearchSpace")).size(), 2u);
  EXPECT_EQ(sol::domain_cardinality(l.get<SolutionSet>("SearchSpace")), 16u);
}

TEST(SolSet, JoinSolLiftsBothConditions) {
  auto l = load_program("latin_join.ra");
  const auto& joined = l.get<SolutionSet>("EffectiveSearchSpace2");
  EXPECT_EQ(joined.candidate_schema().names(), (std::vector<std::string>{"row", "col", "value"}));
  auto a = sol::enumerate(joined);
  auto b = sol::enumerate(l.get<SolutionSet>("EffectiveSearchSpace"));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_TRUE(same_extension(a[i], b[i]));
}

TEST(SolSet, DecisionExtension) {
  auto l = load_program("meal.ra");
  Relation ext = sol::decision_extension(l.get<SolutionSet>("P"));
  EXPECT_EQ(ext.tuples(), (std::vector<Tuple>{{I(1)}, {I(2)}, {I(4)}, {I(5)}, {I(6)}}));
}
