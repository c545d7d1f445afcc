#include <gtest/gtest.h>

#include "solq/cdr.hpp"
#include "solq/dnf.hpp"
#include "solq/error.hpp"
#include "support.hpp"

using namespace solq;
using solq::test::B;
using solq::test::F;
using solq::test::I;
using solq::test::rel;

namespace {

Expr a(const char* n) { return Expr::attr(n); }
Expr bin(BinaryOp op, Expr l, Expr r) { return Expr::binary(op, std::move(l), std::move(r)); }
Expr eq(Expr l, Expr r) { return bin(BinaryOp::Eq, std::move(l), std::move(r)); }

Schema floats(std::initializer_list<const char*> names) {
  std::vector<Attribute> as;
  for (auto* n : names) as.push_back({n, AttrDomain::floating()});
  return Schema(as);
}

CompleteRelation gst() {
  return cdr::construct("GST", floats({"price", "gst", "exgst"}),
                        eq(a("gst"), bin(BinaryOp::Div, a("price"), Expr::integer(11))) &&
                            eq(a("exgst"), bin(BinaryOp::Sub, a("price"), a("gst"))));
}

CompleteRelation gst2() {
  auto pg = cdr::construct("PriceGST", floats({"price", "gst"}),
                           eq(bin(BinaryOp::Div, a("price"), Expr::integer(11)), a("gst")));
  auto pe = cdr::construct("PriceExGST", floats({"price", "gst", "exgst"}),
                           eq(a("exgst"), bin(BinaryOp::Sub, a("price"), a("gst"))));
  return cdr::combine(cdr::Combine::Join, pg, pe);
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

TEST(Cdr, ThreeSatProjectEval) {
  Schema s({{"x1", AttrDomain::boolean()}, {"x2", AttrDomain::boolean()}, {"x3", AttrDomain::boolean()}});
  Expr chi = (a("x1") || a("x2") || a("x3")) && (!a("x1") || a("x2") || !a("x3")) &&
             (a("x1") || !a("x2") || a("x3"));
  Relation r = cdr::project_eval({"x1", "x2", "x3"}, cdr::construct("ThreeSAT", s, chi));
  EXPECT_EQ(r.size(), 5u);
  EXPECT_FALSE(r.contains({B(false), B(false), B(false)}));
  EXPECT_FALSE(r.contains({B(true), B(false), B(true)}));
  EXPECT_FALSE(r.contains({B(false), B(true), B(false)}));
}

TEST(Cdr, JoinAdrCompletesFunctionalDependents) {
  Relation prices = rel("Prices", {{"price", AttrDomain::floating()}}, {{F(110)}, {F(55)}});
  Relation j = cdr::join_adr(prices, gst());
  EXPECT_EQ(j.schema().names(), (std::vector<std::string>{"price", "gst", "exgst"}));
  EXPECT_EQ(j.tuples(), (std::vector<Tuple>{{F(55), F(5), F(50)}, {F(110), F(10), F(100)}}));
}

TEST(Cdr, UnpinnedInfiniteAttributeIsUnbounded) {
  EXPECT_EQ(kind_of([] { cdr::project_eval({"price"}, gst()); }), ErrorKind::Unbounded);
}

TEST(Cdr, SolveCdrWithFixedValue) {
  std::vector<std::optional<Value>> fixed{F(22), std::nullopt, std::nullopt};
  auto rows = solve_cdr(gst().schema(), gst().chi(), fixed);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0], (Tuple{F(22), F(2), F(20)}));
}

TEST(Cdr, SolveCdrSplitsDisjunctions) {
  Schema s({{"a", AttrDomain::integer()}});
  Expr chi = eq(a("a"), Expr::integer(3)) || eq(bin(BinaryOp::Mul, Expr::integer(2), a("a")), Expr::integer(8));
  auto rows = solve_cdr(s, chi, {std::nullopt});
  EXPECT_EQ(rows, (std::vector<Tuple>{{I(3)}, {I(4)}}));
}

TEST(Cdr, IsolateInvertsArithmetic) {
  // 2 * (x + 3) = 14  ->  x = 4
  Expr side = bin(BinaryOp::Mul, Expr::integer(2), bin(BinaryOp::Add, a("x"), Expr::integer(3)));
  auto sol = isolate(side, "x", Expr::integer(14));
  ASSERT_TRUE(sol.has_value());
  EXPECT_DOUBLE_EQ(eval_scalar(*sol, EmptyBindings()).as_float(), 4.0);
  EXPECT_FALSE(isolate(bin(BinaryOp::Mul, a("x"), a("x")), "x", Expr::integer(4)).has_value());
}

TEST(Cdr, GstEquivalence) {
  cdr::ProbeDomains probes{{"price", {I(0), I(55), I(110), I(1000)}}};
  EXPECT_TRUE(cdr::equivalent(gst(), gst2(), probes));
  auto wrong = cdr::construct("Wrong", floats({"price", "gst", "exgst"}),
                              eq(a("gst"), bin(BinaryOp::Div, a("price"), Expr::integer(10))) &&
                                  eq(a("exgst"), bin(BinaryOp::Sub, a("price"), a("gst"))));
  EXPECT_FALSE(cdr::equivalent(gst(), wrong, probes));
}

TEST(Cdr, EquivalenceOverFiniteDomains) {
  Schema s({{"a", AttrDomain::int_range(0, 5)}, {"b", AttrDomain::int_range(0, 5)}});
  auto c = cdr::construct("C", s, bin(BinaryOp::Lt, a("a"), a("b")));
  auto d = cdr::construct("D", s, bin(BinaryOp::Gt, a("b"), a("a")));
  auto e = cdr::construct("E", s, bin(BinaryOp::Le, a("a"), a("b")));
  EXPECT_TRUE(cdr::equivalent(c, d, {}));
  EXPECT_FALSE(cdr::equivalent(c, e, {}));
}

TEST(Cdr, FromAdrIsAdrDnf) {
  Schema s({{"a", AttrDomain::int_range(0, 5)}, {"b", AttrDomain::int_range(0, 5)}});
  Relation r = adr::construct("R", s, {{I(1), I(2)}, {I(3), I(4)}});
  CompleteRelation c = cdr::from_adr(r);
  EXPECT_TRUE(is_adr_dnf(c.chi(), c.schema()));
  EXPECT_EQ(cdr::project_eval({"a", "b"}, c), r);
  EXPECT_TRUE(cdr::equivalent(c, cdr::construct("S", s,
                                                (eq(a("a"), Expr::integer(1)) && eq(a("b"), Expr::integer(2))) ||
                                                    (eq(a("a"), Expr::integer(3)) && eq(a("b"), Expr::integer(4)))),
                              {}));
}

TEST(Cdr, DecisionFromAdrNarrowsDomains) {
  Relation r = rel("NonGluten", {{"recipe", AttrDomain::integer()}}, {{I(1)}, {I(2)}, {I(4)}, {I(6)}});
  CompleteRelation d = cdr::decision_from_adr(r);
  ASSERT_TRUE(d.schema()[0].domain.is_finite());
  EXPECT_EQ(d.schema()[0].domain.cardinality(), 4u);
  EXPECT_EQ(cdr::project_eval({"recipe"}, d).tuples(), r.tuples());
}

TEST(Cdr, SelectConjoins) {
  Schema s({{"v", AttrDomain::int_range(1, 6)}});
  auto c = cdr::select(bin(BinaryOp::Gt, a("v"), Expr::integer(4)), cdr::construct("V", s));
  EXPECT_EQ(cdr::project_eval({"v"}, c).tuples(), (std::vector<Tuple>{{I(5)}, {I(6)}}));
  EXPECT_EQ(kind_of([&] { cdr::select(a("w"), c); }), ErrorKind::Name);
}

TEST(Cdr, CombineSetOperators) {
  Schema s({{"v", AttrDomain::int_range(1, 6)}});
  auto lo = cdr::construct("Lo", s, bin(BinaryOp::Le, a("v"), Expr::integer(3)));
  auto even = cdr::construct("Even", s, eq(a("v"), Expr::integer(2)) || eq(a("v"), Expr::integer(4)) ||
                                            eq(a("v"), Expr::integer(6)));
  auto tuples = [](const CompleteRelation& c) { return cdr::project_eval({"v"}, c).tuples(); };
  EXPECT_EQ(tuples(cdr::combine(cdr::Combine::Intersect, lo, even)), (std::vector<Tuple>{{I(2)}}));
  EXPECT_EQ(tuples(cdr::combine(cdr::Combine::Union, lo, even)).size(), 5u);
  EXPECT_EQ(tuples(cdr::combine(cdr::Combine::Difference, lo, even)), (std::vector<Tuple>{{I(1)}, {I(3)}}));
}

TEST(Cdr, CrossNeedsDisjointSchemas) {
  Schema s({{"v", AttrDomain::int_range(1, 2)}});
  Schema t({{"w", AttrDomain::int_range(1, 3)}});
  auto c = cdr::construct("C", s), d = cdr::construct("D", t);
  EXPECT_EQ(cdr::project_eval({"v", "w"}, cdr::combine(cdr::Combine::Cross, c, d)).size(), 6u);
  EXPECT_EQ(kind_of([&] { cdr::combine(cdr::Combine::Cross, c, c); }), ErrorKind::Schema);
}

TEST(Cdr, ProjectEvalOrderAndLimit) {
  Schema s({{"v", AttrDomain::int_range(1, 6)}});
  cdr::ProjectOptions opts;
  opts.order = {{a("v"), adr::Direction::Desc}};
  opts.limit = 2;
  Relation r = cdr::project_eval({"v"}, cdr::construct("V", s), opts);
  EXPECT_EQ(r.tuples(), (std::vector<Tuple>{{I(5)}, {I(6)}}));
}

TEST(Cdr, CapIsEnforced) {
  Schema s({{"a", AttrDomain::int_range(0, 999)}, {"b", AttrDomain::int_range(0, 999)}});
  cdr::ProjectOptions opts;
  opts.cap = 1000;
  EXPECT_EQ(kind_of([&] { cdr::project_eval({"a"}, cdr::construct("C", s), opts); }), ErrorKind::Limit);
}
