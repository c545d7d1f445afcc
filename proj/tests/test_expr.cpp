#include <gtest/gtest.h>

#include "solq/dnf.hpp"
#include "solq/error.hpp"
#include "solq/expr.hpp"
#include "support.hpp"

using namespace solq;
using solq::test::B;
using solq::test::F;
using solq::test::I;
using solq::test::S;

namespace {

Expr a(const char* n) { return Expr::attr(n); }
Expr bin(BinaryOp op, Expr l, Expr r) { return Expr::binary(op, std::move(l), std::move(r)); }

Value eval(const Expr& e, std::map<std::string, Value, std::less<>> m = {}) {
  return eval_scalar(e, MapBindings(std::move(m)));
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

TEST(Value, NumericKindsCompareAcross) {
  EXPECT_EQ(I(3), F(3.0));
  EXPECT_LT(I(2), F(2.5));
  EXPECT_LT(B(true), I(-100));
  EXPECT_LT(I(1000), S("a"));
  EXPECT_EQ(I(3).hash(), F(3.0).hash());
}

TEST(Value, DisplayForms) {
  EXPECT_EQ(F(110).to_string(), "110.0");
  EXPECT_EQ(F(0.1).to_string(), "0.1");
  EXPECT_EQ(F(-2.5).to_string(), "-2.5");
  EXPECT_EQ(S("it's").to_literal(), "'it''s'");
  EXPECT_EQ(B(true).to_string(), "True");
}

TEST(Expr, IntegerArithmeticStaysExact) {
  Expr e = bin(BinaryOp::Add, bin(BinaryOp::Mul, a("q"), a("p")), Expr::integer(1));
  Value v = eval(e, {{"q", I(2)}, {"p", I(450)}});
  EXPECT_EQ(v.kind(), ValueKind::Int);
  EXPECT_EQ(v.as_int(), 901);
}

TEST(Expr, DivisionYieldsFloat) {
  Value v = eval(bin(BinaryOp::Div, Expr::integer(110), Expr::integer(11)));
  EXPECT_EQ(v.kind(), ValueKind::Float);
  EXPECT_DOUBLE_EQ(v.as_float(), 10.0);
  EXPECT_EQ(kind_of([] { eval(bin(BinaryOp::Div, Expr::integer(1), Expr::integer(0))); }),
            ErrorKind::Evaluation);
}

TEST(Expr, PowerAndOverflow) {
  EXPECT_EQ(eval(bin(BinaryOp::Pow, Expr::integer(3), Expr::integer(4))).as_int(), 81);
  EXPECT_EQ(kind_of([] { eval(bin(BinaryOp::Pow, Expr::integer(10), Expr::integer(40))); }),
            ErrorKind::Evaluation);
}

TEST(Expr, BetweenIsInclusive) {
  Expr e = Expr::between(a("x"), Expr::floating(2.0), Expr::floating(2.5));
  EXPECT_TRUE(eval(e, {{"x", F(2.0)}}).as_bool());
  EXPECT_TRUE(eval(e, {{"x", F(2.5)}}).as_bool());
  EXPECT_FALSE(eval(e, {{"x", F(2.5000001)}}).as_bool());
}

TEST(Expr, ShortCircuitSkipsUnboundRight) {
  Expr e = Expr::boolean(false) && bin(BinaryOp::Eq, a("missing"), Expr::integer(1));
  EXPECT_FALSE(eval(e).as_bool());
  EXPECT_EQ(kind_of([] { eval(a("missing")); }), ErrorKind::Name);
}

TEST(Expr, TypeErrors) {
  EXPECT_EQ(kind_of([] { eval(bin(BinaryOp::Add, Expr::constant(S("a")), Expr::integer(1))); }),
            ErrorKind::Type);
  EXPECT_EQ(kind_of([] { eval(bin(BinaryOp::And, Expr::integer(1), Expr::boolean(true))); }),
            ErrorKind::Type);
  EXPECT_EQ(kind_of([] { eval(bin(BinaryOp::Lt, Expr::constant(S("a")), Expr::integer(1))); }),
            ErrorKind::Type);
}

TEST(Expr, FloatEqualityToleranceIsOptIn) {
  Value x = F(0.1 + 0.2), y = F(0.3);
  EXPECT_FALSE(apply_binary(BinaryOp::Eq, x, y).as_bool());
  EvalOptions loose;
  loose.float_eq_tolerance = 1e-9;
  EXPECT_TRUE(apply_binary(BinaryOp::Eq, x, y, loose).as_bool());
}

TEST(Aggregate, Names) {
  EXPECT_EQ(agg_fn_from_name("Bool_And"), AggFn::BoolAnd);
  EXPECT_EQ(agg_fn_from_name("AllDifferent"), AggFn::AllDifferent);
  EXPECT_EQ(agg_fn_from_name("hasSubset"), AggFn::HasSubset);
  EXPECT_EQ(agg_fn_from_name("sum"), AggFn::Sum);
  EXPECT_FALSE(agg_fn_from_name("median").has_value());
}

TEST(Aggregate, Semantics) {
  std::vector<Tuple> vals{{I(1)}, {I(2)}, {I(2)}};
  EXPECT_FALSE(apply_aggregate(AggFn::AllDifferent, vals).as_bool());
  EXPECT_TRUE(apply_aggregate(AggFn::AllDifferent, {{I(1)}, {I(2)}}).as_bool());
  EXPECT_EQ(apply_aggregate(AggFn::Sum, vals).as_int(), 5);
  EXPECT_EQ(apply_aggregate(AggFn::Sum, {}).as_int(), 0);
  EXPECT_EQ(apply_aggregate(AggFn::Count, vals).as_int(), 3);
  EXPECT_EQ(apply_aggregate(AggFn::Min, vals).as_int(), 1);
  EXPECT_EQ(apply_aggregate(AggFn::Max, vals).as_int(), 2);
  EXPECT_TRUE(apply_aggregate(AggFn::BoolAnd, {}).as_bool());
  EXPECT_FALSE(apply_aggregate(AggFn::BoolOr, {}).as_bool());
  EXPECT_EQ(kind_of([] { apply_aggregate(AggFn::Min, {}); }), ErrorKind::Evaluation);
  EXPECT_EQ(kind_of([] { apply_aggregate(AggFn::BoolAnd, {{I(1)}}); }), ErrorKind::Type);
}

TEST(Aggregate, HasSubset) {
  Table req{"Req", {"row", "col", "value"}, {{I(1), I(1), I(1)}}};
  std::vector<Tuple> with{{I(1), I(1), I(1)}, {I(1), I(2), I(2)}};
  std::vector<Tuple> without{{I(1), I(1), I(2)}, {I(1), I(2), I(1)}};
  EXPECT_TRUE(apply_aggregate(AggFn::HasSubset, with, &req).as_bool());
  EXPECT_FALSE(apply_aggregate(AggFn::HasSubset, without, &req).as_bool());
}

TEST(Expr, CollectEvaluatesRows) {
  Expr e = Expr::collect(AggFn::AllDifferent, {{a("x")}, {a("y")}});
  EXPECT_TRUE(eval(e, {{"x", I(1)}, {"y", I(2)}}).as_bool());
  EXPECT_FALSE(eval(e, {{"x", I(2)}, {"y", I(2)}}).as_bool());
  Expr s = Expr::collect(AggFn::Sum, {{a("x")}, {a("y")}, {Expr::integer(5)}});
  EXPECT_EQ(eval(s, {{"x", I(1)}, {"y", I(2)}}).as_int(), 8);
}

TEST(Expr, LookupFindsDependent) {
  auto t = std::make_shared<LookupTable>("Recipes", std::vector<std::string>{"recipe"},
                                         std::vector<std::string>{"kCal", "gluten"},
                                         std::vector<Tuple>{{I(1)}, {I(2)}},
                                         std::vector<Tuple>{{F(0.5), B(false)}, {F(0.9), B(true)}});
  Expr k = Expr::lookup(t, 0, {a("r")});
  EXPECT_DOUBLE_EQ(eval(k, {{"r", I(2)}}).as_float(), 0.9);
  EXPECT_EQ(t->dependent_index("gluten"), 1u);
  EXPECT_EQ(kind_of([&] { eval(k, {{"r", I(7)}}); }), ErrorKind::DataDependency);
}

TEST(Expr, FoldSimplifiesConstants) {
  Expr e = bin(BinaryOp::Add, Expr::integer(2), Expr::integer(3));
  EXPECT_EQ(fold(e), Expr::integer(5));
  EXPECT_EQ(fold(Expr::boolean(true) && a("p")), a("p"));
  EXPECT_TRUE(fold(Expr::boolean(false) && a("p")).is_false());
  EXPECT_TRUE(fold(Expr::boolean(true) || a("p")).is_true());
  EXPECT_EQ(fold(bin(BinaryOp::Mul, a("x"), Expr::integer(3))),
            bin(BinaryOp::Mul, Expr::integer(3), a("x")));
}

TEST(Expr, ConjunctsAndDisjuncts) {
  Expr e = (a("p") && Expr::boolean(true)) && a("q");
  auto cs = conjuncts(e);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0], a("p"));
  EXPECT_EQ(cs[1], a("q"));
  EXPECT_EQ(disjuncts(a("p") || (a("q") || a("r"))).size(), 3u);
  EXPECT_TRUE(conjoin({}).is_true());
  EXPECT_TRUE(disjoin({}).is_false());
  EXPECT_EQ(sum_of({}), Expr::integer(0));
}

TEST(Expr, RenameAndAttrsOf) {
  Expr e = bin(BinaryOp::Eq, a("gst"), bin(BinaryOp::Div, a("price"), Expr::integer(11)));
  EXPECT_EQ(attrs_of(e), (std::set<std::string>{"gst", "price"}));
  Expr r = rename_attrs(e, {{"price", "p"}});
  EXPECT_EQ(attrs_of(r), (std::set<std::string>{"gst", "p"}));
  Expr s = symrefs_to_attrs(Expr::sym("value1"));
  EXPECT_EQ(s, a("value1"));
  EXPECT_EQ(symrefs_of(bin(BinaryOp::Add, Expr::sym("x0"), a("y"))), std::set<std::string>{"x0"});
}

TEST(Expr, ToStringIsReadable) {
  Expr e = bin(BinaryOp::Le, bin(BinaryOp::Mul, a("qty"), a("amount")), a("avail"));
  EXPECT_EQ(e.to_string(), "qty * amount <= avail");
  EXPECT_EQ(Expr::sym("value1").to_string(), "<value1>");
}

TEST(Dnf, NormalizesEqualities) {
  Schema s({{"a", AttrDomain::int_range(0, 3)}, {"b", AttrDomain::int_range(0, 3)}});
  Expr eq_a1 = bin(BinaryOp::Eq, a("a"), Expr::integer(1));
  Expr eq_b2 = bin(BinaryOp::Eq, a("b"), Expr::integer(2));
  Expr eq_a3 = bin(BinaryOp::Eq, a("a"), Expr::integer(3));
  Dnf d = dnf_terms((eq_a1 || eq_a3) && eq_b2, s);
  EXPECT_EQ(d.disjuncts.size(), 2u);
  EXPECT_TRUE(is_adr_dnf(to_dnf((eq_a1 || eq_a3) && eq_b2, s), s));
  EXPECT_FALSE(is_adr_dnf(eq_a1, s));
  EXPECT_TRUE(is_adr_dnf(Expr::boolean(false), s));
  // a = 1 AND a = 3 is contradictory and disappears.
  EXPECT_TRUE(dnf_terms(eq_a1 && eq_a3, s).disjuncts.empty());
}

TEST(Dnf, RejectsArithmetic) {
  Schema s({{"a", AttrDomain::integer()}});
  Expr e = bin(BinaryOp::Lt, a("a"), Expr::integer(3));
  EXPECT_EQ(kind_of([&] { dnf_terms(e, s); }), ErrorKind::Type);
}

TEST(Dnf, NegationPushesToLiterals) {
  Schema s({{"x", AttrDomain::boolean()}, {"y", AttrDomain::boolean()}});
  Dnf d = dnf_terms(!(a("x") || a("y")), s);
  ASSERT_EQ(d.disjuncts.size(), 1u);
  EXPECT_EQ(d.disjuncts[0].size(), 2u);
  for (const auto& lit : d.disjuncts[0]) EXPECT_EQ(lit.value, B(false));
}
