#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "compmap/errors.hpp"
#include "compmap/expr.hpp"
#include "oracles.hpp"

using namespace compmap;
using namespace compmap::expr;

TEST(Parse, DivisionBySum) {
  const Expr e = parse("x/(a+y)");
  ASSERT_EQ(e.kind(), Kind::binary);
  EXPECT_EQ(e.node().op, BinaryOp::div);
  EXPECT_EQ(e.node().children[0].kind(), Kind::variable);
  const Expr& den = e.node().children[1];
  ASSERT_EQ(den.kind(), Kind::binary);
  EXPECT_EQ(den.node().op, BinaryOp::add);
  EXPECT_EQ(den.node().children[0].kind(), Kind::parameter);
}

TEST(Parse, UnaryMinusBindsLooserThanPower) {
  const Expr e = parse("-x^2");
  ASSERT_EQ(e.kind(), Kind::negate);
  const Expr& inner = e.node().children[0];
  ASSERT_EQ(inner.kind(), Kind::binary);
  EXPECT_EQ(inner.node().op, BinaryOp::pow);
  EXPECT_DOUBLE_EQ(eval(e, 3.0, 0.0), -9.0);
}

TEST(Parse, ErrorOffsetAndExpectedTokens) {
  try {
    parse("x*(");
    FAIL() << "expected a parse error";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.offset(), 3u);
    EXPECT_FALSE(err.expected().empty());
  }
  EXPECT_THROW(parse("2x"), ParseError);
  EXPECT_THROW(parse("x^y"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("(x"), ParseError);
}

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(eval(parse("x/(a+y)"), 1, 1, {{"a", 2.0}}), 1.0 / 3.0);
  EXPECT_EQ(eval(parse("x+y"), 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(eval(parse("y/(1+x)"), 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(eval(parse("2^-1"), 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(eval(parse("1e-1*x"), 10, 0), 1.0);
}

TEST(Eval, SingularAndUnbound) {
  EXPECT_THROW(eval(parse("1/x"), 0, 1), SingularityError);
  EXPECT_THROW(eval(parse("1/(x-1)"), 1 + 1e-13, 0), SingularityError);
  try {
    eval(parse("b*x"), 1, 1);
    FAIL();
  } catch (const UnboundParameterError& e) {
    EXPECT_EQ(e.name(), "b");
  }
}

TEST(Differentiate, Examples) {
  const Expr dxy = differentiate(parse("x*y"), Var::x);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const double x = oracle::uniform(rng, -2, 2), y = oracle::uniform(rng, -2, 2);
    EXPECT_DOUBLE_EQ(eval(dxy, x, y), y);
  }
  const Expr q = differentiate(parse("x/(a+y)"), Var::y);
  for (int i = 0; i < 20; ++i) {
    const double x = oracle::uniform(rng, 0, 2), y = oracle::uniform(rng, 0, 2), a = 2.0;
    EXPECT_NEAR(eval(q, x, y, {{"a", a}}), -x / ((a + y) * (a + y)), 1e-14);
  }
  const Expr c = differentiate(parse("c"), Var::x);
  EXPECT_EQ(c.kind(), Kind::constant);
  EXPECT_EQ(eval(c, 1, 1), 0.0);
}

TEST(Expressions, RandomDerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 100; ++i) {
    const oracle::RandomExpr r = oracle::random_expr(rng, 5);
    const Expr e = parse(r.text);
    const double x = oracle::uniform(rng, 0.2, 1.5), y = oracle::uniform(rng, 0.2, 1.5), a = 1.3;
    const Params p{{"a", a}};
    ASSERT_NEAR(eval(e, x, y, p), r.eval(x, y, a), 1e-12 * std::max(1.0, std::abs(r.eval(x, y, a)))) << r.text;
    const double gx = eval(differentiate(e, Var::x), x, y, p);
    const double gy = eval(differentiate(e, Var::y), x, y, p);
    const double fx = oracle::derivative([&](double t) { return r.eval(t, y, a); }, x);
    const double fy = oracle::derivative([&](double t) { return r.eval(x, t, a); }, y);
    EXPECT_NEAR(gx, fx, 1e-5 * std::max(1.0, std::abs(fx))) << r.text;
    EXPECT_NEAR(gy, fy, 1e-5 * std::max(1.0, std::abs(fy))) << r.text;
  }
}

TEST(Expressions, PrettyPrintIsIdempotent) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 200; ++i) {
    const oracle::RandomExpr r = oracle::random_expr(rng, 5);
    const std::string once = to_string(parse(r.text));
    const Expr again = parse(once);
    EXPECT_EQ(to_string(again), once);
    EXPECT_TRUE(structurally_equal(again, parse(once)));
  }
  EXPECT_EQ(to_string(parse("-x^2")), to_string(parse("-(x^2)")));
  EXPECT_EQ(to_string(parse("(x-y)-(x-y)")), to_string(parse(to_string(parse("(x-y)-(x-y)")))));
}

TEST(Expressions, FoldingPreservesValues) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const oracle::RandomExpr r = oracle::random_expr(rng, 5);
    const Expr e = parse(r.text);
    const Expr f = fold(e);
    const Expr b = bind(e, {{"a", 0.7}});
    const Compiled c(b);
    for (int k = 0; k < 5; ++k) {
      const double x = oracle::uniform(rng, -2, 2), y = oracle::uniform(rng, -2, 2);
      const double v = eval(e, x, y, {{"a", 0.7}});
      EXPECT_NEAR(eval(f, x, y, {{"a", 0.7}}), v, 1e-12 * std::max(1.0, std::abs(v))) << r.text;
      EXPECT_NEAR(eval(b, x, y), v, 1e-12 * std::max(1.0, std::abs(v))) << r.text;
      EXPECT_NEAR(c(x, y), v, 1e-12 * std::max(1.0, std::abs(v))) << r.text;
    }
  }
}

TEST(Expressions, FoldKeepsSingularSubtrees) {
  // 0*(1/x) must still raise at x = 0.
  const Expr e = fold(parse("0*(1/x)"));
  EXPECT_THROW(eval(e, 0, 1), SingularityError);
  EXPECT_EQ(eval(e, 2, 1), 0.0);
}

TEST(Expressions, ParameterSet) {
  const auto names = parameters(parse("b1*x/(1+x+c1*y) + h1"));
  EXPECT_EQ(names, (std::set<std::string>{"b1", "c1", "h1"}));
  EXPECT_THROW(Compiled(parse("a*x")), UnboundParameterError);
}
