#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <hazardfield/errors.hpp>
#include <hazardfield/expr.hpp>

#include "support.hpp"

namespace hazardfield {
namespace {

using testing::rel_err;

double at(const char* text, Point p) { return evaluate(parse(text), p); }

TEST(Parse, ExampleOneStructure) {
  const Expr e = parse(testing::kExample1);
  ASSERT_EQ(e.kind(), Expr::Kind::sub);
  EXPECT_TRUE(e.child(0).is_constant(1.0));
  const Expr quotient = e.child(1);
  ASSERT_EQ(quotient.kind(), Expr::Kind::div);
  EXPECT_TRUE(quotient.child(1).is_constant(100.0));
  const Expr product = quotient.child(0);
  ASSERT_EQ(product.kind(), Expr::Kind::mul);
  EXPECT_EQ(product.child(0).kind(), Expr::Kind::pow);
  EXPECT_TRUE(product.child(1).child(1).is_constant(0.05));
}

TEST(Parse, ExampleTwoStructure) {
  const Expr e = parse(testing::kExample2);
  ASSERT_EQ(e.kind(), Expr::Kind::mul);
  const Expr left = e.child(0);
  ASSERT_EQ(left.kind(), Expr::Kind::pow);
  EXPECT_TRUE(left.child(0).is_constant(5.0));
  EXPECT_EQ(left.child(1).kind(), Expr::Kind::sqrt);
  const Expr right = e.child(1);
  ASSERT_EQ(right.kind(), Expr::Kind::pow);
  EXPECT_EQ(right.child(1).kind(), Expr::Kind::pow);
  EXPECT_TRUE(e.depends_on(Axis::x));
  EXPECT_TRUE(e.depends_on(Axis::y));
  EXPECT_FALSE(e.depends_on(Axis::z));
}

TEST(Parse, IncompleteInputReportsOffset) {
  try {
    parse("x + ");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4U);
    EXPECT_EQ(e.expected(), "operand");
    EXPECT_EQ(e.found(), "end of input");
  }
}

TEST(Parse, RejectsBadInput) {
  EXPECT_THROW(parse("w + 1"), ParseError);
  EXPECT_THROW(parse("(x + 1"), ParseError);
  EXPECT_THROW(parse("x + 1)"), ParseError);
  EXPECT_THROW(parse("x y"), ParseError);
  EXPECT_THROW(parse("sin(x)"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("sqrt x"), ParseError);
}

TEST(Parse, OffsetStaysWithinInput) {
  for (const char* bad : {"x +", "(", "1e", "x ^ ^", "2 * (y"}) {
    try {
      parse(bad);
      ADD_FAILURE() << bad;
    } catch (const ParseError& e) {
      EXPECT_LE(e.offset(), std::string(bad).size() + 1) << bad;
    }
  }
}

TEST(Parse, Precedence) {
  const Point p{2, 3, 5};
  EXPECT_EQ(at("2^3^2", p), 512.0);
  EXPECT_EQ(at("-2^2", p), -4.0);
  EXPECT_EQ(at("2^-1", p), 0.5);
  EXPECT_EQ(at("1 - 2 - 3", p), -4.0);
  EXPECT_EQ(at("8 / 4 / 2", p), 1.0);
  EXPECT_EQ(at("1 + 2 * 3", p), 7.0);
  EXPECT_EQ(at("x * y + z", p), 11.0);
  EXPECT_EQ(at("  x*y  +z ", p), 11.0);
  EXPECT_EQ(at("1.5e1", p), 15.0);
  EXPECT_EQ(at("2.5E-1", p), 0.25);
}

TEST(Evaluate, ExampleOneAtTenOne) {
  EXPECT_NEAR(at(testing::kExample1, {10, 1, 0}), 0.96837722339831620668, 1e-16);
}

TEST(Evaluate, Constant) {
  EXPECT_EQ(at("3.5", {-7, 1e9, 0}), 3.5);
}

TEST(Evaluate, LogDomainErrorNamesSubexpressionAndPoint) {
  try {
    evaluate(parse("1 + log(x)"), {0, 0, 0});
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_EQ(e.subexpression(), "log(x)");
    EXPECT_EQ(e.point()[0], 0.0);
  }
}

TEST(Evaluate, DomainErrors) {
  EXPECT_THROW(at("sqrt(x)", {-1, 0, 0}), DomainError);
  EXPECT_THROW(at("sqrt(x)", {0, 0, 0}), DomainError);
  EXPECT_THROW(at("log(x - 1)", {0.5, 0, 0}), DomainError);
  EXPECT_THROW(at("1 / x", {0, 0, 0}), DomainError);
  EXPECT_THROW(at("x ^ 0.5", {-4, 0, 0}), DomainError);
  EXPECT_EQ(at("x ^ 3", {-2, 0, 0}), -8.0);
}

TEST(Evaluate, Deterministic) {
  const Expr e = parse(testing::kExample1);
  const double first = evaluate(e, {12.345, 2.5, 0});
  for (int i = 0; i < 10; ++i) EXPECT_EQ(evaluate(e, {12.345, 2.5, 0}), first);
}

TEST(Evaluate, WideRangeMatchesLogForm) {
  // 7^(x^3) at x = 10 is far beyond double.
  const Expr e = parse(testing::kExample2);
  const WideReal v = evaluate_wide(e, {10, 4, 0});
  const double expected_log = 2 * std::log(5.0) + 1000 * std::log(7.0);
  EXPECT_LT(rel_err(log_abs(v), expected_log), 1e-14);
  EXPECT_TRUE(std::isinf(evaluate(e, {10, 4, 0})));
}

TEST(Arity, MatchesKind) {
  const Expr e = parse("-sqrt(x) + exp(y) * log(z) / 2 ^ x - 1");
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    const Expr n = stack.back();
    stack.pop_back();
    switch (n.kind()) {
      case Expr::Kind::constant:
      case Expr::Kind::variable: EXPECT_EQ(n.arity(), 0U); break;
      case Expr::Kind::negate:
      case Expr::Kind::sqrt:
      case Expr::Kind::log:
      case Expr::Kind::exp: EXPECT_EQ(n.arity(), 1U); break;
      default: EXPECT_EQ(n.arity(), 2U);
    }
    for (std::size_t i = 0; i < n.arity(); ++i) stack.push_back(n.child(i));
  }
}

TEST(Print, RoundTripAtRandomPoints) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 4.0);
  for (const char* text : {testing::kExample1, "-x^-2 - (y - 3) * exp(-z) / sqrt(x + y)",
                           "log(x * y) - 2 ^ -z ^ 2", "-(-5) - -x"}) {
    const Expr e = parse(text);
    const Expr back = parse(to_string(e));
    for (int i = 0; i < 100; ++i) {
      const Point p{u(rng), u(rng), u(rng)};
      EXPECT_LE(rel_err(evaluate(back, p), evaluate(e, p)), 1e-15) << text;
    }
  }
  const Expr e2 = parse(testing::kExample2);
  const Expr back2 = parse(to_string(e2));
  for (int i = 0; i < 100; ++i) {
    const Point p{u(rng) * 20, u(rng), 0};
    EXPECT_EQ(evaluate_wide(back2, p), evaluate_wide(e2, p));
  }
}

TEST(Print, Truncates) {
  const std::string s = to_string(parse(testing::kExample1), 12);
  EXPECT_LE(s.size(), 12U);
  EXPECT_EQ(s.substr(s.size() - 3), "...");
}

TEST(Differentiate, ExampleTwoRatio) {
  const Expr e = parse(testing::kExample2);
  const Point p{10, 4, 0};
  const WideReal ratio = evaluate_wide(differentiate(e, Axis::x), p) / evaluate_wide(e, p);
  EXPECT_LT(rel_err(to_double(ratio), 300 * std::log(7.0)), 1e-14);
}

TEST(Differentiate, ConstantIsZero) {
  const Expr d = differentiate(parse("3.5 * 2"), Axis::y);
  EXPECT_EQ(evaluate(d, {1, 2, 3}), 0.0);
}

TEST(Differentiate, PowerRule) {
  EXPECT_EQ(evaluate(differentiate(parse("x^3"), Axis::x), {2, 0, 0}), 12.0);
}

TEST(Differentiate, PowerRuleAtZeroBase) {
  EXPECT_EQ(evaluate(differentiate(parse("x^2.5"), Axis::x), {0, 0, 0}), 0.0);
}

TEST(Differentiate, VariableExponent) {
  const Expr d = differentiate(parse("x^y"), Axis::x);
  const Expr dy = differentiate(parse("x^y"), Axis::y);
  const Point p{1.7, 2.3, 0};
  EXPECT_LT(rel_err(evaluate(d, p), 2.3 * std::pow(1.7, 1.3)), 1e-14);
  EXPECT_LT(rel_err(evaluate(dy, p), std::log(1.7) * std::pow(1.7, 2.3)), 1e-14);
}

TEST(Differentiate, Linearity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  const Expr e1 = parse("sqrt(x) * exp(-y) + log(x + y)");
  const Expr e2 = parse("x^y / (1 + y^2)");
  const double alpha = -2.75;
  for (Axis v : {Axis::x, Axis::y}) {
    const Expr combined = differentiate(Expr::constant(alpha) * e1 + e2, v);
    const Expr d1 = differentiate(e1, v), d2 = differentiate(e2, v);
    for (int i = 0; i < 100; ++i) {
      const Point p{u(rng), u(rng), 0};
      const double expected = alpha * evaluate(d1, p) + evaluate(d2, p);
      EXPECT_LE(std::abs(evaluate(combined, p) - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

// Central differences with h = 1e-5 * max(1, |coordinate|).
double central(const Expr& e, Point p, Axis a) {
  const double h = 1e-5 * std::max(1.0, std::abs(p[index(a)]));
  return (evaluate(e, shifted(p, a, h)) - evaluate(e, shifted(p, a, -h))) / (2 * h);
}

TEST(Differentiate, AgreesWithFiniteDifferencesExampleOne) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(10, 80), uy(1, 5);
  const Expr e = parse(testing::kExample1);
  for (Axis a : {Axis::x, Axis::y}) {
    const Expr d = differentiate(e, a);
    for (int i = 0; i < 100; ++i) {
      const Point p{ux(rng), uy(rng), 0};
      EXPECT_LE(rel_err(central(e, p, a), evaluate(d, p)), 1e-6);
    }
  }
}

TEST(Differentiate, AgreesWithFiniteDifferencesExampleTwoY) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ux(0.5, 3), uy(1, 5);
  const Expr e = parse(testing::kExample2);
  const Expr d = differentiate(e, Axis::y);
  for (int i = 0; i < 100; ++i) {
    const Point p{ux(rng), uy(rng), 0};
    EXPECT_LE(rel_err(central(e, p, Axis::y), evaluate(d, p)), 1e-6);
  }
}

// Along x the step 1e-5 * x moves Example 2 by a factor exp(3 x^2 ln 7 h),
// so finite differences only resolve it for small x.
TEST(Differentiate, AgreesWithFiniteDifferencesExampleTwoXSmallAge) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(0.5, 3), uy(1, 5);
  const Expr e = parse(testing::kExample2);
  const Expr d = differentiate(e, Axis::x);
  for (int i = 0; i < 100; ++i) {
    const Point p{ux(rng), uy(rng), 0};
    EXPECT_LE(rel_err(central(e, p, Axis::x), evaluate(d, p)), 1e-6);
  }
}

TEST(Differentiate, ExampleTwoXMatchesClosedFormOnFigureBox) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ux(10, 80), uy(1, 5);
  const Expr e = parse(testing::kExample2);
  const Expr d = differentiate(e, Axis::x);
  for (int i = 0; i < 100; ++i) {
    const Point p{ux(rng), uy(rng), 0};
    const WideReal ratio = evaluate_wide(d, p) / evaluate_wide(e, p);
    EXPECT_LE(rel_err(to_double(ratio), 3 * p[0] * p[0] * std::log(7.0)), 1e-13);
  }
}

TEST(NthPartial, ThirdOfCubeIsSix) {
  const Expr d = nth_partial(parse("x^3"), Axis::x, 3);
  EXPECT_TRUE(d.is_constant(6.0));
}

TEST(NthPartial, FifthOfCubeIsZero) {
  const Expr d = nth_partial(parse("x^3"), Axis::x, 5);
  for (double x : {-3.0, 0.0, 0.5, 10.0}) EXPECT_EQ(evaluate(d, {x, 0, 0}), 0.0);
}

TEST(NthPartial, SecondYOfExampleOne) {
  const Expr e = parse(testing::kExample1);
  const Expr d2 = nth_partial(e, Axis::y, 2);
  const Expr d1 = differentiate(e, Axis::y);
  const Point p{10, 2, 0};
  const double h = 1e-4;
  const double fd =
      (evaluate(d1, shifted(p, Axis::y, h)) - evaluate(d1, shifted(p, Axis::y, -h))) / (2 * h);
  EXPECT_LE(rel_err(fd, evaluate(d2, p)), 1e-6);
  EXPECT_LE(rel_err(evaluate(d2, p), 0.00038876317299606641848), 1e-13);
}

TEST(NthPartial, RejectsOrderBelowOne) {
  EXPECT_THROW(nth_partial(parse("x"), Axis::x, 0), std::invalid_argument);
}

TEST(NthPartial, HighOrderStaysSmall) {
  const Expr d = nth_partial(parse(testing::kExample1), Axis::x, 9);
  EXPECT_LT(d.node_count(), 400U);
  // d^9/dx^9 x^0.5 = (0.5)(-0.5)...(-7.5) x^-8.5
  double c = 1;
  for (int j = 0; j < 9; ++j) c *= 0.5 - j;
  const Point p{20, 3, 0};
  EXPECT_LE(rel_err(evaluate(d, p), -c * std::pow(20, -8.5) * std::pow(3, 0.05) / 100), 1e-12);
}

TEST(LogExpand, MatchesLogOfValue) {
  const Expr e = parse("x^2 * sqrt(y) / exp(x) * 3");
  const Expr le = log_expand(e);
  const Point p{1.3, 2.2, 0};
  EXPECT_LE(rel_err(evaluate(le, p), std::log(evaluate(e, p))), 1e-14);
}

}  // namespace
}  // namespace hazardfield
