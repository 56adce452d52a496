#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ltvstab/expr.hpp"
#include "testutil.hpp"

using namespace ltvstab;

namespace {

double rel_err(Complex got, Complex want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace

TEST_CASE("parse basic shapes") {
  Expr e = parse_expr("t^2 + 1");
  CHECK(e.kind() == ExprKind::Add);
  CHECK(e.left().kind() == ExprKind::Pow);
  CHECK(e.left().left().kind() == ExprKind::Var);
  CHECK(e.left().exponent() == doctest::Approx(2.0));
  CHECK(e.right().kind() == ExprKind::Const);
  CHECK(e.right().const_value() == Complex(1.0, 0.0));

  Expr s = parse_expr("sin(t)");
  CHECK(s.kind() == ExprKind::Sin);
  CHECK(s.left().kind() == ExprKind::Var);
}

TEST_CASE("syntax error carries the byte offset") {
  try {
    parse_expr("t +");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset == 3);
    CHECK(!e.expected.empty());
  }
}

TEST_CASE("unknown identifier is a dedicated error") {
  CHECK_THROWS_AS(parse_expr("tan(t)"), UnknownIdentifierError);
  CHECK_THROWS_AS(parse_expr("2*x"), UnknownIdentifierError);
}

TEST_CASE("precedence: caret binds tighter than unary minus") {
  Expr e = parse_expr("-t^2");
  CHECK(e.kind() == ExprKind::Neg);
  CHECK(e.left().kind() == ExprKind::Pow);
  CHECK(eval(e, 3.0).real() == doctest::Approx(-9.0));

  CHECK(eval(parse_expr("(-t)^2"), 3.0).real() == doctest::Approx(9.0));
  CHECK(eval(parse_expr("t^-1"), 4.0).real() == doctest::Approx(0.25));
  CHECK(eval(parse_expr("2*t^2"), 3.0).real() == doctest::Approx(18.0));
  CHECK(eval(parse_expr("2 - 3 - 4"), 0.0).real() == doctest::Approx(-5.0));
  CHECK(eval(parse_expr("12 / 2 / 3"), 0.0).real() == doctest::Approx(2.0));
}

TEST_CASE("imaginary literals") {
  CHECK(eval(parse_expr("i"), 0.0) == Complex(0.0, 1.0));
  CHECK(eval(parse_expr("i*i"), 0.0).real() == doctest::Approx(-1.0));
  CHECK(eval(parse_expr("2 + 3*i"), 0.0) == Complex(2.0, 3.0));
  CHECK(eval(parse_expr("exp(i*t)"), std::acos(-1.0)).real() ==
        doctest::Approx(-1.0));
}

TEST_CASE("non-constant exponents are rewritten through exp/ln") {
  Expr e = parse_expr("2^t");
  CHECK(e.kind() == ExprKind::Exp);
  CHECK(eval(e, 10.0).real() == doctest::Approx(1024.0));
}

TEST_CASE("eval faults") {
  CHECK(eval(parse_expr("2 + sin(t)"), 0.0).real() == doctest::Approx(2.0));
  CHECK(eval(parse_expr("exp(t)"), 1.0).real() ==
        doctest::Approx(2.718281828).epsilon(1e-9));

  try {
    eval(parse_expr("1/t"), 0.0);
    FAIL("expected an evaluation fault");
  } catch (const EvalError& e) {
    CHECK(e.subtree.find("1/t") != std::string::npos);
  }
  CHECK_THROWS_AS(eval(parse_expr("ln(t)"), 0.0), EvalError);
  CHECK_THROWS_AS(eval(parse_expr("t^-2"), 0.0), EvalError);
  CHECK_THROWS_AS(eval(parse_expr("exp(1/(1-t))"), 1.0), EvalError);
  // overflow propagates as a fault, not as inf
  CHECK_THROWS_AS(eval(parse_expr("exp(exp(t))"), 10.0), EvalError);
}

TEST_CASE("differentiate simple rules") {
  Expr d1 = simplify(differentiate(parse_expr("t^2")));
  CHECK(eval(d1, 5.0).real() == doctest::Approx(10.0));
  CHECK(to_string(d1) == "2*t");

  Expr d2 = simplify(differentiate(parse_expr("sin(t)")));
  CHECK(to_string(d2) == "cos(t)");

  Expr b = parse_expr("2 + sin(t)");
  Expr db = simplify(differentiate(b));
  CHECK(to_string(db) == "cos(t)");
  Expr ddb = simplify(differentiate(db));
  CHECK(to_string(ddb) == "-sin(t)");
}

TEST_CASE("second derivative of 2+sin t against finite differences") {
  std::mt19937 rng(7);
  Expr b = parse_expr("2 + sin(t)");
  Expr db = differentiate(b);
  Expr ddb = differentiate(db);
  std::uniform_real_distribution<double> tp(0.0, 10.0);
  for (int k = 0; k < 50; ++k) {
    double t = tp(rng);
    Complex fd = testutil::central_fd(db, t);
    CHECK(rel_err(eval(ddb, t), fd) < 1e-6);
  }
}

TEST_CASE("simplify identities") {
  CHECK(to_string(simplify(Expr::add(Expr::constant(0.0), Expr::var()))) ==
        "t");
  CHECK(to_string(simplify(
            Expr::mul(Expr::constant(1.0), Expr::sin(Expr::var())))) ==
        "sin(t)");
  Expr d = simplify(differentiate(parse_expr("t^3")));
  CHECK(to_string(d) == "3*t^2");
}

TEST_CASE("simplify preserves evaluation at regular points") {
  std::mt19937 rng(123);
  std::uniform_real_distribution<double> tp(0.0, 10.0);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    Expr e = testutil::random_expr(rng, 5);
    Expr s = simplify(e);
    for (int j = 0; j < 5; ++j) {
      double t = tp(rng);
      Complex ve, vs;
      try {
        ve = eval(e, t);
      } catch (const EvalError&) {
        continue;  // not a regular point of e
      }
      vs = eval(s, t);
      CHECK(std::abs(ve - vs) <= 1e-12 * (1.0 + std::abs(ve)));
      ++checked;
    }
  }
  CHECK(checked > 500);
}

TEST_CASE("derivative matches central finite differences on random trees") {
  std::mt19937 rng(2024);
  int tested = 0;
  while (tested < 200) {
    Expr e = testutil::random_expr(rng, 6);
    auto t = testutil::usable_probe(e, rng);
    if (!t) continue;
    Expr de = differentiate(e);
    Complex sym;
    try {
      sym = eval(de, *t);
    } catch (const EvalError&) {
      continue;  // derivative pole exactly at the probe
    }
    if (std::abs(sym) > 1e5) continue;
    Complex fd = testutil::central_fd(e, *t);
    CHECK(std::abs(sym - fd) <= 1e-5 * (1.0 + std::abs(sym)));
    ++tested;
  }
}

TEST_CASE("printing round-trips") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> tp(0.0, 10.0);
  for (int k = 0; k < 300; ++k) {
    Expr e = testutil::random_expr(rng, 5);
    std::string s1 = to_string(e);
    Expr back = parse_expr(s1);
    std::string s2 = to_string(back);
    CHECK(s2 == to_string(parse_expr(s2)));  // idempotent after one round trip
    for (int j = 0; j < 20; ++j) {
      double t = tp(rng);
      Complex a, b;
      bool fault_a = false, fault_b = false;
      try {
        a = eval(e, t);
      } catch (const EvalError&) {
        fault_a = true;
      }
      try {
        b = eval(back, t);
      } catch (const EvalError&) {
        fault_b = true;
      }
      REQUIRE(fault_a == fault_b);
      if (!fault_a) CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
  }
}

TEST_CASE("complex constants print and reparse") {
  Expr e = Expr::constant(Complex(1.5, -2.0));
  Expr back = parse_expr(to_string(e));
  CHECK(eval(back, 0.0) == Complex(1.5, -2.0));

  Expr neg = Expr::constant(-3.25);
  CHECK(to_string(neg) == "-3.25");
  CHECK(eval(parse_expr(to_string(neg)), 0.0) == Complex(-3.25, 0.0));
}

TEST_CASE("is_constant") {
  Complex v;
  CHECK(is_constant(parse_expr("2*(3+i)"), &v));
  CHECK(v == Complex(6.0, 2.0));
  CHECK(!is_constant(parse_expr("2*t"), &v));
  CHECK(!is_constant(parse_expr("1/0"), &v));  // cannot be folded
}
