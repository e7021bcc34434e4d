#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "lswe/expr.hpp"

using lswe::NodeKind;
using lswe::PotentialExpr;

namespace {

double eval(const std::string& src, int dim, std::vector<double> point) {
  return PotentialExpr::parse(src, dim).evaluate(point);
}

}  // namespace

TEST_CASE("basic arithmetic and precedence") {
  CHECK(eval("1+2*3", 1, {0.0}) == doctest::Approx(7.0));
  CHECK(eval("(1+2)*3", 1, {0.0}) == doctest::Approx(9.0));
  CHECK(eval("2+3*4^2", 1, {0.0}) == doctest::Approx(50.0));
  CHECK(eval("10-4-3", 1, {0.0}) == doctest::Approx(3.0));  // left-assoc
  CHECK(eval("12/4/3", 1, {0.0}) == doctest::Approx(1.0));
  CHECK(eval("2*-3", 1, {0.0}) == doctest::Approx(-6.0));
  CHECK(eval("-2-3", 1, {0.0}) == doctest::Approx(-5.0));
}

TEST_CASE("power is right-associative; unary minus binds tighter") {
  CHECK(eval("2^3^2", 1, {0.0}) == doctest::Approx(512.0));
  CHECK(eval("-q1^2", 1, {3.0}) == doctest::Approx(9.0));   // (-q1)^2
  CHECK(eval("0-q1^2", 1, {3.0}) == doctest::Approx(-9.0));  // binary minus unaffected
  CHECK(eval("2^-1", 1, {0.0}) == doctest::Approx(0.5));
}

TEST_CASE("variables and whitespace") {
  CHECK(eval("q1^2/2+q2^2", 2, {1.0, 1.0}) == doctest::Approx(1.5));
  CHECK(eval("  q1 \t+\n 2 * q2 ", 2, {1.0, 2.0}) == doctest::Approx(5.0));
  CHECK(eval("q10", 10, {0, 0, 0, 0, 0, 0, 0, 0, 0, 7.0}) == doctest::Approx(7.0));
}

TEST_CASE("functions") {
  CHECK(eval("sin(q1)", 1, {0.5}) == doctest::Approx(std::sin(0.5)));
  CHECK(eval("cos(q1)*exp(q1)", 1, {0.3}) == doctest::Approx(std::cos(0.3) * std::exp(0.3)));
  CHECK(eval("log(exp(q1))", 1, {1.7}) == doctest::Approx(1.7));
  CHECK(eval("sqrt(q1)", 1, {4.0}) == doctest::Approx(2.0));
  CHECK(eval("tanh(q1)", 1, {0.8}) == doctest::Approx(std::tanh(0.8)));
}

TEST_CASE("numeric literals") {
  CHECK(eval("2.5e2", 1, {0.0}) == doctest::Approx(250.0));
  CHECK(eval("1e-3", 1, {0.0}) == doctest::Approx(0.001));
  CHECK(eval(".5", 1, {0.0}) == doctest::Approx(0.5));
  CHECK(eval("3.", 1, {0.0}) == doctest::Approx(3.0));
}

TEST_CASE("parse errors carry an offset") {
  CHECK_THROWS_AS(PotentialExpr::parse("", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("q0", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("q3", 2), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("q", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("foo(q1)", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("pi", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("(q1", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("q1+", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("q1 q2", 2), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("1..2", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("2e", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("0x10", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("inf", 1), lswe::ParseError);
  CHECK_THROWS_AS(PotentialExpr::parse("sin q1", 1), lswe::ParseError);

  try {
    PotentialExpr::parse("q1+@", 1);
    FAIL("expected ParseError");
  } catch (const lswe::ParseError& e) {
    CHECK(e.offset() == 3);
  }
}

TEST_CASE("evaluation domain errors") {
  CHECK_THROWS_AS(eval("log(q1)", 1, {-1.0}), lswe::DomainError);
  CHECK_THROWS_AS(eval("log(q1)", 1, {0.0}), lswe::DomainError);
  CHECK_THROWS_AS(eval("sqrt(q1)", 1, {-2.0}), lswe::DomainError);
  CHECK_THROWS_AS(eval("1/q1", 1, {0.0}), lswe::DomainError);
  CHECK_THROWS_AS(eval("q1^0.5", 1, {-1.0}), lswe::DomainError);
  CHECK(eval("q1^3", 1, {-2.0}) == doctest::Approx(-8.0));  // integer powers of negatives are fine
  CHECK(eval("q1^-2", 1, {-2.0}) == doctest::Approx(0.25));
}

TEST_CASE("constant folding") {
  PotentialExpr folded = PotentialExpr::parse("1+2*3", 1);
  REQUIRE(folded.root() != nullptr);
  CHECK(folded.root()->kind == NodeKind::constant);
  CHECK(folded.root()->number == doctest::Approx(7.0));

  PotentialExpr raw = PotentialExpr::parse("1+2*3", 1, /*fold_constants=*/false);
  CHECK(raw.root()->kind == NodeKind::add);

  // A constant sub-tree whose evaluation is undefined must not be folded away;
  // the domain error still surfaces at evaluation time.
  PotentialExpr bad = PotentialExpr::parse("q1+log(-1)", 1);
  CHECK(bad.root()->kind == NodeKind::add);
  CHECK_THROWS_AS(bad.evaluate(std::vector<double>{1.0}), lswe::DomainError);

  // Folding never changes values.
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(0.1, 2.0);
  for (const char* src : {"(2+q1)^2*3-4/2", "sin(1+1)*q1", "q1^(1+1)", "-(2*3)+q1"}) {
    PotentialExpr a = PotentialExpr::parse(src, 1, true);
    PotentialExpr b = PotentialExpr::parse(src, 1, false);
    for (int k = 0; k < 10; ++k) {
      std::vector<double> p{dist(rng)};
      CHECK(a.evaluate(p) == doctest::Approx(b.evaluate(p)).epsilon(1e-14));
    }
  }
}

TEST_CASE("serialization round-trips structurally") {
  const char* sources[] = {
      "q1^2/2+q2^2",
      "sin(q1)*exp(q2)-tanh(q1*q2)",
      "-q1^3+0.25*q2-1e-3",
      "sqrt(q1+2)^-2",
      "q1/(q2+3)*log(q2+5)",
  };
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.2, 1.8);
  for (const char* src : sources) {
    PotentialExpr original = PotentialExpr::parse(src, 2);
    std::string text = original.serialize();
    PotentialExpr reparsed = PotentialExpr::parse(text, 2);
    REQUIRE(lswe::tree_equal(*original.root(), *reparsed.root()));
    for (int k = 0; k < 20; ++k) {
      std::vector<double> p{dist(rng), dist(rng)};
      CHECK(original.evaluate(p) == doctest::Approx(reparsed.evaluate(p)).epsilon(1e-15));
    }
  }
}

TEST_CASE("negative constants survive serialization") {
  PotentialExpr e = PotentialExpr::parse("-3*q1", 1);
  PotentialExpr back = PotentialExpr::parse(e.serialize(), 1);
  CHECK(back.evaluate(std::vector<double>{2.0}) == doctest::Approx(-6.0));
}

TEST_CASE("accessors") {
  PotentialExpr e = PotentialExpr::parse("q1+q2", 2);
  CHECK(e.dimension() == 2);
  CHECK(e.source() == "q1+q2");
  CHECK_THROWS_AS(e.evaluate(std::vector<double>{1.0}), lswe::ValidationError);
}
