#include "doctest.h"
#include "varlab/expr.hpp"

#include <cmath>
#include <random>

using namespace varlab;

TEST_CASE("arithmetic and precedence") {
  CHECK(parse("x^2-y^2").eval2(1, 2) == doctest::Approx(-3.0));
  CHECK(parse("2^3^2").eval(Vec{}) == doctest::Approx(512.0));  // right assoc
  CHECK(parse("-x^2").eval(Vec{2.0}) == doctest::Approx(-4.0));
  CHECK(parse("(-x)^2").eval(Vec{2.0}) == doctest::Approx(4.0));
  CHECK(parse("2*3+4").eval(Vec{}) == doctest::Approx(10.0));
  CHECK(parse("2+3*4").eval(Vec{}) == doctest::Approx(14.0));
  CHECK(parse("2^-1").eval(Vec{}) == doctest::Approx(0.5));
  CHECK(parse("atan2(y,x)").eval2(0, 1) == doctest::Approx(M_PI / 2));
  CHECK(parse("min(x, max(y, 0.5))").eval2(2, -1) == doctest::Approx(0.5));
  CHECK(parse("pi").eval(Vec{}) == doctest::Approx(M_PI));
}

TEST_CASE("parse errors carry offsets") {
  CHECK_THROWS_AS(parse("x+*y"), ParseError);
  try {
    parse("x+*y");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse("sin(x,y)"), ParseError);   // arity
  CHECK_THROWS_AS(parse("foo(x)"), ParseError);     // unknown identifier
  CHECK_THROWS_AS(parse("(x"), ParseError);         // unbalanced
  CHECK_THROWS_AS(parse("x y"), ParseError);        // trailing input
}

TEST_CASE("domain faults are explicit") {
  CHECK_THROWS_AS(parse("1/0").eval(Vec{}), Error);
  CHECK_THROWS_AS(parse("log(0-1)").eval(Vec{}), Error);
  CHECK_THROWS_AS(parse("sqrt(0-1)").eval(Vec{}), Error);
  CHECK_THROWS_AS(parse("sqrt(x-2)").eval(Vec{1.0}), Error);
  // fractional power of a negative base
  CHECK_THROWS_AS(parse("(0-2)^0.5").eval(Vec{}), Error);
  // integer exponent on a negative base is fine
  CHECK(parse("(0-2)^3").eval(Vec{}) == doctest::Approx(-8.0));
}

TEST_CASE("print-parse idempotence") {
  std::vector<std::string> sources = {
      "x^2-y^2",          "atan2(y,x)+0.2*x", "-x^2",
      "sin(x)*cos(y)/2",  "2^3^2",            "min(x,y)+max(x,-y)",
      "sqrt(abs(x))+pi",  "1/(1+x^2)",
  };
  for (const auto& src : sources) {
    Expression a = parse(src);
    Expression b = parse(a.to_string());
    CHECK(a.identical(b));
    CHECK(b.to_string() == a.to_string());
  }
}

TEST_CASE("eval agrees with hand values on random points") {
  Expression e = parse("sin(x)*y + exp(x/4) - abs(y)^3");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    double x = u(rng), y = u(rng);
    double want = std::sin(x) * y + std::exp(x / 4) -
                  std::pow(std::abs(y), 3.0);
    CHECK(e.eval2(x, y) == doctest::Approx(want).epsilon(1e-12));
  }
}
