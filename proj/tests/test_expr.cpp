#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "atlas/errors.hpp"
#include "atlas/expr.hpp"

using atlas::Expr;

TEST_CASE("literals and variables") {
    CHECK(Expr::parse("2").eval(0, 0) == 2.0);
    CHECK(Expr::parse("x").eval(3.5, -1) == 3.5);
    CHECK(Expr::parse("y").eval(3.5, -1) == -1.0);
    CHECK(Expr::parse("pi").eval(0, 0) == doctest::Approx(3.14159265358979).epsilon(1e-14));
    CHECK(Expr::parse("1.5e-3").eval(0, 0) == 1.5e-3);
}

TEST_CASE("arithmetic and precedence") {
    CHECK(Expr::parse("1+2*3").eval(0, 0) == 7.0);
    CHECK(Expr::parse("(1+2)*3").eval(0, 0) == 9.0);
    CHECK(Expr::parse("2^3^2").eval(0, 0) == 512.0);  // right-assoc
    CHECK(Expr::parse("-2^2").eval(0, 0) == -4.0);    // unary binds looser than ^
    CHECK(Expr::parse("7/2/2").eval(0, 0) == 1.75);   // left-assoc
    CHECK(Expr::parse("1 - 2 - 3").eval(0, 0) == -4.0);
}

TEST_CASE("functions") {
    CHECK(Expr::parse("sin(pi/2)").eval(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(Expr::parse("cos(0)").eval(0, 0) == 1.0);
    CHECK(Expr::parse("exp(log(5))").eval(0, 0) == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(Expr::parse("sqrt(2)^2").eval(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(Expr::parse("abs(-3)").eval(0, 0) == 3.0);
    CHECK(Expr::parse("atan(1)*4").eval(0, 0) ==
          doctest::Approx(3.14159265358979).epsilon(1e-14));
    CHECK(Expr::parse("sinh(1)").eval(0, 0) == doctest::Approx(std::sinh(1.0)));
}

TEST_CASE("parameters") {
    Expr e = Expr::parse("x + k*sin(2*pi*y)");
    CHECK(e.eval(1.0, 0.25, {{"k", 2.0}}) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.eval(1.0, 0.25, {{"k", 0.0}}) == doctest::Approx(1.0));
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(Expr::parse("1 +"), atlas::ParseError);
    CHECK_THROWS_AS(Expr::parse("(1"), atlas::ParseError);
    CHECK_THROWS_AS(Expr::parse("bogus(1)"), atlas::ParseError);
    CHECK_THROWS_AS(Expr::parse(""), atlas::ParseError);
    CHECK_THROWS_AS(Expr::parse("1 2"), atlas::ParseError);
}

TEST_CASE("unknown parameter at eval") {
    Expr e = Expr::parse("q*x");
    CHECK_THROWS_AS(e.eval(1, 1), atlas::ParseError);
}
