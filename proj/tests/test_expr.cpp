#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "e3top/expr.hpp"

using e3top::expr::DomainError;
using e3top::expr::Expr;
using e3top::expr::ParseError;

TEST_CASE("parse basics") {
    CHECK(Expr::parse("0").eval(5, 7) == 0);
    CHECK(Expr::parse("x^2 + a").eval(2, 3) == 11);
    CHECK(Expr::parse("-(x^2-1/4)^2").eval(1, 0.5) == 0);
    CHECK(Expr::parse("a*x").eval(2, 5) == 10);
    CHECK(Expr::parse("sqrt(a - x^2)").eval(1, 0.6) == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("precedence and associativity") {
    CHECK(Expr::parse("2+3*4").eval(0, 0) == 14);
    CHECK(Expr::parse("2*3^2").eval(0, 0) == 18);
    CHECK(Expr::parse("2^3^2").eval(0, 0) == 512);     // right-assoc
    CHECK(Expr::parse("-x^2").eval(0, 3) == -9);       // ^ binds tighter
    CHECK(Expr::parse("(-x)^2").eval(0, 3) == 9);
    CHECK(Expr::parse("10-4-3").eval(0, 0) == 3);      // left-assoc
    CHECK(Expr::parse("16/4/2").eval(0, 0) == 2);
    CHECK(Expr::parse("2^-1").eval(0, 0) == 0.5);      // unary in exponent
    CHECK(Expr::parse(" sin( x ) + cos(0) ").eval(0, 0) == 1);
}

TEST_CASE("parse errors carry offsets") {
    CHECK_THROWS_AS(Expr::parse("x +"), ParseError);
    CHECK_THROWS_AS(Expr::parse("(a"), ParseError);
    CHECK_THROWS_AS(Expr::parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(Expr::parse("y"), ParseError);
    try {
        Expr::parse("x + * 2");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 4);
    }
    try {
        Expr::parse("b + 1");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 0);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(Expr::parse("1/x").eval(1, 0), DomainError);
    CHECK_THROWS_AS(Expr::parse("sqrt(x)").eval(0, -1), DomainError);
    CHECK_THROWS_AS(Expr::parse("ln(x)").eval(0, 0), DomainError);
    CHECK_THROWS_AS(Expr::parse("x^0.5").eval(0, -2), DomainError);
}

TEST_CASE("symbolic differentiation") {
    CHECK(Expr::parse("x^2").diff_x().eval(0, 3) == 6);
    CHECK(Expr::parse("a").diff_x().eval(4, 3) == 0);
    CHECK(Expr::parse("-x").diff_x().diff_x().eval(0, 1) == 0);
    CHECK(Expr::parse("a*x^3").diff_x().eval(2, 2) == doctest::Approx(24));
    CHECK(Expr::parse("a*x^3").diff_a().eval(2, 2) == doctest::Approx(8));
    CHECK(Expr::parse("sin(x)").diff_x().eval(0, 0) == 1);
    CHECK(Expr::parse("exp(2*x)").diff_x().eval(0, 0) == 2);
    CHECK(Expr::parse("ln(x)").diff_x().eval(0, 2) == 0.5);
    CHECK(Expr::parse("abs(x)").diff_x().eval(0, -3) == -1);
    CHECK(Expr::parse("x^x").diff_x().eval(0, 1) == doctest::Approx(1));  // x^x(ln x + 1)
}

namespace {

// random polynomial-ish expression text over (a, x)
std::string random_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 6);
    std::uniform_real_distribution<double> coef(-3, 3);
    switch (pick(rng)) {
        case 0: return std::to_string(coef(rng));
        case 1: return "x";
        case 2: return "a";
        case 3: return "(" + random_expr(rng, depth - 1) + "+" + random_expr(rng, depth - 1) + ")";
        case 4: return "(" + random_expr(rng, depth - 1) + "*" + random_expr(rng, depth - 1) + ")";
        case 5: return "(" + random_expr(rng, depth - 1) + "-" + random_expr(rng, depth - 1) + ")";
        default: return "sin(" + random_expr(rng, depth - 1) + ")";
    }
}

}  // namespace

TEST_CASE("derivative matches finite differences on random trees") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> pt(-2, 2);
    int tested = 0;
    while (tested < 100) {
        const Expr e = Expr::parse(random_expr(rng, 3));
        const Expr dx = e.diff_x();
        const double a = pt(rng), x = pt(rng);
        const double h = 1e-5;
        double fd, exact, val;
        try {
            fd = (e.eval(a, x + h) - e.eval(a, x - h)) / (2 * h);
            exact = dx.eval(a, x);
            val = e.eval(a, x);
        } catch (const DomainError&) {
            continue;
        }
        CHECK(std::fabs(exact - fd) <= 1e-5 * (1 + std::fabs(val) + std::fabs(exact)));
        ++tested;
    }
}

TEST_CASE("render round-trips and evaluation is pure") {
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> pt(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const Expr e = Expr::parse(random_expr(rng, 3));
        const Expr r = Expr::parse(e.str());
        const double a = pt(rng), x = pt(rng);
        try {
            const double v1 = e.eval(a, x);
            CHECK(r.eval(a, x) == v1);   // round-trip identical
            CHECK(e.eval(a, x) == v1);   // purity: bit-identical repeat
        } catch (const DomainError&) {
        }
    }
}
