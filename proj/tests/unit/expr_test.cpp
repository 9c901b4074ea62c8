#include <doctest.h>

#include <cmath>
#include <numbers>

#include "curvcheck/catalog.hpp"
#include "curvcheck/expr.hpp"
#include "generators.hpp"

using namespace curvcheck;
using curvcheck::testing::at;

namespace {

double eval(std::string_view text, const Bindings& b = {}) { return evaluate(parse(text), b); }

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_SUITE("exprcore") {

TEST_CASE("parse and evaluate") {
  CHECK(eval("r^(3/2)", {{"r", 4}}) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(eval("16*r^(3/2)*(1+sin(t)+cos(t)^2)/(1+sin(t))^8", at(0, 1)) ==
        doctest::Approx(32.0).epsilon(1e-15));
  CHECK(eval("ln(r)*r", {{"r", 1}}) == 0.0);
  CHECK(eval("3") == 3.0);
  CHECK(std::abs(eval("(1+sin(t))", {{"t", -kPi / 2}})) < 1e-16);
  CHECK(eval("3*(1+sin(t))^12/(4*r^3)", at(kPi / 2, 1)) == doctest::Approx(3072.0).epsilon(1e-14));
  CHECK(eval("  2 +\t3 ") == 5.0);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval("-r^2", {{"r", 3}}) == -9.0);
  CHECK(eval("2^3^2") == 512.0);
  CHECK(eval("8/4/2") == 1.0);
  CHECK(eval("2-3-4") == -5.0);
  CHECK(eval("-2*3") == -6.0);
  CHECK(eval("2^-1") == 0.5);
  CHECK(eval("1e-3*2") == doctest::Approx(2e-3));
}

TEST_CASE("lex, syntax and arity errors") {
  auto kind_of = [](std::string_view text) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error for " << text);
    return ParseError::Kind::lex;
  };
  CHECK(kind_of("r $ 2") == ParseError::Kind::lex);
  CHECK(kind_of("(r+1") == ParseError::Kind::syntax);
  CHECK(kind_of("r+") == ParseError::Kind::syntax);
  CHECK(kind_of("") == ParseError::Kind::syntax);
  CHECK(kind_of("sin") == ParseError::Kind::syntax);
  CHECK(kind_of("foo(r)") == ParseError::Kind::syntax);
  CHECK(kind_of("sin(t, r)") == ParseError::Kind::arity);
  CHECK(kind_of("cos()") == ParseError::Kind::arity);

  try {
    parse("1 + * 2");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("evaluation errors are typed") {
  auto kind_of = [](std::string_view text, const Bindings& b) {
    try {
      eval(text, b);
    } catch (const EvalError& e) {
      return e.kind();
    }
    FAIL("no error for " << text);
    return EvalError::Kind::domain;
  };
  CHECK(kind_of("r + s", {{"r", 1}}) == EvalError::Kind::unbound_symbol);
  CHECK(kind_of("ln(r)", {{"r", 0}}) == EvalError::Kind::domain);
  CHECK(kind_of("ln(r)", {{"r", -1}}) == EvalError::Kind::domain);
  CHECK(kind_of("1/r", {{"r", 0}}) == EvalError::Kind::domain);
  CHECK(kind_of("r^-1", {{"r", 0}}) == EvalError::Kind::domain);
  CHECK(kind_of("r^(1/2)", {{"r", -4}}) == EvalError::Kind::domain);
  CHECK(kind_of("sqrt(r)", {{"r", -4}}) == EvalError::Kind::domain);
  CHECK(eval("r^3", {{"r", -2}}) == -8.0);
}

TEST_CASE("diff examples") {
  CHECK(evaluate(diff(parse("sin(t)"), "t"), at(0, 1)) == 1.0);
  const Expr v = parse("c*r");
  const Expr vrr = diff(v, "r", 2);
  CHECK(vrr.is_constant(0.0));
  CHECK(evaluate(vrr, Bindings{{"c", 3.5}, {"r", 2.0}}) == 0.0);

  SolutionParams p = theorem2_params();
  CHECK(evaluate(H_of(p), at(0, 1)) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("abs differentiates to a sign and is undefined at zero") {
  const Expr d = diff(parse("abs(r)"), "r");
  CHECK(evaluate(d, Bindings{{"r", 2.0}}) == 1.0);
  CHECK(evaluate(d, Bindings{{"r", -2.0}}) == -1.0);
  CHECK_THROWS_AS(evaluate(d, Bindings{{"r", 0.0}}), EvalError);
}

TEST_CASE("non-constant exponent") {
  const Expr e = parse("r^t");
  // d/dt r^t = r^t ln r
  CHECK(evaluate(diff(e, "t"), at(1.5, 2.0)) ==
        doctest::Approx(std::pow(2.0, 1.5) * std::log(2.0)).epsilon(1e-14));
  // d/dr r^t = t r^(t-1)
  CHECK(evaluate(diff(e, "r"), at(1.5, 2.0)) ==
        doctest::Approx(1.5 * std::pow(2.0, 0.5)).epsilon(1e-14));
}

TEST_CASE("third order") {
  const Expr e = parse("r^(3/2)*sin(t)");
  const double got = evaluate(diff(diff(e, "r", 2), "t"), at(0.4, 2.0));
  CHECK(got == doctest::Approx(0.75 / std::sqrt(2.0) * std::cos(0.4)).epsilon(1e-14));
}

TEST_CASE("simplify") {
  CHECK(to_string(simplify(parse("(r*1)+0"))) == "r");
  CHECK(simplify(parse("sin(t)*0")).is_constant(0.0));
  CHECK(simplify(parse("2+3")).is_constant(5.0));
  CHECK(to_string(simplify(parse("r^1"))) == "r");
  CHECK(simplify(parse("(t+r)^0")).is_constant(1.0));
}

TEST_CASE("free symbols and substitution") {
  const Expr e = parse("a*sin(t) + r^2");
  CHECK(free_symbols(e) == std::set<std::string>{"a", "r", "t"});
  CHECK(depends_on(e, "t"));
  CHECK_FALSE(depends_on(e, "theta"));
  const Expr s = substitute(e, "a", parse("r"));
  CHECK(evaluate(s, at(kPi / 2, 3.0)) == 12.0);
}

TEST_CASE("program shares subtrees") {
  const std::array<Expr, 2> outs{parse("sin(t)*r + 1"), parse("2*(sin(t)*r)")};
  const Program prog(outs, {"t", "r"});
  const std::array<double, 2> in{0.3, 2.0};
  const auto got = prog.evaluate<double>(in);
  CHECK(got[0] == doctest::Approx(std::sin(0.3) * 2 + 1));
  CHECK(got[1] == doctest::Approx(4 * std::sin(0.3)));
  // t, r, sin, *, 1, +, 2, *
  CHECK(prog.instruction_count() <= 8);
}

TEST_CASE("program constants and unbound inputs") {
  const std::array<Expr, 1> outs{parse("M/r")};
  CHECK_THROWS_AS(Program(outs, {"r"}), EvalError);
  const Program prog(outs, {"r"}, {{"M", 2.0}});
  const std::array<double, 1> in{4.0};
  CHECK(prog.evaluate<double>(in)[0] == 0.5);
}

}  // TEST_SUITE
