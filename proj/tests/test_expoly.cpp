#include <doctest.h>

#include <random>

#include "liftlab/error.hpp"
#include "liftlab/expoly.hpp"
#include "random_gen.hpp"

using namespace liftlab;

namespace {

ExpPoly P(const char* s) { return ExpPoly::parse(s); }

// Independent derivative oracle: differentiate term by term straight from the
// definition d/dx (x^a e^{wx}) = a x^{a-1} e^{wx} + w x^a e^{wx}, building the
// result by plain summation instead of the library's merge path.
ExpPoly naive_dx(const ExpPoly& p) {
  ExpPoly out;
  for (const auto& t : p.terms()) {
    if (t.mono.x > 0) {
      Monomial m = t.mono;
      m.x -= 1;
      out += ExpPoly::monomial(m, t.coeff * GaussianRational(t.mono.x));
    }
    out += ExpPoly::monomial(t.mono, t.coeff * t.mono.freq.x);
  }
  return out;
}

}  // namespace

TEST_CASE("products add frequencies and exponents") {
  CHECK(P("x*e^(x)") * P("e^(2x)") == P("x*e^(3x)"));
  CHECK(P("1+u") * P("1+u") == P("1+2*u+u^2"));
  CHECK(P("C*y") * P("2*y") == P("2*C*y^2"));
  CHECK((P("x") - P("x")).is_zero());
}

TEST_CASE("derivatives") {
  CHECK(diff(P("x^2*e^(2x)"), Var::X) == P("(2*x+2*x^2)*e^(2x)"));
  CHECK(diff(P("AL+BE*u+GA*u^2"), Var::U) == P("BE+2*GA*u"));
  CHECK(diff(P("2*C*y"), Var::Y) == P("2*C"));
  CHECK(diff(P("e^(x+2y)"), Var::Y) == P("2*e^(x+2y)"));
  CHECK_THROWS_AS(diff(P("C*x"), "C"), Error);
  try {
    diff(P("C"), "C");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParameterDifferentiation);
  }
}

TEST_CASE("x-antiderivatives") {
  CHECK(antideriv_x(P("x")) == P("(1/2)*x^2"));
  CHECK(antideriv_x(P("e^(2x)")) == P("(1/2)*e^(2x)"));
  CHECK(antideriv_x(P("x*e^(x)")) == P("(x-1)*e^(x)"));
  CHECK(antideriv(P("y*e^(iy)"), Var::Y) == P("(-i*y+1)*e^(iy)"));
  try {
    antideriv_x(P("x*u"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ContainsFiberVariable);
  }
}

TEST_CASE("exact evaluation") {
  CHECK(eval_at(P("e^(ix)"), {{"x", 0}}) == ExpPoly(1));
  CHECK(eval_at(P("e^((1/2)x)"), {{"x", 0}}) == ExpPoly(1));
  CHECK(eval_at(P("x^2*y"), {{"x", 2}, {"y", 3}}) == ExpPoly(12));
  CHECK(eval_at(P("x*y+C*u"), {{"x", 2}}) == P("2*y+C*u"));
  CHECK(eval_at(P("C*u"), {{"C", 3}, {"u", 2}}) == ExpPoly(6));
  try {
    eval_at(P("e^(2x)"), {{"x", 1}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonExactEvaluation);
  }
}

TEST_CASE("printing and parsing") {
  CHECK(P("u*2*x*(-1)+1").to_string() == "1-2*x*u");
  CHECK(P("x/2").to_string() == "(1/2)*x");
  CHECK(P("(1+i)*x").to_string() == "(1+i)*x");
  CHECK(P("e^(x)*e^(y)").to_string() == "e^(x+y)");
  CHECK(P("3*e^(-x/2)").to_string() == "3*e^((-1/2)x)");
  CHECK(P("2*C_1_0*x^2").to_string() == "2*C_1_0*x^2");
  CHECK(P("0").to_string() == "0");
  CHECK(P("-1").to_string() == "-1");
  CHECK(P("2x y").to_string() == "2*x*y");
  CHECK_THROWS_AS(P("x+"), Error);
  CHECK_THROWS_AS(P("x/y"), Error);
  CHECK_THROWS_AS(P("e^(x^2)"), Error);
  CHECK_THROWS_AS(P("Dx"), Error);
  CHECK_THROWS_AS(P("z"), Error);
}

TEST_CASE("substitution") {
  CHECK(substitute(P("A*x+B"), {{"A", P("2")}, {"B", P("y")}}) == P("2*x+y"));
  CHECK(substitute_u(P("u^2+x*u"), P("u+1")) == P("u^2+2*u+1+x*u+x"));
}

TEST_CASE("ring axioms on random instances") {
  std::mt19937 rng(11);
  for (int n = 0; n < 200; ++n) {
    ExpPoly a = testgen::random_poly(rng, true, true, true);
    ExpPoly b = testgen::random_poly(rng, true, true, true);
    ExpPoly c = testgen::random_poly(rng, true, true, true);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK(ExpPoly::from_terms(a.terms()) == a);
  }
}

TEST_CASE("Leibniz rule on random instances") {
  std::mt19937 rng(12);
  for (int n = 0; n < 200; ++n) {
    ExpPoly a = testgen::random_poly(rng, true, true, true);
    ExpPoly b = testgen::random_poly(rng, true, true, true);
    for (Var v : {Var::X, Var::Y, Var::U}) {
      CHECK(diff(a * b, v) == diff(a, v) * b + a * diff(b, v));
    }
    CHECK(diff(a, Var::X) == naive_dx(a));
  }
}

TEST_CASE("antiderivative round trip on random instances") {
  std::mt19937 rng(13);
  for (int n = 0; n < 200; ++n) {
    ExpPoly a = testgen::random_poly(rng, false, true, true, 4, 4);
    CHECK(diff(antideriv_x(a), Var::X) == a);
    CHECK(diff(antideriv(a, Var::Y), Var::Y) == a);
  }
}

TEST_CASE("print then parse is the identity on random instances") {
  std::mt19937 rng(14);
  for (int n = 0; n < 300; ++n) {
    ExpPoly a = testgen::random_poly(rng, true, true, true, 4);
    INFO(a.to_string());
    CHECK(ExpPoly::parse(a.to_string()) == a);
  }
}
