#include <doctest.h>

#include <random>

#include "liftlab/error.hpp"
#include "liftlab/vfield.hpp"
#include "random_gen.hpp"

using namespace liftlab;

namespace {

VectorField F(const char* s) { return VectorField::parse(s); }
VectorField T(const char* s) { return VectorField::parse(s, Space::Total); }

// Commutator of differential operators applied to coordinate functions: an
// oracle for the bracket that never forms the component formula.
VectorField commutator_oracle(const VectorField& a, const VectorField& b) {
  auto comp = [&](const ExpPoly& f) { return apply(a, apply(b, f)) - apply(b, apply(a, f)); };
  if (a.space() == Space::Base) return {comp(X()), comp(Y())};
  return {comp(X()), comp(Y()), comp(U())};
}

VectorField random_field(std::mt19937& rng, bool quadratic_u) {
  ExpPoly au;
  for (int k = 0; k <= 2; ++k) {
    if (!quadratic_u && k > 1) break;
    au += testgen::random_poly(rng, false, true, false, 2, 2) * U().pow(static_cast<unsigned>(k));
  }
  return {testgen::random_poly(rng, false, true, false, 2, 2), testgen::random_poly(rng, false, true, false, 2, 2), au};
}

FiberMap random_map(std::mt19937& rng) {
  ExpPoly p = testgen::random_poly(rng, false, true, false, 2, 2);
  ExpPoly q = testgen::random_poly(rng, false, true, false, 2, 2);
  GaussianRational c = testgen::small_coeff(rng);
  ExpPoly e = ExpPoly::exponential({GaussianRational(static_cast<long>(rng() % 3) - 1), 0});
  ExpPoly e_inv = ExpPoly::exponential({-e.terms()[0].mono.freq.x, 0});
  switch (rng() % 4) {
    case 0: return FiberMap::translation(p);
    case 1: return FiberMap::affine(e.scaled(c), e_inv.scaled(c.reciprocal()), p);
    case 2: return FiberMap::moebius(e.scaled(c), p, 0, e_inv, ExpPoly(c.reciprocal()));
    default: return FiberMap::moebius(1, 0, p, 1, 1);
  }
}

// Chain-rule oracle: with u = m(v), the pushed field Y must satisfy
// Y(m(v)) = f(m(v)), cleared of the Moebius denominator.
bool chain_rule_holds(const VectorField& Xf, const FiberMap& m, const VectorField& Yf) {
  ExpPoly num;
  ExpPoly den = 1;
  switch (m.kind) {
    case FiberMap::Kind::Translation: num = U() + m.U; break;
    case FiberMap::Kind::Affine: num = m.A * U() + m.B; break;
    case FiberMap::Kind::Moebius:
      num = m.A * U() + m.B;
      den = m.C * U() + m.D;
      break;
  }
  ExpPoly lhs = apply(Yf, num) * den - num * apply(Yf, den);
  bool moebius = m.kind == FiberMap::Kind::Moebius;
  ExpPoly rhs;
  for (int k = 0; k <= Xf.au().degree(Var::U); ++k) {
    rhs += Xf.au().coefficient(Var::U, k) * num.pow(static_cast<unsigned>(k)) *
           den.pow(static_cast<unsigned>(moebius ? 2 - k : 0));
  }
  return lhs == rhs;
}

}  // namespace

TEST_CASE("brackets") {
  CHECK(bracket(F("Dx"), F("x*Dx")) == F("Dx"));
  CHECK(bracket(F("y*Dy"), F("y^2*Dy")) == F("y^2*Dy"));
  CHECK(bracket(F("x*Dy"), F("y*Dx")) == F("x*Dx - y*Dy"));
  CHECK(bracket(F("x*Dy"), F("y*Dx")) == commutator_oracle(F("x*Dy"), F("y*Dx")));
  CHECK_THROWS_AS(bracket(F("Dx"), F("Du")), Error);
}

TEST_CASE("application and projection") {
  CHECK(apply(F("y*Dy"), ExpPoly::parse("y^2")) == ExpPoly::parse("2*y^2"));
  CHECK(apply(F("Dx"), ExpPoly::parse("e^(2x)")) == ExpPoly::parse("2*e^(2x)"));
  CHECK(apply(F("x*Dx+y*Dy"), ExpPoly::parse("x*y")) == ExpPoly::parse("2*x*y"));
  CHECK(project(F("x*Dy + Du")) == F("x*Dy"));
  CHECK(project(F("Du")).is_zero());
  CHECK(project(F("y^2*Dy + (1-2*y*u)*Du")) == F("y^2*Dy"));
  try {
    project(F("u*Dx"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotProjectable);
  }
}

TEST_CASE("text form") {
  CHECK(F("x^2*Dx + (1-2*x*u)*Du").to_string() == "x^2*Dx + (1-2*x*u)*Du");
  CHECK(F("Dx - y*Dy").to_string() == "Dx - y*Dy");
  CHECK(F("-Dy+2*Du").to_string() == "-Dy + 2*Du");
  CHECK(T("Dx").space() == Space::Total);
  CHECK(F("Dx").space() == Space::Base);
  CHECK_THROWS_AS(F("x"), Error);
  CHECK_THROWS_AS(F("Dx*Dy"), Error);
}

TEST_CASE("pushforward examples") {
  CHECK(pushforward(T("Dx + Du"), FiberMap::translation(X())) == T("Dx"));
  CHECK(pushforward(T("u*Du"), FiberMap::moebius(0, 1, 1, 0, -1)) == T("-u*Du"));
  CHECK(pushforward(T("y*Dy + x*Du"), FiberMap::identity()) == T("y*Dy + x*Du"));
  CHECK_THROWS_AS(FiberMap::affine(X(), 1, 0), Error);
  CHECK_THROWS_AS(pushforward(T("u^3*Du"), FiberMap::moebius(0, 1, 1, 0, -1)), Error);
}

TEST_CASE("Jacobi identity on random fields") {
  std::mt19937 rng(31);
  for (int n = 0; n < 120; ++n) {
    VectorField a = random_field(rng, true);
    VectorField b = random_field(rng, true);
    VectorField c = random_field(rng, true);
    CHECK((bracket(bracket(a, b), c) + bracket(bracket(b, c), a) + bracket(bracket(c, a), b)).is_zero());
    CHECK(bracket(a, b) == commutator_oracle(a, b));
    CHECK(project(bracket(a, b)) == bracket(project(a), project(b)));
  }
}

TEST_CASE("pushforward is a Lie algebra map with inverse") {
  std::mt19937 rng(32);
  for (int n = 0; n < 150; ++n) {
    FiberMap m = random_map(rng);
    VectorField a = random_field(rng, true);
    VectorField b = random_field(rng, true);
    VectorField pa = pushforward(a, m);
    INFO(a.to_string());
    CHECK(pushforward(bracket(a, b), m) == bracket(pa, pushforward(b, m)));
    CHECK(pushforward(pa, m.inverse()) == a);
    CHECK(chain_rule_holds(a, m, pa));
  }
}
