#include <doctest.h>

#include <map>
#include <random>

#include "liftlab/catalog.hpp"
#include "liftlab/error.hpp"
#include "liftlab/liftsolver.hpp"
#include "random_gen.hpp"

using namespace liftlab;

namespace {

LieAlgebra alg(const std::string& ref) { return LieAlgebra(instantiate(ref).generators); }

VectorField T(const char* t) { return VectorField::parse(t, Space::Total); }

std::vector<VectorField> lifts(std::initializer_list<const char*> ts) {
  std::vector<VectorField> out;
  for (const char* t : ts) out.push_back(T(t));
  return out;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Parse;
}

bool all_ok(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return !checks.empty();
}

std::vector<InstanceRef> grid_base_refs() {
  std::vector<InstanceRef> out;
  for (const auto& ref : enumerate_instances(TestGrid::defaults()))
    if (!catalog_entry(ref.id).is_lift()) out.push_back(ref);
  return out;
}

// Solver results per (base instance, cap), shared by the grid-wide cases.
const LiftSolveResult& solved(const InstanceRef& base, LiftType cap) {
  static std::map<std::string, LiftSolveResult> cache;
  std::string key = base.to_string() + "/" + std::string(to_string(cap));
  auto it = cache.find(key);
  if (it == cache.end()) {
    LieAlgebra g = alg(base.to_string());
    it = cache.emplace(key, solve_ansatz_lifts(g, cap, default_truncation(g))).first;
  }
  return it->second;
}

GaussianRational nonzero_coeff(std::mt19937& rng) { return testgen::small_coeff(rng); }

}  // namespace

TEST_CASE("affine lifts of g6 reduce to one branch") {
  LieAlgebra g = alg("g6");
  auto res = solve_ansatz_lifts(g, LiftType::Affine, default_truncation(g));
  REQUIRE(res.branches.size() == 1);
  const auto& b = res.branches[0];
  CHECK(b.generators == lifts({"Dx", "Dy", "y*Dy - u*Du", "y^2*Dy + (1-2*y*u)*Du"}));
  CHECK(b.type == LiftType::Affine);
  CHECK(b.transitive);
  CHECK(b.verified());
  CHECK(b.assignment.free.empty());
  CHECK_FALSE(res.pruned);
}

TEST_CASE("projective lifts of g6 are pruned and absent") {
  LieAlgebra g = alg("g6");
  auto pruned = solve_ansatz_lifts(g, LiftType::Projective, default_truncation(g));
  CHECK(pruned.pruned);
  CHECK(pruned.branches.empty());
  auto full = solve_ansatz_lifts(g, LiftType::Projective, default_truncation(g), SolveOptions{false, 3});
  CHECK_FALSE(full.pruned);
  CHECK(full.branches.empty());

  // Here the stabilizer is large enough for the quadratic stage to run.
  LieAlgebra g8 = alg("g8[r=5,alpha=2]");
  auto full8 = solve_ansatz_lifts(g8, LiftType::Projective, default_truncation(g8), SolveOptions{false, 3});
  CHECK(full8.branches.empty());
  CHECK(full8.raw_branches > 0);  // candidates existed but none has projective type
}

TEST_CASE("projective lift of g3 matches the catalog") {
  LieAlgebra g = alg("g3");
  auto res = solve_ansatz_lifts(g, LiftType::Projective, default_truncation(g));
  REQUIRE(res.branches.size() == 1);
  auto cat = instantiate("g3.p").generators;
  auto w = find_equivalence(cat, res.branches[0].generators, g, LiftType::Projective, default_truncation(g));
  REQUIRE(w);
  CHECK(w->map.kind == FiberMap::Kind::Moebius);
  std::vector<VectorField> pushed;
  for (const auto& X : rebase_lift(cat, g)) pushed.push_back(pushforward(X.as_total(), w->map));
  CHECK(pushed == rebase_lift(res.branches[0].generators, g));
}

TEST_CASE("metric lifts come from H1") {
  LieAlgebra g6 = alg("g6");
  auto res = solve_metric_lifts(g6, default_truncation(g6));
  REQUIRE(res.branches.size() == 2);  // family + one representative
  CHECK(res.branches[0].assignment.free == std::vector<std::string>{"C"});
  CHECK(res.branches[1].generators == lifts({"Dx", "Dy", "y*Dy + Du", "y^2*Dy + 2*y*Du"}));
  for (const auto& b : res.branches) {
    CHECK(b.verified());
    CHECK(b.type == LiftType::Metric);
  }
  auto cat = generic_specialization(instantiate("g6.m").generators);
  CHECK(find_equivalence(cat, res.branches[0].generators, g6, LiftType::Metric, default_truncation(g6).widened(2)));

  LieAlgebra g15t = alg("g15t");
  auto none = solve_metric_lifts(g15t, default_truncation(g15t));
  CHECK(none.branches.empty());
  // Metric cap through the ansatz entry point delegates.
  CHECK(solve_ansatz_lifts(g6, LiftType::Metric, default_truncation(g6)).branches.size() == 2);
}

TEST_CASE("metric families with several constants") {
  LieAlgebra g10 = alg("g10[r=5]");
  auto res = solve_metric_lifts(g10, default_truncation(g10));
  REQUIRE_FALSE(res.branches.empty());
  CHECK(res.branches[0].assignment.free.size() == 2);
  for (const auto& b : res.branches) CHECK(b.verified());

  LieAlgebra g4 = alg("g4[alphas=0;1,ms=1;1]");
  auto res4 = solve_metric_lifts(g4, default_truncation(g4));
  REQUIRE_FALSE(res4.branches.empty());
  CHECK(res4.branches[0].assignment.free.size() == 1);
  for (const auto& b : res4.branches) CHECK(b.verified());
}

TEST_CASE("truncation is widened when too small") {
  LieAlgebra g = alg("g6");
  TruncatedSpace tiny(0, 1, {Frequency{}});
  CHECK(kind_of([&] { solve_ansatz_lifts(g, LiftType::Affine, tiny, SolveOptions{true, 0}); }) ==
        ErrorKind::TruncationExhausted);
  auto res = solve_ansatz_lifts(g, LiftType::Affine, tiny, SolveOptions{true, 3});
  REQUIRE(res.branches.size() == 1);
  CHECK(res.truncation.rfind("D=2", 0) == 0);
}

TEST_CASE("distinct affine lifts of g12 are not equivalent") {
  LieAlgebra g = alg("g12");
  auto a1 = instantiate("g12.a1").generators;
  auto a2 = instantiate("g12.a2").generators;
  auto W = default_truncation(g);
  CHECK_FALSE(find_equivalence(a1, a2, g, LiftType::Affine, W));
  CHECK(find_equivalence(a1, a1, g, LiftType::Affine, W));
  CHECK(kind_of([&] { find_equivalence(lifts({"Dx", "y*Dy + A*Du"}), a1, g, LiftType::Affine, W); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("normalize_lift examples") {
  auto m = normalize_lift(lifts({"Dx + Du", "Dy"}), {0, 1}, LiftType::Metric);
  CHECK(m == lifts({"Dx", "Dy"}));
  auto m2 = normalize_lift(lifts({"Dx - 2*x*y*Du", "x*Dx + Dy - (2*x^2*y + x^2)*Du", "y*Dy - x^2*y*Du"}), {0, 1}, LiftType::Metric);
  CHECK(m2[0].au().is_zero());
  CHECK(m2[1].au().is_zero());
  FiberMap scale = FiberMap::affine(ExpPoly::parse("e^(x+2*y)"), ExpPoly::parse("e^(-x-2*y)"), ExpPoly::parse("x*y"));
  std::vector<VectorField> moved;
  for (const auto& X : lifts({"Dx", "Dy", "y*Dy"})) moved.push_back(pushforward(X, scale));
  CHECK(moved[0].au().degree(Var::U) == 1);
  auto a = normalize_lift(moved, {0, 1}, LiftType::Affine);
  CHECK(a[0] == T("Dx"));
  CHECK(a[1] == T("Dy"));
  CHECK(a[2].au().degree(Var::U) <= 1);
  CHECK(kind_of([] { normalize_lift(lifts({"Dx + u*Du", "Dy + (2*u + 1)*Du"}), {0, 1}, LiftType::Affine); }) ==
        ErrorKind::NotALift);
  CHECK(kind_of([] { normalize_lift(lifts({"Dx + y*u*Du", "Dy + x*u*Du"}), {0, 1}, LiftType::Affine); }) ==
        ErrorKind::OutsideRing);
  CHECK(kind_of([] { normalize_lift(lifts({"Dx + x*y*u*Du", "Dy + (1/2)*x^2*u*Du"}), {0, 1}, LiftType::Affine); }) ==
        ErrorKind::OutsideRing);
  CHECK(kind_of([] { normalize_lift(lifts({"Dx", "Dy"}), {0, 1}, LiftType::Projective); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { normalize_lift(lifts({"Dx", "y*Dy"}), {0, 1}, LiftType::Metric); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([] { normalize_lift(lifts({"Dx + u*Du", "Dy"}), {0, 1}, LiftType::Metric); }) ==
        ErrorKind::NotALift);
}

TEST_CASE("every grid lift has an equivalent solver branch") {
  std::size_t checked = 0;
  for (const auto& ref : enumerate_instances(TestGrid::defaults())) {
    const auto& e = catalog_entry(ref.id);
    if (!e.is_lift()) continue;
    Instance inst = instantiate(ref);
    InstanceRef base = inst.base();
    LieAlgebra g = alg(base.to_string());
    const auto& res = solved(base, *e.type);
    auto from = generic_specialization(inst.generators);
    bool found = false;
    for (const auto& b : res.branches) {
      if (auto w = find_equivalence(from, b.generators, g, *e.type, default_truncation(g).widened(2))) {
        found = true;
        break;
      }
    }
    CHECK_MESSAGE(found, (ref.to_string() + " has no equivalent branch"));
    ++checked;
  }
  CHECK(checked >= 150);
}

TEST_CASE("solver branches over the grid are valid lifts of the requested type") {
  std::size_t branches = 0;
  for (const auto& ref : grid_base_refs()) {
    for (LiftType cap : {LiftType::Metric, LiftType::Affine, LiftType::Projective}) {
      const auto& res = solved(ref, cap);
      LieAlgebra g = alg(ref.to_string());
      for (const auto& b : res.branches) {
        ++branches;
        // Independent recheck of the bracket relations on the base order.
        std::vector<VectorField> hat = rebase_lift(b.generators, g);
        for (std::size_t i = 0; i < hat.size(); ++i) {
          CHECK(project(hat[i]) == g[i]);
          for (std::size_t j = i + 1; j < hat.size(); ++j) {
            VectorField rhs = VectorField(ExpPoly(), ExpPoly(), ExpPoly());
            for (const auto& [k, c] : g.c(i, j)) rhs += hat[k].scaled(c);
            CHECK_MESSAGE(bracket(hat[i], hat[j]) == rhs, (ref.to_string() + " bracket " + std::to_string(i) + "," +
                                                           std::to_string(j)));
          }
        }
        CHECK(b.type == cap);
        CHECK(b.transitive);
        CHECK(all_ok(b.checks));
      }
    }
  }
  CHECK(branches > 50);
}

TEST_CASE("pruned caps have no lifts even when solved") {
  std::size_t solved_count = 0;
  for (const auto& ref : grid_base_refs()) {
    LieAlgebra g = alg(ref.to_string());
    auto st = stabilizer_at(g, origin(Space::Base));
    bool solvable = is_solvable(g, st);
    bool abelian = is_abelian(g, st);
    if (!solvable) continue;
    std::vector<LiftType> caps{LiftType::Projective};
    if (abelian) caps.push_back(LiftType::Affine);
    for (LiftType cap : caps) {
      CHECK(solved(ref, cap).pruned);
      auto full = solve_ansatz_lifts(g, cap, default_truncation(g), SolveOptions{false, 3});
      CHECK_MESSAGE(full.branches.empty(), ref.to_string());
      ++solved_count;
    }
  }
  CHECK(solved_count > 20);
}

TEST_CASE("equivalence witnesses recover random constant fiber maps") {
  std::mt19937 rng(4711);
  std::vector<std::pair<InstanceRef, LiftType>> pool;
  for (const auto& ref : grid_base_refs())
    for (LiftType cap : {LiftType::Affine, LiftType::Projective})
      if (!solved(ref, cap).branches.empty()) pool.emplace_back(ref, cap);
  REQUIRE(!pool.empty());
  int trials = 0;
  while (trials < 120) {
    auto& [ref, cap] = pool[rng() % pool.size()];
    const auto& res = solved(ref, cap);
    const auto& b = res.branches[rng() % res.branches.size()];
    if (!b.assignment.free.empty()) continue;
    LieAlgebra g = alg(ref.to_string());
    FiberMap m;
    if (cap == LiftType::Affine) {
      GaussianRational a = nonzero_coeff(rng);
      m = FiberMap::affine(ExpPoly(a), ExpPoly(a.reciprocal()), ExpPoly(testgen::small_coeff(rng)));
    } else {
      GaussianRational A = nonzero_coeff(rng), B = testgen::small_coeff(rng), C = testgen::small_coeff(rng);
      GaussianRational D = nonzero_coeff(rng);
      GaussianRational det = A * D - B * C;
      if (det.is_zero()) continue;
      m = FiberMap::moebius(A, B, C, D, det.reciprocal());
    }
    std::vector<VectorField> moved;
    for (const auto& X : b.generators) moved.push_back(pushforward(X, m));
    auto w = find_equivalence(b.generators, moved, g, cap, default_truncation(g));
    REQUIRE_MESSAGE(w, ref.to_string());
    // The witness need not be m itself (stabilizers of the lift), but it
    // must carry the branch onto the moved lift.
    for (std::size_t k = 0; k < moved.size(); ++k) CHECK(pushforward(b.generators[k], w->map) == moved[k]);
    ++trials;
  }
}

TEST_CASE("metric normalization and witnesses under random translations") {
  std::mt19937 rng(99);
  LieAlgebra g = alg("g6");
  auto W = default_truncation(g);
  auto base_lift = instantiate("g6.m[C=3]").generators;
  for (int t = 0; t < 120; ++t) {
    ExpPoly U = testgen::random_poly(rng, false, false, false, 3, 2);
    std::vector<VectorField> moved;
    for (const auto& X : base_lift) moved.push_back(pushforward(X, FiberMap::translation(U)));
    // Witness: any U' with the same differential as U.
    auto w = find_equivalence(base_lift, moved, g, LiftType::Metric, W);
    REQUIRE(w);
    ExpPoly delta = w->map.U - U;
    for (std::size_t i = 0; i < g.dim(); ++i) CHECK(apply(g[i], delta).is_zero());
    // Normalizing the pair gives back a lift with plain Dx, Dy.
    auto norm = normalize_lift(moved, {0, 1}, LiftType::Metric);
    CHECK(norm[0].au().is_zero());
    CHECK(norm[1].au().is_zero());
    CHECK(all_ok(verify_lift(norm, g, origin(Space::Base), LiftType::Metric)));
    CHECK(find_equivalence(norm, base_lift, g, LiftType::Metric, W));
  }
}
