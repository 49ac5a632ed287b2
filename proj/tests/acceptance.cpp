// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every comparison is exact; the only tolerances are the pinned constants below.

#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "liftlab/catalog.hpp"
#include "liftlab/cohomology.hpp"
#include "liftlab/error.hpp"
#include "liftlab/groebner.hpp"
#include "liftlab/liftsolver.hpp"
#include "liftlab/verify.hpp"
#include "random_gen.hpp"

using namespace liftlab;

namespace {

constexpr int kRandomInstances = 120;  // at least 100 per property suite
constexpr int kWidenForEquivalence = 2;  // extra degree of W for metric witnesses
constexpr int kStabilityStep = 2;  // D -> D + 2

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  std::vector<std::string> failures;
  void fail(const std::string& what) {
    ok = false;
    if (failures.size() < 5) failures.push_back(what);
  }
  void expect(bool cond, const std::string& what) {
    if (!cond) fail(what);
  }
};

LieAlgebra alg(const InstanceRef& ref) { return LieAlgebra(instantiate(ref).generators); }
LieAlgebra alg(const std::string& text) { return alg(InstanceRef::parse(text)); }

std::vector<VectorField> total(std::initializer_list<const char*> ts) {
  std::vector<VectorField> out;
  for (const char* t : ts) out.push_back(VectorField::parse(t, Space::Total));
  return out;
}

std::vector<InstanceRef> grid() { return enumerate_instances(TestGrid::defaults()); }

std::vector<InstanceRef> grid_refs(bool lifts) {
  std::vector<InstanceRef> out;
  for (const auto& r : grid())
    if (catalog_entry(r.id).is_lift() == lifts) out.push_back(r);
  return out;
}

const LiftSolveResult& solved(const InstanceRef& base, LiftType cap) {
  static std::map<std::string, LiftSolveResult> cache;
  std::string key = base.to_string() + "/" + std::string(to_string(cap));
  auto it = cache.find(key);
  if (it == cache.end()) {
    LieAlgebra g = alg(base);
    it = cache.emplace(key, solve_ansatz_lifts(g, cap, default_truncation(g))).first;
  }
  return it->second;
}

std::size_t h1(const LieAlgebra& g) { return compute_h1(g, default_truncation(g)).dim_H1; }

std::set<std::string> constants_of(const std::vector<VectorField>& fields) {
  std::set<std::string> out;
  for (const auto& X : fields)
    for (const auto& p : {X.ax(), X.ay(), X.au()}) {
      auto s = p.symbols();
      out.insert(s.begin(), s.end());
    }
  return out;
}

VectorField substitute(const VectorField& X, const std::map<std::string, ExpPoly>& vals) {
  return {liftlab::substitute(X.ax(), vals), liftlab::substitute(X.ay(), vals), liftlab::substitute(X.au(), vals)};
}

// Recomputes a witness from scratch: pushing `from` through the map must give
// `to` with the chosen constants, generator by generator on the base basis.
bool witness_holds(const std::vector<VectorField>& from, const std::vector<VectorField>& to, const LieAlgebra& g,
                   const EquivalenceWitness& w) {
  auto a = rebase_lift(from, g);
  auto b = rebase_lift(to, g);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (pushforward(a[i].as_total(), w.map) != substitute(b[i].as_total(), w.parameters)) return false;
  return true;
}

// 1. Every grid instance verifies.
void catalog_verification(Outcome& o) {
  std::size_t bases = 0, lifts = 0;
  std::set<std::string> base_ids, lift_ids;
  for (const auto& ref : grid()) {
    VerificationReport rep = verify_instance(instantiate(ref));
    o.expect(rep.ok(), ref.to_string() + ": " + rep.first_failure());
    if (catalog_entry(ref.id).is_lift()) {
      ++lifts;
      lift_ids.insert(ref.id);
    } else {
      ++bases;
      base_ids.insert(ref.id);
    }
  }
  // The listed lift families, counting m1/m2 and a1/a2 variants separately.
  const std::set<std::string> listed_lifts{
      "g1.m",  "g1.p",   "g2.m",   "g2.p",   "g3.p",   "g4.m",   "g5.m",   "g5.a",   "g6.m",   "g6.a",   "g7.m",
      "g7.a",  "g8.m",   "g8.a",   "g9.m",   "g9.a",   "g10.m",  "g10.a",  "g11.m",  "g11.a",  "g12.m",  "g12.a1",
      "g12.a2", "g13.m1", "g13.m2", "g13.a1", "g13.a2", "g14.m",  "g14.a1", "g14.a2", "g15.m",  "g16.m"};
  std::set<std::string> listed_bases{"g15t", "g16t"};
  for (int k = 1; k <= 16; ++k) listed_bases.insert("g" + std::to_string(k));
  o.expect(base_ids == listed_bases, "base families in the grid differ from the catalog list");
  o.expect(lift_ids == listed_lifts, "lift families in the grid differ from the catalog list");
  o.detail << bases << " base and " << lifts << " lift instances, " << base_ids.size() << " base ids, "
           << lift_ids.size() << " lift ids";
}

// 2. The g6 example through all three caps.
void g6_example(Outcome& o) {
  LieAlgebra g6 = alg("g6");
  auto V = default_truncation(g6);
  auto W = V.widened(kWidenForEquivalence);

  auto metric = solve_metric_lifts(g6, V);
  o.expect(!metric.branches.empty() && metric.branches[0].assignment.free.size() == 1, "metric family has one constant");
  if (!metric.branches.empty()) {
    const auto& family = metric.branches[0].generators;
    auto cat = instantiate("g6.m").generators;
    auto w1 = find_equivalence(generic_specialization(cat), family, g6, LiftType::Metric, W);
    auto w2 = find_equivalence(generic_specialization(family), cat, g6, LiftType::Metric, W);
    o.expect(w1 && witness_holds(generic_specialization(cat), family, g6, *w1), "catalog metric lift not in family");
    o.expect(w2 && witness_holds(generic_specialization(family), cat, g6, *w2), "family not in catalog metric lift");
  }

  auto affine = solve_ansatz_lifts(g6, LiftType::Affine, V);
  o.expect(affine.branches.size() == 1, "affine branch count " + std::to_string(affine.branches.size()));
  if (affine.branches.size() == 1) {
    o.expect(affine.branches[0].generators == total({"Dx", "Dy", "y*Dy - u*Du", "y^2*Dy + (1-2*y*u)*Du"}),
             "affine branch differs from the expected generators");
    o.expect(affine.branches[0].verified(), "affine branch fails verification");
  }

  auto projective = solve_ansatz_lifts(g6, LiftType::Projective, V);
  auto unpruned = solve_ansatz_lifts(g6, LiftType::Projective, V, SolveOptions{false, 3});
  o.expect(projective.branches.empty() && unpruned.branches.empty(), "projective lifts found");
  o.detail << "metric family with 1 constant, " << affine.branches.size() << " affine branch, "
           << projective.branches.size() << " projective";
}

// 3. H1 table for the sl(2)-type realizations.
void cohomology_table(Outcome& o) {
  const std::vector<std::pair<const char*, std::size_t>> expected{{"g16", 1}, {"g15", 1}, {"g16t", 2}, {"g15t", 0}};
  for (const auto& [id, want] : expected) {
    LieAlgebra g = alg(id);
    auto V = default_truncation(g);
    std::size_t at_d = compute_h1(g, V).dim_H1;
    std::size_t wider = compute_h1(g, V.widened(kStabilityStep)).dim_H1;
    o.expect(at_d == want && wider == want, std::string(id) + ": " + std::to_string(at_d) + " then " +
                                                std::to_string(wider) + ", expected " + std::to_string(want));
    o.detail << id << "=" << at_d << "/" << wider << " ";
  }
}

// Free-constant counts of the metric families as listed.
std::optional<std::size_t> listed_count(const Instance& inst) {
  const std::string& id = inst.entry->id;
  if (id == "g4.m") return static_cast<std::size_t>(inst.params.integer("r") - 2);
  if (id == "g8.m") return inst.params.has("s") ? 2 : 1;
  static const std::map<std::string, std::size_t> fixed{{"g1.m", 1}, {"g2.m", 1}, {"g5.m", 1},  {"g6.m", 1},
                                                        {"g7.m", 1}, {"g9.m", 1}, {"g10.m", 2}, {"g11.m", 2},
                                                        {"g12.m", 2}, {"g14.m", 2}, {"g15.m", 1}, {"g16.m", 1}};
  auto it = fixed.find(id);
  if (it == fixed.end()) return std::nullopt;
  return it->second;
}

// 4. dim H1 against the constant counts of every metric family in the grid.
void correspondence(Outcome& o) {
  std::size_t listed = 0, other = 0;
  std::map<std::string, std::size_t> largest;  // base -> most constants in one family
  std::map<std::string, std::size_t> dims;
  for (const auto& ref : grid_refs(true)) {
    if (catalog_entry(ref.id).type != LiftType::Metric) continue;
    Instance inst = instantiate(ref);
    LieAlgebra g = alg(inst.base());
    std::size_t dim = h1(g);
    std::size_t consts = constants_of(inst.generators).size();
    std::string base = inst.base().to_string();
    largest[base] = std::max(largest[base], consts);
    dims[base] = dim;
    if (auto want = listed_count(inst)) {
      ++listed;
      o.expect(dim == *want && consts == *want, ref.to_string() + ": H1 " + std::to_string(dim) + ", constants " +
                                                    std::to_string(consts) + ", listed " + std::to_string(*want));
    } else {
      ++other;
    }
  }
  for (const auto& [base, n] : largest)
    o.expect(dims[base] == n, base + ": H1 " + std::to_string(dims[base]) + " vs " + std::to_string(n) + " constants");
  o.detail << listed << " listed families and " << other << " others over " << largest.size() << " bases";
}

// 5. Each affine and projective catalog lift is equivalent to a solver branch.
void solver_completeness(Outcome& o) {
  std::size_t checked = 0;
  for (const auto& ref : grid_refs(true)) {
    const auto& e = catalog_entry(ref.id);
    if (e.type == LiftType::Metric) continue;
    Instance inst = instantiate(ref);
    LieAlgebra g = alg(inst.base());
    auto W = default_truncation(g).widened(kWidenForEquivalence);
    auto from = generic_specialization(inst.generators);
    bool found = false;
    for (const auto& b : solved(inst.base(), *e.type).branches) {
      auto w = find_equivalence(from, b.generators, g, *e.type, W);
      if (w && witness_holds(from, b.generators, g, *w)) {
        found = true;
        break;
      }
    }
    o.expect(found, ref.to_string() + " has no equivalent branch");
    ++checked;
  }
  o.detail << checked << " affine/projective instances matched with checked witnesses";
}

// 6. Solvable stabilizer: no projective lift. Abelian: no affine either.
void pruning_soundness(Outcome& o) {
  std::size_t runs = 0;
  std::set<std::string> solvable_bases, abelian_bases;
  for (const auto& ref : grid_refs(false)) {
    Instance inst = instantiate(ref);
    LieAlgebra g(inst.generators);
    auto st = stabilizer_at(g, inst.sample_point);
    bool solvable = is_solvable(g, st), abelian = is_abelian(g, st);
    if (solvable) solvable_bases.insert(ref.to_string());
    if (abelian) abelian_bases.insert(ref.to_string());
    std::vector<LiftType> excluded;
    if (solvable) excluded.push_back(LiftType::Projective);
    if (abelian) excluded.push_back(LiftType::Affine);
    for (LiftType cap : excluded) {
      o.expect(solved(ref, cap).branches.empty(), ref.to_string() + " pruned solve returned branches");
      if (!transitive_at(g, origin(Space::Base))) continue;  // the solver needs the origin
      auto full = solve_ansatz_lifts(g, cap, default_truncation(g), SolveOptions{false, 3});
      o.expect(full.branches.empty(), ref.to_string() + " unpruned " + std::string(to_string(cap)) + " lifts");
      ++runs;
    }
  }
  std::size_t listed = 0;
  for (const auto& ref : grid_refs(true)) {
    Instance inst = instantiate(ref);
    std::string base = inst.base().to_string();
    LiftType t = *inst.entry->type;
    if (solvable_bases.count(base)) o.expect(t != LiftType::Projective, ref.to_string() + " is listed");
    if (abelian_bases.count(base)) o.expect(t == LiftType::Metric, ref.to_string() + " is listed");
    ++listed;
  }
  o.detail << runs << " unpruned solves, " << solvable_bases.size() << " solvable and " << abelian_bases.size()
           << " abelian bases, " << listed << " listed lifts checked";
}

// 7. The metric lifts of g15 and g16 share type and H1.
void g15_g16(Outcome& o) {
  auto a = verify_instance(instantiate("g15.m"));
  auto b = verify_instance(instantiate("g16.m"));
  o.expect(a.ok() && b.ok(), "verification failed");
  o.expect(a.type && b.type && *a.type == *b.type && *a.type == LiftType::Metric, "types differ");
  std::size_t h15 = h1(alg("g15")), h16 = h1(alg("g16"));
  o.expect(h15 == h16, "H1 differs");
  o.detail << "both " << (a.type ? to_string(*a.type) : "untyped") << ", H1 " << h15 << " and " << h16;
}

VectorField random_field(std::mt19937& rng) {
  ExpPoly au;
  for (unsigned k = 0; k <= 2; ++k) au += testgen::random_poly(rng, false, true, false, 2, 2) * U().pow(k);
  return {testgen::random_poly(rng, false, true, false, 2, 2), testgen::random_poly(rng, false, true, false, 2, 2), au};
}

FiberMap random_map(std::mt19937& rng) {
  ExpPoly p = testgen::random_poly(rng, false, true, false, 2, 2);
  GaussianRational c = testgen::small_coeff(rng);
  switch (rng() % 3) {
    case 0: return FiberMap::translation(p);
    case 1: return FiberMap::affine(ExpPoly(c), ExpPoly(c.reciprocal()), p);
    default: return FiberMap::moebius(1, 0, p, 1, 1);
  }
}

// 8. Property suites on random instances.
void properties(Outcome& o) {
  std::mt19937 rng(20261018);
  std::map<std::string, int> counts;

  for (int n = 0; n < kRandomInstances; ++n) {
    VectorField a = random_field(rng), b = random_field(rng), c = random_field(rng);
    o.expect((bracket(bracket(a, b), c) + bracket(bracket(b, c), a) + bracket(bracket(c, a), b)).is_zero(),
             "Jacobi: " + a.to_string());
    ++counts["jacobi"];
  }

  std::vector<Instance> bases;
  for (const auto& ref : grid_refs(false)) bases.push_back(instantiate(ref));
  for (int n = 0; n < kRandomInstances; ++n) {
    LieAlgebra g(bases[rng() % bases.size()].generators);
    ExpPoly U = testgen::random_poly(rng, false, true, false, 4, 3);
    o.expect(is_cocycle(g, coboundary(g, U)), "d(dU) != 0 for U = " + U.to_string());
    ++counts["dd"];
  }

  for (int n = 0; n < kRandomInstances; ++n) {
    ExpPoly a = testgen::random_poly(rng, true, true, true), b = testgen::random_poly(rng, true, true, true);
    for (Var v : {Var::X, Var::Y, Var::U})
      o.expect(diff(a * b, v) == diff(a, v) * b + a * diff(b, v), "Leibniz: " + a.to_string());
    ++counts["leibniz"];
  }

  for (int n = 0; n < kRandomInstances; ++n) {
    ExpPoly a = testgen::random_poly(rng, false, true, true, 4, 4);
    o.expect(diff(antideriv_x(a), Var::X) == a, "antiderivative: " + a.to_string());
    ++counts["antiderivative"];
  }

  for (int n = 0; n < kRandomInstances; ++n) {
    FiberMap m = random_map(rng);
    VectorField a = random_field(rng), b = random_field(rng);
    VectorField pa = pushforward(a, m);
    o.expect(pushforward(bracket(a, b), m) == bracket(pa, pushforward(b, m)), "pushforward bracket: " + a.to_string());
    o.expect(pushforward(pa, m.inverse()) == a, "pushforward inverse: " + a.to_string());
    ++counts["pushforward"];
  }

  const char* names[] = {"A", "B", "C"};
  std::uniform_int_distribution<long> small(-2, 2);
  auto linear = [&] {
    ExpPoly p(small(rng));
    for (const char* nm : names) p += sym(nm).scaled(small(rng));
    return p;
  };
  for (int n = 0; n < kRandomInstances; ++n) {
    std::vector<ExpPoly> eqs;
    int k = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < k; ++j) eqs.push_back(rng() % 2 == 0 ? linear() * linear() : linear());
    auto G = groebner_basis(eqs);
    for (const auto& e : eqs) o.expect(reduce(e, G).is_zero(), "Groebner: " + e.to_string());
    ++counts["groebner"];
  }

  for (const auto& [name, c] : counts) o.detail << name << "=" << c << " ";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"catalog verification over the default grid", catalog_verification},
      {"g6 metric, affine and projective lifts", g6_example},
      {"H1 of g16, g15, g16t, g15t and stability", cohomology_table},
      {"H1 matches metric free-constant counts", correspondence},
      {"solver finds every affine and projective catalog lift", solver_completeness},
      {"stabilizer pruning is sound", pruning_soundness},
      {"g15.m and g16.m agree in type and H1", g15_g16},
      {"property suites", properties},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [title, check] : criteria) {
    ++n;
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", n, title, o.detail.str().c_str());
    for (const auto& f : o.failures) std::printf("     %s\n", f.c_str());
    if (!o.ok) ++failed;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
