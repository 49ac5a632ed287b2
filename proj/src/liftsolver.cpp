#include "liftlab/liftsolver.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

#include "liftlab/error.hpp"

namespace liftlab {

namespace {

bool is_literal_x(const VectorField& X) { return X.ax() == ExpPoly(1) && X.ay().is_zero(); }
bool is_literal_second(const VectorField& X) {
  return (X.ax().is_zero() || X.ax() == liftlab::X()) && X.ay() == ExpPoly(1);
}

VectorField base_part(const VectorField& X) { return VectorField(X.ax(), X.ay()); }

// Coefficients of p grouped by the non-parameter part of each monomial; each
// group is a polynomial in the parameter symbols only.
std::map<Monomial, ExpPoly> by_shape(const ExpPoly& p) {
  std::map<Monomial, std::vector<Term>> groups;
  for (const auto& t : p.terms()) {
    Monomial shape = t.mono;
    shape.params.clear();
    Monomial pm;
    pm.params = t.mono.params;
    groups[shape].push_back({t.coeff, pm});
  }
  std::map<Monomial, ExpPoly> out;
  for (auto& [m, ts] : groups) out.emplace(m, ExpPoly::from_terms(std::move(ts)));
  return out;
}

std::set<std::string> symbols_of(const std::vector<VectorField>& fields) {
  std::set<std::string> out;
  for (const auto& X : fields) {
    for (Var v : {Var::X, Var::Y, Var::U}) {
      auto s = X.component(v).symbols();
      out.insert(s.begin(), s.end());
    }
  }
  return out;
}

std::vector<VectorField> substitute_all(const std::vector<VectorField>& fields,
                                        const std::map<std::string, ExpPoly>& values) {
  std::vector<VectorField> out;
  out.reserve(fields.size());
  for (const auto& X : fields) {
    ExpPoly ax = substitute(X.ax(), values), ay = substitute(X.ay(), values);
    if (X.space() == Space::Total)
      out.emplace_back(ax, ay, substitute(X.au(), values));
    else
      out.emplace_back(ax, ay);
  }
  return out;
}

// Translation u -> u + U that clears the (u-free) fiber components of the
// two literal pair fields.
ExpPoly clearing_potential(const VectorField& p1, const VectorField& p2) {
  const ExpPoly& f1 = p1.au();
  const ExpPoly& f2 = p2.au();
  if (f1.contains(Var::U) || f2.contains(Var::U))
    throw Error(ErrorKind::NotALift, "pair components depend on u after scaling");
  ExpPoly U0 = antideriv_x(f1);
  ExpPoly rest = f2 - apply(base_part(p2), U0);
  if (!diff(rest, Var::X).is_zero())
    throw Error(ErrorKind::NotALift, "pair components are not compatible: " + rest.to_string());
  return U0 + antideriv(rest, Var::Y);
}

std::vector<VectorField> push_all(const std::vector<VectorField>& fields, const FiberMap& m) {
  std::vector<VectorField> out;
  out.reserve(fields.size());
  for (const auto& X : fields) out.push_back(pushforward(X, m));
  return out;
}

const std::vector<long> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

}  // namespace

std::vector<VectorField> generic_specialization(const std::vector<VectorField>& fields, long offset) {
  std::map<std::string, ExpPoly> values;
  long k = offset;
  for (const auto& s : symbols_of(fields)) {
    long v = kPrimes[static_cast<std::size_t>(k) % kPrimes.size()] + 100 * (k / static_cast<long>(kPrimes.size()));
    values.emplace(s, ExpPoly(v));
    ++k;
  }
  return substitute_all(fields, values);
}

std::vector<VectorField> normalize_lift(const std::vector<VectorField>& hat, std::pair<std::size_t, std::size_t> pair,
                                        LiftType cap) {
  auto [i, j] = pair;
  if (i >= hat.size() || j >= hat.size() || i == j) throw Error(ErrorKind::InvalidArgument, "bad pair indices");
  for (const auto& X : hat)
    if (!X.is_projectable()) throw Error(ErrorKind::NotALift, X.to_string() + " is not projectable");
  if (!is_literal_x(hat[i]) || !is_literal_second(hat[j]))
    throw Error(ErrorKind::InvalidArgument, "pair must project to Dx and Dy or x*Dx + Dy");
  std::vector<VectorField> cur;
  for (const auto& X : hat) cur.push_back(X.as_total());

  switch (cap) {
    case LiftType::Metric:
      break;
    case LiftType::Affine: {
      for (std::size_t k : {i, j})
        if (cur[k].au().degree(Var::U) > 1)
          throw Error(ErrorKind::NotALift, "pair component of u-degree above 1: " + cur[k].au().to_string());
      ExpPoly b1 = cur[i].au().coefficient(Var::U, 1);
      ExpPoly b2 = cur[j].au().coefficient(Var::U, 1);
      ExpPoly L0 = antideriv_x(b1);
      ExpPoly rest = b2 - apply(base_part(cur[j]), L0);
      if (!diff(rest, Var::X).is_zero())
        throw Error(ErrorKind::NotALift, "scaling parts are not compatible: " + rest.to_string());
      ExpPoly L = L0 + antideriv(rest, Var::Y);
      bool linear = L.degree_xy() <= 1 && !L.has_params();
      for (const auto& t : L.terms()) linear = linear && t.mono.freq.is_zero();
      if (!linear) throw Error(ErrorKind::OutsideRing, "integrating factor exp(" + L.to_string() + ")");
      Frequency w{L.coefficient(Var::X, 1).is_zero() ? GaussianRational(0) : L.coefficient(Var::X, 1).constant_value(),
                  L.coefficient(Var::Y, 1).is_zero() ? GaussianRational(0) : L.coefficient(Var::Y, 1).constant_value()};
      if (!w.is_zero())
        cur = push_all(cur, FiberMap::affine(ExpPoly::exponential(w), ExpPoly::exponential(-w), ExpPoly()));
      break;
    }
    case LiftType::Projective:
      throw Error(ErrorKind::InvalidArgument, "projective normalization is not supported");
  }
  ExpPoly Upot = clearing_potential(cur[i], cur[j]);
  if (!Upot.is_zero()) cur = push_all(cur, FiberMap::translation(Upot));
  return cur;
}

bool LiftBranch::verified() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.ok; });
}

namespace {

// First of a few small points where the base is transitive; the origin for
// every transitive catalog entry.
PointAssignment transitive_point(const LieAlgebra& base) {
  const long pts[][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (const auto& q : pts) {
    PointAssignment p{{"x", GaussianRational(q[0])}, {"y", GaussianRational(q[1])}};
    try {
      if (stabilizer_at(base, p).size() + 2 == base.dim()) return p;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NonExactEvaluation) throw;
    }
  }
  throw Error(ErrorKind::NotTransitive, "base algebra is not transitive at any sample point");
}

void finish_branch(LiftBranch& b, const LieAlgebra& base) {
  b.checks = verify_lift(b.generators, base, transitive_point(base), std::nullopt, &b.type);
  b.transitive = false;
  if (b.verified()) {
    try {
      PointAssignment p = transitive_point(base);
      p["u"] = 0;
      b.transitive = transitive_at(LieAlgebra(b.generators), p);
    } catch (const Error&) {
      b.transitive = false;
    }
  }
}

}  // namespace

LiftSolveResult solve_metric_lifts(const LieAlgebra& base, const TruncatedSpace& space) {
  LiftSolveResult res;
  res.cap = LiftType::Metric;
  CohomologyResult h = compute_h1(base, space);
  res.truncation = h.truncation.to_string();
  res.linear_unknowns = base.dim() * space.size();
  res.notes.push_back("dim Z1 = " + std::to_string(h.dim_Z1) + ", dim B1 = " + std::to_string(h.dim_B1) +
                      ", dim H1 = " + std::to_string(h.dim_H1));
  if (h.dim_H1 == 0) {
    res.notes.push_back("H1 = 0: every metric lift is equivalent to the trivial one");
    return res;
  }
  std::vector<std::string> names;
  for (std::size_t k = 0; k < h.dim_H1; ++k) names.push_back(h.dim_H1 == 1 ? "C" : "C" + std::to_string(k + 1));

  auto make = [&](const std::vector<ExpPoly>& psi, ConstantBranch assignment) {
    LiftBranch b;
    b.assignment = std::move(assignment);
    for (std::size_t i = 0; i < base.dim(); ++i) b.generators.push_back(base[i].lifted(psi[i]));
    finish_branch(b, base);
    res.branches.push_back(std::move(b));
  };

  std::vector<ExpPoly> family(base.dim());
  for (std::size_t k = 0; k < h.dim_H1; ++k)
    for (std::size_t i = 0; i < base.dim(); ++i) family[i] += sym(names[k]) * h.representatives[k].components[i];
  make(family, ConstantBranch{{}, names});
  for (std::size_t k = 0; k < h.dim_H1; ++k) {
    ConstantBranch a;
    for (std::size_t q = 0; q < names.size(); ++q) a.values.emplace(names[q], ExpPoly(q == k ? 1 : 0));
    make(h.representatives[k].components, a);
  }
  return res;
}

namespace {

// Solutions ψ_k (k over the stabilizer part of the adapted basis) of
// P_a(ψ_k) = Σ_l c(a,k)[l] ψ_l in V, one per unit value at the origin.
std::optional<std::vector<std::vector<ExpPoly>>> pair_transport(const LieAlgebra& adapted, const TruncatedSpace& V,
                                                                std::size_t* unknowns) {
  const std::size_t n = adapted.dim();
  const std::size_t s = n - 2;
  const std::size_t nV = V.size();
  *unknowns = s * nV;
  std::map<std::tuple<std::size_t, std::size_t, Monomial>, std::vector<std::pair<std::size_t, GaussianRational>>> rows;
  std::vector<std::vector<ExpPoly>> moved(2, std::vector<ExpPoly>(nV));
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t m = 0; m < nV; ++m) moved[a][m] = apply(adapted[a], ExpPoly::monomial(V.basis()[m]));

  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t k = 0; k < s; ++k) {
      for (std::size_t m = 0; m < nV; ++m) {
        std::size_t col = k * nV + m;
        for (const auto& t : moved[a][m].terms()) rows[{a, k, t.mono}].emplace_back(col, t.coeff);
      }
      for (const auto& [l, c] : adapted.c(a, k + 2)) {
        if (l < 2) continue;
        for (std::size_t m = 0; m < nV; ++m) rows[{a, k, V.basis()[m]}].emplace_back((l - 2) * nV + m, -c);
      }
    }
  }
  Echelon ech(s * nV);
  for (auto& [key, r] : rows) ech.insert(make_sparse(std::move(r)));
  std::vector<SparseVec> null = ech.nullspace();
  if (null.size() < s) return std::nullopt;

  std::vector<std::size_t> at_origin;
  for (std::size_t m = 0; m < nV; ++m)
    if (V.basis()[m].x == 0 && V.basis()[m].y == 0) at_origin.push_back(m);
  TrackedEchelon values;
  for (const auto& v : null) {
    std::vector<std::pair<std::size_t, GaussianRational>> e;
    for (std::size_t k = 0; k < s; ++k)
      for (std::size_t m : at_origin) e.emplace_back(k, entry(v, k * nV + m));
    values.insert(make_sparse(std::move(e)));
  }
  std::vector<std::vector<ExpPoly>> out;
  for (std::size_t j = 0; j < s; ++j) {
    auto comb = values.express(SparseVec{{j, GaussianRational(1)}});
    if (!comb) return std::nullopt;
    SparseVec sol;
    for (const auto& [idx, c] : *comb) sol = axpy(sol, c, null[idx]);
    std::vector<ExpPoly> psi(s);
    for (std::size_t k = 0; k < s; ++k) {
      SparseVec part;
      for (const auto& [col, c] : sol)
        if (col / nV == k) part.emplace_back(col % nV, c);
      psi[k] = V.element(part);
    }
    out.push_back(std::move(psi));
  }
  return out;
}

std::string fiber_name(char kind, std::size_t k) { return std::string(1, kind) + std::to_string(k + 1); }

// Fixed fiber constants plus the ones the slice assumes nonzero.
struct Slice {
  std::map<std::string, ExpPoly> values;
  std::vector<std::string> nonzero;
};

// Gauge slices for the residual constant fiber maps, indexed by adapted
// positions 2..n-1.
std::vector<Slice> gauge_slices(std::size_t n, LiftType cap) {
  std::vector<Slice> out;
  auto set = [](Slice& s, char kind, std::size_t k, long v) { s.values[fiber_name(kind, k)] = ExpPoly(v); };
  if (cap == LiftType::Affine) {
    // k: first element with a u-coefficient, translated to A_k = 0.
    // l: first other element with a constant part, scaled to A_l = 1.
    for (std::size_t k = 2; k < n; ++k) {
      for (std::size_t l = 2; l < n; ++l) {
        if (l == k) continue;
        Slice s;
        for (std::size_t j = 2; j < n; ++j) set(s, 'G', j, 0);
        for (std::size_t j = 2; j < k; ++j) set(s, 'B', j, 0);
        set(s, 'A', k, 0);
        for (std::size_t j = 2; j < l; ++j)
          if (j != k) set(s, 'A', j, 0);
        set(s, 'A', l, 1);
        s.nonzero.push_back(fiber_name('B', k));
        out.push_back(std::move(s));
      }
    }
    return out;
  }
  // Projective. k: first nonzero element, semisimple (fixed points 0 and
  // infinity) or nilpotent (equal to Du).
  for (std::size_t k = 2; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      Slice s;
      for (std::size_t j = 2; j < k; ++j)
        for (char c : {'A', 'B', 'G'}) set(s, c, j, 0);
      set(s, 'A', k, 0);
      set(s, 'G', k, 0);
      for (std::size_t j = k + 1; j < l; ++j) set(s, 'A', j, 0);
      set(s, 'A', l, 1);
      s.nonzero.push_back(fiber_name('B', k));
      out.push_back(std::move(s));

      Slice t;
      for (std::size_t j = 2; j < k; ++j)
        for (char c : {'A', 'B', 'G'}) set(t, c, j, 0);
      set(t, 'A', k, 1);
      set(t, 'B', k, 0);
      set(t, 'G', k, 0);
      for (std::size_t j = k + 1; j < l; ++j) set(t, 'G', j, 0);
      set(t, 'B', l, 0);
      t.nonzero.push_back(fiber_name('G', l));
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace

LiftSolveResult solve_ansatz_lifts(const LieAlgebra& base, LiftType cap, const TruncatedSpace& space,
                                   const SolveOptions& opts) {
  if (cap == LiftType::Metric) return solve_metric_lifts(base, space);
  LiftSolveResult res;
  res.cap = cap;
  const PointAssignment o = origin(Space::Base);
  const PointAssignment p = transitive_point(base);
  std::vector<SparseVec> st = stabilizer_at(base, p);
  bool abelian = is_abelian(base, st);
  bool solvable = is_solvable(base, st);
  if (abelian) res.notes.push_back("stabilizer is abelian: only metric lifts");
  else if (solvable) res.notes.push_back("stabilizer is solvable: no projective lifts");
  if (opts.prune && (abelian || (solvable && cap == LiftType::Projective))) {
    res.pruned = true;
    res.truncation = space.to_string();
    return res;
  }

  // The lifted stabilizer must act on the fiber through an image of
  // dimension 2 (affine) or 3 (projective).
  std::size_t need = cap == LiftType::Affine ? 2 : 3;
  if (st.size() < need) {
    res.notes.push_back("stabilizer has dimension " + std::to_string(st.size()) + " < " + std::to_string(need));
    res.truncation = space.to_string();
    return res;
  }

  if (p != o) throw Error(ErrorKind::NotTransitive, "the ansatz solver needs transitivity at the origin");
  NormalizedPair pair = find_normalized_pair(base, o);
  std::vector<VectorField> Ys{pair.X1, pair.X2};
  for (const auto& v : st) Ys.push_back(base.combination(v));
  LieAlgebra adapted(Ys);
  const std::size_t n = adapted.dim();

  std::optional<std::vector<std::vector<ExpPoly>>> transport;
  for (int w = 0; w <= opts.max_widen && !transport; ++w) {
    TruncatedSpace V = space.widened(2 * w);
    transport = pair_transport(adapted, V, &res.linear_unknowns);
    res.truncation = V.to_string();
  }
  if (!transport)
    throw Error(ErrorKind::TruncationExhausted, "pair transport has no full solution set within " + res.truncation);

  // Fiber data at the origin and the full u-components.
  std::vector<ExpPoly> phi(n);
  for (std::size_t k = 2; k < n; ++k) {
    phi[k] = sym(fiber_name('A', k)) + sym(fiber_name('B', k)) * U();
    if (cap == LiftType::Projective) phi[k] += sym(fiber_name('G', k)) * U() * U();
  }
  std::vector<ExpPoly> f(n);
  for (std::size_t j = 0; j + 2 < n; ++j)
    for (std::size_t k = 0; k + 2 < n; ++k) f[k + 2] += (*transport)[j][k] * phi[j + 2];
  res.fiber_unknowns = (cap == LiftType::Projective ? 3 : 2) * (n - 2);

  std::vector<ExpPoly> eqs;
  for (std::size_t k = 2; k < n; ++k) {
    for (std::size_t l = k + 1; l < n; ++l) {
      ExpPoly e = phi[k] * diff(phi[l], Var::U) - phi[l] * diff(phi[k], Var::U);
      for (const auto& [m, c] : adapted.c(k, l)) e -= phi[m].scaled(c);
      for (const auto& [shape, coeff] : by_shape(e)) eqs.push_back(coeff);
    }
  }

  std::vector<Slice> slices = gauge_slices(n, cap);
  res.slices = slices.size();
  std::vector<LiftBranch> accepted;
  for (const auto& slice : slices) {
    std::vector<ExpPoly> sub;
    bool inconsistent = false;
    std::set<std::string> unknowns;
    for (const auto& e : eqs) {
      ExpPoly r = substitute(e, slice.values);
      if (r.is_zero()) continue;
      if (r.is_constant()) {
        inconsistent = true;
        break;
      }
      auto s = r.symbols();
      unknowns.insert(s.begin(), s.end());
      sub.push_back(std::move(r));
    }
    if (inconsistent) continue;
    std::vector<std::string> all_unknowns;
    for (std::size_t k = 2; k < n; ++k)
      for (char c : {'A', 'B', 'G'}) {
        if (c == 'G' && cap != LiftType::Projective) continue;
        if (!slice.values.count(fiber_name(c, k))) all_unknowns.push_back(fiber_name(c, k));
      }
    std::vector<ConstantBranch> sols = solve_constant_system(sub, all_unknowns);
    for (auto& sol : sols) {
      ++res.raw_branches;
      ConstantBranch full = sol;
      for (const auto& [k, v] : slice.values) full.values.emplace(k, v);
      // Branches violating the slice's assumption belong to another slice.
      bool outside = false;
      for (const auto& name : slice.nonzero) {
        auto it = full.values.find(name);
        outside = outside || (it != full.values.end() && it->second.is_zero());
      }
      if (outside) continue;
      std::vector<VectorField> hatY;
      for (std::size_t k = 0; k < n; ++k) hatY.push_back(adapted[k].lifted(substitute(f[k], full.values)));
      LiftBranch b;
      b.assignment = full;
      try {
        b.generators = rebase_lift(hatY, base);
      } catch (const Error&) {
        continue;
      }
      finish_branch(b, base);
      if (!b.verified() || b.type != cap) continue;

      bool duplicate = false;
      for (auto& a : accepted) {
        if (find_equivalence(generic_specialization(b.generators), a.generators, base, cap, space)) {
          duplicate = true;
          break;
        }
        if (!a.assignment.free.empty() || b.assignment.free.empty()) continue;
        if (find_equivalence(generic_specialization(a.generators), b.generators, base, cap, space)) {
          a = b;
          duplicate = true;
          break;
        }
      }
      if (!duplicate) accepted.push_back(std::move(b));
    }
  }
  res.branches = std::move(accepted);
  return res;
}

namespace {

std::optional<EquivalenceWitness> metric_equivalence(const std::vector<VectorField>& a,
                                                     const std::vector<VectorField>& b, const LieAlgebra& base,
                                                     const TruncatedSpace& W) {
  // X_i(U) + Σ_s t_s b_{i,s} = a_i - b_{i,0}
  const std::set<std::string> syms = symbols_of(b);
  std::vector<std::string> free(syms.begin(), syms.end());
  const std::size_t nW = W.size();
  const std::size_t rhs = nW + free.size();
  std::map<std::pair<std::size_t, Monomial>, std::vector<std::pair<std::size_t, GaussianRational>>> rows;
  for (std::size_t i = 0; i < base.dim(); ++i) {
    if (a[i].au().contains(Var::U) || b[i].au().contains(Var::U)) return std::nullopt;
    for (std::size_t m = 0; m < nW; ++m) {
      ExpPoly moved = apply(base[i], ExpPoly::monomial(W.basis()[m]));
      for (const auto& t : moved.terms()) rows[{i, t.mono}].emplace_back(m, t.coeff);
    }
    for (const auto& t : a[i].au().terms()) rows[{i, t.mono}].emplace_back(rhs, t.coeff);
    for (const auto& t : b[i].au().terms()) {
      Monomial shape = t.mono;
      shape.params.clear();
      if (t.mono.params.empty()) {
        rows[{i, shape}].emplace_back(rhs, -t.coeff);
        continue;
      }
      if (t.mono.params.size() != 1 || t.mono.params[0].second != 1)
        throw Error(ErrorKind::InvalidArgument, "metric family is not linear in its constants");
      auto it = std::find(free.begin(), free.end(), t.mono.params[0].first);
      rows[{i, shape}].emplace_back(nW + static_cast<std::size_t>(it - free.begin()), t.coeff);
    }
  }
  Echelon ech(rhs + 1);
  for (auto& [key, r] : rows) ech.insert(make_sparse(std::move(r)));
  auto sol = ech.solve(rhs);
  if (!sol) return std::nullopt;
  SparseVec ucoords;
  EquivalenceWitness w;
  for (std::size_t s = 0; s < free.size(); ++s) w.parameters.emplace(free[s], ExpPoly(entry(*sol, nW + s)));
  for (const auto& [col, c] : *sol)
    if (col < nW) ucoords.emplace_back(col, c);
  w.map = FiberMap::translation(W.element(ucoords));
  std::vector<VectorField> pushed = push_all(a, w.map);
  if (pushed != substitute_all(b, w.parameters)) return std::nullopt;
  return w;
}

}  // namespace

std::optional<EquivalenceWitness> find_equivalence(const std::vector<VectorField>& from,
                                                   const std::vector<VectorField>& to, const LieAlgebra& base,
                                                   LiftType type, const TruncatedSpace& W) {
  if (!symbols_of(from).empty()) throw Error(ErrorKind::InvalidArgument, "source lift has free constants");
  std::vector<VectorField> a = rebase_lift(from, base);
  std::vector<VectorField> b = rebase_lift(to, base);
  for (auto* list : {&a, &b})
    for (auto& X : *list) X = X.as_total();
  if (type == LiftType::Metric) return metric_equivalence(a, b, base, W);

  std::set<std::string> target_syms = symbols_of(b);
  for (const char* r : {"MA", "MB", "MC", "MD", "ME"})
    if (target_syms.count(r)) throw Error(ErrorKind::InvalidArgument, std::string("reserved symbol ") + r);
  FiberMap m;
  std::vector<std::string> unknowns;
  ExpPoly det_eq;
  if (type == LiftType::Affine) {
    m.kind = FiberMap::Kind::Affine;
    m.A = sym("MA");
    m.A_inv = sym("ME");
    m.B = sym("MB");
    unknowns = {"MA", "MB", "ME"};
    det_eq = sym("MA") * sym("ME") - ExpPoly(1);
  } else {
    m.kind = FiberMap::Kind::Moebius;
    m.A = sym("MA");
    m.B = sym("MB");
    m.C = sym("MC");
    m.D = sym("MD");
    m.det_inv = sym("ME");
    unknowns = {"MA", "MB", "MC", "MD", "ME"};
    det_eq = (sym("MA") * sym("MD") - sym("MB") * sym("MC")) * sym("ME") - ExpPoly(1);
  }
  unknowns.insert(unknowns.end(), target_syms.begin(), target_syms.end());

  std::vector<ExpPoly> eqs{det_eq};
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].au().degree(Var::U) > 2 || b[i].au().degree(Var::U) > 2) return std::nullopt;
    ExpPoly diffp = pushforward(a[i], m).au() - b[i].au();
    for (const auto& [shape, coeff] : by_shape(diffp)) eqs.push_back(coeff);
  }
  const std::vector<long> trial{0, 1, 2, -1, 3};
  auto from_branch = [&](const ConstantBranch& sol, const std::map<std::string, ExpPoly>& pinned)
      -> std::optional<EquivalenceWitness> {
    std::size_t combos = 1;
    for (std::size_t k = 0; k < sol.free.size() && combos < 5000; ++k) combos *= trial.size();
    for (std::size_t idx = 0; idx < combos; ++idx) {
      std::map<std::string, ExpPoly> vals;
      std::size_t rest = idx;
      for (const auto& name : sol.free) {
        vals.emplace(name, ExpPoly(trial[rest % trial.size()]));
        rest /= trial.size();
      }
      std::map<std::string, ExpPoly> all = vals;
      all.insert(pinned.begin(), pinned.end());
      bool constant = true;
      for (const auto& [k, v] : sol.values) {
        ExpPoly val = substitute(v, vals);
        constant = constant && val.is_constant();
        all.emplace(k, val);
      }
      if (!constant) continue;
      auto get = [&](const char* s) { return all.count(s) ? all.at(s) : ExpPoly(); };
      EquivalenceWitness w;
      try {
        if (type == LiftType::Affine)
          w.map = FiberMap::affine(get("MA"), get("ME"), get("MB"));
        else
          w.map = FiberMap::moebius(get("MA"), get("MB"), get("MC"), get("MD"), get("ME"));
      } catch (const Error&) {
        continue;
      }
      for (const auto& s : target_syms) w.parameters.emplace(s, get(s.c_str()));
      if (push_all(a, w.map) == substitute_all(b, w.parameters)) return w;
    }
    return std::nullopt;
  };

  // Only one solution is needed, so when the branch enumeration gets stuck on
  // a curve like MB*ME = -1 an unknown is pinned to a small value and the
  // search retried.
  std::function<std::optional<EquivalenceWitness>(const std::map<std::string, ExpPoly>&)> search =
      [&](const std::map<std::string, ExpPoly>& pinned) -> std::optional<EquivalenceWitness> {
    std::vector<ExpPoly> sub;
    for (const auto& e : eqs) {
      ExpPoly r = substitute(e, pinned);
      if (r.is_zero()) continue;
      if (r.is_constant()) return std::nullopt;
      sub.push_back(std::move(r));
    }
    std::vector<std::string> open;
    for (const auto& u : unknowns)
      if (!pinned.count(u)) open.push_back(u);
    try {
      for (const auto& sol : solve_constant_system(sub, open))
        if (auto w = from_branch(sol, pinned)) return w;
      return std::nullopt;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BranchEnumerationFailed || pinned.size() >= 4) throw;
    }
    // Target constants first, then the map entries from the back.
    std::vector<std::string> order(target_syms.begin(), target_syms.end());
    for (auto it = unknowns.rbegin(); it != unknowns.rend(); ++it)
      if (!target_syms.count(*it)) order.push_back(*it);
    for (const auto& name : order) {
      if (pinned.count(name)) continue;
      for (long v : {1, 2, -1, 3}) {
        auto next = pinned;
        next.emplace(name, ExpPoly(v));
        try {
          if (auto w = search(next)) return w;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::BranchEnumerationFailed) throw;
        }
      }
      break;
    }
    return std::nullopt;
  };
  // (A, B, C, D) is only defined up to a common factor: fix D = 1, or D = 0
  // and C = 1.
  std::vector<std::map<std::string, ExpPoly>> starts{{}};
  if (type == LiftType::Projective) starts = {{{"MD", ExpPoly(1)}}, {{"MD", ExpPoly()}, {"MC", ExpPoly(1)}}};
  for (const auto& start : starts) {
    try {
      if (auto w = search(start)) return w;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BranchEnumerationFailed) throw;
    }
  }
  return std::nullopt;
}

}  // namespace liftlab
