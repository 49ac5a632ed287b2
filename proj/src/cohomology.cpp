#include "liftlab/cohomology.hpp"

#include <algorithm>
#include <set>

#include "liftlab/error.hpp"

namespace liftlab {

TruncatedSpace::TruncatedSpace(int degree_bound, int freq_budget, std::vector<Frequency> frequencies)
    : degree_bound_(degree_bound), freq_budget_(freq_budget), frequencies_(std::move(frequencies)) {
  std::sort(frequencies_.begin(), frequencies_.end());
  frequencies_.erase(std::unique(frequencies_.begin(), frequencies_.end()), frequencies_.end());
  for (const auto& f : frequencies_) {
    for (int d = 0; d <= degree_bound_; ++d) {
      for (int a = d; a >= 0; --a) {
        Monomial m;
        m.x = a;
        m.y = d - a;
        m.freq = f;
        basis_.push_back(m);
      }
    }
  }
  std::sort(basis_.begin(), basis_.end());
  for (std::size_t k = 0; k < basis_.size(); ++k) index_.emplace(basis_[k], k);
}

std::optional<std::size_t> TruncatedSpace::index_of(const Monomial& m) const {
  auto it = index_.find(m);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<SparseVec> TruncatedSpace::coordinates(const ExpPoly& p) const {
  std::vector<std::pair<std::size_t, GaussianRational>> out;
  for (const auto& t : p.terms()) {
    auto k = index_of(t.mono);
    if (!k) return std::nullopt;
    out.emplace_back(*k, t.coeff);
  }
  return make_sparse(std::move(out));
}

ExpPoly TruncatedSpace::element(const SparseVec& coords) const {
  std::vector<Term> terms;
  for (const auto& [k, c] : coords) terms.push_back({c, basis_.at(k)});
  return ExpPoly::from_terms(std::move(terms));
}

TruncatedSpace TruncatedSpace::widened(int extra) const {
  return TruncatedSpace(degree_bound_ + extra, freq_budget_, frequencies_);
}

std::string TruncatedSpace::to_string() const {
  std::string f;
  for (const auto& w : frequencies_) f += (f.empty() ? "" : ", ") + (w.is_zero() ? std::string("0") : w.to_string());
  return "D=" + std::to_string(degree_bound_) + ", F=" + std::to_string(freq_budget_) + ", frequencies {" + f + "}";
}

int max_coefficient_degree(const LieAlgebra& g) {
  int d = 0;
  for (const auto& X : g.basis()) {
    for (Var v : {Var::X, Var::Y, Var::U}) d = std::max(d, X.component(v).degree_xy());
  }
  return d;
}

namespace {

// Eigenvalues of ad(P) among the diagonal entries of its matrix, confirmed
// by a rank drop of ad(P) - λ.
std::set<GaussianRational> ad_eigenvalues(const LieAlgebra& g, const SparseVec& P) {
  std::size_t n = g.dim();
  std::vector<SparseVec> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(g.bracket_coords(P, SparseVec{{j, GaussianRational(1)}}));
  std::set<GaussianRational> candidates;
  for (std::size_t j = 0; j < n; ++j) candidates.insert(entry(cols[j], j));
  std::set<GaussianRational> out;
  for (const auto& lambda : candidates) {
    Echelon e(n);
    for (std::size_t j = 0; j < n; ++j) e.insert(axpy(cols[j], -lambda, SparseVec{{j, GaussianRational(1)}}));
    if (e.rank() < n) out.insert(lambda);
  }
  return out;
}

}  // namespace

std::vector<Frequency> base_frequencies(const LieAlgebra& g) {
  std::set<Frequency> out{Frequency{}};
  for (const auto& X : g.basis()) {
    for (Var v : {Var::X, Var::Y, Var::U}) {
      auto fs = X.component(v).frequencies();
      out.insert(fs.begin(), fs.end());
    }
  }
  if (g.space() == Space::Base) {
    try {
      NormalizedPair pair = find_normalized_pair(g, origin(Space::Base));
      if (pair.literal) {
        for (const auto& l : ad_eigenvalues(g, pair.c1)) out.insert(Frequency{l, 0});
        for (const auto& l : ad_eigenvalues(g, pair.c2)) out.insert(Frequency{0, l});
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoTransitivePair) throw;
    }
  }
  return {out.begin(), out.end()};
}

TruncatedSpace build_truncated_space(const LieAlgebra& g, int D, int F) {
  int need = max_coefficient_degree(g);
  if (D < need) {
    throw Error(ErrorKind::DegreeTooSmall,
                "degree bound " + std::to_string(D) + " is below the coefficient degree " + std::to_string(need));
  }
  if (F < 1) throw Error(ErrorKind::InvalidArgument, "frequency budget must be at least 1");
  std::vector<Frequency> base = base_frequencies(g);
  std::set<Frequency> sums{Frequency{}};
  for (int k = 0; k < F; ++k) {
    std::set<Frequency> next = sums;
    for (const auto& s : sums) {
      for (const auto& b : base) next.insert(s + b);
    }
    sums = std::move(next);
  }
  return TruncatedSpace(D, F, {sums.begin(), sums.end()});
}

TruncatedSpace default_truncation(const LieAlgebra& g) { return build_truncated_space(g, max_coefficient_degree(g) + 3, 2); }

std::string Cocycle::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components.size(); ++i) out += (i ? ", " : "") + components[i].to_string();
  return out + ")";
}

namespace {

void check_length(const LieAlgebra& g, const Cocycle& psi) {
  if (psi.components.size() != g.dim()) {
    throw Error(ErrorKind::InvalidArgument, "cocycle has " + std::to_string(psi.components.size()) +
                                                " components for an algebra of dimension " + std::to_string(g.dim()));
  }
}

}  // namespace

std::vector<ExpPoly> differential(const LieAlgebra& g, const Cocycle& psi) {
  check_length(g, psi);
  std::vector<ExpPoly> out;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    for (std::size_t j = i + 1; j < g.dim(); ++j) {
      ExpPoly d = apply(g[i], psi.components[j]) - apply(g[j], psi.components[i]);
      for (const auto& [k, c] : g.c(i, j)) d -= psi.components[k].scaled(c);
      out.push_back(std::move(d));
    }
  }
  return out;
}

bool is_cocycle(const LieAlgebra& g, const Cocycle& psi) {
  for (const auto& d : differential(g, psi)) {
    if (!d.is_zero()) return false;
  }
  return true;
}

Cocycle coboundary(const LieAlgebra& g, const ExpPoly& U) {
  Cocycle out;
  for (const auto& X : g.basis()) out.components.push_back(apply(X, U));
  return out;
}

namespace {

using RowKey = std::pair<std::size_t, Monomial>;

// Collects sparse rows keyed by (slot, monomial).
class RowBuilder {
 public:
  void add(std::size_t slot, const ExpPoly& p, std::size_t col, const GaussianRational& scale) {
    for (const auto& t : p.terms()) rows_[{slot, t.mono}].emplace_back(col, t.coeff * scale);
  }
  void add_term(std::size_t slot, const Monomial& m, std::size_t col, const GaussianRational& c) {
    rows_[{slot, m}].emplace_back(col, c);
  }
  template <class F>
  void for_each(F&& f) {
    for (auto& [key, entries] : rows_) f(key, make_sparse(std::move(entries)));
  }

 private:
  std::map<RowKey, std::vector<std::pair<std::size_t, GaussianRational>>> rows_;
};

void require_base(const LieAlgebra& g) {
  if (g.space() != Space::Base) throw Error(ErrorKind::SpaceMismatch, "cohomology needs an algebra on C^2");
}

}  // namespace

CohomologyResult compute_h1(const LieAlgebra& g, const TruncatedSpace& space) {
  require_base(g);
  const std::size_t n = g.dim();
  const std::size_t V = space.size();
  auto col = [V](std::size_t i, std::size_t m) { return i * V + m; };

  // images[i][m] = X_i(e_m)
  std::vector<std::vector<ExpPoly>> images(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& m : space.basis()) images[i].push_back(apply(g[i], ExpPoly::monomial(m)));
  }

  // Cocycle equations, one block per pair i < j.
  RowBuilder eqs;
  std::size_t slot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++slot) {
      for (std::size_t m = 0; m < V; ++m) {
        eqs.add(slot, images[i][m], col(j, m), 1);
        eqs.add(slot, images[j][m], col(i, m), -1);
        for (const auto& [k, c] : g.c(i, j)) eqs.add_term(slot, space.basis()[m], col(k, m), -c);
      }
    }
  }
  Echelon z(n * V);
  eqs.for_each([&](const RowKey&, SparseVec row) { z.insert(std::move(row)); });

  CohomologyResult res{0, 0, 0, {}, space, z.nullspace(), {}};
  res.dim_Z1 = res.cocycle_basis.size();

  // W: functions of degree D+1 whose images all land in the space.
  TruncatedSpace wide = space.widened(1);
  std::vector<std::vector<ExpPoly>> w_images(n);
  RowBuilder outside;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t w = 0; w < wide.size(); ++w) {
      ExpPoly img = apply(g[i], ExpPoly::monomial(wide.basis()[w]));
      for (const auto& t : img.terms()) {
        if (!space.index_of(t.mono)) outside.add_term(i, t.mono, w, t.coeff);
      }
      w_images[i].push_back(std::move(img));
    }
  }
  Echelon wcon(wide.size());
  outside.for_each([&](const RowKey&, SparseVec row) { wcon.insert(std::move(row)); });
  Echelon b(n * V);
  for (const auto& u : wcon.nullspace()) {
    std::vector<std::pair<std::size_t, GaussianRational>> dU;
    for (std::size_t i = 0; i < n; ++i) {
      ExpPoly img;
      for (const auto& [w, c] : u) img += w_images[i][w].scaled(c);
      for (const auto& t : img.terms()) dU.emplace_back(col(i, *space.index_of(t.mono)), t.coeff);
    }
    SparseVec v = make_sparse(std::move(dU));
    if (b.insert(v)) res.coboundary_span.push_back(std::move(v));
  }
  res.dim_B1 = b.rank();
  b.make_reduced();

  // Representatives: Z¹ vectors independent modulo B¹, reduced against B¹ and
  // each other.
  Echelon reps(n * V);
  for (const auto& zv : res.cocycle_basis) {
    SparseVec r = b.reduce(zv);
    if (!r.empty()) reps.insert(std::move(r));
  }
  reps.make_reduced();
  res.dim_H1 = reps.rank();
  for (const auto& [pivot, row] : reps.rows()) {
    Cocycle c;
    for (std::size_t i = 0; i < n; ++i) {
      SparseVec part;
      for (const auto& [k, v] : row) {
        if (k / V == i) part.emplace_back(k % V, v);
      }
      c.components.push_back(space.element(part));
    }
    res.representatives.push_back(std::move(c));
  }
  return res;
}

std::vector<VectorField> metric_lift_from_cocycle(const LieAlgebra& g, const Cocycle& psi) {
  require_base(g);
  check_length(g, psi);
  auto d = differential(g, psi);
  for (std::size_t k = 0; k < d.size(); ++k) {
    if (!d[k].is_zero()) throw Error(ErrorKind::NotACocycle, "d(psi) has nonzero component " + d[k].to_string());
  }
  std::vector<VectorField> out;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (psi.components[i].contains(Var::U)) throw Error(ErrorKind::NotACocycle, "component depends on u");
    out.push_back(g[i].lifted(psi.components[i]));
  }
  return out;
}

Cocycle cocycle_of_lift(const std::vector<VectorField>& hat, const LieAlgebra& g) {
  Cocycle c;
  for (const auto& X : rebase_lift(hat, g)) {
    if (X.au().contains(Var::U)) throw Error(ErrorKind::NotALift, X.to_string() + " is not of metric form");
    c.components.push_back(X.au());
  }
  return c;
}

std::optional<ExpPoly> is_coboundary(const LieAlgebra& g, const Cocycle& psi, const TruncatedSpace& W) {
  require_base(g);
  check_length(g, psi);
  for (const auto& p : psi.components) {
    if (p.has_params() || p.contains(Var::U)) {
      throw Error(ErrorKind::InvalidArgument, "is_coboundary needs a parameter-free cocycle in x, y");
    }
  }
  const std::size_t rhs = W.size();
  RowBuilder rows;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    for (std::size_t w = 0; w < W.size(); ++w) rows.add(i, apply(g[i], ExpPoly::monomial(W.basis()[w])), w, 1);
    rows.add(i, psi.components[i], rhs, 1);
  }
  Echelon e(rhs + 1);
  rows.for_each([&](const RowKey&, SparseVec row) { e.insert(std::move(row)); });
  auto sol = e.solve(rhs);
  if (!sol) return std::nullopt;
  return W.element(*sol);
}

}  // namespace liftlab
