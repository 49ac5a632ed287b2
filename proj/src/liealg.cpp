#include "liftlab/liealg.hpp"

#include <algorithm>

#include "liftlab/error.hpp"

namespace liftlab {

struct LieAlgebra::Linearization {
  Indexer<FieldKey> keys;
  TrackedEchelon span;
};

SparseVec linearize(const VectorField& X, Indexer<FieldKey>& keys) {
  std::vector<std::pair<std::size_t, GaussianRational>> entries;
  for (int comp = 0; comp < 3; ++comp) {
    for (const auto& t : X.component(static_cast<Var>(comp)).terms()) {
      entries.emplace_back(keys(FieldKey{comp, t.mono}), t.coeff);
    }
  }
  return make_sparse(std::move(entries));
}

namespace {

// Linearization against a fixed key set; nullopt if X uses an unknown key.
std::optional<SparseVec> linearize_known(const VectorField& X, const Indexer<FieldKey>& keys) {
  std::vector<std::pair<std::size_t, GaussianRational>> entries;
  for (int comp = 0; comp < 3; ++comp) {
    for (const auto& t : X.component(static_cast<Var>(comp)).terms()) {
      auto col = keys.find(FieldKey{comp, t.mono});
      if (!col) return std::nullopt;
      entries.emplace_back(*col, t.coeff);
    }
  }
  return make_sparse(std::move(entries));
}

}  // namespace

LieAlgebra::LieAlgebra(std::vector<VectorField> fields) : basis_(std::move(fields)) {
  if (basis_.empty()) throw Error(ErrorKind::InvalidArgument, "empty basis");
  for (const auto& f : basis_) {
    if (f.space() != basis_.front().space()) throw Error(ErrorKind::SpaceMismatch, "basis mixes C^2 and C^2 x C");
  }
  auto lin = std::make_shared<Linearization>();
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    if (!lin->span.insert(linearize(basis_[i], lin->keys))) {
      throw Error(ErrorKind::LinearlyDependent, "X" + std::to_string(i + 1) + " = " + basis_[i].to_string() +
                                                    " depends on the previous fields");
    }
  }
  std::size_t n = basis_.size();
  c_.assign(n, std::vector<SparseVec>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      VectorField w = bracket(basis_[i], basis_[j]);
      auto vec = linearize_known(w, lin->keys);
      std::optional<SparseVec> coords;
      if (vec) coords = lin->span.express(*vec);
      if (!coords) {
        throw Error(ErrorKind::NotClosed, "[X" + std::to_string(i + 1) + ", X" + std::to_string(j + 1) +
                                              "] = " + w.to_string() + " is not a constant combination of the basis");
      }
      c_[i][j] = *coords;
      SparseVec neg = *coords;
      for (auto& e : neg) e.second = -e.second;
      c_[j][i] = std::move(neg);
    }
  }
  lin_ = std::move(lin);
}

SparseVec LieAlgebra::bracket_coords(const SparseVec& a, const SparseVec& b) const {
  SparseVec out;
  for (const auto& [i, ai] : a) {
    for (const auto& [j, bj] : b) {
      if (i == j) continue;
      out = axpy(out, ai * bj, c_[i][j]);
    }
  }
  return out;
}

VectorField LieAlgebra::combination(const SparseVec& coords) const {
  VectorField out = basis_.front().scaled(GaussianRational{});
  for (const auto& [i, c] : coords) out += basis_[i].scaled(c);
  return out;
}

std::optional<SparseVec> LieAlgebra::coordinates(const VectorField& X) const {
  auto vec = linearize_known(X, lin_->keys);
  if (!vec) return std::nullopt;
  return lin_->span.express(*vec);
}

bool LieAlgebra::same_structure(const LieAlgebra& o) const {
  if (dim() != o.dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    for (std::size_t j = 0; j < dim(); ++j) {
      if (c_[i][j] != o.c_[i][j]) return false;
    }
  }
  return true;
}

PointAssignment origin(Space space) {
  PointAssignment p{{"x", 0}, {"y", 0}};
  if (space == Space::Total) p["u"] = 0;
  return p;
}

namespace {

std::vector<VectorField> evaluated(const LieAlgebra& g, const PointAssignment& p) {
  std::vector<VectorField> out;
  out.reserve(g.dim());
  for (const auto& f : g.basis()) {
    if (f.space() == Space::Base) {
      out.emplace_back(eval_at(f.ax(), p), eval_at(f.ay(), p));
    } else {
      out.emplace_back(eval_at(f.ax(), p), eval_at(f.ay(), p), eval_at(f.au(), p));
    }
  }
  return out;
}

}  // namespace

bool transitive_at(const LieAlgebra& g, const PointAssignment& p) {
  std::vector<std::vector<ExpPoly>> rows;
  for (const auto& f : evaluated(g, p)) {
    std::vector<ExpPoly> row{f.ax(), f.ay()};
    if (g.space() == Space::Total) row.push_back(f.au());
    rows.push_back(std::move(row));
  }
  int n = g.space() == Space::Total ? 3 : 2;
  return generic_rank(std::move(rows)) == n;
}

std::vector<SparseVec> stabilizer_at(const LieAlgebra& g, const PointAssignment& p) {
  Indexer<FieldKey> keys;
  std::vector<SparseVec> cols;
  for (const auto& f : evaluated(g, p)) cols.push_back(linearize(f, keys));
  // Row per key: Σ_i λ_i (X_i(p))[key] = 0.
  std::vector<std::vector<std::pair<std::size_t, GaussianRational>>> rows(keys.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (const auto& [k, v] : cols[i]) rows[k].emplace_back(i, v);
  }
  Echelon e(g.dim());
  for (auto& r : rows) e.insert(make_sparse(std::move(r)));
  return e.nullspace();
}

std::vector<std::size_t> derived_series_dims(const LieAlgebra& g, const std::vector<SparseVec>& sub) {
  auto span_basis = [&](const std::vector<SparseVec>& vs) {
    Echelon e(g.dim());
    for (const auto& v : vs) e.insert(v);
    e.make_reduced();
    std::vector<SparseVec> out;
    for (const auto& [p, row] : e.rows()) out.push_back(row);
    return out;
  };
  std::vector<SparseVec> cur = span_basis(sub);
  std::vector<std::size_t> dims{cur.size()};
  while (!cur.empty()) {
    std::vector<SparseVec> brackets;
    for (std::size_t a = 0; a < cur.size(); ++a) {
      for (std::size_t b = a + 1; b < cur.size(); ++b) brackets.push_back(g.bracket_coords(cur[a], cur[b]));
    }
    std::vector<SparseVec> next = span_basis(brackets);
    if (next.size() == cur.size()) break;
    dims.push_back(next.size());
    cur = std::move(next);
  }
  return dims;
}

bool is_solvable(const LieAlgebra& g, const std::vector<SparseVec>& sub) {
  return derived_series_dims(g, sub).back() == 0;
}

bool is_abelian(const LieAlgebra& g, const std::vector<SparseVec>& sub) {
  auto dims = derived_series_dims(g, sub);
  return dims.front() == 0 || (dims.size() > 1 && dims[1] == 0);
}

std::string_view to_string(LiftType t) {
  switch (t) {
    case LiftType::Metric: return "metric";
    case LiftType::Affine: return "affine";
    case LiftType::Projective: return "projective";
  }
  return "?";
}

std::optional<LiftType> lift_type_from_string(std::string_view s) {
  if (s == "metric") return LiftType::Metric;
  if (s == "affine") return LiftType::Affine;
  if (s == "projective") return LiftType::Projective;
  return std::nullopt;
}

LiftTypeTag classify_lift_type(const LieAlgebra& hat, const LieAlgebra& base, const PointAssignment& p) {
  if (hat.space() != Space::Total || base.space() != Space::Base || hat.dim() != base.dim()) {
    throw Error(ErrorKind::NotALift, "expected a lift on C^2 x C of a base algebra of the same dimension");
  }
  for (std::size_t i = 0; i < hat.dim(); ++i) {
    if (!hat[i].is_projectable() || !(project(hat[i]) == base[i])) {
      throw Error(ErrorKind::NotALift, "generator " + std::to_string(i + 1) + " = " + hat[i].to_string() +
                                           " does not project to " + base[i].to_string());
    }
  }
  if (!hat.same_structure(base)) throw Error(ErrorKind::NotALift, "structure constants differ from the base");

  PointAssignment base_point{{"x", p.at("x")}, {"y", p.at("y")}};
  std::vector<ExpPoly> restricted;
  int max_deg = -1;
  for (const auto& s : stabilizer_at(base, base_point)) {
    ExpPoly f = eval_at(hat.combination(s).au(), base_point);
    if (f.is_zero()) continue;
    max_deg = std::max(max_deg, f.degree(Var::U));
    restricted.push_back(std::move(f));
  }
  std::vector<std::vector<ExpPoly>> rows;
  for (const auto& f : restricted) {
    std::vector<ExpPoly> row;
    for (int k = 0; k <= max_deg; ++k) row.push_back(f.coefficient(Var::U, k));
    rows.push_back(std::move(row));
  }
  int rank = generic_rank(rows);
  if (rank < 1 || rank > 3 || max_deg != rank - 1) {
    std::string detail = "fiber action of the stabilizer is spanned by";
    for (const auto& f : restricted) detail += " " + f.to_string() + ";";
    if (restricted.empty()) detail += " nothing";
    throw Error(ErrorKind::NotTransitive, detail);
  }
  return {static_cast<LiftType>(rank), std::move(restricted)};
}

std::vector<VectorField> rebase_lift(const std::vector<VectorField>& hat, const LieAlgebra& base) {
  if (hat.size() != base.dim()) throw Error(ErrorKind::NotALift, "dimension differs from the base");
  TrackedEchelon proj;
  for (std::size_t j = 0; j < hat.size(); ++j) {
    if (!hat[j].is_projectable()) throw Error(ErrorKind::NotALift, hat[j].to_string() + " is not projectable");
    auto coords = base.coordinates(project(hat[j]));
    if (!coords) throw Error(ErrorKind::NotALift, "projection of " + hat[j].to_string() + " is outside the base");
    if (!proj.insert(*coords)) throw Error(ErrorKind::NotALift, "projections are linearly dependent");
  }
  std::vector<VectorField> out;
  for (std::size_t k = 0; k < base.dim(); ++k) {
    auto comb = proj.express(SparseVec{{k, GaussianRational(1)}});
    VectorField f = hat.front().scaled(GaussianRational{});
    for (const auto& [j, c] : *comb) f += hat[j].scaled(c);
    out.push_back(std::move(f));
  }
  return out;
}

namespace {

bool is_field(const VectorField& f, const char* text) { return f == VectorField::parse(text, f.space()); }

std::vector<SparseVec> pair_candidates(std::size_t n, int max_terms) {
  std::vector<SparseVec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({{i, GaussianRational(1)}});
  if (max_terms < 2) return out;
  const long second[] = {1, -1, 2, -2};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (long a : {1L, 2L}) {
        for (long b : second) {
          if (a == 2 && (b == 2 || b == -2)) continue;
          out.push_back({{i, GaussianRational(a)}, {j, GaussianRational(b)}});
        }
      }
    }
  }
  if (max_terms < 3) return out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (long b : second) {
          for (long c : second) {
            out.push_back({{i, GaussianRational(1)}, {j, GaussianRational(b)}, {k, GaussianRational(c)}});
          }
        }
      }
    }
  }
  return out;
}

SparseVec scaled(const SparseVec& v, const GaussianRational& c) {
  SparseVec out;
  if (c.is_zero()) return out;
  for (const auto& [i, x] : v) out.emplace_back(i, x * c);
  return out;
}

}  // namespace

NormalizedPair find_normalized_pair(const LieAlgebra& g, const PointAssignment& p) {
  if (g.space() != Space::Base) throw Error(ErrorKind::InvalidArgument, "expected an algebra on C^2");
  if (!transitive_at(g, p)) throw Error(ErrorKind::NoTransitivePair, "the algebra is not transitive at the point");

  std::optional<std::size_t> dx;
  std::optional<std::size_t> dy;
  std::optional<std::size_t> affine;
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (!dx && is_field(g[i], "Dx")) dx = i;
    if (!dy && is_field(g[i], "Dy")) dy = i;
    if (!affine && is_field(g[i], "x*Dx + Dy")) affine = i;
  }
  bool at_origin = p.at("x").is_zero() && p.at("y").is_zero();
  if (dx && (dy || affine) && at_origin) {
    NormalizedPair np;
    np.c1 = {{*dx, GaussianRational(1)}};
    np.c2 = {{dy ? *dy : *affine, GaussianRational(1)}};
    np.X1 = g[*dx];
    np.X2 = g[dy ? *dy : *affine];
    np.abelian = dy.has_value();
    np.literal = true;
    return np;
  }

  std::vector<std::pair<GaussianRational, GaussianRational>> values;
  for (const auto& f : g.basis()) {
    ExpPoly a = eval_at(f.ax(), p);
    ExpPoly b = eval_at(f.ay(), p);
    if (!a.is_constant() || !b.is_constant()) throw Error(ErrorKind::InvalidArgument, "parameters in base algebra");
    values.emplace_back(a.constant_value(), b.constant_value());
  }
  auto value = [&](const SparseVec& v) {
    std::pair<GaussianRational, GaussianRational> out;
    for (const auto& [i, c] : v) {
      out.first += c * values[i].first;
      out.second += c * values[i].second;
    }
    return out;
  };

  for (int max_terms = 1; max_terms <= 3; ++max_terms) {
    auto cands = pair_candidates(g.dim(), max_terms);
    std::vector<std::pair<GaussianRational, GaussianRational>> vals;
    for (const auto& c : cands) vals.push_back(value(c));
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (vals[i].first.is_zero() && vals[i].second.is_zero()) continue;
      for (std::size_t j = i + 1; j < cands.size(); ++j) {
        GaussianRational det = vals[i].first * vals[j].second - vals[i].second * vals[j].first;
        if (det.is_zero()) continue;
        const SparseVec& A = cands[i];
        const SparseVec& B = cands[j];
        SparseVec w = g.bracket_coords(A, B);
        TrackedEchelon te;
        te.insert(A);
        te.insert(B);
        auto ab = te.express(w);
        if (!ab) continue;
        GaussianRational a = entry(*ab, 0);
        GaussianRational b = entry(*ab, 1);
        NormalizedPair np;
        if (a.is_zero() && b.is_zero()) {
          np.c1 = A;
          np.c2 = B;
        } else if (!a.is_zero()) {
          // [aA+bB, B/a] = aA+bB
          np.c1 = axpy(scaled(A, a), b, B);
          np.c2 = scaled(B, a.reciprocal());
          np.abelian = false;
        } else {
          // [B, -A/b] = B
          np.c1 = B;
          np.c2 = scaled(A, -b.reciprocal());
          np.abelian = false;
        }
        np.X1 = g.combination(np.c1);
        np.X2 = g.combination(np.c2);
        return np;
      }
    }
  }
  throw Error(ErrorKind::NoTransitivePair, "no transitive two-dimensional subalgebra in the search grid");
}

}  // namespace liftlab
