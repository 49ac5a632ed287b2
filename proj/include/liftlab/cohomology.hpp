#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftlab/liealg.hpp"

namespace liftlab {

/// Finite-dimensional stand-in for analytic functions on the plane:
/// span of x^a y^b e^{ω} with a + b <= D and ω in a finite frequency set.
class TruncatedSpace {
 public:
  TruncatedSpace(int degree_bound, int freq_budget, std::vector<Frequency> frequencies);

  int degree_bound() const { return degree_bound_; }
  int freq_budget() const { return freq_budget_; }
  const std::vector<Frequency>& frequencies() const { return frequencies_; }
  const std::vector<Monomial>& basis() const { return basis_; }
  std::size_t size() const { return basis_.size(); }

  std::optional<std::size_t> index_of(const Monomial& m) const;
  /// Coordinates of p, or nullopt if some term lies outside the space.
  /// p must be free of u and parameters.
  std::optional<SparseVec> coordinates(const ExpPoly& p) const;
  ExpPoly element(const SparseVec& coords) const;
  /// Same frequencies, degree bound D + extra.
  TruncatedSpace widened(int extra) const;
  std::string to_string() const;

 private:
  int degree_bound_;
  int freq_budget_;
  std::vector<Frequency> frequencies_;
  std::vector<Monomial> basis_;
  std::map<Monomial, std::size_t> index_;
};

/// Largest x,y-degree among the coefficients of the basis fields.
int max_coefficient_degree(const LieAlgebra& g);

/// Frequencies seen in the generators plus those forced by the spectrum of
/// ad(X1), ad(X2) for a literal normalized pair.
std::vector<Frequency> base_frequencies(const LieAlgebra& g);

/// All sums of at most F base frequencies. Raises DegreeTooSmall when D is
/// below the coefficient degree of g.
TruncatedSpace build_truncated_space(const LieAlgebra& g, int D, int F = 2);
/// D = max coefficient degree + 3, F = 2.
TruncatedSpace default_truncation(const LieAlgebra& g);

/// ψ_{X_i} for each basis element X_i.
struct Cocycle {
  std::vector<ExpPoly> components;
  std::string to_string() const;
  friend bool operator==(const Cocycle&, const Cocycle&) = default;
};

/// (dψ)(X_i, X_j) = X_i(ψ_j) - X_j(ψ_i) - ψ_{[X_i, X_j]} for i < j, in row-major order.
std::vector<ExpPoly> differential(const LieAlgebra& g, const Cocycle& psi);
bool is_cocycle(const LieAlgebra& g, const Cocycle& psi);
/// (dU)_i = X_i(U).
Cocycle coboundary(const LieAlgebra& g, const ExpPoly& U);

struct CohomologyResult {
  std::size_t dim_Z1 = 0;
  std::size_t dim_B1 = 0;
  std::size_t dim_H1 = 0;
  std::vector<Cocycle> representatives;
  TruncatedSpace truncation;
  /// Z¹ and B¹ as coordinate vectors over (basis index, space monomial),
  /// column = i * |V| + m.
  std::vector<SparseVec> cocycle_basis;
  std::vector<SparseVec> coboundary_span;
};

CohomologyResult compute_h1(const LieAlgebra& g, const TruncatedSpace& space);

/// Generators X_i + ψ_i ∂u. Raises NotACocycle.
std::vector<VectorField> metric_lift_from_cocycle(const LieAlgebra& g, const Cocycle& psi);
/// The u-components of a metric lift rebased onto g's basis. Raises NotALift
/// if the lift is not of metric form (u-free components).
Cocycle cocycle_of_lift(const std::vector<VectorField>& hat, const LieAlgebra& g);

/// U in the span of W with dU = ψ, or nullopt. ψ must be parameter-free.
std::optional<ExpPoly> is_coboundary(const LieAlgebra& g, const Cocycle& psi, const TruncatedSpace& W);

}  // namespace liftlab
