#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftlab/linalg.hpp"
#include "liftlab/vfield.hpp"

namespace liftlab {

/// An ordered basis of vector fields closed under the bracket, with its
/// structure constants: [X_i, X_j] = Σ_k c(i,j)[k] X_k.
class LieAlgebra {
 public:
  /// Checks independence over constants and closure identically in any
  /// parameter symbols. Raises LinearlyDependent or NotClosed.
  explicit LieAlgebra(std::vector<VectorField> fields);

  const std::vector<VectorField>& basis() const { return basis_; }
  const VectorField& operator[](std::size_t i) const { return basis_[i]; }
  std::size_t dim() const { return basis_.size(); }
  Space space() const { return basis_.front().space(); }
  const SparseVec& c(std::size_t i, std::size_t j) const { return c_[i][j]; }

  /// Bracket of two elements given by basis coordinates.
  SparseVec bracket_coords(const SparseVec& a, const SparseVec& b) const;
  VectorField combination(const SparseVec& coords) const;
  /// Coordinates of X in the basis, or nullopt when X is not in the span.
  std::optional<SparseVec> coordinates(const VectorField& X) const;
  /// Same structure constants, entry for entry.
  bool same_structure(const LieAlgebra& o) const;

 private:
  std::vector<VectorField> basis_;
  std::vector<std::vector<SparseVec>> c_;
  struct Linearization;
  std::shared_ptr<const Linearization> lin_;
};

/// Linear coordinates of a field: one column per (component, monomial).
using FieldKey = std::pair<int, Monomial>;
SparseVec linearize(const VectorField& X, Indexer<FieldKey>& keys);

PointAssignment origin(Space space);

/// Generic rank of the evaluated fields equals the dimension of the space.
bool transitive_at(const LieAlgebra& g, const PointAssignment& p);
/// Basis (as coordinates) of the constant combinations vanishing at p.
std::vector<SparseVec> stabilizer_at(const LieAlgebra& g, const PointAssignment& p);

/// Dimensions of the derived series of the subalgebra spanned by `sub`
/// (coordinates in g), down to the first repeated dimension.
std::vector<std::size_t> derived_series_dims(const LieAlgebra& g, const std::vector<SparseVec>& sub);
bool is_solvable(const LieAlgebra& g, const std::vector<SparseVec>& sub);
bool is_abelian(const LieAlgebra& g, const std::vector<SparseVec>& sub);

enum class LiftType { Metric = 1, Affine = 2, Projective = 3 };
std::string_view to_string(LiftType t);
std::optional<LiftType> lift_type_from_string(std::string_view s);

struct LiftTypeTag {
  LiftType type;
  /// ∂u coefficients of the lifted stabilizer restricted to the fiber.
  std::vector<ExpPoly> witness;
};

/// Checks that hat is a lift of base with hat[i] projecting to base[i] and
/// classifies the fiber action of the lifted stabilizer of p (a base point).
/// Raises NotALift or NotTransitive.
LiftTypeTag classify_lift_type(const LieAlgebra& hat, const LieAlgebra& base, const PointAssignment& p);

/// A lift expressed on a basis projecting onto base's basis element by
/// element. Raises NotALift when the projections do not span base.
std::vector<VectorField> rebase_lift(const std::vector<VectorField>& hat, const LieAlgebra& base);

struct NormalizedPair {
  SparseVec c1;
  SparseVec c2;
  VectorField X1;
  VectorField X2;
  bool abelian = true;  // [X1, X2] = 0, otherwise [X1, X2] = X1
  bool literal = false;  // X1 = Dx and X2 = Dy or x*Dx + Dy
};

/// Two-dimensional subalgebra transitive at p with [X1,X2] in {0, X1}.
/// Raises NoTransitivePair.
NormalizedPair find_normalized_pair(const LieAlgebra& g, const PointAssignment& p);

}  // namespace liftlab
