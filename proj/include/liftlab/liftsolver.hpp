#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftlab/cohomology.hpp"
#include "liftlab/groebner.hpp"
#include "liftlab/verify.hpp"

namespace liftlab {

/// Moves the u-components of the pair generators hat[pair.first],
/// hat[pair.second] to zero. The pair must project to Dx and Dy or x*Dx + Dy.
/// Metric: translations u -> u + U. Affine: u -> A u + B with A = e^(linear).
/// Raises OutsideRing when the integrating factor is not an exponential of a
/// linear form, NotALift on non-projectable input, InvalidArgument for other
/// pairs or the projective cap.
std::vector<VectorField> normalize_lift(const std::vector<VectorField>& hat, std::pair<std::size_t, std::size_t> pair,
                                        LiftType cap);

struct LiftBranch {
  ConstantBranch assignment;            // fiber constants, possibly with free symbols
  std::vector<VectorField> generators;  // in the base basis order
  std::optional<LiftType> type;
  bool transitive = false;
  std::vector<CheckResult> checks;
  bool verified() const;
};

struct LiftSolveResult {
  LiftType cap = LiftType::Metric;
  std::vector<LiftBranch> branches;
  std::string truncation;
  bool pruned = false;
  std::vector<std::string> notes;
  // Diagnostics.
  std::size_t linear_unknowns = 0;
  std::size_t fiber_unknowns = 0;
  std::size_t slices = 0;
  std::size_t raw_branches = 0;
  std::vector<std::string> groebner_traces;
};

struct SolveOptions {
  /// Skip solving when the stabilizer rules out the cap.
  bool prune = true;
  /// Degree increments tried when the truncation is too small.
  int max_widen = 3;
};

/// Metric lifts from H1: the parametric family first, then one branch per
/// representative. Zero branches when H1 = 0.
LiftSolveResult solve_metric_lifts(const LieAlgebra& base, const TruncatedSpace& space);

/// Affine or projective lifts of exactly the cap's type, one branch per
/// equivalence class found. Raises TruncationExhausted,
/// BranchEnumerationFailed, LimitExceeded.
LiftSolveResult solve_ansatz_lifts(const LieAlgebra& base, LiftType cap, const TruncatedSpace& space,
                                   const SolveOptions& opts = {});

struct EquivalenceWitness {
  FiberMap map;
  std::map<std::string, ExpPoly> parameters;  // values chosen for the target's free symbols
};

/// A fiber map m and values of the free symbols of `to` with
/// pushforward(from, m) = to, generator by generator after rebasing both onto
/// the base basis. `from` must be free of parameters. Metric lifts are
/// compared by translations u -> u + U with U in `W`; affine and projective
/// lifts by constant affine and Moebius maps.
std::optional<EquivalenceWitness> find_equivalence(const std::vector<VectorField>& from,
                                                   const std::vector<VectorField>& to, const LieAlgebra& base,
                                                   LiftType type, const TruncatedSpace& W);

/// Substitutes distinct small primes for every parameter symbol, in name order.
std::vector<VectorField> generic_specialization(const std::vector<VectorField>& fields, long offset = 0);

}  // namespace liftlab
