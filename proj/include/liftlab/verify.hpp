#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liftlab/catalog.hpp"

namespace liftlab {

struct CheckResult {
  std::string name;  // closure, transitivity, projection, kernel, structure, type
  bool ok = false;
  std::string detail;
};

struct VerificationReport {
  InstanceRef instance;
  std::vector<CheckResult> checks;
  std::optional<LiftType> type;  // lifts only
  bool ok() const;
  /// First failing check as "name: detail", empty when ok.
  std::string first_failure() const;
};

/// Runs every check that applies to the instance and never throws for
/// mathematical failures; they are recorded in the report.
VerificationReport verify_instance(const Instance& inst);

/// Verifies a lift given as generators over a base algebra, with the type
/// computed at p and at a secondary base point where exact evaluation allows.
/// `expected` is compared when given.
std::vector<CheckResult> verify_lift(const std::vector<VectorField>& hat, const LieAlgebra& base,
                                     const PointAssignment& p, std::optional<LiftType> expected,
                                     std::optional<LiftType>* found = nullptr);

}  // namespace liftlab
