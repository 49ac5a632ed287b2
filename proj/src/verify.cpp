#include "liftlab/verify.hpp"

#include "liftlab/error.hpp"

namespace liftlab {

bool VerificationReport::ok() const {
  for (const auto& c : checks) {
    if (!c.ok) return false;
  }
  return true;
}

std::string VerificationReport::first_failure() const {
  for (const auto& c : checks) {
    if (!c.ok) return c.name + ": " + c.detail;
  }
  return "";
}

namespace {

CheckResult pass(std::string name, std::string detail = "") { return {std::move(name), true, std::move(detail)}; }
CheckResult fail(std::string name, std::string detail) { return {std::move(name), false, std::move(detail)}; }

// Points tried after the sample point; the first one that evaluates exactly
// is used.
const PointAssignment kSecondary[] = {{{"x", 0}, {"y", 1}}, {{"x", 1}, {"y", 0}}};

}  // namespace

std::vector<CheckResult> verify_lift(const std::vector<VectorField>& hat, const LieAlgebra& base,
                                     const PointAssignment& p, std::optional<LiftType> expected,
                                     std::optional<LiftType>* found) {
  std::vector<CheckResult> out;
  std::optional<LieAlgebra> lifted;
  try {
    lifted.emplace(hat);
    out.push_back(pass("closure", "dimension " + std::to_string(lifted->dim())));
  } catch (const Error& e) {
    out.push_back(fail("closure", e.what()));
    return out;
  }
  for (const auto& X : hat) {
    if (!X.is_projectable()) {
      out.push_back(fail("projection", X.to_string() + " is not projectable"));
      return out;
    }
  }
  std::vector<VectorField> rebased;
  try {
    rebased = rebase_lift(hat, base);
    out.push_back(pass("projection", "projections span the base"));
    out.push_back(pass("kernel", "projection is injective on the lift"));
  } catch (const Error& e) {
    out.push_back(fail("projection", e.what()));
    return out;
  }
  std::optional<LieAlgebra> rebased_alg;
  try {
    rebased_alg.emplace(rebased);
  } catch (const Error& e) {
    out.push_back(fail("structure", e.what()));
    return out;
  }
  if (!rebased_alg->same_structure(base)) {
    out.push_back(fail("structure", "structure constants differ from the base"));
    return out;
  }
  out.push_back(pass("structure", "same structure constants as the base"));

  std::optional<LiftType> type;
  std::string where;
  std::vector<PointAssignment> points{{{"x", p.at("x")}, {"y", p.at("y")}}};
  for (const auto& q : kSecondary) points.push_back(q);
  bool secondary_done = false;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k > 0 && secondary_done) break;
    LiftType t;
    try {
      t = classify_lift_type(*rebased_alg, base, points[k]).type;
    } catch (const Error& e) {
      if (k > 0 && e.kind() == ErrorKind::NonExactEvaluation) continue;
      out.push_back(fail("type", e.what()));
      return out;
    }
    std::string at = "(" + points[k].at("x").to_string() + "," + points[k].at("y").to_string() + ")";
    if (type && *type != t) {
      out.push_back(fail("type", std::string(to_string(*type)) + " at the sample point but " +
                                     std::string(to_string(t)) + " at " + at));
      return out;
    }
    type = t;
    where += (where.empty() ? "" : ", ") + at;
    if (k > 0) secondary_done = true;
  }
  if (found != nullptr) *found = type;
  if (expected && *expected != *type) {
    out.push_back(fail("type", "expected " + std::string(to_string(*expected)) + ", found " +
                                   std::string(to_string(*type))));
  } else {
    out.push_back(pass("type", std::string(to_string(*type)) + " at " + where));
  }
  return out;
}

VerificationReport verify_instance(const Instance& inst) {
  VerificationReport rep;
  rep.instance = inst.ref();
  if (!inst.entry->is_lift()) {
    try {
      LieAlgebra g(inst.generators);
      rep.checks.push_back(pass("closure", "dimension " + std::to_string(g.dim())));
      if (inst.entry->transitivity_waived) {
        rep.checks.push_back(pass("transitivity", "waived for this entry"));
      } else if (transitive_at(g, inst.sample_point)) {
        auto st = stabilizer_at(g, inst.sample_point);
        if (st.size() + 2 == g.dim()) {
          rep.checks.push_back(pass("transitivity", "stabilizer of dimension " + std::to_string(st.size())));
        } else {
          rep.checks.push_back(fail("transitivity", "stabilizer dimension " + std::to_string(st.size())));
        }
      } else {
        rep.checks.push_back(fail("transitivity", "fields do not span the tangent space at the sample point"));
      }
    } catch (const Error& e) {
      rep.checks.push_back(fail("closure", e.what()));
    }
    return rep;
  }
  std::optional<LieAlgebra> base;
  try {
    Instance b = instantiate(inst.base());
    base.emplace(b.generators);
    if (!transitive_at(*base, b.sample_point)) {
      rep.checks.push_back(fail("base", "base algebra is not transitive"));
      return rep;
    }
  } catch (const Error& e) {
    rep.checks.push_back(fail("base", e.what()));
    return rep;
  }
  rep.checks = verify_lift(inst.generators, *base, inst.sample_point, inst.entry->type, &rep.type);
  return rep;
}

}  // namespace liftlab
