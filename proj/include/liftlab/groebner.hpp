#pragma once

#include <map>
#include <string>
#include <vector>

#include "liftlab/expoly.hpp"

namespace liftlab {

/// Polynomials in constant symbols only (no x, y, u, no exponentials).
/// Lex order with the variables sorted by name, first name largest.
struct GroebnerBasis {
  std::vector<std::string> vars;
  std::vector<ExpPoly> basis;  // reduced, monic, sorted by leading term
  bool inconsistent() const;   // basis is {1}
};

/// Reduced Gröbner basis by Buchberger's algorithm over Q(i). Raises
/// InvalidArgument for inputs with x, y, u or exponentials, LimitExceeded
/// when the computation grows past fixed caps.
GroebnerBasis groebner_basis(const std::vector<ExpPoly>& eqs);
/// Normal form of f modulo the basis.
ExpPoly reduce(const ExpPoly& f, const GroebnerBasis& g);

/// One component of the solution set: determined symbols given in terms of
/// the free ones.
struct ConstantBranch {
  std::map<std::string, ExpPoly> values;
  std::vector<std::string> free;
  std::string to_string() const;
  friend bool operator==(const ConstantBranch&, const ConstantBranch&) = default;
};

/// Enumerates the solution branches of a polynomial system in constant
/// symbols by linear elimination, splitting on variable factors and roots of
/// univariate elements. Symbols in `unknowns` that no equation constrains are
/// reported as free. No branches means the system is inconsistent. Raises
/// BranchEnumerationFailed when the basis has no usable shape, LimitExceeded
/// past 18 unknowns or the Gröbner caps.
std::vector<ConstantBranch> solve_constant_system(const std::vector<ExpPoly>& eqs,
                                                  const std::vector<std::string>& unknowns = {});

}  // namespace liftlab
