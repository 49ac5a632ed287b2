#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftlab/gaussian.hpp"

namespace liftlab {

/// Coordinates of C^2 x C. Everything else appearing in a monomial is a
/// parameter symbol: a constant with zero derivative.
enum class Var { X, Y, U };

std::string_view var_name(Var v);

/// Exponent of the factor e^{x*ωx + y*ωy}.
struct Frequency {
  GaussianRational x;
  GaussianRational y;

  bool is_zero() const { return x.is_zero() && y.is_zero(); }
  Frequency operator+(const Frequency& o) const { return {x + o.x, y + o.y}; }
  Frequency operator-() const { return {-x, -y}; }
  friend bool operator==(const Frequency&, const Frequency&) = default;
  friend std::strong_ordering operator<=>(const Frequency& a, const Frequency& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.y <=> b.y;
  }
  /// Linear form as written inside e^(...): "2x", "-y", "(1/2)x+iy".
  std::string to_string() const;
};

/// x^a y^b u^c (params) e^{freq}. Parameter powers are kept sorted by name
/// with positive exponents only.
struct Monomial {
  int x = 0;
  int y = 0;
  int u = 0;
  std::vector<std::pair<std::string, int>> params;
  Frequency freq;

  int exponent(Var v) const;
  int param_exponent(std::string_view name) const;
  int degree_xy() const { return x + y; }
  int total_degree() const;
  bool is_one() const { return x == 0 && y == 0 && u == 0 && params.empty() && freq.is_zero(); }

  Monomial operator*(const Monomial& o) const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
  /// Fixed total order: frequency, then total degree, then x, y, u
  /// descending, then parameter powers.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
};

struct Term {
  GaussianRational coeff;
  Monomial mono;
};

/// Finite sum of Terms in canonical order; zero is the empty sum.
class ExpPoly {
 public:
  ExpPoly() = default;
  ExpPoly(GaussianRational c);  // NOLINT(google-explicit-constructor)
  ExpPoly(long c) : ExpPoly(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)

  static ExpPoly variable(Var v);
  static ExpPoly symbol(const std::string& name);
  static ExpPoly exponential(const Frequency& f);
  static ExpPoly monomial(Monomial m, GaussianRational c = 1);
  static ExpPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  /// True for zero and for a single term with trivial monomial.
  bool is_constant() const;
  GaussianRational constant_value() const;  // requires is_constant()

  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  ExpPoly& operator*=(const ExpPoly& o) { return *this = *this * o; }
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly operator-() const;
  ExpPoly scaled(const GaussianRational& c) const;
  ExpPoly pow(unsigned n) const;

  friend bool operator==(const ExpPoly& a, const ExpPoly& b);

  int degree(Var v) const;  // -1 for zero
  int degree_xy() const;    // max x+y exponent, ignoring exponential factors
  bool contains(Var v) const { return degree(v) > 0; }
  bool has_params() const;
  std::set<std::string> symbols() const;
  std::set<Frequency> frequencies() const;
  /// Terms with v^k exactly, with v^k divided out.
  ExpPoly coefficient(Var v, int k) const;
  /// Terms whose parameter part is exactly `params`, divided by it.
  ExpPoly param_coefficient(const std::vector<std::pair<std::string, int>>& params) const;

  std::string to_string() const;
  static ExpPoly parse(std::string_view text);

 private:
  void canonicalize();
  std::vector<Term> terms_;
};

ExpPoly diff(const ExpPoly& p, Var v);
/// Derivative by a named variable; parameter symbols raise ParameterDifferentiation.
ExpPoly diff(const ExpPoly& p, std::string_view name);
/// Antiderivative in x or y with integration constant 0. Raises
/// ContainsFiberVariable when u occurs.
ExpPoly antideriv(const ExpPoly& p, Var v);
inline ExpPoly antideriv_x(const ExpPoly& p) { return antideriv(p, Var::X); }

using PointAssignment = std::map<std::string, GaussianRational>;
/// Exact substitution of numeric values for x, y, u and/or parameters. An
/// exponential factor is only evaluated where its variable is set to 0.
ExpPoly eval_at(const ExpPoly& p, const PointAssignment& point);
/// Replace parameter symbols by ExpPolys.
ExpPoly substitute(const ExpPoly& p, const std::map<std::string, ExpPoly>& values);
/// Replace u by an ExpPoly (composition in the fiber variable).
ExpPoly substitute_u(const ExpPoly& p, const ExpPoly& value);

inline ExpPoly X() { return ExpPoly::variable(Var::X); }
inline ExpPoly Y() { return ExpPoly::variable(Var::Y); }
inline ExpPoly U() { return ExpPoly::variable(Var::U); }
inline ExpPoly sym(const std::string& name) { return ExpPoly::symbol(name); }

namespace detail {
/// Shared expression parser. With allow_basis_tokens the reserved tokens
/// Dx, Dy, Du are returned as parameter symbols of the same names.
ExpPoly parse_expression(std::string_view text, bool allow_basis_tokens);
/// Coefficient as printed in front of a monomial ("", "-", "2*", "(1/2)*").
std::string format_coefficient(const GaussianRational& c, bool has_monomial);
}  // namespace detail

}  // namespace liftlab
