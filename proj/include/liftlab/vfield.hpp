#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "liftlab/expoly.hpp"

namespace liftlab {

/// C^2 (coordinates x, y) or the total space C^2 x C (x, y, u).
enum class Space { Base, Total };

class VectorField {
 public:
  VectorField() = default;
  /// Field on C^2. Components must be u-free.
  VectorField(ExpPoly ax, ExpPoly ay);
  /// Field on C^2 x C.
  VectorField(ExpPoly ax, ExpPoly ay, ExpPoly au);

  const ExpPoly& ax() const { return ax_; }
  const ExpPoly& ay() const { return ay_; }
  const ExpPoly& au() const { return au_; }
  const ExpPoly& component(Var v) const;
  Space space() const { return space_; }

  bool is_zero() const { return ax_.is_zero() && ay_.is_zero() && au_.is_zero(); }
  bool is_projectable() const { return !ax_.contains(Var::U) && !ay_.contains(Var::U); }
  bool has_params() const { return ax_.has_params() || ay_.has_params() || au_.has_params(); }

  /// Same base part on C^2 x C with the given ∂u component.
  VectorField lifted(ExpPoly au) const { return {ax_, ay_, std::move(au)}; }
  VectorField as_total() const { return lifted(au_); }

  VectorField& operator+=(const VectorField& o);
  VectorField& operator-=(const VectorField& o);
  friend VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
  friend VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
  VectorField scaled(const GaussianRational& c) const;
  VectorField operator-() const { return scaled(GaussianRational(-1)); }
  friend bool operator==(const VectorField&, const VectorField&) = default;

  /// "x^2*Dx + (1-2*x*u)*Du"; the zero field prints as "0".
  std::string to_string() const;
  /// Space is Total when Du or u occurs, Base otherwise.
  static VectorField parse(std::string_view text);
  static VectorField parse(std::string_view text, Space space);

 private:
  ExpPoly ax_;
  ExpPoly ay_;
  ExpPoly au_;
  Space space_ = Space::Base;
};

/// [X, Y] with components X(Y^c) - Y(X^c). Raises SpaceMismatch.
VectorField bracket(const VectorField& X, const VectorField& Y);
/// Directional derivative X(f). Raises SpaceMismatch for a base field applied
/// to a function of u.
ExpPoly apply(const VectorField& X, const ExpPoly& f);
/// Drops the ∂u component. Raises NotProjectable.
VectorField project(const VectorField& X);

/// Change of fiber coordinate, written as the old coordinate in terms of the
/// new one: u = v + U, u = A v + B, or u = (A v + B)/(C v + D). All
/// coefficients are functions of (x, y). Units carry an explicit inverse which
/// is checked on construction.
struct FiberMap {
  enum class Kind { Translation, Affine, Moebius };
  Kind kind = Kind::Translation;
  ExpPoly U;
  ExpPoly A = 1;
  ExpPoly A_inv = 1;
  ExpPoly B;
  ExpPoly C;
  ExpPoly D = 1;
  ExpPoly det_inv = 1;

  static FiberMap identity() { return {}; }
  static FiberMap translation(ExpPoly U);
  /// Raises NotInvertible unless A * A_inv == 1.
  static FiberMap affine(ExpPoly A, ExpPoly A_inv, ExpPoly B);
  /// Raises NotInvertible unless (AD - BC) * det_inv == 1.
  static FiberMap moebius(ExpPoly A, ExpPoly B, ExpPoly C, ExpPoly D, ExpPoly det_inv);
  FiberMap inverse() const;
};

/// Expresses X in the new fiber coordinate (renamed back to u). Raises
/// NotProjectable, or DegreeTooHigh for a Moebius map on a ∂u component of
/// u-degree above 2.
VectorField pushforward(const VectorField& X, const FiberMap& m);

std::string to_string(const std::vector<VectorField>& fields);

}  // namespace liftlab
