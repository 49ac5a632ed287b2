#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace liftlab {

/// Element of Q(i). Both parts are kept as canonical GMP rationals, so
/// structural equality is mathematical equality.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re, mpq_class im = 0);
  GaussianRational(long num, long den);

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_integer() const { return is_real() && re_.get_den() == 1; }
  /// Value as a machine integer, if it is a (small) real integer.
  std::optional<long> to_long() const;

  GaussianRational conj() const { return {re_, -im_}; }
  GaussianRational reciprocal() const;
  /// Square root in Q(i), when one exists.
  std::optional<GaussianRational> sqrt() const;

  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  GaussianRational operator-() const { return {-re_, -im_}; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  /// Lexicographic on (re, im); a fixed total order, not a field order.
  friend std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b);

  /// "3", "-1/2", "i", "-2i", "1/2+3i"
  std::string to_string() const;
  std::size_t hash() const;

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace liftlab
