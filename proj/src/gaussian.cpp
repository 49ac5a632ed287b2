#include "liftlab/gaussian.hpp"

#include <functional>

#include "liftlab/error.hpp"

namespace liftlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParameterDifferentiation: return "ParameterDifferentiation";
    case ErrorKind::ContainsFiberVariable: return "ContainsFiberVariable";
    case ErrorKind::NonExactEvaluation: return "NonExactEvaluation";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::NotProjectable: return "NotProjectable";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::DegreeTooHigh: return "DegreeTooHigh";
    case ErrorKind::NotClosed: return "NotClosed";
    case ErrorKind::LinearlyDependent: return "LinearlyDependent";
    case ErrorKind::NotALift: return "NotALift";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::NoTransitivePair: return "NoTransitivePair";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorKind::NotACocycle: return "NotACocycle";
    case ErrorKind::OutsideRing: return "OutsideRing";
    case ErrorKind::TruncationExhausted: return "TruncationExhausted";
    case ErrorKind::BranchEnumerationFailed: return "BranchEnumerationFailed";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
  }
  return "Unknown";
}

GaussianRational::GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
  re_.canonicalize();
  im_.canonicalize();
}

GaussianRational::GaussianRational(long num, long den) {
  if (den == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator");
  re_ = mpq_class(num, den);
  re_.canonicalize();
}

std::optional<long> GaussianRational::to_long() const {
  if (!is_integer() || !re_.get_num().fits_slong_p()) return std::nullopt;
  return re_.get_num().get_si();
}

GaussianRational GaussianRational::reciprocal() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  if (is_real()) return {1 / re_, 0};
  mpq_class norm = re_ * re_ + im_ * im_;
  return {re_ / norm, -im_ / norm};
}

namespace {

std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) return std::nullopt;
  if (mpz_perfect_square_p(q.get_num_mpz_t()) == 0 || mpz_perfect_square_p(q.get_den_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  mpq_class r(n, d);
  r.canonicalize();
  return r;
}

}  // namespace

std::optional<GaussianRational> GaussianRational::sqrt() const {
  if (is_zero()) return GaussianRational{};
  // (a+bi)^2 = re + im i  =>  a^2 = (re+m)/2, b^2 = (m-re)/2 with m = |z|.
  auto m = rational_sqrt(re_ * re_ + im_ * im_);
  if (!m) return std::nullopt;
  auto a = rational_sqrt((re_ + *m) / 2);
  auto b = rational_sqrt((*m - re_) / 2);
  if (!a || !b) return std::nullopt;
  mpq_class bb = *b;
  if (sgn(im_) < 0) bb = -bb;
  GaussianRational root(*a, bb);
  if (root * root != *this) return std::nullopt;
  return root;
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  if (sgn(o.im_) != 0) im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  if (sgn(o.im_) != 0) im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (is_real() && o.is_real()) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  if (o.is_real()) {
    re_ /= o.re_;
    if (sgn(im_) != 0) im_ /= o.re_;
    return *this;
  }
  return *this *= o.reciprocal();
}

std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b) {
  int c = cmp(a.re_, b.re_);
  if (c == 0) c = cmp(a.im_, b.im_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string GaussianRational::to_string() const {
  if (is_real()) return re_.get_str();
  std::string im_part;
  if (im_ == 1) {
    im_part = "i";
  } else if (im_ == -1) {
    im_part = "-i";
  } else {
    im_part = im_.get_str() + "i";
  }
  if (sgn(re_) == 0) return im_part;
  if (im_part.front() == '-') return re_.get_str() + im_part;
  return re_.get_str() + "+" + im_part;
}

std::size_t GaussianRational::hash() const {
  std::hash<std::string> h;
  return h(re_.get_str()) * 31 + h(im_.get_str());
}

}  // namespace liftlab
