#include "liftlab/vfield.hpp"

#include "liftlab/error.hpp"

namespace liftlab {

VectorField::VectorField(ExpPoly ax, ExpPoly ay) : ax_(std::move(ax)), ay_(std::move(ay)), space_(Space::Base) {
  if (ax_.contains(Var::U) || ay_.contains(Var::U)) {
    throw Error(ErrorKind::SpaceMismatch, "a field on C^2 cannot depend on u");
  }
}

VectorField::VectorField(ExpPoly ax, ExpPoly ay, ExpPoly au)
    : ax_(std::move(ax)), ay_(std::move(ay)), au_(std::move(au)), space_(Space::Total) {}

const ExpPoly& VectorField::component(Var v) const {
  switch (v) {
    case Var::X: return ax_;
    case Var::Y: return ay_;
    case Var::U: return au_;
  }
  return au_;
}

VectorField& VectorField::operator+=(const VectorField& o) {
  if (space_ != o.space_) throw Error(ErrorKind::SpaceMismatch, "adding fields on different spaces");
  ax_ += o.ax_;
  ay_ += o.ay_;
  au_ += o.au_;
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& o) {
  if (space_ != o.space_) throw Error(ErrorKind::SpaceMismatch, "subtracting fields on different spaces");
  ax_ -= o.ax_;
  ay_ -= o.ay_;
  au_ -= o.au_;
  return *this;
}

VectorField VectorField::scaled(const GaussianRational& c) const {
  VectorField r = *this;
  r.ax_ = ax_.scaled(c);
  r.ay_ = ay_.scaled(c);
  r.au_ = au_.scaled(c);
  return r;
}

namespace {

std::string component_text(const ExpPoly& p, std::string_view basis) {
  std::string text = p.to_string();
  if (p.size() > 1) return "(" + text + ")*" + std::string(basis);
  if (text == "1") return std::string(basis);
  if (text == "-1") return "-" + std::string(basis);
  return text + "*" + std::string(basis);
}

}  // namespace

std::string VectorField::to_string() const {
  std::string out;
  const std::pair<const ExpPoly*, std::string_view> parts[] = {{&ax_, "Dx"}, {&ay_, "Dy"}, {&au_, "Du"}};
  for (const auto& [p, basis] : parts) {
    if (p->is_zero()) continue;
    std::string text = component_text(*p, basis);
    if (out.empty()) {
      out = text;
    } else if (text.front() == '-') {
      out += " - " + text.substr(1);
    } else {
      out += " + " + text;
    }
  }
  return out.empty() ? "0" : out;
}

namespace {

VectorField parse_field(std::string_view text, const Space* forced) {
  ExpPoly p = detail::parse_expression(text, true);
  std::vector<Term> comp[3];
  for (const auto& t : p.terms()) {
    int which = -1;
    Term rest = t;
    rest.mono.params.clear();
    for (const auto& [name, e] : t.mono.params) {
      int idx = name == "Dx" ? 0 : name == "Dy" ? 1 : name == "Du" ? 2 : -1;
      if (idx < 0) {
        rest.mono.params.emplace_back(name, e);
        continue;
      }
      if (which >= 0 || e != 1) {
        throw Error(ErrorKind::Parse, "each term needs exactly one of Dx, Dy, Du in '" + std::string(text) + "'");
      }
      which = idx;
    }
    if (which < 0) {
      throw Error(ErrorKind::Parse, "term without Dx, Dy or Du in '" + std::string(text) + "'");
    }
    comp[which].push_back(std::move(rest));
  }
  ExpPoly ax = ExpPoly::from_terms(std::move(comp[0]));
  ExpPoly ay = ExpPoly::from_terms(std::move(comp[1]));
  ExpPoly au = ExpPoly::from_terms(std::move(comp[2]));
  bool total = !au.is_zero() || ax.contains(Var::U) || ay.contains(Var::U);
  if (forced != nullptr) {
    if (*forced == Space::Base && total) {
      throw Error(ErrorKind::SpaceMismatch, "'" + std::string(text) + "' is not a field on C^2");
    }
    total = *forced == Space::Total;
  }
  if (total) return {std::move(ax), std::move(ay), std::move(au)};
  return {std::move(ax), std::move(ay)};
}

}  // namespace

VectorField VectorField::parse(std::string_view text) { return parse_field(text, nullptr); }

VectorField VectorField::parse(std::string_view text, Space space) { return parse_field(text, &space); }

ExpPoly apply(const VectorField& X, const ExpPoly& f) {
  if (X.space() == Space::Base && f.contains(Var::U)) {
    throw Error(ErrorKind::SpaceMismatch, "field on C^2 applied to a function of u");
  }
  ExpPoly out;
  if (!X.ax().is_zero()) out += X.ax() * diff(f, Var::X);
  if (!X.ay().is_zero()) out += X.ay() * diff(f, Var::Y);
  if (!X.au().is_zero()) out += X.au() * diff(f, Var::U);
  return out;
}

VectorField bracket(const VectorField& X, const VectorField& Y) {
  if (X.space() != Y.space()) throw Error(ErrorKind::SpaceMismatch, "bracket of fields on different spaces");
  ExpPoly cx = apply(X, Y.ax()) - apply(Y, X.ax());
  ExpPoly cy = apply(X, Y.ay()) - apply(Y, X.ay());
  if (X.space() == Space::Base) return {std::move(cx), std::move(cy)};
  return {std::move(cx), std::move(cy), apply(X, Y.au()) - apply(Y, X.au())};
}

VectorField project(const VectorField& X) {
  if (!X.is_projectable()) throw Error(ErrorKind::NotProjectable, X.to_string());
  return {X.ax(), X.ay()};
}

namespace {

void require_base_function(const ExpPoly& p, const char* what) {
  if (p.contains(Var::U)) throw Error(ErrorKind::InvalidArgument, std::string(what) + " must not depend on u");
}

}  // namespace

FiberMap FiberMap::translation(ExpPoly U) {
  require_base_function(U, "translation");
  FiberMap m;
  m.kind = Kind::Translation;
  m.U = std::move(U);
  return m;
}

FiberMap FiberMap::affine(ExpPoly A, ExpPoly A_inv, ExpPoly B) {
  require_base_function(A, "A");
  require_base_function(B, "B");
  if (!(A * A_inv == ExpPoly(1))) {
    throw Error(ErrorKind::NotInvertible, "(" + A.to_string() + ")*(" + A_inv.to_string() + ") != 1");
  }
  FiberMap m;
  m.kind = Kind::Affine;
  m.A = std::move(A);
  m.A_inv = std::move(A_inv);
  m.B = std::move(B);
  return m;
}

FiberMap FiberMap::moebius(ExpPoly A, ExpPoly B, ExpPoly C, ExpPoly D, ExpPoly det_inv) {
  for (const ExpPoly* p : {&A, &B, &C, &D}) require_base_function(*p, "Moebius coefficient");
  ExpPoly det = A * D - B * C;
  if (!(det * det_inv == ExpPoly(1))) {
    throw Error(ErrorKind::NotInvertible, "AD-BC = " + det.to_string() + " is not inverted by " + det_inv.to_string());
  }
  FiberMap m;
  m.kind = Kind::Moebius;
  m.A = std::move(A);
  m.B = std::move(B);
  m.C = std::move(C);
  m.D = std::move(D);
  m.det_inv = std::move(det_inv);
  return m;
}

FiberMap FiberMap::inverse() const {
  switch (kind) {
    case Kind::Translation: return translation(-U);
    case Kind::Affine: return affine(A_inv, A, -(A_inv * B));
    case Kind::Moebius: return moebius(D, -B, -C, A, det_inv);
  }
  return *this;
}

VectorField pushforward(const VectorField& X, const FiberMap& m) {
  if (!X.is_projectable()) throw Error(ErrorKind::NotProjectable, X.to_string());
  VectorField base = project(X);
  const ExpPoly& f = X.au();
  ExpPoly g;
  switch (m.kind) {
    case FiberMap::Kind::Translation:
      g = substitute_u(f, U() + m.U) - apply(base, m.U);
      break;
    case FiberMap::Kind::Affine:
      g = m.A_inv * (substitute_u(f, m.A * U() + m.B) - apply(base, m.A) * U() - apply(base, m.B));
      break;
    case FiberMap::Kind::Moebius: {
      int deg = f.degree(Var::U);
      if (deg > 2) throw Error(ErrorKind::DegreeTooHigh, "u-degree " + std::to_string(deg) + " in " + f.to_string());
      ExpPoly num = m.A * U() + m.B;
      ExpPoly den = m.C * U() + m.D;
      ExpPoly acc;
      for (int k = 0; k <= deg; ++k) {
        ExpPoly fk = f.coefficient(Var::U, k);
        if (!fk.is_zero()) acc += fk * num.pow(static_cast<unsigned>(k)) * den.pow(static_cast<unsigned>(2 - k));
      }
      acc -= (apply(base, m.A) * U() + apply(base, m.B)) * den;
      acc += num * (apply(base, m.C) * U() + apply(base, m.D));
      g = m.det_inv * acc;
      break;
    }
  }
  return X.lifted(std::move(g));
}

std::string to_string(const std::vector<VectorField>& fields) {
  std::string out = "{";
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) out += ", ";
    out += fields[k].to_string();
  }
  return out + "}";
}

}  // namespace liftlab
