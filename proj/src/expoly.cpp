#include "liftlab/expoly.hpp"

#include <algorithm>

#include "liftlab/error.hpp"

namespace liftlab {

std::string_view var_name(Var v) {
  switch (v) {
    case Var::X: return "x";
    case Var::Y: return "y";
    case Var::U: return "u";
  }
  return "?";
}

namespace {

/// Real/complex number as text usable inside a parenthesized coefficient.
std::string gaussian_text(const GaussianRational& c) {
  if (c.is_real()) return c.re().get_str();
  std::string im;
  if (c.im() == 1) {
    im = "i";
  } else if (c.im() == -1) {
    im = "-i";
  } else {
    im = c.im().get_str() + "*i";
  }
  if (sgn(c.re()) == 0) return im;
  return c.re().get_str() + (im.front() == '-' ? "" : "+") + im;
}

std::string linear_coefficient(const GaussianRational& c) {
  if (c.is_one()) return "";
  if (c == GaussianRational(-1)) return "-";
  if (c == GaussianRational::i()) return "i";
  if (c == -GaussianRational::i()) return "-i";
  if (c.is_integer()) return c.re().get_str();
  return "(" + gaussian_text(c) + ")";
}

void append_power(std::string& out, std::string_view base, int power) {
  if (power <= 0) return;
  if (!out.empty()) out += '*';
  out += base;
  if (power > 1) out += "^" + std::to_string(power);
}

std::string monomial_body(const Monomial& m) {
  std::string out;
  for (const auto& [name, power] : m.params) append_power(out, name, power);
  append_power(out, "x", m.x);
  append_power(out, "y", m.y);
  append_power(out, "u", m.u);
  if (!m.freq.is_zero()) {
    if (!out.empty()) out += '*';
    out += "e^(" + m.freq.to_string() + ")";
  }
  return out;
}

std::vector<std::pair<std::string, int>> merge_params(const std::vector<std::pair<std::string, int>>& a,
                                                      const std::vector<std::pair<std::string, int>>& b) {
  std::vector<std::pair<std::string, int>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::string Frequency::to_string() const {
  std::string out;
  if (!x.is_zero()) out += linear_coefficient(x) + "x";
  if (!y.is_zero()) {
    std::string part = linear_coefficient(y) + "y";
    if (!out.empty() && part.front() != '-') out += "+";
    out += part;
  }
  return out.empty() ? "0" : out;
}

int Monomial::exponent(Var v) const {
  switch (v) {
    case Var::X: return x;
    case Var::Y: return y;
    case Var::U: return u;
  }
  return 0;
}

int Monomial::param_exponent(std::string_view name) const {
  for (const auto& [n, p] : params) {
    if (n == name) return p;
  }
  return 0;
}

int Monomial::total_degree() const {
  int d = x + y + u;
  for (const auto& [n, p] : params) d += p;
  return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial m;
  m.x = x + o.x;
  m.y = y + o.y;
  m.u = u + o.u;
  m.params = params.empty() ? o.params : (o.params.empty() ? params : merge_params(params, o.params));
  m.freq = freq + o.freq;
  return m;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.freq <=> b.freq; c != 0) return c;
  if (auto c = a.total_degree() <=> b.total_degree(); c != 0) return c;
  if (auto c = b.x <=> a.x; c != 0) return c;
  if (auto c = b.y <=> a.y; c != 0) return c;
  if (auto c = b.u <=> a.u; c != 0) return c;
  return a.params <=> b.params;
}

ExpPoly::ExpPoly(GaussianRational c) {
  if (!c.is_zero()) terms_.push_back(Term{std::move(c), Monomial{}});
}

ExpPoly ExpPoly::variable(Var v) {
  Monomial m;
  switch (v) {
    case Var::X: m.x = 1; break;
    case Var::Y: m.y = 1; break;
    case Var::U: m.u = 1; break;
  }
  return monomial(std::move(m));
}

ExpPoly ExpPoly::symbol(const std::string& name) {
  if (name == "x") return variable(Var::X);
  if (name == "y") return variable(Var::Y);
  if (name == "u") return variable(Var::U);
  Monomial m;
  m.params.emplace_back(name, 1);
  return monomial(std::move(m));
}

ExpPoly ExpPoly::exponential(const Frequency& f) {
  Monomial m;
  m.freq = f;
  return monomial(std::move(m));
}

ExpPoly ExpPoly::monomial(Monomial m, GaussianRational c) {
  ExpPoly p;
  if (!c.is_zero()) p.terms_.push_back(Term{std::move(c), std::move(m)});
  return p;
}

ExpPoly ExpPoly::from_terms(std::vector<Term> terms) {
  ExpPoly p;
  p.terms_ = std::move(terms);
  p.canonicalize();
  return p;
}

void ExpPoly::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().mono == t.mono) {
      out.back().coeff += t.coeff;
    } else {
      if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().coeff.is_zero()) out.pop_back();
  terms_ = std::move(out);
}

bool ExpPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().mono.is_one());
}

GaussianRational ExpPoly::constant_value() const {
  if (!is_constant()) throw Error(ErrorKind::InvalidArgument, "not a constant: " + to_string());
  return terms_.empty() ? GaussianRational{} : terms_.front().coeff;
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (i == a.size()) {
      c = std::strong_ordering::greater;
    } else if (j == b.size()) {
      c = std::strong_ordering::less;
    } else {
      c = a[i].mono <=> b[j].mono;
    }
    if (c < 0) {
      out.push_back(a[i++]);
    } else if (c > 0) {
      out.push_back(subtract ? Term{-b[j].coeff, b[j].mono} : b[j]);
      ++j;
    } else {
      GaussianRational s = subtract ? a[i].coeff - b[j].coeff : a[i].coeff + b[j].coeff;
      if (!s.is_zero()) out.push_back(Term{std::move(s), a[i].mono});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, false);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) {
  if (o.terms_.empty()) return *this;
  terms_ = merge_terms(terms_, o.terms_, true);
  return *this;
}

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) prod.push_back(Term{s.coeff * t.coeff, s.mono * t.mono});
  }
  return ExpPoly::from_terms(std::move(prod));
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

ExpPoly ExpPoly::scaled(const GaussianRational& c) const {
  if (c.is_zero()) return {};
  ExpPoly p = *this;
  for (auto& t : p.terms_) t.coeff *= c;
  return p;
}

ExpPoly ExpPoly::pow(unsigned n) const {
  ExpPoly result(1);
  ExpPoly base = *this;
  while (n > 0) {
    if ((n & 1U) != 0) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

bool operator==(const ExpPoly& a, const ExpPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].coeff != b.terms_[k].coeff || !(a.terms_[k].mono == b.terms_[k].mono)) return false;
  }
  return true;
}

int ExpPoly::degree(Var v) const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

int ExpPoly::degree_xy() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree_xy());
  return d;
}

bool ExpPoly::has_params() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const Term& t) { return !t.mono.params.empty(); });
}

std::set<std::string> ExpPoly::symbols() const {
  std::set<std::string> out;
  for (const auto& t : terms_) {
    for (const auto& [n, p] : t.mono.params) out.insert(n);
  }
  return out;
}

std::set<Frequency> ExpPoly::frequencies() const {
  std::set<Frequency> out;
  for (const auto& t : terms_) out.insert(t.mono.freq);
  return out;
}

ExpPoly ExpPoly::coefficient(Var v, int k) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.exponent(v) != k) continue;
    Term s = t;
    switch (v) {
      case Var::X: s.mono.x = 0; break;
      case Var::Y: s.mono.y = 0; break;
      case Var::U: s.mono.u = 0; break;
    }
    out.push_back(std::move(s));
  }
  return from_terms(std::move(out));
}

ExpPoly ExpPoly::param_coefficient(const std::vector<std::pair<std::string, int>>& params) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.params != params) continue;
    Term s = t;
    s.mono.params.clear();
    out.push_back(std::move(s));
  }
  return from_terms(std::move(out));
}

std::string ExpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : terms_) {
    std::string body = monomial_body(t.mono);
    GaussianRational c = t.coeff;
    bool negative = c.is_real() && sgn(c.re()) < 0;
    if (negative) c = -c;
    std::string text = detail::format_coefficient(c, !body.empty()) + body;
    if (negative) {
      out += "-";
    } else if (!first) {
      out += "+";
    }
    out += text;
    first = false;
  }
  return out;
}

ExpPoly ExpPoly::parse(std::string_view text) { return detail::parse_expression(text, false); }

std::string detail::format_coefficient(const GaussianRational& c, bool has_monomial) {
  if (!c.is_real()) return "(" + gaussian_text(c) + ")" + (has_monomial ? "*" : "");
  if (!has_monomial) return c.is_integer() ? c.re().get_str() : c.re().get_str();
  if (c.is_one()) return "";
  if (c.is_integer()) return c.re().get_str() + "*";
  return "(" + c.re().get_str() + ")*";
}

ExpPoly diff(const ExpPoly& p, Var v) {
  std::vector<Term> out;
  out.reserve(p.terms().size() * 2);
  for (const auto& t : p.terms()) {
    int e = t.mono.exponent(v);
    if (e > 0) {
      Term s = t;
      s.coeff *= GaussianRational(e);
      switch (v) {
        case Var::X: --s.mono.x; break;
        case Var::Y: --s.mono.y; break;
        case Var::U: --s.mono.u; break;
      }
      out.push_back(std::move(s));
    }
    const GaussianRational* w = nullptr;
    if (v == Var::X) w = &t.mono.freq.x;
    if (v == Var::Y) w = &t.mono.freq.y;
    if (w != nullptr && !w->is_zero()) out.push_back(Term{t.coeff * *w, t.mono});
  }
  return ExpPoly::from_terms(std::move(out));
}

ExpPoly diff(const ExpPoly& p, std::string_view name) {
  if (name == "x") return diff(p, Var::X);
  if (name == "y") return diff(p, Var::Y);
  if (name == "u") return diff(p, Var::U);
  throw Error(ErrorKind::ParameterDifferentiation, "cannot differentiate by parameter '" + std::string(name) + "'");
}

ExpPoly antideriv(const ExpPoly& p, Var v) {
  if (v == Var::U) throw Error(ErrorKind::InvalidArgument, "antiderivative is only defined in x or y");
  if (p.contains(Var::U)) throw Error(ErrorKind::ContainsFiberVariable, "antiderivative of " + p.to_string());
  std::vector<Term> out;
  for (const auto& t : p.terms()) {
    const GaussianRational& w = v == Var::X ? t.mono.freq.x : t.mono.freq.y;
    int a = t.mono.exponent(v);
    auto with_power = [&](int k) {
      Monomial m = t.mono;
      (v == Var::X ? m.x : m.y) = k;
      return m;
    };
    if (w.is_zero()) {
      out.push_back(Term{t.coeff / GaussianRational(a + 1), with_power(a + 1)});
      continue;
    }
    // ∫ v^a e^{wv} = e^{wv} Σ_k (-1)^k a!/(a-k)! v^{a-k} / w^{k+1}
    GaussianRational inv_w = w.reciprocal();
    GaussianRational factor = inv_w;
    for (int k = 0; k <= a; ++k) {
      out.push_back(Term{t.coeff * factor, with_power(a - k)});
      factor *= GaussianRational(-(a - k)) * inv_w;
    }
  }
  return ExpPoly::from_terms(std::move(out));
}

ExpPoly eval_at(const ExpPoly& p, const PointAssignment& point) {
  auto lookup = [&](std::string_view name) -> const GaussianRational* {
    auto it = point.find(std::string(name));
    return it == point.end() ? nullptr : &it->second;
  };
  const GaussianRational* vx = lookup("x");
  const GaussianRational* vy = lookup("y");
  const GaussianRational* vu = lookup("u");
  auto power = [](const GaussianRational& base, int e) {
    GaussianRational r(1);
    for (int k = 0; k < e; ++k) r *= base;
    return r;
  };
  std::vector<Term> out;
  out.reserve(p.terms().size());
  for (const auto& t : p.terms()) {
    Term s = t;
    if (vx != nullptr) {
      if (!s.mono.freq.x.is_zero()) {
        if (!vx->is_zero()) {
          throw Error(ErrorKind::NonExactEvaluation,
                      "e^(" + s.mono.freq.to_string() + ") at x=" + vx->to_string() + " is not Gaussian-rational");
        }
        s.mono.freq.x = GaussianRational{};
      }
      s.coeff *= power(*vx, s.mono.x);
      s.mono.x = 0;
    }
    if (vy != nullptr) {
      if (!s.mono.freq.y.is_zero()) {
        if (!vy->is_zero()) {
          throw Error(ErrorKind::NonExactEvaluation,
                      "e^(" + s.mono.freq.to_string() + ") at y=" + vy->to_string() + " is not Gaussian-rational");
        }
        s.mono.freq.y = GaussianRational{};
      }
      s.coeff *= power(*vy, s.mono.y);
      s.mono.y = 0;
    }
    if (vu != nullptr) {
      s.coeff *= power(*vu, s.mono.u);
      s.mono.u = 0;
    }
    if (!s.mono.params.empty()) {
      std::vector<std::pair<std::string, int>> kept;
      for (const auto& [name, e] : s.mono.params) {
        if (const auto* val = lookup(name)) {
          s.coeff *= power(*val, e);
        } else {
          kept.emplace_back(name, e);
        }
      }
      s.mono.params = std::move(kept);
    }
    if (!s.coeff.is_zero()) out.push_back(std::move(s));
  }
  return ExpPoly::from_terms(std::move(out));
}

ExpPoly substitute(const ExpPoly& p, const std::map<std::string, ExpPoly>& values) {
  if (values.empty() || !p.has_params()) return p;
  ExpPoly result;
  std::vector<Term> untouched;
  for (const auto& t : p.terms()) {
    bool hit = std::any_of(t.mono.params.begin(), t.mono.params.end(),
                           [&](const auto& np) { return values.count(np.first) != 0; });
    if (!hit) {
      untouched.push_back(t);
      continue;
    }
    Term base = t;
    base.mono.params.clear();
    ExpPoly value = ExpPoly::monomial(base.mono, base.coeff);
    for (const auto& [name, e] : t.mono.params) {
      auto it = values.find(name);
      if (it != values.end()) {
        value = value * it->second.pow(static_cast<unsigned>(e));
      } else {
        Monomial m;
        m.params.emplace_back(name, e);
        value = value * ExpPoly::monomial(std::move(m));
      }
    }
    result += value;
  }
  return result + ExpPoly::from_terms(std::move(untouched));
}

ExpPoly substitute_u(const ExpPoly& p, const ExpPoly& value) {
  int deg = p.degree(Var::U);
  if (deg <= 0) return p;
  std::vector<ExpPoly> powers{ExpPoly(1)};
  for (int k = 1; k <= deg; ++k) powers.push_back(powers.back() * value);
  ExpPoly result;
  for (int k = 0; k <= deg; ++k) {
    ExpPoly c = p.coefficient(Var::U, k);
    if (!c.is_zero()) result += c * powers[static_cast<std::size_t>(k)];
  }
  return result;
}

}  // namespace liftlab
