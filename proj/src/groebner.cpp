#include "liftlab/groebner.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

#include "liftlab/error.hpp"

namespace liftlab {

namespace {

using Exps = std::vector<int>;
struct LexGreater {
  bool operator()(const Exps& a, const Exps& b) const { return a > b; }
};
using MPoly = std::map<Exps, GaussianRational, LexGreater>;

constexpr std::size_t kMaxBasis = 400;
constexpr std::size_t kMaxPairs = 40000;
constexpr std::size_t kMaxUnknowns = 18;

void check_constant_only(const ExpPoly& p) {
  for (const auto& t : p.terms()) {
    if (t.mono.x != 0 || t.mono.y != 0 || t.mono.u != 0 || !t.mono.freq.is_zero()) {
      throw Error(ErrorKind::InvalidArgument, "equation involves x, y, u or an exponential: " + p.to_string());
    }
  }
}

MPoly to_mpoly(const ExpPoly& p, const std::vector<std::string>& vars) {
  MPoly out;
  for (const auto& t : p.terms()) {
    Exps e(vars.size(), 0);
    for (const auto& [name, k] : t.mono.params) {
      auto it = std::lower_bound(vars.begin(), vars.end(), name);
      e[static_cast<std::size_t>(it - vars.begin())] = k;
    }
    out[e] += t.coeff;
  }
  return out;
}

ExpPoly from_mpoly(const MPoly& p, const std::vector<std::string>& vars) {
  std::vector<Term> terms;
  for (const auto& [e, c] : p) {
    Monomial m;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      if (e[k] != 0) m.params.emplace_back(vars[k], e[k]);
    }
    terms.push_back({c, m});
  }
  return ExpPoly::from_terms(std::move(terms));
}

bool divides(const Exps& a, const Exps& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
  }
  return true;
}

Exps quotient(const Exps& b, const Exps& a) {
  Exps q(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) q[k] = b[k] - a[k];
  return q;
}

Exps lcm(const Exps& a, const Exps& b) {
  Exps q(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) q[k] = std::max(a[k], b[k]);
  return q;
}

// f -= c * x^m * g
void sub_scaled(MPoly& f, const GaussianRational& c, const Exps& m, const MPoly& g) {
  for (const auto& [e, v] : g) {
    Exps s(e.size());
    for (std::size_t k = 0; k < e.size(); ++k) s[k] = e[k] + m[k];
    auto it = f.find(s);
    GaussianRational nv = (it == f.end() ? GaussianRational{} : it->second) - c * v;
    if (nv.is_zero()) {
      if (it != f.end()) f.erase(it);
    } else {
      f[s] = nv;
    }
  }
}

void make_monic(MPoly& f) {
  if (f.empty()) return;
  GaussianRational inv = f.begin()->second.reciprocal();
  for (auto& [e, c] : f) c = c * inv;
}

MPoly normal_form(MPoly f, const std::vector<MPoly>& G) {
  MPoly rem;
  while (!f.empty()) {
    auto lead = *f.begin();
    bool reduced = false;
    for (const auto& g : G) {
      if (g.empty()) continue;
      const auto& [ge, gc] = *g.begin();
      if (divides(ge, lead.first)) {
        sub_scaled(f, lead.second * gc.reciprocal(), quotient(lead.first, ge), g);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      rem.insert(lead);
      f.erase(f.begin());
    }
  }
  return rem;
}

std::vector<std::string> collect_vars(const std::vector<ExpPoly>& eqs) {
  std::set<std::string> names;
  for (const auto& p : eqs) {
    check_constant_only(p);
    auto s = p.symbols();
    names.insert(s.begin(), s.end());
  }
  return {names.begin(), names.end()};
}

std::vector<MPoly> buchberger(std::vector<MPoly> G) {
  G.erase(std::remove_if(G.begin(), G.end(), [](const MPoly& p) { return p.empty(); }), G.end());
  for (auto& g : G) make_monic(g);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t j = 0; j < G.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
  }
  std::size_t processed = 0;
  while (!pairs.empty()) {
    if (++processed > kMaxPairs || G.size() > kMaxBasis) {
      throw Error(ErrorKind::LimitExceeded, "Groebner basis computation exceeded its caps");
    }
    // Normal strategy: smallest lcm by total degree, then lex.
    auto lcm_key = [&](const std::pair<std::size_t, std::size_t>& pr) {
      Exps l = lcm(G[pr.first].begin()->first, G[pr.second].begin()->first);
      int deg = std::accumulate(l.begin(), l.end(), 0);
      return std::make_pair(deg, l);
    };
    auto best = std::min_element(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
      auto ka = lcm_key(a), kb = lcm_key(b);
      if (ka.first != kb.first) return ka.first < kb.first;
      return LexGreater{}(kb.second, ka.second);
    });
    auto [i, j] = *best;
    pairs.erase(best);
    const auto& [ei, ci] = *G[i].begin();
    const auto& [ej, cj] = *G[j].begin();
    Exps l = lcm(ei, ej);
    bool coprime = true;
    for (std::size_t k = 0; k < l.size(); ++k) coprime = coprime && (ei[k] == 0 || ej[k] == 0);
    if (coprime) continue;
    MPoly s;
    sub_scaled(s, ci.reciprocal() * GaussianRational(-1), quotient(l, ei), G[i]);
    sub_scaled(s, cj.reciprocal(), quotient(l, ej), G[j]);
    MPoly r = normal_form(std::move(s), G);
    if (r.empty()) continue;
    make_monic(r);
    G.push_back(std::move(r));
    for (std::size_t k = 0; k + 1 < G.size(); ++k) pairs.emplace_back(k, G.size() - 1);
  }
  // Minimal, then reduced.
  std::vector<MPoly> minimal;
  for (std::size_t k = 0; k < G.size(); ++k) {
    bool redundant = false;
    for (std::size_t m = 0; m < G.size() && !redundant; ++m) {
      if (m == k) continue;
      const Exps& a = G[m].begin()->first;
      const Exps& b = G[k].begin()->first;
      if (divides(a, b) && (a != b || m < k)) redundant = true;
    }
    if (!redundant) minimal.push_back(G[k]);
  }
  std::vector<MPoly> reduced;
  for (std::size_t k = 0; k < minimal.size(); ++k) {
    std::vector<MPoly> others;
    for (std::size_t m = 0; m < minimal.size(); ++m) {
      if (m != k) others.push_back(minimal[m]);
    }
    MPoly lead;
    lead.insert(*minimal[k].begin());
    MPoly tail = minimal[k];
    tail.erase(tail.begin());
    MPoly r = normal_form(std::move(tail), others);
    r.insert(*lead.begin());
    make_monic(r);
    reduced.push_back(std::move(r));
  }
  std::sort(reduced.begin(), reduced.end(),
            [](const MPoly& a, const MPoly& b) { return LexGreater{}(a.begin()->first, b.begin()->first); });
  return reduced;
}

}  // namespace

bool GroebnerBasis::inconsistent() const { return basis.size() == 1 && basis.front() == ExpPoly(1); }

GroebnerBasis groebner_basis(const std::vector<ExpPoly>& eqs) {
  GroebnerBasis out;
  out.vars = collect_vars(eqs);
  std::vector<MPoly> polys;
  for (const auto& p : eqs) polys.push_back(to_mpoly(p, out.vars));
  for (const auto& g : buchberger(std::move(polys))) out.basis.push_back(from_mpoly(g, out.vars));
  return out;
}

ExpPoly reduce(const ExpPoly& f, const GroebnerBasis& g) {
  check_constant_only(f);
  std::vector<std::string> vars = g.vars;
  for (const auto& s : f.symbols()) {
    if (!std::binary_search(vars.begin(), vars.end(), s)) vars.insert(std::lower_bound(vars.begin(), vars.end(), s), s);
  }
  std::vector<MPoly> G;
  for (const auto& b : g.basis) G.push_back(to_mpoly(b, vars));
  return from_mpoly(normal_form(to_mpoly(f, vars), G), vars);
}

std::string ConstantBranch::to_string() const {
  std::string out;
  for (const auto& [k, v] : values) out += (out.empty() ? "" : ", ") + k + "=" + v.to_string();
  if (!free.empty()) {
    out += out.empty() ? "free: " : "; free: ";
    for (std::size_t k = 0; k < free.size(); ++k) out += (k ? ", " : "") + free[k];
  }
  return out.empty() ? "(no constants)" : out;
}

namespace {

// Univariate polynomial, coefficient k of v^k.
using Uni = std::vector<GaussianRational>;

Uni deflate(const Uni& p, const GaussianRational& r) {
  // synthetic division by (v - r)
  Uni q(p.size() - 1);
  GaussianRational acc;
  for (std::size_t k = p.size(); k-- > 1;) {
    acc = p[k] + acc * r;
    q[k - 1] = acc;
  }
  return q;
}

GaussianRational eval_uni(const Uni& p, const GaussianRational& v) {
  GaussianRational acc;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * v + p[k];
  return acc;
}

std::vector<long> divisors(mpz_class n) {
  n = abs(n);
  std::vector<long> out;
  if (n == 0 || n > 1000000) return out;
  long m = n.get_si();
  for (long d = 1; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      if (d * d != m) out.push_back(m / d);
    }
  }
  return out;
}

// Roots in Q(i), with multiplicity dropped. Raises BranchEnumerationFailed
// when some factor has no exact root.
std::vector<GaussianRational> roots(Uni p, const std::string& context) {
  std::vector<GaussianRational> out;
  auto add = [&](const GaussianRational& r) {
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  };
  while (p.size() > 1 && p.front().is_zero()) {
    add(GaussianRational{});
    p.erase(p.begin());
  }
  bool real = std::all_of(p.begin(), p.end(), [](const GaussianRational& c) { return c.is_real(); });
  if (real && p.size() > 3) {
    mpz_class den = 1;
    for (const auto& c : p) den = lcm(den, c.re().get_den());
    std::vector<mpz_class> ints;
    for (const auto& c : p) ints.push_back(mpz_class(c.re() * den));
    bool again = true;
    while (again && p.size() > 3) {
      again = false;
      for (long a : divisors(ints.front())) {
        for (long b : divisors(ints.back())) {
          for (long sign : {1L, -1L}) {
            GaussianRational cand(sign * a, b);
            if (p.size() > 1 && eval_uni(p, cand).is_zero()) {
              add(cand);
              p = deflate(p, cand);
              while (p.size() > 1 && eval_uni(p, cand).is_zero()) p = deflate(p, cand);
              again = true;
            }
            if (again) break;
          }
          if (again) break;
        }
        if (again) break;
      }
      if (again) {
        ints.clear();
        mpz_class d2 = 1;
        for (const auto& c : p) d2 = lcm(d2, c.re().get_den());
        for (const auto& c : p) ints.push_back(mpz_class(c.re() * d2));
      }
    }
  }
  if (p.size() == 2) {
    add(-p[0] / p[1]);
  } else if (p.size() == 3) {
    GaussianRational a = p[2], b = p[1], c = p[0];
    auto s = (b * b - GaussianRational(4) * a * c).sqrt();
    if (!s) throw Error(ErrorKind::BranchEnumerationFailed, "no exact roots of a quadratic factor in " + context);
    add((-b + *s) / (GaussianRational(2) * a));
    add((-b - *s) / (GaussianRational(2) * a));
  } else if (p.size() > 3) {
    throw Error(ErrorKind::BranchEnumerationFailed, "univariate factor of degree " + std::to_string(p.size() - 1) +
                                                        " without exact roots in " + context);
  }
  return out;
}

// Exact quotient f / d, or nullopt when d does not divide f.
std::optional<ExpPoly> divide_exact(const ExpPoly& f, const ExpPoly& d) {
  std::set<std::string> names = f.symbols();
  auto ds = d.symbols();
  names.insert(ds.begin(), ds.end());
  std::vector<std::string> vars(names.begin(), names.end());
  MPoly a = to_mpoly(f, vars);
  MPoly b = to_mpoly(d, vars);
  MPoly q;
  const auto [be, bc] = *b.begin();
  while (!a.empty()) {
    auto [ae, ac] = *a.begin();
    if (!divides(be, ae)) return std::nullopt;
    Exps m = quotient(ae, be);
    GaussianRational c = ac * bc.reciprocal();
    q[m] += c;
    sub_scaled(a, c, m, b);
  }
  return from_mpoly(q, vars);
}

struct SolveState {
  std::set<std::string> all_symbols;
  std::vector<ConstantBranch> out;
};

void assign(std::map<std::string, ExpPoly>& values, const std::string& v, const ExpPoly& expr) {
  std::map<std::string, ExpPoly> sub{{v, expr}};
  for (auto& [k, val] : values) val = substitute(val, sub);
  values[v] = expr;
}

void solve_rec(std::vector<ExpPoly> eqs, std::map<std::string, ExpPoly> values, SolveState& st, int depth) {
  if (depth > 64) throw Error(ErrorKind::LimitExceeded, "branch recursion too deep");
  std::vector<ExpPoly> live;
  for (auto& e : eqs) {
    ExpPoly s = values.empty() ? e : substitute(e, values);
    if (s.is_zero()) continue;
    if (s.is_constant()) return;  // nonzero constant: inconsistent
    live.push_back(std::move(s));
  }
  if (live.empty()) {
    ConstantBranch b;
    b.values = values;
    for (const auto& s : st.all_symbols) {
      if (values.count(s) == 0) b.free.push_back(s);
    }
    if (std::find(st.out.begin(), st.out.end(), b) == st.out.end()) st.out.push_back(std::move(b));
    return;
  }
  GroebnerBasis G = groebner_basis(live);
  if (G.inconsistent()) return;
  const auto& vars = G.vars;

  // Linear elimination, later symbols first so earlier ones stay free.
  for (std::size_t k = vars.size(); k-- > 0;) {
    const std::string& v = vars[k];
    for (const auto& g : G.basis) {
      ExpPoly with_v, rest;
      bool linear = true;
      GaussianRational coeff;
      for (const auto& t : g.terms()) {
        int e = t.mono.param_exponent(v);
        if (e == 0) {
          rest += ExpPoly::monomial(t.mono, t.coeff);
        } else if (e == 1 && t.mono.params.size() == 1) {
          coeff = t.coeff;
        } else {
          linear = false;
        }
      }
      if (!linear || coeff.is_zero()) continue;
      assign(values, v, rest.scaled(-coeff.reciprocal()));
      solve_rec(G.basis, values, st, depth + 1);
      return;
    }
  }
  // Split g = c * (v + q) with c a non-constant polynomial free of v.
  for (std::size_t k = vars.size(); k-- > 0;) {
    const std::string& v = vars[k];
    for (const auto& g : G.basis) {
      ExpPoly c, rest;
      bool linear = true;
      for (const auto& t : g.terms()) {
        int e = t.mono.param_exponent(v);
        if (e > 1) linear = false;
        if (e == 0) {
          rest += ExpPoly::monomial(t.mono, t.coeff);
        } else {
          Monomial m = t.mono;
          m.params.erase(std::remove_if(m.params.begin(), m.params.end(), [&](const auto& pe) { return pe.first == v; }),
                         m.params.end());
          c += ExpPoly::monomial(m, t.coeff);
        }
      }
      if (!linear || c.is_zero() || c.is_constant()) continue;
      auto q = divide_exact(rest, c);
      if (!q) continue;
      std::vector<ExpPoly> with_c = G.basis;
      with_c.push_back(c);
      solve_rec(with_c, values, st, depth + 1);
      auto next = values;
      assign(next, v, -*q);
      solve_rec(G.basis, next, st, depth + 1);
      return;
    }
  }
  // Split on a variable dividing every term.
  for (const auto& g : G.basis) {
    for (const auto& v : vars) {
      bool all = std::all_of(g.terms().begin(), g.terms().end(),
                             [&](const Term& t) { return t.mono.param_exponent(v) > 0; });
      if (!all) continue;
      auto zero = values;
      assign(zero, v, ExpPoly());
      solve_rec(G.basis, zero, st, depth + 1);
      std::vector<ExpPoly> rest;
      for (const auto& h : G.basis) {
        if (!(h == g)) rest.push_back(h);
      }
      std::vector<Term> divided;
      for (Term t : g.terms()) {
        for (auto& [name, e] : t.mono.params) {
          if (name == v) --e;
        }
        t.mono.params.erase(std::remove_if(t.mono.params.begin(), t.mono.params.end(),
                                           [](const auto& pe) { return pe.second == 0; }),
                            t.mono.params.end());
        divided.push_back(std::move(t));
      }
      rest.push_back(ExpPoly::from_terms(std::move(divided)));
      solve_rec(rest, values, st, depth + 1);
      return;
    }
  }
  // Univariate element: branch on its roots.
  for (const auto& g : G.basis) {
    auto syms = g.symbols();
    if (syms.size() != 1) continue;
    const std::string v = *syms.begin();
    int deg = 0;
    for (const auto& t : g.terms()) deg = std::max(deg, t.mono.param_exponent(v));
    Uni p(static_cast<std::size_t>(deg) + 1);
    for (const auto& t : g.terms()) p[static_cast<std::size_t>(t.mono.param_exponent(v))] += t.coeff;
    for (const auto& r : roots(p, g.to_string())) {
      auto next = values;
      assign(next, v, ExpPoly(r));
      solve_rec(G.basis, next, st, depth + 1);
    }
    return;
  }
  std::string basis;
  for (const auto& g : G.basis) basis += (basis.empty() ? "" : ", ") + g.to_string();
  throw Error(ErrorKind::BranchEnumerationFailed, "basis {" + basis + "} has no linear, factor or univariate element");
}

}  // namespace

std::vector<ConstantBranch> solve_constant_system(const std::vector<ExpPoly>& eqs, const std::vector<std::string>& unknowns) {
  SolveState st;
  for (const auto& v : collect_vars(eqs)) st.all_symbols.insert(v);
  st.all_symbols.insert(unknowns.begin(), unknowns.end());
  if (st.all_symbols.size() > kMaxUnknowns) {
    throw Error(ErrorKind::LimitExceeded, std::to_string(st.all_symbols.size()) + " unknowns exceed the cap of " +
                                              std::to_string(kMaxUnknowns));
  }
  solve_rec(eqs, {}, st, 0);
  return st.out;
}

}  // namespace liftlab
