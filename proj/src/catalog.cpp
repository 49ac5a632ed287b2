#include "liftlab/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>

#include "liftlab/error.hpp"

namespace liftlab {

// ---------------------------------------------------------------- Params

const std::vector<GaussianRational>& Params::list(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorKind::InvalidParameter, "missing parameter '" + key + "'");
  return it->second;
}

const GaussianRational& Params::scalar(const std::string& key) const {
  const auto& v = list(key);
  if (v.size() != 1) throw Error(ErrorKind::InvalidParameter, "'" + key + "' must be a single value");
  return v.front();
}

long Params::integer(const std::string& key) const {
  const auto& v = scalar(key);
  auto n = v.to_long();
  if (!n) throw Error(ErrorKind::InvalidParameter, "'" + key + "' must be an integer, got " + v.to_string());
  return *n;
}

namespace {

const std::vector<std::string> kFamilyKeys = {"r", "s", "alpha", "alphas", "ms"};

bool is_family_key(const std::string& k) {
  return std::find(kFamilyKeys.begin(), kFamilyKeys.end(), k) != kFamilyKeys.end();
}

}  // namespace

std::string Params::to_string() const {
  std::vector<std::string> keys;
  for (const auto& k : kFamilyKeys) {
    if (has(k)) keys.push_back(k);
  }
  for (const auto& [k, v] : values_) {
    if (!is_family_key(k)) keys.push_back(k);
  }
  std::string out;
  for (const auto& k : keys) {
    if (!out.empty()) out += ",";
    out += k + "=";
    const auto& vals = values_.at(k);
    for (std::size_t i = 0; i < vals.size(); ++i) {
      if (i > 0) out += ";";
      out += vals[i].to_string();
    }
  }
  return out;
}

std::string InstanceRef::to_string() const {
  if (params.empty()) return id;
  return id + "[" + params.to_string() + "]";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

GaussianRational parse_constant(std::string_view text) {
  ExpPoly p = ExpPoly::parse(text);
  if (!p.is_constant()) throw Error(ErrorKind::Parse, "'" + std::string(text) + "' is not a number");
  return p.constant_value();
}

}  // namespace

InstanceRef InstanceRef::parse(std::string_view text) {
  text = trim(text);
  InstanceRef ref;
  std::size_t open = text.find('[');
  ref.id = std::string(trim(text.substr(0, open)));
  if (ref.id.empty()) throw Error(ErrorKind::Parse, "missing catalog id in '" + std::string(text) + "'");
  if (open == std::string_view::npos) return ref;
  if (text.back() != ']') throw Error(ErrorKind::Parse, "missing ']' in '" + std::string(text) + "'");
  std::string_view body = trim(text.substr(open + 1, text.size() - open - 2));
  if (body.empty()) return ref;
  for (auto assign : split(body, ',')) {
    std::size_t eq = assign.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, "expected name=value, got '" + std::string(assign) + "'");
    std::string name(trim(assign.substr(0, eq)));
    if (name.empty() || ref.params.has(name)) throw Error(ErrorKind::Parse, "bad or repeated name in '" + std::string(assign) + "'");
    std::vector<GaussianRational> vals;
    for (auto v : split(assign.substr(eq + 1), ';')) vals.push_back(parse_constant(v));
    ref.params.set(name, std::move(vals));
  }
  return ref;
}

// ---------------------------------------------------------------- builders

namespace {

ExpPoly xp(long k) { return X().pow(static_cast<unsigned>(k)); }
ExpPoly ex(const GaussianRational& a) { return ExpPoly::exponential({a, 0}); }
ExpPoly q(long n, long d = 1) { return ExpPoly(GaussianRational(n, d)); }

GaussianRational binom(long n, long k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return GaussianRational(mpq_class(b));
}

VectorField base_field(const char* text) { return VectorField::parse(text, Space::Base); }
VectorField lift_field(const char* text) { return VectorField::parse(text, Space::Total); }

std::vector<VectorField> base_list(std::initializer_list<const char*> texts) {
  std::vector<VectorField> out;
  for (const char* t : texts) out.push_back(base_field(t));
  return out;
}

std::vector<VectorField> lift_list(std::initializer_list<const char*> texts) {
  std::vector<VectorField> out;
  for (const char* t : texts) out.push_back(lift_field(t));
  return out;
}

void require(bool ok, const std::string& constraint) {
  if (!ok) throw Error(ErrorKind::InvalidParameter, "constraint violated: " + constraint);
}

// The builder normalizes `p` in place and returns generators with free
// constants still symbolic.
using Builder = std::function<std::vector<VectorField>(Params& p, bool lifted)>;

struct Family {
  CatalogEntry entry;
  std::vector<std::string> keys;  // accepted lower-case keys
  Builder build;
};

long get_r(Params& p, long min) {
  long r = p.integer("r");
  require(r >= min, "r >= " + std::to_string(min));
  return r;
}

// x^k Dy for k in [from, to].
void push_powers(std::vector<VectorField>& out, long from, long to, bool lifted) {
  for (long k = from; k <= to; ++k) {
    if (lifted) {
      out.emplace_back(0, xp(k), 0);
    } else {
      out.emplace_back(0, xp(k));
    }
  }
}

struct ExpBlock {
  std::vector<GaussianRational> alphas;
  std::vector<long> ms;
};

// alphas/ms lists with m_i >= 1 and distinct frequencies; sets r.
ExpBlock exp_block(Params& p, long extra, long r_min) {
  ExpBlock b;
  b.alphas = p.list("alphas");
  for (const auto& m : p.list("ms")) {
    auto v = m.to_long();
    require(v && *v >= 1, "m_i positive integers");
    b.ms.push_back(*v);
  }
  require(!b.alphas.empty() && b.alphas.size() == b.ms.size(), "alphas and ms have the same nonzero length");
  std::set<GaussianRational> seen(b.alphas.begin(), b.alphas.end());
  require(seen.size() == b.alphas.size(), "alpha_i distinct");
  long r = extra;
  for (long m : b.ms) r += m;
  if (p.has("r")) require(p.integer("r") == r, "sum of m_i + " + std::to_string(extra) + " = r");
  require(r >= r_min, "r >= " + std::to_string(r_min));
  p.set("r", GaussianRational(r));
  return b;
}

// x^i e^{α_j x} Dy with u-part e^{α_j x} Σ_k binom(i,k) C_{j,k} x^{i-k}
// (C_{1,0} = 0) when `with_u`.
void push_exp_block(std::vector<VectorField>& out, const ExpBlock& b, bool lifted, bool with_u) {
  for (std::size_t j = 0; j < b.alphas.size(); ++j) {
    ExpPoly e = ex(b.alphas[j]);
    for (long i = 0; i < b.ms[j]; ++i) {
      ExpPoly ay = xp(i) * e;
      if (!lifted) {
        out.emplace_back(0, ay);
        continue;
      }
      ExpPoly au;
      if (with_u) {
        for (long k = 0; k <= i; ++k) {
          if (j == 0 && k == 0) continue;
          std::string c = "C_" + std::to_string(j + 1) + "_" + std::to_string(k);
          au += sym(c) * xp(i - k).scaled(binom(i, k));
        }
        au = au * e;
      }
      out.emplace_back(0, ay, au);
    }
  }
}

// x^{s+i} Dy + binom(s+i, s) coeff x^i Du for i in [0, last]
void push_shifted(std::vector<VectorField>& out, long s, long last, const ExpPoly& coeff) {
  for (long i = 0; i <= last; ++i) out.emplace_back(0, xp(s + i), coeff * xp(i).scaled(binom(s + i, s)));
}

// Smallest s in [lo, hi] that is not excluded, unless given.
long pick_s(Params& p, long lo, long hi, const std::function<bool(long)>& ok, const std::string& range) {
  long s = 0;
  if (p.has("s")) {
    s = p.integer("s");
  } else {
    s = lo;
    while (s <= hi && !ok(s)) ++s;
  }
  require(s >= lo && s <= hi, range);
  require(ok(s), "alpha != s");
  p.set("s", GaussianRational(s));
  return s;
}

std::vector<Family> make_families() {
  std::vector<Family> fams;
  auto add_base = [&](std::string id, std::vector<std::string> keys, std::vector<ParamSpec> schema,
                      std::string constraints, std::string description, Builder b, bool waived = false) {
    CatalogEntry e;
    e.id = id;
    e.base_id = id;
    e.schema = std::move(schema);
    e.constraints = std::move(constraints);
    e.description = std::move(description);
    e.transitivity_waived = waived;
    fams.push_back({std::move(e), std::move(keys), std::move(b)});
  };
  auto add_lift = [&](std::string id, std::string base, LiftType type, std::vector<std::string> keys,
                      std::vector<ParamSpec> schema, std::string constraints, Builder b) {
    CatalogEntry e;
    e.id = id;
    e.base_id = std::move(base);
    e.type = type;
    e.schema = std::move(schema);
    e.constraints = std::move(constraints);
    e.description = std::string(to_string(type)) + " lift of " + e.base_id;
    fams.push_back({std::move(e), std::move(keys), std::move(b)});
  };
  auto fixed = [](std::vector<VectorField> v) {
    return [v](Params&, bool) { return v; };
  };
  const ParamSpec r_spec{"r", "dimension"};
  const ParamSpec s_spec{"s", "integer shift"};
  const ParamSpec alpha_spec{"alpha", "complex number"};
  const ParamSpec alphas_spec{"alphas", "distinct frequencies, ';'-separated"};
  const ParamSpec ms_spec{"ms", "block sizes m_i >= 1, ';'-separated"};
  auto consts = [](std::initializer_list<const char*> names) {
    std::vector<ParamSpec> out;
    for (const char* n : names) out.push_back({n, "free constant"});
    return out;
  };

  // Primitive
  add_base("g1", {}, {}, "", "primitive, projective sl(3)",
           fixed(base_list({"Dx", "Dy", "x*Dx", "x*Dy", "y*Dx", "y*Dy", "x^2*Dx + x*y*Dy", "x*y*Dx + y^2*Dy"})));
  add_base("g2", {}, {}, "", "primitive, affine gl(2) with translations",
           fixed(base_list({"Dx", "Dy", "x*Dx", "x*Dy", "y*Dx", "y*Dy"})));
  add_base("g3", {}, {}, "", "primitive, special affine",
           fixed(base_list({"Dx", "Dy", "x*Dy", "y*Dx", "x*Dx - y*Dy"})));
  // Imprimitive
  add_base("g4", {"r", "alphas", "ms"}, {alphas_spec, ms_spec, r_spec}, "sum of m_i + 1 = r >= 2",
           "Dx and quasi-polynomial multiples of Dy", [](Params& p, bool) {
             ExpBlock b = exp_block(p, 1, 2);
             std::vector<VectorField> out{base_field("Dx")};
             push_exp_block(out, b, false, false);
             return out;
           });
  add_base("g5", {"r", "alphas", "ms"}, {alphas_spec, ms_spec, r_spec}, "sum of m_i + 2 = r >= 4",
           "g4 extended by y*Dy", [](Params& p, bool) {
             ExpBlock b = exp_block(p, 2, 4);
             std::vector<VectorField> out{base_field("Dx"), base_field("y*Dy")};
             push_exp_block(out, b, false, false);
             return out;
           });
  add_base("g6", {}, {}, "", "sl(2) acting on y", fixed(base_list({"Dx", "Dy", "y*Dy", "y^2*Dy"})));
  add_base("g7", {}, {}, "", "sl(2) acting on x, shifted", fixed(base_list({"Dx", "Dy", "x*Dx", "x^2*Dx + x*Dy"})));
  add_base("g8", {"r", "alpha"}, {r_spec, alpha_spec}, "r >= 3", "polynomial Dy with weighted scaling",
           [](Params& p, bool) {
             long r = get_r(p, 3);
             GaussianRational a = p.scalar("alpha");
             std::vector<VectorField> out = base_list({"Dx", "Dy"});
             push_powers(out, 1, r - 3, false);
             out.emplace_back(X(), Y().scaled(a));
             return out;
           });
  add_base("g9", {"r"}, {r_spec}, "r >= 3", "polynomial Dy with a twisted scaling", [](Params& p, bool) {
    long r = get_r(p, 3);
    std::vector<VectorField> out = base_list({"Dx", "Dy"});
    push_powers(out, 1, r - 3, false);
    out.emplace_back(X(), Y().scaled(r - 2) + xp(r - 2));
    return out;
  });
  add_base("g10", {"r"}, {r_spec}, "r >= 4", "polynomial Dy with both scalings", [](Params& p, bool) {
    long r = get_r(p, 4);
    std::vector<VectorField> out = base_list({"Dx", "Dy"});
    push_powers(out, 1, r - 4, false);
    out.push_back(base_field("x*Dx"));
    out.push_back(base_field("y*Dy"));
    return out;
  });
  add_base("g11", {}, {}, "", "affine line times sl(2)",
           fixed(base_list({"Dx", "x*Dx", "Dy", "y*Dy", "y^2*Dy"})));
  add_base("g12", {}, {}, "", "sl(2) + sl(2)",
           fixed(base_list({"Dx", "x*Dx", "x^2*Dx", "Dy", "y*Dy", "y^2*Dy"})));
  add_base("g13", {"r"}, {r_spec}, "r >= 5", "sl(2) acting on polynomial Dy", [](Params& p, bool) {
    long r = get_r(p, 5);
    std::vector<VectorField> out = base_list({"Dx", "Dy"});
    push_powers(out, 1, r - 4, false);
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 4));
    out.emplace_back(X(), Y().scaled(GaussianRational(r - 4, 2)));
    return out;
  });
  add_base("g14", {"r"}, {r_spec}, "r >= 6", "gl(2) acting on polynomial Dy", [](Params& p, bool) {
    long r = get_r(p, 6);
    std::vector<VectorField> out = base_list({"Dx", "Dy"});
    push_powers(out, 1, r - 5, false);
    out.push_back(base_field("y*Dy"));
    out.push_back(base_field("x*Dx"));
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 5));
    return out;
  });
  add_base("g15", {}, {}, "", "sl(2), non-abelian transitive pair",
           fixed(base_list({"Dx", "x*Dx + Dy", "x^2*Dx + 2*x*Dy"})));
  add_base("g16", {}, {}, "", "sl(2)", fixed(base_list({"Dx", "x*Dx - y*Dy", "x^2*Dx + (1-2*x*y)*Dy"})));
  add_base("g15t", {}, {}, "", "standard representation of sl(2); singular at the origin",
           fixed(base_list({"y*Dx", "x*Dy", "x*Dx - y*Dy"})), true);
  add_base("g16t", {}, {}, "", "sl(2) with the singular orbit y=0",
           fixed(base_list({"Dx", "x*Dx + y*Dy", "x^2*Dx + y*(2*x+y)*Dy"})), true);

  // Lifts
  add_lift("g1.m", "g1", LiftType::Metric, {}, consts({"C"}), "",
           fixed(lift_list({"Dx", "Dy", "x*Dy", "x*Dx - y*Dy", "y*Dx", "x*Dx + y*Dy + 2*C*Du",
                            "x^2*Dx + x*y*Dy + 3*C*x*Du", "x*y*Dx + y^2*Dy + 3*C*y*Du"})));
  add_lift("g1.p", "g1", LiftType::Projective, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "x*Dy + Du", "x*Dx - y*Dy - 2*u*Du", "y*Dx - u^2*Du", "x*Dx + y*Dy",
                            "x^2*Dx + x*y*Dy + (y-x*u)*Du", "x*y*Dx + y^2*Dy + u*(y-x*u)*Du"})));
  add_lift("g2.m", "g2", LiftType::Metric, {}, consts({"C"}), "",
           fixed(lift_list({"Dx", "Dy", "x*Dy", "x*Dx - y*Dy", "y*Dx", "x*Dx + y*Dy + C*Du"})));
  add_lift("g2.p", "g2", LiftType::Projective, {}, {}, "",
           fixed(lift_list(
               {"Dx", "Dy", "x*Dy + Du", "x*Dx - y*Dy - 2*u*Du", "y*Dx - u^2*Du", "x*Dx + y*Dy"})));
  add_lift("g3.p", "g3", LiftType::Projective, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "x*Dy + Du", "x*Dx - y*Dy - 2*u*Du", "y*Dx - u^2*Du"})));
  add_lift("g4.m", "g4", LiftType::Metric, {"r", "alphas", "ms"},
           {alphas_spec, ms_spec, r_spec, {"C_j_k", "free constants, C_1_0 = 0"}}, "sum of m_i + 1 = r >= 3",
           [](Params& p, bool) {
             // At r = 2 the stabilizer is trivial and only the trivial lift remains.
             ExpBlock b = exp_block(p, 1, 3);
             std::vector<VectorField> out{lift_field("Dx")};
             push_exp_block(out, b, true, true);
             return out;
           });
  add_lift("g5.m", "g5", LiftType::Metric, {"r", "alphas", "ms"}, {alphas_spec, ms_spec, r_spec, {"C", "free constant"}},
           "sum of m_i + 2 = r >= 4", [](Params& p, bool) {
             ExpBlock b = exp_block(p, 2, 4);
             std::vector<VectorField> out{lift_field("Dx"), lift_field("y*Dy + C*Du")};
             push_exp_block(out, b, true, false);
             return out;
           });
  add_lift("g5.a", "g5", LiftType::Affine, {"r", "alphas", "ms"},
           {alphas_spec, ms_spec, r_spec, {"C_j_k", "free constants, C_1_0 = 0"}}, "sum of m_i + 2 = r >= 4",
           [](Params& p, bool) {
             ExpBlock b = exp_block(p, 2, 4);
             std::vector<VectorField> out{lift_field("Dx"), lift_field("y*Dy + u*Du")};
             push_exp_block(out, b, true, true);
             return out;
           });
  add_lift("g6.m", "g6", LiftType::Metric, {}, consts({"C"}), "",
           fixed(lift_list({"Dx", "Dy", "y*Dy + C*Du", "y^2*Dy + 2*C*y*Du"})));
  add_lift("g6.a", "g6", LiftType::Affine, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "y*Dy - u*Du", "y^2*Dy + (1-2*y*u)*Du"})));
  add_lift("g7.m", "g7", LiftType::Metric, {}, consts({"C"}), "",
           fixed(lift_list({"Dx", "Dy", "x*Dx + C*Du", "x^2*Dx + x*Dy + 2*C*x*Du"})));
  add_lift("g7.a", "g7", LiftType::Affine, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "x*Dx - u*Du", "x^2*Dx + x*Dy + (1-2*x*u)*Du"})));
  add_lift("g8.m", "g8", LiftType::Metric, {"r", "alpha", "s"},
           {r_spec, alpha_spec, s_spec, {"A", "free constant"}, {"B", "free constant, only when alpha = s"}},
           "r >= 3; B = 0 unless alpha = s", [](Params& p, bool) {
             long r = get_r(p, 3);
             GaussianRational a = p.scalar("alpha");
             auto as_int = a.to_long();
             long s = r - 2;
             if (p.has("s")) {
               s = p.integer("s");
               require(s >= 1 && s <= r - 2, "1 <= s <= r-2");
             } else if (as_int && *as_int >= 1 && *as_int <= r - 3) {
               s = *as_int;
             }
             bool with_b = as_int && *as_int == s && s <= r - 3;
             if (with_b) {
               p.set("s", GaussianRational(s));
             } else {
               p.erase("s");
               s = r - 2;
             }
             std::vector<VectorField> out = lift_list({"Dx", "Dy"});
             out.emplace_back(X(), Y().scaled(a), sym("A"));
             push_powers(out, 1, s - 1, true);
             push_shifted(out, s, r - 3 - s, sym("B"));
             return out;
           });
  add_lift("g8.a", "g8", LiftType::Affine, {"r", "alpha", "s"}, {r_spec, alpha_spec, s_spec},
           "r >= 4; 1 <= s <= r-3; alpha != s", [](Params& p, bool) {
             long r = get_r(p, 4);
             GaussianRational a = p.scalar("alpha");
             long s = pick_s(p, 1, r - 3, [&](long v) { return a != GaussianRational(v); }, "1 <= s <= r-3");
             std::vector<VectorField> out = lift_list({"Dx", "Dy"});
             out.emplace_back(X(), Y().scaled(a), U().scaled(a - GaussianRational(s)));
             push_powers(out, 1, s - 1, true);
             push_shifted(out, s, r - 3 - s, 1);
             return out;
           });
  add_lift("g9.m", "g9", LiftType::Metric, {"r"}, {r_spec, {"C", "free constant"}}, "r >= 3", [](Params& p, bool) {
    long r = get_r(p, 3);
    std::vector<VectorField> out = lift_list({"Dx", "Dy"});
    out.emplace_back(X(), Y().scaled(r - 2) + xp(r - 2), sym("C"));
    push_powers(out, 1, r - 3, true);
    return out;
  });
  add_lift("g9.a", "g9", LiftType::Affine, {"r", "s"}, {r_spec, s_spec}, "r >= 4; 1 <= s <= r-3",
           [](Params& p, bool) {
             long r = get_r(p, 4);
             long s = pick_s(p, 1, r - 3, [](long) { return true; }, "1 <= s <= r-3");
             std::vector<VectorField> out = lift_list({"Dx", "Dy"});
             out.emplace_back(X(), Y().scaled(r - 2) + xp(r - 2),
                              xp(r - s - 2).scaled(binom(r - 2, s)) + U().scaled(r - s - 2));
             push_powers(out, 1, s - 1, true);
             push_shifted(out, s, r - 3 - s, 1);
             return out;
           });
  add_lift("g10.m", "g10", LiftType::Metric, {"r"}, {r_spec, {"A", "free constant"}, {"B", "free constant"}}, "r >= 4",
           [](Params& p, bool) {
             long r = get_r(p, 4);
             std::vector<VectorField> out = lift_list({"Dx", "Dy", "x*Dx + A*Du", "y*Dy + B*Du"});
             push_powers(out, 1, r - 4, true);
             return out;
           });
  add_lift("g10.a", "g10", LiftType::Affine, {"r", "s"}, {r_spec, s_spec}, "r >= 5; 1 <= s <= r-4",
           [](Params& p, bool) {
             long r = get_r(p, 5);
             long s = pick_s(p, 1, r - 4, [](long) { return true; }, "1 <= s <= r-4");
             std::vector<VectorField> out = lift_list({"Dx", "Dy"});
             out.emplace_back(X(), 0, U().scaled(-s));
             out.push_back(lift_field("y*Dy + u*Du"));
             push_powers(out, 1, s - 1, true);
             push_shifted(out, s, r - 4 - s, 1);
             return out;
           });
  add_lift("g11.m", "g11", LiftType::Metric, {}, consts({"A", "B"}), "",
           fixed(lift_list({"Dx", "Dy", "x*Dx + A*Du", "y*Dy + B*Du", "y^2*Dy + 2*B*y*Du"})));
  add_lift("g11.a", "g11", LiftType::Affine, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "x*Dx", "y*Dy - u*Du", "y^2*Dy + (1-2*y*u)*Du"})));
  add_lift("g12.m", "g12", LiftType::Metric, {}, consts({"A", "B"}), "",
           fixed(lift_list({"Dx", "Dy", "x*Dx + A*Du", "y*Dy + B*Du", "x^2*Dx + 2*A*x*Du", "y^2*Dy + 2*B*y*Du"})));
  add_lift("g12.a1", "g12", LiftType::Affine, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "x*Dx - u*Du", "y*Dy", "x^2*Dx + (1-2*x*u)*Du", "y^2*Dy"})));
  add_lift("g12.a2", "g12", LiftType::Affine, {}, {}, "",
           fixed(lift_list({"Dx", "Dy", "x*Dx", "y*Dy - u*Du", "x^2*Dx", "y^2*Dy + (1-2*y*u)*Du"})));
  add_lift("g13.m1", "g13", LiftType::Metric, {"r"}, {r_spec, {"A", "free constant"}, {"B", "free constant"}}, "r = 6",
           [](Params& p, bool) {
             if (p.has("r")) require(p.integer("r") == 6, "r = 6");
             p.set("r", GaussianRational(6));
             return lift_list({"Dx", "Dy", "x*Dx + y*Dy + A*Du", "x*Dy + B*Du", "x^2*Dy + 2*B*x*Du",
                               "x^2*Dx + 2*x*y*Dy + (2*x*A+2*y*B)*Du"});
           });
  add_lift("g13.m2", "g13", LiftType::Metric, {"r"}, {r_spec, {"C", "free constant"}}, "r >= 5", [](Params& p, bool) {
    long r = get_r(p, 5);
    std::vector<VectorField> out = lift_list({"Dx", "Dy"});
    out.emplace_back(X(), Y().scaled(GaussianRational(r - 4, 2)), sym("C"));
    push_powers(out, 1, r - 4, true);
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 4), (sym("C") * X()).scaled(2));
    return out;
  });
  add_lift("g13.a1", "g13", LiftType::Affine, {"r"}, {r_spec}, "r >= 5", [](Params& p, bool) {
    long r = get_r(p, 5);
    std::vector<VectorField> out = lift_list({"Dx", "Dy"});
    out.emplace_back(X(), Y().scaled(GaussianRational(r - 4, 2)), -U());
    push_powers(out, 1, r - 4, true);
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 4), q(1) - (X() * U()).scaled(2));
    return out;
  });
  add_lift("g13.a2", "g13", LiftType::Affine, {"r"}, {r_spec}, "r >= 5; r != 6", [](Params& p, bool) {
    long r = get_r(p, 5);
    // At r = 6 the u*Du terms vanish and this is g13.m1 with A = 0, B = 1.
    require(r != 6, "r != 6");
    std::vector<VectorField> out = lift_list({"Dx", "Dy"});
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 4), (X() * U()).scaled(r - 6) + Y().scaled(r - 4));
    out.emplace_back(X(), Y().scaled(GaussianRational(r - 4, 2)), U().scaled(GaussianRational(r - 6, 2)));
    for (long i = 1; i <= r - 4; ++i) out.emplace_back(0, xp(i), xp(i - 1).scaled(i));
    return out;
  });
  add_lift("g14.m", "g14", LiftType::Metric, {"r"}, {r_spec, {"A", "free constant"}, {"B", "free constant"}}, "r >= 6",
           [](Params& p, bool) {
             long r = get_r(p, 6);
             std::vector<VectorField> out = lift_list({"Dx", "Dy", "x*Dx + A*Du", "y*Dy + B*Du"});
             push_powers(out, 1, r - 5, true);
             out.emplace_back(xp(2), (X() * Y()).scaled(r - 5), (sym("A").scaled(2) + sym("B").scaled(r - 5)) * X());
             return out;
           });
  add_lift("g14.a1", "g14", LiftType::Affine, {"r"}, {r_spec}, "r >= 6", [](Params& p, bool) {
    long r = get_r(p, 6);
    std::vector<VectorField> out = lift_list({"Dx", "Dy", "x*Dx - u*Du", "y*Dy"});
    push_powers(out, 1, r - 5, true);
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 5), q(1) - (X() * U()).scaled(2));
    return out;
  });
  add_lift("g14.a2", "g14", LiftType::Affine, {"r"}, {r_spec}, "r >= 6", [](Params& p, bool) {
    long r = get_r(p, 6);
    std::vector<VectorField> out = lift_list({"Dx", "Dy"});
    out.emplace_back(xp(2), (X() * Y()).scaled(r - 5), (X() * U()).scaled(r - 7) + Y().scaled(r - 5));
    out.push_back(lift_field("x*Dx - u*Du"));
    out.push_back(lift_field("y*Dy + u*Du"));
    for (long i = 1; i <= r - 5; ++i) out.emplace_back(0, xp(i), xp(i - 1).scaled(i));
    return out;
  });
  add_lift("g15.m", "g15", LiftType::Metric, {}, consts({"C"}), "",
           fixed(lift_list({"Dx", "x*Dx + Dy", "x^2*Dx + 2*x*Dy + C*e^(y)*Du"})));
  add_lift("g16.m", "g16", LiftType::Metric, {}, consts({"C"}), "",
           fixed(lift_list({"Dx", "x*Dx - y*Dy + C*Du", "x^2*Dx + (1-2*x*y)*Dy + 2*C*x*Du"})));
  return fams;
}

const std::vector<Family>& families() {
  static const std::vector<Family> fams = make_families();
  return fams;
}

const Family& family(std::string_view id) {
  for (const auto& f : families()) {
    if (f.entry.id == id) return f;
  }
  throw Error(ErrorKind::UnknownId, "unknown catalog id '" + std::string(id) + "'");
}

}  // namespace

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& f : families()) out.push_back(f.entry);
    return out;
  }();
  return entries;
}

const CatalogEntry& catalog_entry(std::string_view id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e;
  }
  throw Error(ErrorKind::UnknownId, "unknown catalog id '" + std::string(id) + "'");
}

Instance instantiate(const InstanceRef& ref) {
  const Family& fam = family(ref.id);
  Params p;
  std::map<std::string, ExpPoly> constants;
  for (const auto& [k, v] : ref.params.values()) {
    if (std::islower(static_cast<unsigned char>(k.front())) != 0) {
      if (std::find(fam.keys.begin(), fam.keys.end(), k) == fam.keys.end()) {
        throw Error(ErrorKind::InvalidParameter, "'" + ref.id + "' takes no parameter '" + k + "'");
      }
      p.set(k, v);
    } else {
      if (v.size() != 1) throw Error(ErrorKind::InvalidParameter, "constant '" + k + "' takes one value");
      constants.emplace(k, ExpPoly(v.front()));
    }
  }
  Instance inst;
  inst.entry = &catalog_entry(ref.id);
  inst.generators = fam.build(p, fam.entry.is_lift());
  if (!constants.empty()) {
    std::set<std::string> symbols;
    for (const auto& g : inst.generators) {
      for (Var v : {Var::X, Var::Y, Var::U}) {
        auto s = g.component(v).symbols();
        symbols.insert(s.begin(), s.end());
      }
    }
    for (const auto& [name, value] : constants) {
      if (symbols.count(name) == 0) throw Error(ErrorKind::InvalidParameter, "'" + ref.id + "' has no constant '" + name + "'");
      p.set(name, value.constant_value());
    }
    for (auto& g : inst.generators) {
      g = VectorField(substitute(g.ax(), constants), substitute(g.ay(), constants), substitute(g.au(), constants));
    }
  }
  inst.params = std::move(p);
  inst.sample_point = origin(fam.entry.is_lift() ? Space::Total : Space::Base);
  return inst;
}

Instance instantiate(std::string_view text) { return instantiate(InstanceRef::parse(text)); }

InstanceRef Instance::base() const {
  InstanceRef b{entry->base_id, {}};
  for (const char* k : {"r", "alpha", "alphas", "ms"}) {
    if (params.has(k)) b.params.set(k, params.list(k));
  }
  if (b.id != "g4" && b.id != "g5" && b.id != "g8" && b.id != "g9" && b.id != "g10" && b.id != "g13" &&
      b.id != "g14") {
    b.params.erase("r");
  }
  if (b.id == "g4" || b.id == "g5") b.params.erase("r");
  return b;
}

// ---------------------------------------------------------------- grid

TestGrid TestGrid::defaults() {
  TestGrid g;
  g.alphas = {0, 1, 2, GaussianRational(1, 2), GaussianRational::i()};
  g.frequencies = {0, 1, GaussianRational::i()};
  return g;
}

namespace {

std::vector<GaussianRational> parse_values(std::string_view text) {
  std::vector<GaussianRational> out;
  for (auto v : split(text, '|')) out.push_back(parse_constant(v));
  return out;
}

int parse_int(std::string_view key, std::string_view text) {
  GaussianRational v = parse_constant(text);
  auto n = v.to_long();
  if (!n || *n < 0 || *n > 64) throw Error(ErrorKind::Parse, "bad value for " + std::string(key));
  return static_cast<int>(*n);
}

}  // namespace

TestGrid TestGrid::parse(std::string_view text) {
  TestGrid g = defaults();
  if (trim(text).empty()) return g;
  for (auto item : split(text, ',')) {
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::Parse, "expected key=value in grid '" + std::string(item) + "'");
    std::string_view key = trim(item.substr(0, eq));
    std::string_view val = trim(item.substr(eq + 1));
    if (key == "rmax") {
      g.r_max = parse_int(key, val);
    } else if (key == "rspan") {
      g.r_span = parse_int(key, val);
    } else if (key == "nfreq") {
      g.max_frequencies = parse_int(key, val);
    } else if (key == "alpha") {
      g.alphas = parse_values(val);
    } else if (key == "freq") {
      g.frequencies = parse_values(val);
    } else {
      throw Error(ErrorKind::Parse, "unknown grid key '" + std::string(key) + "'");
    }
  }
  return g;
}

TestGrid TestGrid::from_environment() {
  const char* env = std::getenv("LIFTLAB_GRID");
  return env == nullptr ? defaults() : parse(env);
}

std::string TestGrid::to_string() const {
  auto join = [](const std::vector<GaussianRational>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "|" : "") + v[i].to_string();
    return s;
  };
  return "rmax=" + std::to_string(r_max) + ",rspan=" + std::to_string(r_span) + ",alpha=" + join(alphas) +
         ",freq=" + join(frequencies) + ",nfreq=" + std::to_string(max_frequencies);
}

namespace {

// Fixed dimensions of the parameter-free families.
long fixed_dim(const std::string& base) {
  static const std::map<std::string, long> dims = {{"g1", 8},  {"g2", 6},  {"g3", 5},  {"g6", 4},   {"g7", 4},
                                                   {"g11", 5}, {"g12", 6}, {"g15", 3}, {"g16", 3},  {"g15t", 3},
                                                   {"g16t", 3}};
  auto it = dims.find(base);
  return it == dims.end() ? 0 : it->second;
}

// Ordered frequency lists and block sizes with sum of m_i = total.
void exp_assignments(const TestGrid& grid, long total, std::vector<Params>& out) {
  const auto& pool = grid.frequencies;
  std::function<void(std::size_t, std::vector<GaussianRational>&)> choose;
  std::vector<std::vector<GaussianRational>> subsets;
  choose = [&](std::size_t start, std::vector<GaussianRational>& cur) {
    if (!cur.empty()) subsets.push_back(cur);
    if (static_cast<int>(cur.size()) == grid.max_frequencies) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      choose(i + 1, cur);
      cur.pop_back();
    }
  };
  std::vector<GaussianRational> cur;
  choose(0, cur);
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  for (const auto& alphas : subsets) {
    std::function<void(std::vector<GaussianRational>&, long)> comp = [&](std::vector<GaussianRational>& ms, long left) {
      if (ms.size() == alphas.size()) {
        if (left == 0) {
          Params p;
          p.set("alphas", alphas);
          p.set("ms", ms);
          out.push_back(std::move(p));
        }
        return;
      }
      for (long m = 1; m <= left; ++m) {
        ms.emplace_back(m);
        comp(ms, left - m);
        ms.pop_back();
      }
    };
    std::vector<GaussianRational> ms;
    comp(ms, total);
  }
}

}  // namespace

std::vector<InstanceRef> enumerate_instances(const TestGrid& grid) {
  std::vector<InstanceRef> out;
  auto r_values = [&](long min) {
    std::vector<long> rs;
    for (long r = min; r <= min + grid.r_span && r <= grid.r_max; ++r) rs.push_back(r);
    return rs;
  };
  for (const auto& entry : catalog()) {
    const std::string& id = entry.id;
    const std::string& base = entry.base_id;
    if (long d = fixed_dim(base); d > 0) {
      out.push_back({id, {}});
      continue;
    }
    if (base == "g4" || base == "g5") {
      long extra = base == "g4" ? 1 : 2;
      long min = id == "g4" ? 2 : id == "g4.m" ? 3 : 4;
      for (long r : r_values(min)) {
        std::vector<Params> ps;
        exp_assignments(grid, r - extra, ps);
        for (auto& p : ps) out.push_back({id, std::move(p)});
      }
      continue;
    }
    if (id == "g13.m1") {
      if (grid.r_max >= 6) out.push_back({id, {{"r", {6}}}});
      continue;
    }
    long min = base == "g8" || base == "g9" ? 3 : base == "g10" ? 4 : base == "g13" ? 5 : 6;
    if (id == "g8.a" || id == "g9.a") min = 4;
    if (id == "g10.a") min = 5;
    for (long r : r_values(min)) {
      if (id == "g13.a2" && r == 6) continue;
      bool has_alpha = base == "g8";
      std::vector<GaussianRational> alphas = has_alpha ? grid.alphas : std::vector<GaussianRational>{0};
      for (const auto& a : alphas) {
        Params p;
        p.set("r", GaussianRational(r));
        if (has_alpha) p.set("alpha", a);
        if (id == "g8.a" || id == "g9.a" || id == "g10.a") {
          long hi = id == "g10.a" ? r - 4 : r - 3;
          for (long s = 1; s <= hi; ++s) {
            if (id == "g8.a" && a == GaussianRational(s)) continue;
            Params ps = p;
            ps.set("s", GaussianRational(s));
            out.push_back({id, std::move(ps)});
          }
          continue;
        }
        out.push_back({id, std::move(p)});
      }
    }
  }
  return out;
}

}  // namespace liftlab
