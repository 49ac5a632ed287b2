#include "cli.hpp"

#include <gmp.h>

#include <CLI11.hpp>
#include <chrono>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "liftlab/catalog.hpp"
#include "liftlab/cohomology.hpp"
#include "liftlab/error.hpp"
#include "liftlab/liftsolver.hpp"
#include "liftlab/verify.hpp"

namespace liftlab::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Options {
  bool as_json = false;
  bool timing = false;
};

// Thrown for bad references and arguments found after CLI parsing.
struct UsageError {
  std::string message;
};

json params_json(const Params& p) {
  json out = json::object();
  for (const auto& [k, vals] : p.values()) {
    if (vals.size() == 1) {
      out[k] = vals[0].to_string();
    } else {
      json arr = json::array();
      for (const auto& v : vals) arr.push_back(v.to_string());
      out[k] = arr;
    }
  }
  return out;
}

json fields_json(const std::vector<VectorField>& fields) {
  json arr = json::array();
  for (const auto& X : fields) arr.push_back(X.to_string());
  return arr;
}

json checks_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  return arr;
}

json instance_json(const Instance& inst) {
  return {{"id", inst.entry->id}, {"params", params_json(inst.params)}, {"ref", inst.ref().to_string()}};
}

std::string type_name(const std::optional<LiftType>& t) { return t ? std::string(to_string(*t)) : "none"; }

Instance resolve(const std::string& text) {
  try {
    return instantiate(InstanceRef::parse(text));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::UnknownId || e.kind() == ErrorKind::InvalidParameter)
      throw UsageError{e.what()};
    throw;
  }
}

// The algebra a cohomology or solve command works on: the instance itself for
// a base entry, its base for a lift entry.
Instance base_of(const Instance& inst, std::vector<std::string>& notes) {
  if (!inst.entry->is_lift()) return inst;
  notes.push_back("using the base algebra " + inst.base().to_string() + " of " + inst.ref().to_string());
  return instantiate(inst.base());
}

struct Outcome {
  bool ok = true;
  json instance = nullptr;
  json payload = json::object();
  std::vector<std::string> diagnostics;
  std::string text;
};

Outcome cmd_list() {
  Outcome o;
  json entries = json::array();
  std::ostringstream text;
  for (const auto& e : catalog()) {
    json schema = json::array();
    std::string names;
    for (const auto& p : e.schema) {
      schema.push_back({{"name", p.name}, {"description", p.description}});
      names += (names.empty() ? "" : ",") + p.name;
    }
    entries.push_back({{"id", e.id},
                       {"base", e.base_id},
                       {"type", type_name(e.type)},
                       {"params", schema},
                       {"constraints", e.constraints},
                       {"description", e.description}});
    text << e.id;
    if (e.is_lift()) text << "  " << to_string(*e.type) << " lift of " << e.base_id;
    if (!names.empty()) text << "  [" << names << "]";
    if (!e.constraints.empty()) text << "  " << e.constraints;
    text << "\n";
  }
  o.payload["entries"] = entries;
  o.text = text.str();
  return o;
}

Outcome cmd_show(const std::string& ref) {
  Instance inst = resolve(ref);
  Outcome o;
  o.instance = instance_json(inst);
  o.payload = {{"instance", inst.ref().to_string()},
               {"base", inst.base().to_string()},
               {"type", type_name(inst.entry->type)},
               {"generators", fields_json(inst.generators)},
               {"sample_point", {{"x", inst.sample_point.at("x").to_string()}, {"y", inst.sample_point.at("y").to_string()}}}};
  std::ostringstream text;
  text << inst.ref().to_string();
  if (inst.entry->is_lift()) text << "  (" << to_string(*inst.entry->type) << " lift of " << inst.base().to_string() << ")";
  text << "\n";
  for (const auto& X : inst.generators) text << "  " << X.to_string() << "\n";
  o.text = text.str();
  return o;
}

Outcome cmd_verify(const std::string& ref) {
  Instance inst = resolve(ref);
  VerificationReport rep = verify_instance(inst);
  Outcome o;
  o.instance = instance_json(inst);
  o.ok = rep.ok();
  o.payload = {{"instance", rep.instance.to_string()}, {"checks", checks_json(rep.checks)}, {"type", type_name(rep.type)}};
  if (!o.ok) o.diagnostics.push_back(rep.first_failure());
  std::ostringstream text;
  text << (o.ok ? "ok" : "FAIL") << ": " << rep.instance.to_string() << "\n";
  for (const auto& c : rep.checks) text << "  " << (c.ok ? "ok  " : "FAIL") << " " << c.name << ": " << c.detail << "\n";
  if (rep.type) text << "  type=" << to_string(*rep.type) << "\n";
  o.text = text.str();
  return o;
}

Outcome cmd_verify_all(const std::optional<std::string>& grid_text) {
  TestGrid grid;
  try {
    grid = grid_text ? TestGrid::parse(*grid_text) : TestGrid::from_environment();
  } catch (const Error& e) {
    throw UsageError{e.what()};
  }
  Outcome o;
  json list = json::array();
  std::ostringstream text;
  std::size_t failed = 0, total = 0;
  for (const auto& ref : enumerate_instances(grid)) {
    VerificationReport rep = verify_instance(instantiate(ref));
    ++total;
    json item = {{"instance", ref.to_string()}, {"ok", rep.ok()}, {"type", type_name(rep.type)}};
    if (!rep.ok()) {
      ++failed;
      item["failure"] = rep.first_failure();
      o.diagnostics.push_back(ref.to_string() + ": " + rep.first_failure());
    }
    list.push_back(item);
    text << (rep.ok() ? "ok   " : "FAIL ") << ref.to_string();
    if (rep.type) text << "  " << to_string(*rep.type);
    if (!rep.ok()) text << "  " << rep.first_failure();
    text << "\n";
  }
  o.ok = failed == 0;
  o.payload = {{"grid", grid.to_string()}, {"instances", list}, {"total", total}, {"failed", failed}};
  text << total << " instances, " << failed << " failed (grid " << grid.to_string() << ")\n";
  o.text = text.str();
  return o;
}

TruncatedSpace pick_space(const LieAlgebra& g, std::optional<int> degree, std::optional<int> freq) {
  if (!degree && !freq) return default_truncation(g);
  int D = degree ? *degree : max_coefficient_degree(g) + 3;
  int F = freq ? *freq : 2;
  if (D < 0 || F < 1) throw UsageError{"--degree must be >= 0 and --freq >= 1"};
  try {
    return build_truncated_space(g, D, F);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegreeTooSmall) throw UsageError{e.what()};
    throw;
  }
}

json space_json(const TruncatedSpace& V) {
  json freqs = json::array();
  for (const auto& f : V.frequencies()) freqs.push_back(f.to_string());
  return {{"D", V.degree_bound()}, {"F", V.freq_budget()}, {"frequencies", freqs}, {"size", V.size()}};
}

Outcome cmd_cohomology(const std::string& ref, std::optional<int> degree, std::optional<int> freq) {
  Outcome o;
  Instance inst = base_of(resolve(ref), o.diagnostics);
  o.instance = instance_json(inst);
  LieAlgebra g(inst.generators);
  TruncatedSpace V = pick_space(g, degree, freq);
  CohomologyResult h = compute_h1(g, V);
  json reps = json::array();
  for (const auto& c : h.representatives) {
    json comps = json::array();
    for (const auto& p : c.components) comps.push_back(p.to_string());
    reps.push_back(comps);
  }
  o.payload = {{"instance", inst.ref().to_string()},
               {"truncation", space_json(h.truncation)},
               {"dim_Z1", h.dim_Z1},
               {"dim_B1", h.dim_B1},
               {"dim_H1", h.dim_H1},
               {"representatives", reps}};
  std::ostringstream text;
  text << inst.ref().to_string() << " at truncation " << h.truncation.to_string() << "\n";
  text << "  dim Z1 = " << h.dim_Z1 << "\n  dim B1 = " << h.dim_B1 << "\n  dim H1 = " << h.dim_H1 << "\n";
  for (const auto& c : h.representatives) text << "  representative " << c.to_string() << "\n";
  o.text = text.str();
  return o;
}

Outcome cmd_solve(const std::string& ref, const std::string& cap_text, std::optional<int> degree, bool no_prune) {
  auto cap = lift_type_from_string(cap_text);
  if (!cap) throw UsageError{"--cap must be metric, affine or projective"};
  Outcome o;
  Instance inst = base_of(resolve(ref), o.diagnostics);
  o.instance = instance_json(inst);
  LieAlgebra g(inst.generators);
  TruncatedSpace V = pick_space(g, degree, std::nullopt);
  SolveOptions opts;
  opts.prune = !no_prune;
  LiftSolveResult res;
  try {
    res = *cap == LiftType::Metric ? solve_metric_lifts(g, V) : solve_ansatz_lifts(g, *cap, V, opts);
  } catch (const Error& e) {
    o.ok = false;
    o.diagnostics.push_back(e.what());
    o.payload = {{"instance", inst.ref().to_string()}, {"cap", to_string(*cap)}, {"error", e.what()}};
    o.text = inst.ref().to_string() + ": " + e.what() + "\n";
    return o;
  }
  json branches = json::array();
  std::ostringstream text;
  text << inst.ref().to_string() << " cap=" << to_string(*cap) << "\n";
  text << "  truncation: " << res.truncation << "\n";
  for (const auto& n : res.notes) text << "  note: " << n << "\n";
  if (res.pruned) text << "  note: pruned before solving\n";
  text << "  branches: " << res.branches.size() << "\n";
  std::size_t k = 0;
  for (const auto& b : res.branches) {
    ++k;
    json free = json::array();
    for (const auto& f : b.assignment.free) free.push_back(f);
    json values = json::object();
    for (const auto& [name, v] : b.assignment.values) values[name] = v.to_string();
    branches.push_back({{"assignment", values},
                        {"free", free},
                        {"generators", fields_json(b.generators)},
                        {"type", type_name(b.type)},
                        {"transitive", b.transitive},
                        {"verified", b.verified()},
                        {"checks", checks_json(b.checks)}});
    if (!b.verified()) {
      o.ok = false;
      for (const auto& c : b.checks)
        if (!c.ok) o.diagnostics.push_back("branch " + std::to_string(k) + ": " + c.name + ": " + c.detail);
    }
    text << "  [" << k << "] type=" << type_name(b.type) << " transitive=" << (b.transitive ? "yes" : "no")
         << " verified=" << (b.verified() ? "yes" : "no") << "\n";
    text << "      constants: " << b.assignment.to_string() << "\n";
    for (const auto& X : b.generators) text << "      " << X.to_string() << "\n";
  }
  o.payload = {{"instance", inst.ref().to_string()},
               {"cap", to_string(*cap)},
               {"pruned", res.pruned},
               {"notes", res.notes},
               {"truncation", res.truncation},
               {"branches", branches},
               {"stats",
                {{"linear_unknowns", res.linear_unknowns},
                 {"fiber_unknowns", res.fiber_unknowns},
                 {"slices", res.slices},
                 {"raw_branches", res.raw_branches}}}};
  o.text = text.str();
  return o;
}

std::string echo(const std::vector<std::string>& args) {
  std::string out;
  for (const auto& a : args) out += (out.empty() ? "" : " ") + a;
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lifts of Lie algebras of vector fields from the plane to the total space of a line bundle", "liftlab"};
  app.require_subcommand(1);
  Options opts;
  app.add_flag("--json", opts.as_json, "Machine-readable report");
  app.add_flag("--timing", opts.timing, "Include wall-clock time in the report");

  std::string ref, cap, grid;
  std::optional<int> degree, freq;
  bool no_prune = false;
  auto* list = app.add_subcommand("list", "Catalog ids with parameter schemas");
  auto* show = app.add_subcommand("show", "Generators of an instance");
  show->add_option("ref", ref, "Instance, e.g. g8[r=5,alpha=2]")->required();
  auto* verify = app.add_subcommand("verify", "Verify one base or lift instance");
  verify->add_option("ref", ref)->required();
  auto* verify_all = app.add_subcommand("verify-all", "Verify every instance of the test grid");
  verify_all->add_option("--grid", grid, "Grid overrides, e.g. rmax=5,alpha=0|1");
  auto* coho = app.add_subcommand("cohomology", "H1 of a base algebra on a truncated function space");
  coho->add_option("ref", ref)->required();
  coho->add_option("--degree", degree, "Degree bound D");
  coho->add_option("--freq", freq, "Frequency budget F");
  auto* solve = app.add_subcommand("solve", "Solve for lifts of a base algebra");
  solve->add_option("ref", ref)->required();
  solve->add_option("--cap", cap, "metric, affine or projective")->required();
  solve->add_option("--degree", degree, "Degree bound D");
  solve->add_flag("--no-prune", no_prune, "Solve even when the stabilizer rules the cap out");
  for (auto* sub : {list, show, verify, verify_all, coho, solve}) sub->fallthrough();

  std::vector<std::string> argv_store{"liftlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "liftlab: " << e.what() << "\n" << "run 'liftlab --help' for usage\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    if (*list) o = cmd_list();
    else if (*show) o = cmd_show(ref);
    else if (*verify) o = cmd_verify(ref);
    else if (*verify_all) o = cmd_verify_all(verify_all->count("--grid") ? std::optional<std::string>(grid) : std::nullopt);
    else if (*coho) o = cmd_cohomology(ref, degree, freq);
    else o = cmd_solve(ref, cap, degree, no_prune);
  } catch (const UsageError& e) {
    err << "liftlab: " << e.message << "\n";
    return 2;
  } catch (const Error& e) {
    o.ok = false;
    o.diagnostics.push_back(e.what());
    o.text = std::string("error: ") + e.what() + "\n";
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  if (opts.as_json) {
    json report = {{"command", echo(args)},
                   {"instance", o.instance},
                   {"outcome", o.ok ? "ok" : "fail"},
                   {"diagnostics", o.diagnostics},
                   {"payload", o.payload},
                   {"versions", {{"liftlab", kVersion}, {"gmp", gmp_version}}}};
    if (opts.timing) report["timing_ms"] = ms;
    out << report.dump(2) << "\n";
  } else {
    out << o.text;
    for (const auto& d : o.diagnostics) out << "diagnostic: " << d << "\n";
    if (opts.timing) out << "time: " << ms << " ms\n";
  }
  return o.ok ? 0 : 1;
}

}  // namespace liftlab::cli
