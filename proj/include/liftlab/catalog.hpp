#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liftlab/liealg.hpp"

namespace liftlab {

/// Parameter assignment. Lower-case keys are family parameters (r, s, alpha,
/// alphas, ms); upper-case keys assign free constants such as C or C_2_1.
/// Scalars are stored as one-element lists.
class Params {
 public:
  Params() = default;
  Params(std::initializer_list<std::pair<const std::string, std::vector<GaussianRational>>> init) : values_(init) {}

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::vector<GaussianRational>& list(const std::string& key) const;
  const GaussianRational& scalar(const std::string& key) const;
  /// Integer parameter; raises InvalidParameter for non-integers.
  long integer(const std::string& key) const;
  void set(const std::string& key, std::vector<GaussianRational> v) { values_[key] = std::move(v); }
  void set(const std::string& key, GaussianRational v) { values_[key] = {std::move(v)}; }
  void erase(const std::string& key) { values_.erase(key); }
  const std::map<std::string, std::vector<GaussianRational>>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  /// "r=5,alpha=2" with family parameters first in a fixed order.
  std::string to_string() const;
  friend bool operator==(const Params&, const Params&) = default;

 private:
  std::map<std::string, std::vector<GaussianRational>> values_;
};

struct InstanceRef {
  std::string id;
  Params params;

  /// "g8[r=5,alpha=2]", or just the id without parameters.
  std::string to_string() const;
  /// Parses the instantiation grammar. Raises ParseError.
  static InstanceRef parse(std::string_view text);
  friend bool operator==(const InstanceRef&, const InstanceRef&) = default;
};

struct ParamSpec {
  std::string name;
  std::string description;
};

struct CatalogEntry {
  std::string id;
  std::string base_id;  // equal to id for base algebras
  std::optional<LiftType> type;
  std::vector<ParamSpec> schema;
  std::string constraints;
  std::string description;
  bool transitivity_waived = false;
  bool is_lift() const { return type.has_value(); }
};

/// Every base and lift entry, in listing order.
const std::vector<CatalogEntry>& catalog();
/// Raises UnknownId.
const CatalogEntry& catalog_entry(std::string_view id);

struct Instance {
  const CatalogEntry* entry = nullptr;
  /// Normalized parameters (derived values such as r filled in).
  Params params;
  std::vector<VectorField> generators;
  PointAssignment sample_point;
  /// Parameters of the base algebra this lift sits over (same as params for
  /// base entries).
  InstanceRef base() const;
  InstanceRef ref() const { return {entry->id, params}; }
};

/// Raises UnknownId or InvalidParameter naming the violated constraint.
Instance instantiate(const InstanceRef& ref);
Instance instantiate(std::string_view text);

/// Finite parameter grid for exhaustive checks.
struct TestGrid {
  int r_max = 7;
  std::vector<GaussianRational> alphas;  // values of alpha
  std::vector<GaussianRational> frequencies;  // pool for g4/g5 frequency lists
  int max_frequencies = 2;
  int r_span = 2;  // r ranges over [min, min + r_span]

  static TestGrid defaults();
  /// Overrides from text like "rmax=6,alpha=0|1,freq=0|1,nfreq=2,rspan=1".
  /// Raises ParseError.
  static TestGrid parse(std::string_view text);
  /// Defaults, overridden by the LIFTLAB_GRID environment variable if set.
  static TestGrid from_environment();
  std::string to_string() const;
};

/// Every catalog id with every valid grid assignment, in catalog order.
std::vector<InstanceRef> enumerate_instances(const TestGrid& grid);

}  // namespace liftlab
