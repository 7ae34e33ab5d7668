#pragma once

// Scenario data model, built-in scenario library and evaluation reports.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wkstab/filtration.hpp"
#include "wkstab/geometry.hpp"
#include "wkstab/stability.hpp"

namespace wkstab {

enum class Relation { Eq, Lb };

struct XiCheck {};
struct FutakiCheck {};
struct BodyVolumeCheck {};

// Weighted volume at a fixed xi, or at the soliton candidate when unset.
struct WeightedVolumeCheck {
  std::optional<real> xi;
};

struct LinearTransformCheck {
  LinearForm3 g;
};

struct FiberProfileCheck {
  FiberVolumeProfile profile;
};

struct PointProfileCheck {
  PointProfile profile;
  std::vector<FiberRegion> offsets;
};

// sum coeff * value(check) compared against rhs.
struct IdentityCheck {
  std::vector<std::pair<std::string, real>> lhs;
  real rhs = 0;
};

// Cone or bundle identity residual at the solved xi; compared against 0.
struct ConeIdentityCheck {};

using CheckKind = std::variant<XiCheck, FutakiCheck, BodyVolumeCheck, WeightedVolumeCheck, LinearTransformCheck,
                               FiberProfileCheck, PointProfileCheck, IdentityCheck, ConeIdentityCheck>;

std::string_view check_type_name(const CheckKind& kind);

struct Check {
  std::string id;
  CheckKind kind;
  std::optional<real> expect;
  std::optional<real> tol;  // falls back to the run tolerance (1e-10 for identities)
  Relation relation = Relation::Eq;
  std::optional<real> log_discrepancy;  // A of the divisor this check measures
};

struct TreeNode {
  std::string check;
  std::optional<std::string> name;  // defaults to the check id
  std::optional<real> log_discrepancy;  // overrides the check's A
  bool toric = false;
  std::vector<TreeNode> children;
};

struct ConeSpec {
  int n = 2;
  real r = 1;
  real lpow = 1;
  bool bundle = false;
  std::optional<real> a;
};

struct Scenario {
  std::string name;
  std::string note;
  std::vector<RationalPoint3> vertices;  // empty for cone scenarios
  std::optional<ConeSpec> cone;
  std::optional<real> soliton;  // explicit xi0; solved when unset
  std::vector<Check> checks;
  std::vector<TreeNode> tree;
};

// Throws UnknownScenario.
Scenario builtin_scenario(const std::string& id);
const std::vector<std::string>& builtin_ids();

// Structural checks: unique ids, resolvable references, body or cone present,
// well-formed profiles. Throws InvalidInput with a field path.
void validate_scenario(const Scenario& scenario);

// ---------------------------------------------------------------------------
// Evaluation.

struct RunOptions {
  real tol = 5e-6L;
  real identity_tol = 1e-10L;
  std::uint64_t lattice_cap = kDefaultLatticeCap;
};

struct CheckResult {
  std::string id;
  std::string type;
  real computed = 0;
  std::optional<real> expected;
  real tol = 0;
  Relation relation = Relation::Eq;
  bool pass = true;
};

struct AZEntryReport {
  std::string name;
  int depth = 0;
  real log_discrepancy = 0;
  real sg = 0;
  real ratio = 0;
  bool toric = false;
  bool is_lower_bound = false;
};

struct Report {
  std::string scenario;
  real xi0 = 0;
  real vg = 0;
  real futaki_residual = 0;
  int iterations = 0;
  std::vector<CheckResult> checks;
  std::vector<AZEntryReport> tree;
  std::optional<Verdict> verdict;
  std::optional<ConeReport> cone;
  double elapsed_ms = 0;

  bool all_pass() const;
};

Report run_scenario(const Scenario& scenario, const RunOptions& options = {});

struct LatticeRow {
  int m = 0;
  real discrete = 0;
  real error = 0;
};

struct LatticeTable {
  std::string check;
  real exact = 0;
  std::vector<LatticeRow> rows;  // m, m/2, m/4 in increasing order
  bool decreasing = false;
};

// Discrete vs exact S^g for every linear-transform check of the scenario.
std::vector<LatticeTable> lattice_check(const Scenario& scenario, int m, std::uint64_t cap = kDefaultLatticeCap);

}  // namespace wkstab
