#pragma once

// Weighted Abban-Zhuang lower bounds and numeric stability verdicts.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wkstab/expcalc.hpp"
#include "wkstab/filtration.hpp"
#include "wkstab/soliton.hpp"

namespace wkstab {

struct DivisorEntry {
  std::string name;
  real log_discrepancy = 1;  // A_{X,Delta}(F), always supplied
  SgResult sg;
  // Toric divisors of the torus action: their ratio is 1 by the choice of
  // the soliton candidate and does not enter the refinement bound.
  bool toric = false;

  real ratio() const { return log_discrepancy / sg.value; }
};

struct AZNode {
  DivisorEntry divisor;
  std::vector<AZNode> children;
};

// Minimum of A/S^g over the non-toric nodes of the subtree (+inf if none).
real az_lower_bound(const AZNode& node);

// Every entry of the tree in depth-first order.
std::vector<DivisorEntry> flatten(const AZNode& node);

enum class VerdictKind { SemistableCertificate, UnstableWitness, Inconclusive };

std::string_view to_string(VerdictKind kind);

// Ratios within this distance of 1 are treated as equalities.
inline constexpr real kVerdictTieBand = 5e-7L;

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  real bound = 0;
  std::optional<std::string> witness;
  real margin = 0;  // min over non-toric entries of |A/S^g - 1|
  std::string note;
};

Verdict verdict(real bound, std::span<const DivisorEntry> witnesses);

// ---------------------------------------------------------------------------
// Cones and P^1-bundles over a log Fano base (rank-one cone torus).

struct ConeReport {
  int n = 0;
  real r = 0;
  std::optional<real> a;
  real lo = -1, hi = 0;  // moment interval
  real xi0 = 0;
  real vg = 0;
  // |int g (r-a)^n - r int g (r-a)^{n-1}| / (r int g (r-a)^{n-1})
  real identity_residual = 0;
  // (int g (r-a)^n / int g (r-a)^{n-1}) / r; equals 1 when S^g(W; v) = r S(L; v).
  real s_ratio = 0;
};

// DH density (r - a)^{n-1} lpow / (n-1)! on [lo, hi].
DensityProfile cone_density(int n, real r, real lpow, real lo, real hi);

// Relative residual of the cone identity at an arbitrary xi.
real cone_identity_residual(int n, real r, real lo, real hi, real xi);

ConeReport cone_scenario(int n, real r, real lpow = 1);

// P = [-1, 1] for r > 1 (a ignored), P = [-1, 1 - a] with 1 - r < a < 1 for
// r <= 1; BadBoundary otherwise.
ConeReport bundle_scenario(int n, real r, std::optional<real> a, real lpow = 1);

}  // namespace wkstab
