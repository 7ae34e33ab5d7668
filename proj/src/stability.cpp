#include "wkstab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "wkstab/error.hpp"
#include "wkstab/soliton.hpp"

namespace wkstab {

namespace {

void collect(const AZNode& node, std::vector<DivisorEntry>& out) {
  out.push_back(node.divisor);
  for (const auto& child : node.children) collect(child, out);
}

real factorial(int d) {
  real f = 1;
  for (int k = 2; k <= d; ++k) f *= static_cast<real>(k);
  return f;
}

Poly cone_power(real r, int k) { return Poly::linear(-1, r).pow(static_cast<unsigned>(k)); }

ConeReport evaluate_cone(int n, real r, real lpow, real lo, real hi) {
  const DensityProfile density = cone_density(n, r, lpow, lo, hi);
  const SolitonResult sol = solve_soliton(density);
  ConeReport rep;
  rep.n = n;
  rep.r = r;
  rep.lo = lo;
  rep.hi = hi;
  rep.xi0 = sol.xi0;
  rep.vg = sol.vg;
  rep.identity_residual = cone_identity_residual(n, r, lo, hi, sol.xi0);
  const real top = integrate_exp_poly(cone_power(r, n), -sol.xi0, lo, hi);
  const real base = integrate_exp_poly(cone_power(r, n - 1), -sol.xi0, lo, hi);
  rep.s_ratio = top / base / r;
  return rep;
}

void require_cone_args(int n, real r, real lpow) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "cone dimension n must be >= 1");
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidInput, "cone parameter r must be positive");
  if (!(lpow > 0) || !std::isfinite(lpow)) throw Error(ErrorKind::InvalidInput, "volume L^{n-1} must be positive");
}

}  // namespace

real az_lower_bound(const AZNode& node) {
  real best = node.divisor.toric ? std::numeric_limits<real>::infinity() : node.divisor.ratio();
  for (const auto& child : node.children) best = std::min(best, az_lower_bound(child));
  return best;
}

std::vector<DivisorEntry> flatten(const AZNode& node) {
  std::vector<DivisorEntry> out;
  collect(node, out);
  return out;
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::SemistableCertificate:
      return "SemistableCertificate";
    case VerdictKind::UnstableWitness:
      return "UnstableWitness";
    case VerdictKind::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict verdict(real bound, std::span<const DivisorEntry> witnesses) {
  Verdict v;
  v.bound = bound;
  v.margin = std::numeric_limits<real>::infinity();

  const DivisorEntry* lowest = nullptr;
  const DivisorEntry* tie = nullptr;
  const DivisorEntry* weak = nullptr;
  for (const auto& e : witnesses) {
    if (e.toric) continue;
    const real ratio = e.ratio();
    v.margin = std::min(v.margin, std::fabs(ratio - 1));
    if (ratio < 1 - kVerdictTieBand) {
      if (lowest == nullptr || ratio < lowest->ratio()) lowest = &e;
    } else if (ratio <= 1 + kVerdictTieBand) {
      if (tie == nullptr) tie = &e;
    } else if (e.sg.is_lower_bound && weak == nullptr) {
      weak = &e;
    }
  }
  if (!std::isfinite(v.margin)) v.margin = std::fabs(bound - 1);

  // A lower bound on S^g only ever decreases the true ratio, so a ratio
  // below 1 still destabilizes.
  if (lowest != nullptr) {
    v.kind = VerdictKind::UnstableWitness;
    v.witness = lowest->name;
    std::ostringstream os;
    os << "A/S^g = " << static_cast<double>(lowest->ratio()) << " < 1 for " << lowest->name;
    v.note = os.str();
    return v;
  }
  if (tie != nullptr) {
    v.kind = VerdictKind::Inconclusive;
    v.witness = tie->name;
    v.note = "A/S^g = 1 within tie band for " + tie->name;
    return v;
  }
  if (weak != nullptr) {
    v.kind = VerdictKind::Inconclusive;
    v.note = "only a lower bound of S^g is known for " + weak->name;
    return v;
  }
  if (bound >= 1 + kVerdictTieBand) {
    v.kind = VerdictKind::SemistableCertificate;
    std::ostringstream os;
    os << "delta^g >= " << static_cast<double>(bound);
    v.note = os.str();
    return v;
  }
  v.kind = VerdictKind::Inconclusive;
  v.note = "refinement bound does not exceed 1";
  return v;
}

DensityProfile cone_density(int n, real r, real lpow, real lo, real hi) {
  require_cone_args(n, r, lpow);
  if (!(lo < hi)) throw Error(ErrorKind::BadBoundary, "empty moment interval");
  return {PiecewisePoly{{Chamber{lo, hi, cone_power(r, n - 1) * (lpow / factorial(n - 1))}}}};
}

real cone_identity_residual(int n, real r, real lo, real hi, real xi) {
  const real top = integrate_exp_poly(cone_power(r, n), -xi, lo, hi);
  const real base = integrate_exp_poly(cone_power(r, n - 1), -xi, lo, hi);
  return std::fabs(top - r * base) / std::fabs(r * base);
}

ConeReport cone_scenario(int n, real r, real lpow) {
  require_cone_args(n, r, lpow);
  return evaluate_cone(n, r, lpow, -1, r);
}

ConeReport bundle_scenario(int n, real r, std::optional<real> a, real lpow) {
  require_cone_args(n, r, lpow);
  if (r > 1) {
    ConeReport rep = evaluate_cone(n, r, lpow, -1, 1);
    return rep;
  }
  if (!a) throw Error(ErrorKind::BadBoundary, "r <= 1 requires a boundary coefficient a");
  if (!(*a > 1 - r && *a < 1)) {
    std::ostringstream os;
    os << "boundary coefficient a = " << static_cast<double>(*a) << " outside (1 - r, 1) = ("
       << static_cast<double>(1 - r) << ", 1)";
    throw Error(ErrorKind::BadBoundary, os.str());
  }
  ConeReport rep = evaluate_cone(n, r, lpow, -1, 1 - *a);
  rep.a = a;
  return rep;
}

}  // namespace wkstab
