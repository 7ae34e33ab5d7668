#include "wkstab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

constexpr real kExponentCap = 700;
constexpr int kMaxIterations = 200;

const Poly& identity_poly() {
  static const Poly p = Poly::monomial(1, 1);
  return p;
}

void require_mass(const DensityProfile& profile) {
  if (!(integrate_weighted(profile.density, 0) > 0))
    throw Error(ErrorKind::EmptyDensity, "density has no mass");
}

real phi(const DensityProfile& profile, real xi) {
  return integrate_weighted(profile.density.times(identity_poly()), -xi);
}

real phi_prime(const DensityProfile& profile, real xi) {
  return -integrate_weighted(profile.density.times(identity_poly() * identity_poly()), -xi);
}

}  // namespace

real weighted_volume(const DensityProfile& profile, real xi) {
  require_mass(profile);
  return integrate_weighted(profile.density, -xi);
}

real futaki(const DensityProfile& profile, real xi) {
  return -phi(profile, xi) / weighted_volume(profile, xi);
}

SolitonResult solve_soliton(const DensityProfile& profile, real tol) {
  require_mass(profile);
  const real reach = std::max(std::fabs(profile.density.lo()), std::fabs(profile.density.hi()));
  const real xi_limit = reach > 0 ? kExponentCap / reach : kExponentCap;

  // phi is strictly decreasing; find lo < hi with phi(lo) > 0 > phi(hi).
  real lo = -1, hi = 1;
  real f_lo = phi(profile, lo);
  while (f_lo <= 0) {
    if (f_lo == 0) return {lo, 0, weighted_volume(profile, lo), 0};
    hi = lo;
    lo *= 2;
    if (-lo > xi_limit) throw Error(ErrorKind::NoBracket, "phi has constant sign for xi down to the exponent cap");
    f_lo = phi(profile, lo);
  }
  real f_hi = phi(profile, hi);
  while (f_hi >= 0) {
    if (f_hi == 0) return {hi, 0, weighted_volume(profile, hi), 0};
    lo = hi;
    hi *= 2;
    if (hi > xi_limit) throw Error(ErrorKind::NoBracket, "phi has constant sign for xi up to the exponent cap");
    f_hi = phi(profile, hi);
  }

  real x = (lo + hi) / 2;
  for (int it = 1; it <= kMaxIterations; ++it) {
    const real f = phi(profile, x);
    const real vg = weighted_volume(profile, x);
    const real fut = -f / vg;
    if (std::fabs(fut) <= tol) return {x, fut, vg, it};
    if (f > 0) {
      lo = x;
    } else {
      hi = x;
    }
    const real step = f / phi_prime(profile, x);
    real next = x - step;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = (lo + hi) / 2;
    if (next == x) {
      // Bracket collapsed to adjacent representable values.
      if (std::fabs(fut) <= 1e3L * std::numeric_limits<real>::epsilon()) return {x, fut, vg, it};
      break;
    }
    x = next;
  }
  throw Error(ErrorKind::NonConvergence, "soliton solve did not converge");
}

}  // namespace wkstab
