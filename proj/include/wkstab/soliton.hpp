#pragma once

// Modified Futaki invariant, weighted volume and the soliton candidate for a
// rank-one torus with DH density rho on the moment interval.

#include "wkstab/expcalc.hpp"
#include "wkstab/geometry.hpp"

namespace wkstab {

struct DensityProfile {
  PiecewisePoly density;

  static DensityProfile from_slices(const SliceProfile& slices) { return {slices.area}; }
};

struct SolitonResult {
  real xi0 = 0;
  real residual = 0;  // futaki(profile, xi0)
  real vg = 0;        // weighted volume at xi0
  int iterations = 0;
};

// int e^{-xi a} rho(a) da; throws EmptyDensity when the unweighted mass is 0.
real weighted_volume(const DensityProfile& profile, real xi);

// -(int a e^{-xi a} rho) / (int e^{-xi a} rho); strictly increasing in xi.
real futaki(const DensityProfile& profile, real xi);

// Root of phi(xi) = int a e^{-xi a} rho(a) da by bracketing and safeguarded
// Newton. Throws NoBracket or NonConvergence.
SolitonResult solve_soliton(const DensityProfile& profile, real tol = 1e-14L);

}  // namespace wkstab
