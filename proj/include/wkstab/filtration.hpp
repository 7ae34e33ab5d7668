#pragma once

// Weighted expected vanishing orders S^g.
//
// Three routes are provided:
//   * linear concave transforms G on the Okounkov body,
//     S = (1/v^g) int_O G e^{-xi w};
//   * fiberwise volume profiles vol(w, t) of the filtered graded pieces,
//     S = 1/(d! v^g) int e^{-xi w} int vol(w, t) dt dw;
//   * point filtrations on a P^1-valued refinement, given by the movable
//     degree d(w, t) and explicit fixed-part corrections.
// plus the discrete lattice approximation of the first route.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wkstab/expcalc.hpp"
#include "wkstab/geometry.hpp"

namespace wkstab {

// Polynomial integrand on {w_lo <= w <= w_hi, lower(w) <= t <= upper(w)}.
struct FiberRegion {
  real w_lo = 0;
  real w_hi = 0;
  AffineForm t_lower;
  AffineForm t_upper;
  BiPoly vol;
};

struct FiberVolumeProfile {
  int dim = 2;  // fiber dimension d; the profile is normalized by 1/d!
  std::vector<FiberRegion> regions;
  std::string label;
};

// Movable P^1 degrees d(w, t) of a refinement, stored with dim = 1.
struct PointProfile {
  FiberVolumeProfile degrees;
};

struct SgResult {
  real value = 0;
  real vg_used = 0;
  bool is_lower_bound = false;
};

// Throws InvalidInput naming the first violated invariant: t-ranges tile an
// interval starting at 0, vol >= 0, vol non-increasing and continuous in t,
// vol vanishing at the top of the last region. Sampled on a grid x grid mesh
// per region.
void validate_fiber_profile(const FiberVolumeProfile& profile, int grid = 50);

// Degrees and correction integrands must be non-negative on their regions.
void validate_point_profile(const PointProfile& profile, const std::vector<FiberRegion>& offsets, int grid = 50);

// (1/d!) int e^{-xi w} vol(w, 0) dw over the regions starting at t = 0.
real implied_weighted_volume(const FiberVolumeProfile& profile, real xi);

// int e^{-xi w} int d(w, t) dt dw.
real implied_weighted_volume(const PointProfile& profile, real xi);

// When vg is given it must agree with the profile's implied volume to 1e-6
// relative (ProfileMismatch otherwise); without vg the implied volume is used.
SgResult sg_fiber_profile(const FiberVolumeProfile& profile, real xi, std::optional<real> vg = std::nullopt);

// S^g of a point on the P^1 refinement: general-point integrand d^2/2 plus
// the supplied fixed-part corrections (e.g. c(w, t) d(w, t) for a point of
// multiplicity c in the fixed part).
SgResult sg_point(const PointProfile& profile, const std::vector<FiberRegion>& offsets, real xi,
                  std::optional<real> vg = std::nullopt);

SgResult sg_linear_transform(const OkounkovBody& body, const LinearForm3& g, real xi);

// Lattice approximation sum G e^{-xi w} / sum e^{-xi w} over (1/m) Z^3 in O.
real discrete_sg(const OkounkovBody& body, const LinearForm3& g, real xi, int m,
                 std::uint64_t cap = kDefaultLatticeCap);

}  // namespace wkstab
