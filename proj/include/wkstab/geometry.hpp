#pragma once

// Okounkov bodies in R^3 with coordinates (w, y, x); w is the torus weight.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wkstab/expcalc.hpp"
#include "wkstab/rational.hpp"

namespace wkstab {

struct RationalPoint3 {
  Rational w, y, x;

  friend bool operator==(const RationalPoint3&, const RationalPoint3&) = default;
  friend bool operator<(const RationalPoint3& a, const RationalPoint3& b) {
    if (!(a.w == b.w)) return a.w < b.w;
    if (!(a.y == b.y)) return a.y < b.y;
    return a.x < b.x;
  }
};

struct Point3 {
  real w = 0, y = 0, x = 0;
};

// Supporting plane normal . p <= offset with a primitive integer normal
// (in the common-denominator scaling of the input) pointing outward.
struct Facet {
  std::array<std::int64_t, 3> normal{};
  Rational offset;
  // Indices into Hull::vertices, counter-clockwise seen from outside, starting
  // at the smallest index.
  std::vector<std::size_t> vertices;

  friend bool operator==(const Facet&, const Facet&) = default;
};

struct Hull {
  std::vector<RationalPoint3> vertices;  // extreme points, lexicographic
  std::vector<Facet> facets;             // sorted by vertex cycle
  std::vector<std::array<std::size_t, 2>> edges;

  friend bool operator==(const Hull&, const Hull&) = default;
};

// Throws DegenerateBody for fewer than 4 distinct or coplanar points.
Hull convex_hull(std::span<const RationalPoint3> points);

// G(w, y, x) = c_w w + c_y y + c_x x + constant
struct LinearForm3 {
  real c_w = 0, c_y = 0, c_x = 0, constant = 0;

  real operator()(const Point3& p) const noexcept { return c_w * p.w + c_y * p.y + c_x * p.x + constant; }
  friend LinearForm3 operator+(const LinearForm3& a, const LinearForm3& b) {
    return {a.c_w + b.c_w, a.c_y + b.c_y, a.c_x + b.c_x, a.constant + b.constant};
  }
  friend LinearForm3 operator*(real s, const LinearForm3& a) {
    return {s * a.c_w, s * a.c_y, s * a.c_x, s * a.constant};
  }
};

class OkounkovBody {
 public:
  OkounkovBody(std::vector<RationalPoint3> vertices, std::string label = {});

  const std::string& label() const noexcept { return label_; }
  const Hull& hull() const noexcept { return hull_; }
  const std::vector<RationalPoint3>& vertices() const noexcept { return hull_.vertices; }
  real w_min() const noexcept { return w_min_; }
  real w_max() const noexcept { return w_max_; }
  // Distinct vertex weights, ascending.
  const std::vector<real>& breakpoints() const noexcept { return breakpoints_; }
  // Common denominator of the vertex coordinates.
  std::int64_t scale() const noexcept { return scale_; }
  Point3 vertex(std::size_t i) const;

 private:
  std::string label_;
  Hull hull_;
  std::vector<real> breakpoints_;
  real w_min_ = 0, w_max_ = 0;
  std::int64_t scale_ = 1;
};

// Fiber area A(w) of the slice {w = const}.
struct SliceProfile {
  PiecewisePoly area;
};

// M(w) = integral of G over the fiber at w.
struct MomentProfile {
  PiecewisePoly moment;
};

SliceProfile slice_area_profile(const OkounkovBody& body);
MomentProfile linear_moment_profile(const OkounkovBody& body, const LinearForm3& g);

// Volume by the divergence theorem over the facets; exact up to the final
// conversion.
real body_volume(const OkounkovBody& body);

// ---------------------------------------------------------------------------
// Lattice points (1/m) Z^3 in the closed body.

inline constexpr std::uint64_t kDefaultLatticeCap = 100'000'000;

// Reads WKSTAB_LATTICE_CAP, falling back to kDefaultLatticeCap.
std::uint64_t lattice_cap_from_env();

std::uint64_t lattice_count(const OkounkovBody& body, int m);

// Throws ResourceLimit when the count exceeds cap.
std::vector<Point3> lattice_points(const OkounkovBody& body, int m,
                                   std::uint64_t cap = kDefaultLatticeCap);

struct LatticeSums {
  real weight = 0;     // sum of e^{-xi w}
  real weighted_g = 0; // sum of G e^{-xi w}
  std::uint64_t count = 0;
};

// Column-interval kernel, parallel over w-layers.
LatticeSums lattice_weighted_sums(const OkounkovBody& body, const LinearForm3& g, real xi, int m,
                                  std::uint64_t cap = kDefaultLatticeCap);

namespace serial {
// Reference kernels: bounding-box scan with a half-space test per point.
std::uint64_t lattice_count(const OkounkovBody& body, int m);
LatticeSums lattice_weighted_sums(const OkounkovBody& body, const LinearForm3& g, real xi, int m);
}  // namespace serial

}  // namespace wkstab
