#include "wkstab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

using I3 = std::array<std::int64_t, 3>;
using i128 = __int128;

I3 sub(const I3& a, const I3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

I3 cross(const I3& a, const I3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

i128 dot(const I3& a, const I3& b) {
  return static_cast<i128>(a[0]) * b[0] + static_cast<i128>(a[1]) * b[1] + static_cast<i128>(a[2]) * b[2];
}

bool is_zero(const I3& a) { return a[0] == 0 && a[1] == 0 && a[2] == 0; }

std::int64_t common_denominator(std::span<const RationalPoint3> pts) {
  std::int64_t d = 1;
  for (const auto& p : pts)
    for (const Rational* r : {&p.w, &p.y, &p.x}) d = std::lcm(d, r->den);
  return d;
}

I3 scaled(const RationalPoint3& p, std::int64_t d) {
  return {p.w.num * (d / p.w.den), p.y.num * (d / p.y.den), p.x.num * (d / p.x.den)};
}

std::int64_t cross2(const std::array<std::int64_t, 2>& o, const std::array<std::int64_t, 2>& a,
                    const std::array<std::int64_t, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

// Strict convex hull of coplanar points projected to 2D; returns indices into
// `ids` in counter-clockwise order of the projection.
std::vector<std::size_t> polygon_hull(const std::vector<std::size_t>& ids, const std::vector<I3>& pts,
                                      int drop) {
  const int u = drop == 0 ? 1 : 0;
  const int v = drop == 2 ? 1 : 2;
  std::vector<std::pair<std::array<std::int64_t, 2>, std::size_t>> q;
  for (std::size_t id : ids) q.push_back({{pts[id][u], pts[id][v]}, id});
  std::sort(q.begin(), q.end());
  std::vector<std::pair<std::array<std::int64_t, 2>, std::size_t>> h(2 * q.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2].first, h[k - 1].first, q[i].first) <= 0) --k;
    h[k++] = q[i];
  }
  for (std::size_t i = q.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(h[k - 2].first, h[k - 1].first, q[i].first) <= 0) --k;
    h[k++] = q[i];
  }
  h.resize(k - 1);
  std::vector<std::size_t> out;
  for (const auto& e : h) out.push_back(e.second);
  return out;
}

}  // namespace

Hull convex_hull(std::span<const RationalPoint3> input) {
  std::vector<RationalPoint3> pts(input.begin(), input.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 4) throw Error(ErrorKind::DegenerateBody, "need at least 4 distinct points");

  const std::int64_t den = common_denominator(pts);
  std::vector<I3> s;
  s.reserve(pts.size());
  for (const auto& p : pts) s.push_back(scaled(p, den));

  // Full-dimensionality: some non-collinear triple with a point off its plane.
  {
    I3 nrm{};
    for (std::size_t j = 1; j < s.size() && is_zero(nrm); ++j)
      for (std::size_t k = j + 1; k < s.size() && is_zero(nrm); ++k) nrm = cross(sub(s[j], s[0]), sub(s[k], s[0]));
    const bool solid = !is_zero(nrm) && std::any_of(s.begin(), s.end(), [&](const I3& p) {
      return dot(nrm, sub(p, s[0])) != 0;
    });
    if (!solid) throw Error(ErrorKind::DegenerateBody, "points are coplanar");
  }

  std::map<std::pair<I3, std::int64_t>, bool> planes;
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        I3 nrm = cross(sub(s[j], s[i]), sub(s[k], s[i]));
        if (is_zero(nrm)) continue;
        const std::int64_t g = std::gcd(std::gcd(std::llabs(nrm[0]), std::llabs(nrm[1])), std::llabs(nrm[2]));
        for (auto& c : nrm) c /= g;
        bool pos = false, neg = false;
        for (std::size_t l = 0; l < n && !(pos && neg); ++l) {
          const i128 sd = dot(nrm, sub(s[l], s[i]));
          pos |= sd > 0;
          neg |= sd < 0;
        }
        if (pos && neg) continue;
        if (pos)
          for (auto& c : nrm) c = -c;
        planes.emplace(std::make_pair(nrm, static_cast<std::int64_t>(dot(nrm, s[i]))), true);
      }

  // Facet polygons in the deduplicated input indexing.
  std::vector<std::pair<I3, std::vector<std::size_t>>> raw;
  std::set<std::size_t> extreme;
  for (const auto& [key, unused] : planes) {
    const auto& [nrm, off] = key;
    std::vector<std::size_t> on;
    for (std::size_t l = 0; l < n; ++l)
      if (dot(nrm, s[l]) == off) on.push_back(l);
    int drop = 0;
    for (int a = 1; a < 3; ++a)
      if (std::llabs(nrm[a]) > std::llabs(nrm[drop])) drop = a;
    auto cyc = polygon_hull(on, s, drop);
    if (cyc.size() < 3) continue;
    const I3 c3 = cross(sub(s[cyc[1]], s[cyc[0]]), sub(s[cyc[2]], s[cyc[0]]));
    if (dot(c3, nrm) < 0) std::reverse(cyc.begin(), cyc.end());
    extreme.insert(cyc.begin(), cyc.end());
    raw.push_back({nrm, std::move(cyc)});
  }

  Hull hull;
  std::vector<std::size_t> remap(n, 0);
  for (std::size_t id : extreme) {  // std::set iterates in lexicographic order of pts
    remap[id] = hull.vertices.size();
    hull.vertices.push_back(pts[id]);
  }
  std::set<std::array<std::size_t, 2>> edges;
  for (auto& [nrm, cyc] : raw) {
    Facet f;
    f.normal = nrm;
    f.offset = Rational(static_cast<std::int64_t>(dot(nrm, s[cyc[0]])), den);
    for (std::size_t id : cyc) f.vertices.push_back(remap[id]);
    std::rotate(f.vertices.begin(), std::min_element(f.vertices.begin(), f.vertices.end()), f.vertices.end());
    for (std::size_t a = 0; a < f.vertices.size(); ++a) {
      std::size_t p = f.vertices[a], q = f.vertices[(a + 1) % f.vertices.size()];
      edges.insert({std::min(p, q), std::max(p, q)});
    }
    hull.facets.push_back(std::move(f));
  }
  std::sort(hull.facets.begin(), hull.facets.end(),
            [](const Facet& a, const Facet& b) { return a.vertices < b.vertices; });
  hull.edges.assign(edges.begin(), edges.end());
  return hull;
}

// ---------------------------------------------------------------------------

OkounkovBody::OkounkovBody(std::vector<RationalPoint3> vertices, std::string label)
    : label_(std::move(label)), hull_(convex_hull(vertices)) {
  scale_ = common_denominator(hull_.vertices);
  for (const auto& v : hull_.vertices) breakpoints_.push_back(v.w.to_real());
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
  w_min_ = breakpoints_.front();
  w_max_ = breakpoints_.back();
}

Point3 OkounkovBody::vertex(std::size_t i) const {
  const auto& v = hull_.vertices.at(i);
  return {v.w.to_real(), v.y.to_real(), v.x.to_real()};
}

namespace {

// Fiber vertex moving affinely in w along an edge.
struct MovingPoint {
  Poly y, x;
};

// Fiber polygon over the open chamber (lo, hi), counter-clockwise in the
// (y, x) plane and rotated to start at the lexicographically smallest vertex.
std::vector<MovingPoint> chamber_polygon(const OkounkovBody& body, real lo, real hi) {
  const real mid = (lo + hi) / 2;
  std::vector<MovingPoint> pts;
  for (const auto& e : body.hull().edges) {
    Point3 a = body.vertex(e[0]);
    Point3 b = body.vertex(e[1]);
    if (a.w > b.w) std::swap(a, b);
    if (!(a.w <= lo && b.w >= hi)) continue;
    const real dw = b.w - a.w;
    const real sy = (b.y - a.y) / dw;
    const real sx = (b.x - a.x) / dw;
    pts.push_back({Poly::linear(sy, a.y - sy * a.w), Poly::linear(sx, a.x - sx * a.w)});
  }
  if (pts.size() < 3) throw Error(ErrorKind::DegenerateBody, "chamber fiber is not a polygon");
  real cy = 0, cx = 0;
  for (const auto& p : pts) {
    cy += p.y(mid);
    cx += p.x(mid);
  }
  cy /= static_cast<real>(pts.size());
  cx /= static_cast<real>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const MovingPoint& a, const MovingPoint& b) {
    return std::atan2(a.x(mid) - cx, a.y(mid) - cy) < std::atan2(b.x(mid) - cx, b.y(mid) - cy);
  });
  auto lex_less = [&](const MovingPoint& a, const MovingPoint& b) {
    const real ay = a.y(mid), by = b.y(mid);
    if (ay != by) return ay < by;
    return a.x(mid) < b.x(mid);
  };
  std::rotate(pts.begin(), std::min_element(pts.begin(), pts.end(), lex_less), pts.end());
  return pts;
}

Poly triangle_area(const MovingPoint& p0, const MovingPoint& p1, const MovingPoint& p2) {
  return real(0.5) * ((p1.y - p0.y) * (p2.x - p0.x) - (p1.x - p0.x) * (p2.y - p0.y));
}

template <class PerTriangle>
PiecewisePoly fan_profile(const OkounkovBody& body, PerTriangle&& per_triangle) {
  PiecewisePoly out;
  const auto& bp = body.breakpoints();
  for (std::size_t c = 0; c + 1 < bp.size(); ++c) {
    const auto poly = chamber_polygon(body, bp[c], bp[c + 1]);
    Poly acc;
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) acc += per_triangle(poly[0], poly[i], poly[i + 1]);
    out.chambers.push_back({bp[c], bp[c + 1], std::move(acc)});
  }
  return out;
}

}  // namespace

SliceProfile slice_area_profile(const OkounkovBody& body) {
  return {fan_profile(body, triangle_area)};
}

MomentProfile linear_moment_profile(const OkounkovBody& body, const LinearForm3& g) {
  auto value = [&](const MovingPoint& p) { return Poly::linear(g.c_w, g.constant) + g.c_y * p.y + g.c_x * p.x; };
  return {fan_profile(body, [&](const MovingPoint& a, const MovingPoint& b, const MovingPoint& c) {
    return triangle_area(a, b, c) * ((value(a) + value(b) + value(c)) * (real(1) / 3));
  })};
}

real body_volume(const OkounkovBody& body) {
  const std::int64_t d = body.scale();
  std::vector<I3> s;
  for (const auto& v : body.vertices()) s.push_back(scaled(v, d));
  i128 six_vol = 0;
  for (const auto& f : body.hull().facets) {
    const I3& a = s[f.vertices[0]];
    for (std::size_t i = 1; i + 1 < f.vertices.size(); ++i)
      six_vol += dot(a, cross(s[f.vertices[i]], s[f.vertices[i + 1]]));
  }
  const real dd = static_cast<real>(d);
  return static_cast<real>(six_vol) / (6 * dd * dd * dd);
}

}  // namespace wkstab
