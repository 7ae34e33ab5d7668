#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "wkstab/error.hpp"
#include "wkstab/geometry.hpp"

namespace wkstab {

namespace {

using i128 = __int128;

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 ceil_div(i128 a, i128 b) { return -floor_div(-a, b); }

struct Box {
  std::int64_t lo[3];
  std::int64_t hi[3];
};

// Integer index box of (1/m) Z^3 points inside the vertex bounding box.
Box index_box(const OkounkovBody& body, int m) {
  Box b{};
  for (int a = 0; a < 3; ++a) {
    Rational mn, mx;
    bool first = true;
    for (const auto& v : body.vertices()) {
      const Rational& c = a == 0 ? v.w : a == 1 ? v.y : v.x;
      if (first || c < mn) mn = c;
      if (first || mx < c) mx = c;
      first = false;
    }
    b.lo[a] = static_cast<std::int64_t>(ceil_div(static_cast<i128>(mn.num) * m, mn.den));
    b.hi[a] = static_cast<std::int64_t>(floor_div(static_cast<i128>(mx.num) * m, mx.den));
  }
  return b;
}

bool inside(const OkounkovBody& body, int m, std::int64_t i, std::int64_t j, std::int64_t k) {
  for (const auto& f : body.hull().facets) {
    const i128 lhs = (static_cast<i128>(f.normal[0]) * i + static_cast<i128>(f.normal[1]) * j +
                      static_cast<i128>(f.normal[2]) * k) *
                     f.offset.den;
    if (lhs > static_cast<i128>(f.offset.num) * m) return false;
  }
  return true;
}

// Closed k-interval of the column (i, j); empty when lo > hi.
std::pair<std::int64_t, std::int64_t> column(const OkounkovBody& body, const Box& box, int m, std::int64_t i,
                                             std::int64_t j) {
  i128 lo = box.lo[2], hi = box.hi[2];
  for (const auto& f : body.hull().facets) {
    const i128 a = static_cast<i128>(f.normal[2]) * f.offset.den;
    const i128 rhs = static_cast<i128>(f.offset.num) * m -
                     (static_cast<i128>(f.normal[0]) * i + static_cast<i128>(f.normal[1]) * j) * f.offset.den;
    if (a > 0) {
      hi = std::min(hi, floor_div(rhs, a));
    } else if (a < 0) {
      lo = std::max(lo, ceil_div(rhs, a));
    } else if (rhs < 0) {
      return {1, 0};
    }
    if (lo > hi) return {1, 0};
  }
  return {static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)};
}

struct LayerSums {
  std::uint64_t count = 0;
  real g_sum = 0;
};

LayerSums layer(const OkounkovBody& body, const Box& box, int m, std::int64_t i, const LinearForm3& g) {
  LayerSums out;
  CompensatedSum acc;
  const real mr = static_cast<real>(m);
  const real w = static_cast<real>(i) / mr;
  for (std::int64_t j = box.lo[1]; j <= box.hi[1]; ++j) {
    const auto [k0, k1] = column(body, box, m, i, j);
    if (k0 > k1) continue;
    const std::uint64_t cnt = static_cast<std::uint64_t>(k1 - k0 + 1);
    out.count += cnt;
    const real y = static_cast<real>(j) / mr;
    const real ksum = static_cast<real>(k0 + k1) * static_cast<real>(cnt) / 2;
    acc += static_cast<real>(cnt) * (g.c_w * w + g.c_y * y + g.constant) + g.c_x * ksum / mr;
  }
  out.g_sum = acc.value();
  return out;
}

void check_cap(const OkounkovBody& body, int m, std::uint64_t cap) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "lattice refinement m must be >= 1");
  const real mr = static_cast<real>(m);
  if (body_volume(body) * mr * mr * mr > static_cast<real>(cap))
    throw Error(ErrorKind::ResourceLimit, "lattice point count would exceed cap " + std::to_string(cap));
}

}  // namespace

std::uint64_t lattice_cap_from_env() {
  const char* env = std::getenv("WKSTAB_LATTICE_CAP");
  if (env == nullptr || *env == '\0') return kDefaultLatticeCap;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0' || v == 0) return kDefaultLatticeCap;
  return v;
}

std::uint64_t lattice_count(const OkounkovBody& body, int m) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "lattice refinement m must be >= 1");
  const Box box = index_box(body, m);
  std::uint64_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic)
  for (std::int64_t i = box.lo[0]; i <= box.hi[0]; ++i)
    for (std::int64_t j = box.lo[1]; j <= box.hi[1]; ++j) {
      const auto [k0, k1] = column(body, box, m, i, j);
      if (k0 <= k1) total += static_cast<std::uint64_t>(k1 - k0 + 1);
    }
  return total;
}

std::vector<Point3> lattice_points(const OkounkovBody& body, int m, std::uint64_t cap) {
  const std::uint64_t count = lattice_count(body, m);
  if (count > cap)
    throw Error(ErrorKind::ResourceLimit,
                std::to_string(count) + " lattice points exceed cap " + std::to_string(cap));
  const Box box = index_box(body, m);
  const real mr = static_cast<real>(m);
  std::vector<Point3> out;
  out.reserve(count);
  for (std::int64_t i = box.lo[0]; i <= box.hi[0]; ++i)
    for (std::int64_t j = box.lo[1]; j <= box.hi[1]; ++j) {
      const auto [k0, k1] = column(body, box, m, i, j);
      for (std::int64_t k = k0; k <= k1; ++k)
        out.push_back({static_cast<real>(i) / mr, static_cast<real>(j) / mr, static_cast<real>(k) / mr});
    }
  return out;
}

LatticeSums lattice_weighted_sums(const OkounkovBody& body, const LinearForm3& g, real xi, int m,
                                  std::uint64_t cap) {
  check_cap(body, m, cap);
  const Box box = index_box(body, m);
  const std::int64_t layers = box.hi[0] - box.lo[0] + 1;
  std::vector<LayerSums> per_layer(static_cast<std::size_t>(std::max<std::int64_t>(layers, 0)));
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t l = 0; l < layers; ++l)
    per_layer[static_cast<std::size_t>(l)] = layer(body, box, m, box.lo[0] + l, g);

  // Ordered reduction keeps the result independent of the thread count.
  LatticeSums out;
  CompensatedSum weight, weighted;
  for (std::int64_t l = 0; l < layers; ++l) {
    const auto& s = per_layer[static_cast<std::size_t>(l)];
    const real w = static_cast<real>(box.lo[0] + l) / static_cast<real>(m);
    const real gw = std::exp(-xi * w);
    out.count += s.count;
    weight += gw * static_cast<real>(s.count);
    weighted += gw * s.g_sum;
  }
  if (out.count > cap)
    throw Error(ErrorKind::ResourceLimit,
                std::to_string(out.count) + " lattice points exceed cap " + std::to_string(cap));
  out.weight = weight.value();
  out.weighted_g = weighted.value();
  return out;
}

namespace serial {

std::uint64_t lattice_count(const OkounkovBody& body, int m) {
  const Box box = index_box(body, m);
  std::uint64_t total = 0;
  for (std::int64_t i = box.lo[0]; i <= box.hi[0]; ++i)
    for (std::int64_t j = box.lo[1]; j <= box.hi[1]; ++j)
      for (std::int64_t k = box.lo[2]; k <= box.hi[2]; ++k)
        if (inside(body, m, i, j, k)) ++total;
  return total;
}

LatticeSums lattice_weighted_sums(const OkounkovBody& body, const LinearForm3& g, real xi, int m) {
  const Box box = index_box(body, m);
  const real mr = static_cast<real>(m);
  LatticeSums out;
  CompensatedSum weight, weighted;
  for (std::int64_t i = box.lo[0]; i <= box.hi[0]; ++i)
    for (std::int64_t j = box.lo[1]; j <= box.hi[1]; ++j)
      for (std::int64_t k = box.lo[2]; k <= box.hi[2]; ++k) {
        if (!inside(body, m, i, j, k)) continue;
        const Point3 p{static_cast<real>(i) / mr, static_cast<real>(j) / mr, static_cast<real>(k) / mr};
        const real gw = std::exp(-xi * p.w);
        ++out.count;
        weight += gw;
        weighted += gw * g(p);
      }
  out.weight = weight.value();
  out.weighted_g = weighted.value();
  return out;
}

}  // namespace serial

}  // namespace wkstab
