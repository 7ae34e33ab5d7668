#include "wkstab/filtration.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "wkstab/error.hpp"

namespace wkstab {

namespace {

real factorial(int d) {
  real f = 1;
  for (int k = 2; k <= d; ++k) f *= static_cast<real>(k);
  return f;
}

// int_{w_lo}^{w_hi} e^{-xi w} int_{lower}^{upper} q dt dw, summed over regions.
real weighted_region_integral(const std::vector<FiberRegion>& regions, real xi,
                              const auto& integrand) {
  CompensatedSum acc;
  for (const auto& r : regions) {
    const Poly inner = inner_integrate(integrand(r), r.t_lower, r.t_upper);
    acc += integrate_exp_poly(inner, -xi, r.w_lo, r.w_hi);
  }
  return acc.value();
}

void check_volume(const std::string& label, real implied, std::optional<real> vg) {
  if (!vg) return;
  const real scale = std::max(std::fabs(*vg), std::fabs(implied));
  if (std::fabs(implied - *vg) > 1e-6L * scale) {
    std::ostringstream os;
    os << "profile '" << label << "' implies v^g = " << static_cast<double>(implied) << " but "
       << static_cast<double>(*vg) << " was supplied";
    throw Error(ErrorKind::ProfileMismatch, os.str());
  }
}

[[noreturn]] void invalid(const std::string& label, std::size_t region, const std::string& what, real w, real t) {
  std::ostringstream os;
  os << "profile '" << label << "' region " << region << ": " << what << " at w=" << static_cast<double>(w)
     << ", t=" << static_cast<double>(t);
  throw Error(ErrorKind::InvalidInput, os.str());
}

real sample(real lo, real hi, int i, int n) {
  return n <= 1 ? lo : lo + (hi - lo) * static_cast<real>(i) / static_cast<real>(n - 1);
}

}  // namespace

void validate_fiber_profile(const FiberVolumeProfile& profile, int grid) {
  const auto& label = profile.label;
  if (profile.dim < 1 || profile.dim > 2)
    throw Error(ErrorKind::InvalidInput, "profile '" + label + "': dim must be 1 or 2");
  if (profile.regions.empty()) throw Error(ErrorKind::InvalidInput, "profile '" + label + "': no regions");

  real scale = 1;
  for (const auto& r : profile.regions) {
    if (!(r.w_lo < r.w_hi)) invalid(label, &r - profile.regions.data(), "empty w-interval", r.w_lo, 0);
    for (int i = 0; i < grid; ++i) {
      const real w = sample(r.w_lo, r.w_hi, i, grid);
      scale = std::max({scale, std::fabs(r.vol(w, r.t_lower(w))), std::fabs(r.vol(w, r.t_upper(w)))});
    }
  }
  const real eps = 1e-9L * scale;

  std::map<std::pair<real, real>, std::vector<std::size_t>> chambers;
  for (std::size_t k = 0; k < profile.regions.size(); ++k)
    chambers[{profile.regions[k].w_lo, profile.regions[k].w_hi}].push_back(k);

  for (const auto& [span, ids] : chambers) {
    for (int i = 0; i < grid; ++i) {
      const real w = sample(span.first, span.second, i, grid);
      std::vector<std::size_t> order = ids;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ra = profile.regions[a];
        const auto& rb = profile.regions[b];
        if (ra.t_lower(w) != rb.t_lower(w)) return ra.t_lower(w) < rb.t_lower(w);
        return ra.t_upper(w) < rb.t_upper(w);
      });
      const auto& first = profile.regions[order.front()];
      if (std::fabs(first.t_lower(w)) > 1e-12L) invalid(label, order.front(), "t-range does not start at 0", w, first.t_lower(w));
      for (std::size_t n = 0; n < order.size(); ++n) {
        const auto& r = profile.regions[order[n]];
        const real lo = r.t_lower(w), hi = r.t_upper(w);
        if (lo > hi + 1e-12L) invalid(label, order[n], "t-lower exceeds t-upper", w, lo);
        real prev = r.vol(w, lo);
        for (int s = 0; s < grid; ++s) {
          const real t = sample(lo, hi, s, grid);
          const real v = r.vol(w, t);
          if (v < -eps) invalid(label, order[n], "negative volume", w, t);
          if (v > prev + eps) invalid(label, order[n], "volume increases in t", w, t);
          prev = v;
        }
        if (n + 1 < order.size()) {
          const auto& next = profile.regions[order[n + 1]];
          if (std::fabs(next.t_lower(w) - hi) > 1e-12L) invalid(label, order[n + 1], "gap in t-ranges", w, hi);
          if (std::fabs(next.vol(w, hi) - r.vol(w, hi)) > eps) invalid(label, order[n + 1], "volume jumps", w, hi);
        } else if (std::fabs(r.vol(w, hi)) > eps) {
          invalid(label, order[n], "volume does not vanish at the top", w, hi);
        }
      }
    }
  }
}

void validate_point_profile(const PointProfile& profile, const std::vector<FiberRegion>& offsets, int grid) {
  const auto& label = profile.degrees.label;
  if (profile.degrees.dim != 1) throw Error(ErrorKind::InvalidInput, "point profile '" + label + "': dim must be 1");
  auto check = [&](const std::vector<FiberRegion>& regions, const char* what) {
    for (std::size_t k = 0; k < regions.size(); ++k) {
      const auto& r = regions[k];
      if (!(r.w_lo < r.w_hi)) invalid(label, k, std::string(what) + " has empty w-interval", r.w_lo, 0);
      for (int i = 0; i < grid; ++i) {
        const real w = sample(r.w_lo, r.w_hi, i, grid);
        const real lo = r.t_lower(w), hi = r.t_upper(w);
        if (lo > hi + 1e-12L) invalid(label, k, std::string(what) + " t-lower exceeds t-upper", w, lo);
        for (int s = 0; s < grid; ++s) {
          const real t = sample(lo, hi, s, grid);
          if (r.vol(w, t) < -1e-9L) invalid(label, k, std::string(what) + " is negative", w, t);
        }
      }
    }
  };
  check(profile.degrees.regions, "degree");
  check(offsets, "offset");
}

real implied_weighted_volume(const FiberVolumeProfile& profile, real xi) {
  CompensatedSum acc;
  for (const auto& r : profile.regions) {
    if (!(r.t_lower == AffineForm{})) continue;
    acc += integrate_exp_poly(r.vol.restrict_t(AffineForm{}), -xi, r.w_lo, r.w_hi);
  }
  return acc.value() / factorial(profile.dim);
}

real implied_weighted_volume(const PointProfile& profile, real xi) {
  return weighted_region_integral(profile.degrees.regions, xi, [](const FiberRegion& r) { return r.vol; });
}

SgResult sg_fiber_profile(const FiberVolumeProfile& profile, real xi, std::optional<real> vg) {
  const real implied = implied_weighted_volume(profile, xi);
  check_volume(profile.label, implied, vg);
  const real v = vg.value_or(implied);
  const real total = weighted_region_integral(profile.regions, xi, [](const FiberRegion& r) { return r.vol; });
  return {total / (factorial(profile.dim) * v), v, false};
}

SgResult sg_point(const PointProfile& profile, const std::vector<FiberRegion>& offsets, real xi,
                  std::optional<real> vg) {
  if (profile.degrees.dim != 1)
    throw Error(ErrorKind::ProfileMismatch, "point profile '" + profile.degrees.label + "' must have dim 1");
  const real implied = implied_weighted_volume(profile, xi);
  check_volume(profile.degrees.label, implied, vg);
  const real v = vg.value_or(implied);
  const real base = weighted_region_integral(profile.degrees.regions, xi,
                                             [](const FiberRegion& r) { return real(0.5) * r.vol * r.vol; });
  const real shift = weighted_region_integral(offsets, xi, [](const FiberRegion& r) { return r.vol; });
  return {(base + shift) / v, v, false};
}

SgResult sg_linear_transform(const OkounkovBody& body, const LinearForm3& g, real xi) {
  const real vg = integrate_weighted(slice_area_profile(body).area, -xi);
  const real num = integrate_weighted(linear_moment_profile(body, g).moment, -xi);
  return {num / vg, vg, false};
}

real discrete_sg(const OkounkovBody& body, const LinearForm3& g, real xi, int m, std::uint64_t cap) {
  const LatticeSums sums = lattice_weighted_sums(body, g, xi, m, cap);
  return sums.weighted_g / sums.weight;
}

}  // namespace wkstab
