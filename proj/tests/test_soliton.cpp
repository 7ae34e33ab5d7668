#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "wkstab/error.hpp"
#include "wkstab/scenario.hpp"
#include "wkstab/soliton.hpp"

using namespace wkstab;

namespace {

DensityProfile density_of(const std::string& id) {
  return DensityProfile::from_slices(slice_area_profile(OkounkovBody(builtin_scenario(id).vertices)));
}

}  // namespace

TEST_CASE("soliton candidates agree with a bisection oracle") {
  for (const char* id : {"2.28-A", "3.14-A"}) {
    const auto vs = builtin_scenario(id).vertices;
    const SolitonResult sol = solve_soliton(density_of(id));
    const real ref = oracle::Body(vs).soliton();
    INFO(id);
    CHECK(std::fabs(sol.xi0 - ref) <= 1e-12L);
    CHECK(std::fabs(sol.residual) <= 1e-14L);
    CHECK(sol.iterations > 0);
  }
}

TEST_CASE("weighted volume agrees with quadrature") {
  const auto vs = builtin_scenario("2.28-A").vertices;
  const oracle::Body ref(vs);
  const DensityProfile d = density_of("2.28-A");
  for (real xi : {-2.0L, 0.0L, 0.93L, 3.0L}) CHECK(std::fabs(weighted_volume(d, xi) - ref.weighted_volume(xi)) <= 1e-11L);
}

TEST_CASE("futaki is strictly increasing in xi") {
  const DensityProfile d = density_of("3.14-A");
  real prev = futaki(d, -3);
  for (real xi = -2.5L; xi <= 3; xi += 0.5L) {
    const real f = futaki(d, xi);
    CHECK(f > prev);
    prev = f;
  }
}

TEST_CASE("symmetric density gives xi0 = 0") {
  const DensityProfile d{PiecewisePoly{{Chamber{-1, 1, Poly{1}}}}};
  CHECK(std::fabs(solve_soliton(d).xi0) <= 1e-15L);
}

TEST_CASE("shifted density needs a far bracket") {
  // Mass on [-1, 0.05]: the root sits at large positive xi... or here negative.
  const DensityProfile d{PiecewisePoly{{Chamber{-1, 0.05L, Poly{1}}}}};
  const SolitonResult s = solve_soliton(d);
  CHECK(std::fabs(futaki(d, s.xi0)) <= 1e-13L);
}

TEST_CASE("error kinds") {
  const DensityProfile empty{PiecewisePoly{{Chamber{-1, 1, Poly{}}}}};
  try {
    (void)solve_soliton(empty);
    FAIL("expected EmptyDensity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyDensity);
  }
  // All mass at positive weights: phi never changes sign.
  const DensityProfile one_sided{PiecewisePoly{{Chamber{1, 2, Poly{1}}}}};
  try {
    (void)solve_soliton(one_sided);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoBracket);
  }
}
