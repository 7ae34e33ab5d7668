#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "wkstab/error.hpp"
#include "wkstab/scenario.hpp"
#include "wkstab/scenario_io.hpp"
#include "wkstab/stability.hpp"

using namespace wkstab;

namespace {

DivisorEntry entry(std::string name, real a, real s, bool toric = false, bool lb = false) {
  return {std::move(name), a, SgResult{s, 1, lb}, toric};
}

AZNode random_tree(std::mt19937_64& rng, int depth, int& counter) {
  std::uniform_real_distribution<double> val(0.2, 3.0);
  std::bernoulli_distribution toric(0.2);
  std::uniform_int_distribution<int> kids(0, 3);
  AZNode node{entry("F" + std::to_string(counter++), val(rng), val(rng), toric(rng)), {}};
  if (depth > 0) {
    const int k = kids(rng);
    for (int i = 0; i < k; ++i) node.children.push_back(random_tree(rng, depth - 1, counter));
  }
  return node;
}

// Brute-force bound: recursive walk without flatten().
real brute_bound(const AZNode& n) {
  real best = n.divisor.toric ? std::numeric_limits<real>::infinity() : n.divisor.log_discrepancy / n.divisor.sg.value;
  for (const auto& c : n.children) best = std::min(best, brute_bound(c));
  return best;
}

std::size_t brute_count(const AZNode& n) {
  std::size_t k = 1;
  for (const auto& c : n.children) k += brute_count(c);
  return k;
}

const CheckResult& find(const Report& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c;
  FAIL("missing check " << id);
  return r.checks.front();
}

}  // namespace

TEST_CASE("single-node tree") {
  const AZNode n{entry("E", 2, 1.6L), {}};
  CHECK(az_lower_bound(n) == doctest::Approx(1.25));
  CHECK(flatten(n).size() == 1);
  const AZNode toric{entry("H", 1, 1, true), {}};
  CHECK(std::isinf(az_lower_bound(toric)));
}

TEST_CASE("tree bound equals brute-force minimum on random trees") {
  std::mt19937_64 rng(101);
  for (int k = 0; k < 200; ++k) {
    int counter = 0;
    const AZNode t = random_tree(rng, 3, counter);
    const real b = az_lower_bound(t);
    const real ref = brute_bound(t);
    if (std::isinf(ref)) {
      CHECK(std::isinf(b));
    } else {
      CHECK(b == ref);
    }
    const auto flat = flatten(t);
    CHECK(flat.size() == brute_count(t));
    CHECK(flat.front().name == t.divisor.name);
  }
}

TEST_CASE("adding refinements never raises the bound") {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> val(0.2, 3.0);
  for (int k = 0; k < 100; ++k) {
    int counter = 0;
    AZNode t = random_tree(rng, 2, counter);
    const real before = az_lower_bound(t);
    t.children.push_back({entry("extra", val(rng), val(rng)), {}});
    CHECK(az_lower_bound(t) <= before);
  }
}

TEST_CASE("verdict rules") {
  SUBCASE("certificate") {
    const std::vector<DivisorEntry> es{entry("H", 1, 1, true), entry("E", 3, 2.7L), entry("P", 0.8L, 0.5L)};
    const Verdict v = verdict(3 / 2.7L, es);
    CHECK(v.kind == VerdictKind::SemistableCertificate);
    CHECK(v.margin == doctest::Approx(static_cast<double>(3 / 2.7L - 1)));
    CHECK(to_string(v.kind) == "SemistableCertificate");
  }
  SUBCASE("witness names the lowest ratio") {
    const std::vector<DivisorEntry> es{entry("E", 3, 2.7L), entry("P", 0.5L, 0.6L), entry("Q", 0.9L, 1)};
    const Verdict v = verdict(0.5L / 0.6L, es);
    CHECK(v.kind == VerdictKind::UnstableWitness);
    REQUIRE(v.witness);
    CHECK(*v.witness == "P");
  }
  SUBCASE("a lower-bound entry can still witness instability") {
    const std::vector<DivisorEntry> es{entry("l", 5, 5.2260977L, false, true)};
    const Verdict v = verdict(5 / 5.2260977L, es);
    CHECK(v.kind == VerdictKind::UnstableWitness);
  }
  SUBCASE("a lower-bound entry above 1 proves nothing") {
    const std::vector<DivisorEntry> es{entry("E", 3, 2.7L), entry("l", 5, 4, false, true)};
    CHECK(verdict(5.0L / 4, es).kind == VerdictKind::Inconclusive);
  }
  SUBCASE("ties are inconclusive") {
    const std::vector<DivisorEntry> es{entry("E", 3, 2.7L), entry("l", 2, 2 + 1e-7L)};
    const Verdict v = verdict(2 / (2 + 1e-7L), es);
    CHECK(v.kind == VerdictKind::Inconclusive);
    REQUIRE(v.witness);
    CHECK(*v.witness == "l");
  }
  SUBCASE("toric entries are ignored") {
    const std::vector<DivisorEntry> es{entry("H", 1, 1, true), entry("E", 3, 2.7L)};
    CHECK(verdict(3 / 2.7L, es).kind == VerdictKind::SemistableCertificate);
  }
}

TEST_CASE("verdicts are stable under small perturbations when the margin is clear") {
  std::mt19937_64 rng(107);
  std::uniform_real_distribution<double> val(0.3, 3.0), sign(-1, 1);
  int checked = 0;
  for (int k = 0; k < 500; ++k) {
    std::vector<DivisorEntry> es;
    for (int i = 0; i < 4; ++i) es.push_back(entry("F" + std::to_string(i), val(rng), val(rng)));
    AZNode root{es.front(), {}};
    for (std::size_t i = 1; i < es.size(); ++i) root.children.push_back({es[i], {}});
    const Verdict v = verdict(az_lower_bound(root), es);
    if (v.margin <= 1e-6L) continue;
    ++checked;
    for (auto& e : es) e.sg.value *= 1 + 1e-8L * sign(rng);
    AZNode moved{es.front(), {}};
    for (std::size_t i = 1; i < es.size(); ++i) moved.children.push_back({es[i], {}});
    CHECK(verdict(az_lower_bound(moved), es).kind == v.kind);
  }
  CHECK(checked > 400);
}

TEST_CASE("builtin verdicts") {
  const Report c = run_scenario(builtin_scenario("2.28-C"));
  REQUIRE(c.verdict);
  CHECK(c.verdict->kind == VerdictKind::SemistableCertificate);
  CHECK(std::fabs(c.verdict->bound - 4 / 3.773902286L) <= 1e-6L);

  const Report cusp = run_scenario(builtin_scenario("git:cuspidal"));
  REQUIRE(cusp.verdict);
  CHECK(cusp.verdict->kind == VerdictKind::UnstableWitness);
  CHECK(cusp.verdict->witness == std::optional<std::string>("l"));
  CHECK(cusp.all_pass());
}

TEST_CASE("nodal divisor has S^g = 2") {
  const Report r = run_scenario(builtin_scenario("git:nodal"));
  CHECK(std::fabs(find(r, "l").computed - 2) <= 1e-10L);
}

TEST_CASE("cone identity holds at the soliton candidate") {
  std::mt19937_64 rng(109);
  std::uniform_int_distribution<int> dim(2, 5);
  std::uniform_real_distribution<double> frac(0.02, 1.0);
  for (int k = 0; k < 20; ++k) {
    const int n = dim(rng);
    const real r = n * static_cast<real>(frac(rng));
    const ConeReport rep = cone_scenario(n, r);
    INFO("n=" << n << " r=" << static_cast<double>(r));
    CHECK(rep.identity_residual <= 1e-11L);
    CHECK(std::fabs(rep.s_ratio - 1) <= 1e-11L);
    CHECK(cone_identity_residual(n, r, rep.lo, rep.hi, rep.xi0 + 0.1L) > 1e-4L);
    CHECK(cone_identity_residual(n, r, rep.lo, rep.hi, rep.xi0 - 0.1L) > 1e-4L);
    // Independent check of the soliton equation on the density.
    const real phi = oracle::simpson(
        [&](real a) { return a * std::exp(-rep.xi0 * a) * std::pow(r - a, n - 1); }, rep.lo, rep.hi, 1e-15L, 50);
    const real mass = oracle::simpson(
        [&](real a) { return std::exp(-rep.xi0 * a) * std::pow(r - a, n - 1); }, rep.lo, rep.hi, 1e-15L, 50);
    CHECK(std::fabs(phi / mass) <= 1e-10L);
  }
}

TEST_CASE("one-dimensional cone has a symmetric interval") {
  const ConeReport rep = cone_scenario(1, 1);
  CHECK(rep.lo == -1);
  CHECK(rep.hi == 1);
  CHECK(std::fabs(rep.xi0) <= 1e-14L);
}

TEST_CASE("bundle moment intervals") {
  const ConeReport big = bundle_scenario(3, 2, std::nullopt);
  CHECK(big.lo == -1);
  CHECK(big.hi == 1);
  CHECK(big.identity_residual <= 1e-11L);

  const ConeReport small = bundle_scenario(3, 0.5L, 0.7L);
  CHECK(small.hi == doctest::Approx(0.3));
  CHECK(small.identity_residual <= 1e-11L);

  for (auto [r, a] : std::vector<std::pair<real, std::optional<real>>>{
           {0.5L, 0.3L}, {0.5L, std::nullopt}, {0.5L, 1.0L}, {1.0L, 0.0L}}) {
    try {
      (void)bundle_scenario(3, r, a);
      FAIL("expected BadBoundary");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadBoundary);
    }
  }
}

TEST_CASE("unknown scenarios") {
  for (const char* src : {"nope", "2.28-D"}) {
    try {
      (void)builtin_scenario(src);
      FAIL("expected UnknownScenario");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnknownScenario);
    }
  }
  CHECK_THROWS_AS(load_scenario("builtin:nope"), Error);
}
