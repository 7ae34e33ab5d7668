// Acceptance harness: one PASS/FAIL line per criterion. Tolerances are fixed
// here; the exit status is nonzero when any criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "wkstab/filtration.hpp"
#include "wkstab/scenario.hpp"
#include "wkstab/soliton.hpp"
#include "wkstab/stability.hpp"

using namespace wkstab;

namespace {

constexpr real kSuiteTol = 5e-6L;
constexpr real kIdentityTol = 1e-10L;
constexpr real kXiTol = 1e-9L;
constexpr real kVolumeTol = 1e-12L;
constexpr real kConeTol = 1e-11L;

// Collects sub-results of one criterion.
class Criterion {
 public:
  void expect(const std::string& what, real computed, real target, real tol) {
    const bool ok = std::fabs(computed - target) <= tol;
    record(what, ok, computed, target, tol);
  }
  void at_least(const std::string& what, real computed, real floor) {
    const bool ok = computed >= floor;
    std::ostringstream os;
    os.precision(12);
    os << what << "=" << static_cast<double>(computed) << (ok ? " >= " : " < ") << static_cast<double>(floor);
    add(ok, os.str());
  }
  void require(const std::string& what, bool ok) { add(ok, what); }

  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream os;
    os << passed_ << "/" << passed_ + failures_.size() << " sub-checks";
    for (const auto& f : failures_) os << "\n      " << f;
    return os.str();
  }

 private:
  void record(const std::string& what, bool ok, real computed, real target, real tol) {
    std::ostringstream os;
    os.precision(16);
    os << what << ": computed " << static_cast<double>(computed) << ", expected " << static_cast<double>(target)
       << ", |diff| " << std::scientific;
    os.precision(2);
    os << static_cast<double>(std::fabs(computed - target)) << " vs tol " << static_cast<double>(tol);
    add(ok, os.str());
  }
  void add(bool ok, const std::string& line) {
    if (ok) {
      ++passed_;
    } else {
      failures_.push_back(line);
    }
  }

  std::size_t passed_ = 0;
  std::vector<std::string> failures_;
};

struct Family {
  OkounkovBody body;
  DensityProfile density;
  SolitonResult sol;
  explicit Family(const std::string& id)
      : body(builtin_scenario(id).vertices, id),
        density(DensityProfile::from_slices(slice_area_profile(body))),
        sol(solve_soliton(density)) {}
};

const Family& family(const std::string& which) {
  static const Family f228("2.28-A"), f314("3.14-A");
  return which == "2.28" ? f228 : f314;
}

const Report& report(const std::string& id) {
  static std::map<std::string, Report> cache;
  auto it = cache.find(id);
  if (it == cache.end()) it = cache.emplace(id, run_scenario(builtin_scenario(id))).first;
  return it->second;
}

real computed(const std::string& scenario, const std::string& check) {
  for (const auto& c : report(scenario).checks)
    if (c.id == check) return c.computed;
  throw std::runtime_error("no check " + check + " in " + scenario);
}

Criterion soliton_candidates() {
  Criterion c;
  c.expect("2.28 xi0", family("2.28").sol.xi0, 0.9377815610300645L, kXiTol);
  c.expect("3.14 xi0", family("3.14").sol.xi0, 0.5265255550640977L, kXiTol);
  return c;
}

Criterion weighted_volumes() {
  Criterion c;
  c.expect("2.28 v^g", family("2.28").sol.vg, 5.61542L, kSuiteTol);
  c.expect("2.28 volume", weighted_volume(family("2.28").density, 0), 20.0L / 3, kVolumeTol);
  c.expect("3.14 volume", weighted_volume(family("3.14").density, 0), 16.0L / 3, kVolumeTol);
  return c;
}

Criterion suite_228() {
  Criterion c;
  c.expect("A line profile", computed("2.28-A", "l"), 0.773902L, kSuiteTol);
  c.expect("A point profile", computed("2.28-A", "p"), 0.773902L, kSuiteTol);
  c.expect("B E", computed("2.28-B", "E"), 2.773902L, kSuiteTol);
  c.expect("B P0", computed("2.28-B", "P0"), 0.386951L, kSuiteTol);
  c.expect("C E", computed("2.28-C", "E"), 3.773902L, kSuiteTol);
  c.expect("C P", computed("2.28-C", "P"), 0.257967L, kSuiteTol);
  c.expect("C P1-P", computed("2.28-C", "P1") - computed("2.28-C", "P"), 0.515935L, kSuiteTol);
  c.expect("C P2-P", computed("2.28-C", "P2") - computed("2.28-C", "P"), 0.226098L, kSuiteTol);
  c.expect("P1=2P0", computed("2.28-B", "P1") - 2 * computed("2.28-B", "P0"), 0, kIdentityTol);
  c.expect("P2+P0=1", computed("2.28-B", "P2") + computed("2.28-B", "P0"), 1, kIdentityTol);
  c.expect("P1=3P", computed("2.28-C", "P1") - 3 * computed("2.28-C", "P"), 0, kIdentityTol);
  c.expect("P2+2P=1", computed("2.28-C", "P2") + 2 * computed("2.28-C", "P"), 1, kIdentityTol);
  return c;
}

Criterion suite_314() {
  Criterion c;
  c.expect("A l", computed("3.14-A", "l"), 0.806338L, kSuiteTol);
  c.expect("B E", computed("3.14-B", "E"), 2.806338L, kSuiteTol);
  c.expect("B P0", computed("3.14-B", "P0"), 0.403169L, kSuiteTol);
  c.expect("B P1", computed("3.14-B", "P1"), 0.806338L, kSuiteTol);
  c.expect("B P2", computed("3.14-B", "P2"), 0.596831L, kSuiteTol);
  c.expect("C E", computed("3.14-C", "E"), 3.806338L, kSuiteTol);
  c.expect("C P", computed("3.14-C", "P"), 0.268799L, kSuiteTol);
  c.expect("C P1", computed("3.14-C", "P1"), 0.806338L, kSuiteTol);
  c.expect("C P2", computed("3.14-C", "P2"), 0.462442L, kSuiteTol);
  return c;
}

Criterion verdicts() {
  Criterion c;
  // The reference threshold 4/3.773902 is the 2.28 Case C bound; the 3.14
  // cases are held to a certificate, whose bound is at least 1 + tie band.
  const real threshold = 4 / 3.773902L - 1e-6L;
  for (const char* id : {"2.28-A", "2.28-B", "2.28-C", "3.14-A", "3.14-B", "3.14-C"}) {
    const auto& v = report(id).verdict;
    c.require(std::string(id) + " has a certificate", v && v->kind == VerdictKind::SemistableCertificate);
    if (!v) continue;
    c.at_least(std::string(id) + " bound", v->bound, std::string(id).rfind("2.28", 0) == 0 ? threshold : 1);
  }
  const auto& v = report("git:cuspidal").verdict;
  c.require("git:cuspidal witness", v && v->kind == VerdictKind::UnstableWitness && v->witness == "l");
  c.at_least("git:cuspidal S^g lower bound", computed("git:cuspidal", "l"), 5.226098L - kSuiteTol);
  c.require("git:cuspidal S^g exceeds A = 5", computed("git:cuspidal", "l") > 5);
  return c;
}

Criterion git_boundary() {
  Criterion c;
  for (const char* id : {"git:nodal", "git:secant-conic"}) {
    const std::string s = id;
    c.expect(s + " S^g(l)", computed(s, "l"), 2, kIdentityTol);
    c.expect(s + " P", computed(s, "P"), 0.587831L, kSuiteTol);
    c.expect(s + " P1", computed(s, "P1"), 0.625755L, kSuiteTol);
    c.expect(s + " P2", computed(s, "P2"), 0.625755L, kSuiteTol);
  }
  return c;
}

Criterion cone_identity() {
  Criterion c;
  std::vector<std::pair<int, real>> pairs{{2, 1}, {3, 0.5L}, {4, 2}, {5, 3}};
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<int> dim(2, 5);
  std::uniform_real_distribution<double> frac(0.01, 1.0);
  for (int k = 0; k < 20; ++k) {
    const int n = dim(rng);
    pairs.emplace_back(n, n * static_cast<real>(frac(rng)));
  }
  for (const auto& [n, r] : pairs) {
    std::ostringstream name;
    name << "cone n=" << n << " r=" << static_cast<double>(r);
    c.expect(name.str(), cone_scenario(n, r).identity_residual, 0, kConeTol);
  }
  const Family& f = family("2.28");
  c.expect("2.28 toric S^g(w+1)", sg_linear_transform(f.body, {1, 0, 0, 1}, f.sol.xi0).value, 1, kIdentityTol);
  return c;
}

Criterion lattice_convergence() {
  Criterion c;
  const Family& f = family("2.28");
  const std::pair<const char*, LinearForm3> forms[] = {
      {"2x+y", {0, 1, 2, 0}}, {"3x+y", {0, 1, 3, 0}}, {"w+1", {1, 0, 0, 1}}};
  for (const auto& [name, g] : forms) {
    const real exact = sg_linear_transform(f.body, g, f.sol.xi0).value;
    real prev = INFINITY;
    for (int m : {10, 20, 40}) {
      const real err = std::fabs(discrete_sg(f.body, g, f.sol.xi0, m) - exact);
      std::ostringstream os;
      os << name << " m=" << m << " error " << static_cast<double>(err);
      c.require(os.str() + " decreases", err < prev);
      c.require(os.str() + " <= 3/m * exact", err <= 3 * exact / m);
      prev = err;
    }
  }
  return c;
}

int run_quiet(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Criterion property_suites() {
  Criterion c;
  const std::string dir = WKSTAB_TEST_DIR;
  const std::pair<const char*, const char*> suites[] = {
      {"test_expcalc", "oracle equivalence on 100 random integrands"},
      {"test_filtration", "S^g is linear in the transform"},
      {"test_filtration", "S^g is monotone in the transform"},
      {"test_filtration", "moment-zero*"},
      {"test_geometry", "hull is invariant under permutation and duplication"},
      {"test_geometry", "Brunn-Minkowski*"},
  };
  for (const auto& [binary, test] : suites) {
    const std::string cmd = "'" + dir + "/" + binary + "' --test-case='" + test + "'";
    c.require(std::string(binary) + ": " + test, run_quiet(cmd) == 0);
  }
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Criterion()>> criteria[] = {
      {"soliton candidates", soliton_candidates},
      {"weighted volumes", weighted_volumes},
      {"2.28 invariant suite", suite_228},
      {"3.14 invariant suite", suite_314},
      {"refinement verdicts", verdicts},
      {"GIT semistable boundary", git_boundary},
      {"cone identity", cone_identity},
      {"lattice convergence", lattice_convergence},
      {"property suites", property_suites},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, fn] : criteria) {
    Criterion c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.require(std::string("exception: ") + e.what(), false);
    }
    std::printf("criterion %d %s  %s: %s\n", index++, c.ok() ? "PASS" : "FAIL", name, c.summary().c_str());
    failed += c.ok() ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
