// wkstab: evaluate weighted stability scenarios.
//
// Exit status: 0 all checks pass, 2 some check failed, 1 input error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wkstab/error.hpp"
#include "wkstab/scenario.hpp"
#include "wkstab/scenario_io.hpp"
#include "wkstab/soliton.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kCheckFailure = 2;

std::string fmt(wkstab::real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return buf;
}

int cmd_run(const std::string& source, const std::string& format, double tol) {
  wkstab::RunOptions opts;
  opts.tol = tol;
  opts.lattice_cap = wkstab::lattice_cap_from_env();
  const wkstab::Report rep = wkstab::run_scenario(wkstab::load_scenario(source), opts);
  std::cout << (format == "json" ? wkstab::report_json(rep) : wkstab::report_text(rep));
  return rep.all_pass() ? kOk : kCheckFailure;
}

int cmd_soliton(const std::string& source) {
  const wkstab::Scenario s = wkstab::load_scenario(source);
  wkstab::validate_scenario(s);
  if (s.cone) {
    const auto& c = *s.cone;
    const wkstab::ConeReport rep =
        c.bundle ? wkstab::bundle_scenario(c.n, c.r, c.a, c.lpow) : wkstab::cone_scenario(c.n, c.r, c.lpow);
    std::cout << "xi0       " << fmt(rep.xi0) << "\nv^g       " << fmt(rep.vg) << "\ninterval  [" << fmt(rep.lo)
              << ", " << fmt(rep.hi) << "]\n";
    return kOk;
  }
  const wkstab::OkounkovBody body(s.vertices, s.name);
  const auto density = wkstab::DensityProfile::from_slices(wkstab::slice_area_profile(body));
  const wkstab::SolitonResult sol = wkstab::solve_soliton(density);
  std::cout << "xi0        " << fmt(sol.xi0) << "\nv^g        " << fmt(sol.vg) << "\nFut_g      " << fmt(sol.residual)
            << "\niterations " << sol.iterations << "\nvolume     " << fmt(wkstab::body_volume(body)) << "\n";
  return kOk;
}

int cmd_lattice(const std::string& source, int m) {
  const auto tables = wkstab::lattice_check(wkstab::load_scenario(source), m, wkstab::lattice_cap_from_env());
  bool ok = true;
  for (const auto& t : tables) {
    std::cout << "check " << t.check << "  exact S^g = " << fmt(t.exact) << "\n";
    std::cout << "      m  discrete                 |error|\n";
    for (const auto& row : t.rows) {
      char line[128];
      std::snprintf(line, sizeof line, "  %5d  %-22.15Lg  %.6Le\n", row.m, row.discrete, row.error);
      std::cout << line;
    }
    std::cout << "  errors " << (t.decreasing ? "strictly decreasing" : "NOT strictly decreasing") << "\n";
    ok = ok && t.decreasing;
  }
  return ok ? kOk : kCheckFailure;
}

int cmd_cone(int n, double r, std::optional<double> a, bool bundle, double lpow) {
  const wkstab::ConeReport rep =
      bundle ? wkstab::bundle_scenario(n, r, a ? std::optional<wkstab::real>(*a) : std::nullopt, lpow)
             : wkstab::cone_scenario(n, r, lpow);
  std::cout << (bundle ? "bundle" : "cone") << "  n=" << rep.n << " r=" << fmt(rep.r);
  if (rep.a) std::cout << " a=" << fmt(*rep.a);
  std::cout << "\ninterval           [" << fmt(rep.lo) << ", " << fmt(rep.hi) << "]\n"
            << "xi0                " << fmt(rep.xi0) << "\n"
            << "v^g                " << fmt(rep.vg) << "\n"
            << "identity_residual  " << fmt(rep.identity_residual) << "\n"
            << "s_ratio            " << fmt(rep.s_ratio) << "\n";
  return rep.identity_residual <= 1e-11L ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted K-stability numerics on Okounkov bodies"};
  app.require_subcommand(1);

  std::string source;
  std::string format = "text";
  double tol = 5e-6;
  auto* run = app.add_subcommand("run", "Evaluate every check of a scenario");
  run->add_option("--scenario", source, "Scenario file or builtin:<id>")->required();
  run->add_option("--report", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  run->add_option("--tol", tol, "Tolerance for checks without their own")->check(CLI::PositiveNumber);

  auto* soliton = app.add_subcommand("soliton", "Solve the soliton candidate of a scenario");
  soliton->add_option("--scenario", source, "Scenario file or builtin:<id>")->required();

  int m = 20;
  auto* lattice = app.add_subcommand("lattice-check", "Discrete vs exact S^g at m/4, m/2, m");
  lattice->add_option("--scenario", source, "Scenario file or builtin:<id>")->required();
  lattice->add_option("--m", m, "Finest lattice refinement")->check(CLI::Range(4, 4096));

  int n = 2;
  double r = 1;
  double lpow = 1;
  std::optional<double> a;
  bool bundle = false;
  auto* cone = app.add_subcommand("cone", "Cone or P^1-bundle identity check");
  cone->add_option("--n", n, "Dimension")->required()->check(CLI::Range(1, 64));
  cone->add_option("--r", r, "Fano index parameter")->required()->check(CLI::PositiveNumber);
  cone->add_option("--a", a, "Boundary coefficient (bundle, r <= 1)");
  cone->add_flag("--bundle", bundle, "Use the P^1-bundle moment interval");
  cone->add_option("--lpow", lpow, "Volume of the base polarization")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "List builtin scenarios");

  auto* dump = app.add_subcommand("dump", "Write a scenario as JSON");
  dump->add_option("--scenario", source, "Scenario file or builtin:<id>")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run) return cmd_run(source, format, tol);
    if (*soliton) return cmd_soliton(source);
    if (*lattice) return cmd_lattice(source, m);
    if (*cone) return cmd_cone(n, r, a, bundle, lpow);
    if (*list) {
      for (const auto& id : wkstab::builtin_ids()) std::cout << id << "\n";
      return kOk;
    }
    if (*dump) {
      std::cout << wkstab::serialize_scenario(wkstab::load_scenario(source));
      return kOk;
    }
  } catch (const wkstab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
