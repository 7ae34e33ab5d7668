#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "wkstab/error.hpp"
#include "wkstab/scenario.hpp"
#include "wkstab/soliton.hpp"

namespace wkstab {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::InvalidInput, path + ": " + msg);
}

std::string check_path(std::size_t i) { return "checks[" + std::to_string(i) + "]"; }

bool is_sg(const CheckKind& kind) {
  return std::holds_alternative<LinearTransformCheck>(kind) || std::holds_alternative<FiberProfileCheck>(kind) ||
         std::holds_alternative<PointProfileCheck>(kind);
}

bool needs_body(const CheckKind& kind) {
  return is_sg(kind) || std::holds_alternative<BodyVolumeCheck>(kind);
}

void validate_node(const Scenario& s, const std::map<std::string, std::size_t>& ids, const TreeNode& n,
                   const std::string& path) {
  const auto it = ids.find(n.check);
  if (it == ids.end()) fail(path + ".check", "unknown check '" + n.check + "'");
  const Check& c = s.checks[it->second];
  if (!is_sg(c.kind)) fail(path + ".check", "check '" + n.check + "' is not an S^g check");
  if (!n.log_discrepancy && !c.log_discrepancy)
    fail(path + ".A", "no log discrepancy on the node or on check '" + n.check + "'");
  for (std::size_t i = 0; i < n.children.size(); ++i)
    validate_node(s, ids, n.children[i], path + ".children[" + std::to_string(i) + "]");
}

// Rethrow profile validation errors with the check path prepended.
template <class F>
void with_path(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::InvalidInput) throw;
    std::string what = e.what();
    const std::string tag = std::string(to_string(ErrorKind::InvalidInput)) + ": ";
    if (what.rfind(tag, 0) == 0) what = what.substr(tag.size());
    fail(path, what);
  }
}

AZNode build_node(const TreeNode& n, const std::map<std::string, const Check*>& checks,
                  const std::map<std::string, SgResult>& sg) {
  const Check& c = *checks.at(n.check);
  AZNode out;
  out.divisor.name = n.name.value_or(n.check);
  out.divisor.log_discrepancy = n.log_discrepancy ? *n.log_discrepancy : *c.log_discrepancy;
  out.divisor.sg = sg.at(n.check);
  out.divisor.toric = n.toric;
  for (const auto& child : n.children) out.children.push_back(build_node(child, checks, sg));
  return out;
}

void report_tree(const AZNode& n, int depth, std::vector<AZEntryReport>& out) {
  const auto& d = n.divisor;
  out.push_back({d.name, depth, d.log_discrepancy, d.sg.value, d.ratio(), d.toric, d.sg.is_lower_bound});
  for (const auto& c : n.children) report_tree(c, depth + 1, out);
}

}  // namespace

std::string_view check_type_name(const CheckKind& kind) {
  return std::visit(
      [](const auto& k) -> std::string_view {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, XiCheck>) return "xi0";
        if constexpr (std::is_same_v<K, FutakiCheck>) return "futaki";
        if constexpr (std::is_same_v<K, BodyVolumeCheck>) return "body_volume";
        if constexpr (std::is_same_v<K, WeightedVolumeCheck>) return "weighted_volume";
        if constexpr (std::is_same_v<K, LinearTransformCheck>) return "linear_transform";
        if constexpr (std::is_same_v<K, FiberProfileCheck>) return "fiber_profile";
        if constexpr (std::is_same_v<K, PointProfileCheck>) return "point_profile";
        if constexpr (std::is_same_v<K, IdentityCheck>) return "identity";
        if constexpr (std::is_same_v<K, ConeIdentityCheck>) return "cone_identity";
      },
      kind);
}

void validate_scenario(const Scenario& s) {
  if (s.name.empty()) fail("name", "empty scenario name");
  const bool body = !s.vertices.empty();
  if (body == s.cone.has_value()) fail("body", "exactly one of body and cone must be given");
  if (body && s.vertices.size() < 4) fail("body.vertices", "at least 4 vertices are required");

  std::map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    if (!ids.emplace(s.checks[i].id, i).second) fail(check_path(i) + ".id", "duplicate check id '" + s.checks[i].id + "'");
  }
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const Check& c = s.checks[i];
    const std::string path = check_path(i);
    if (!body && needs_body(c.kind)) fail(path + ".type", "check requires a body");
    if (body && std::holds_alternative<ConeIdentityCheck>(c.kind)) fail(path + ".type", "check requires a cone");
    if (c.tol && !(*c.tol > 0)) fail(path + ".tol", "tolerance must be positive");
    if (c.relation == Relation::Lb && !is_sg(c.kind)) fail(path + ".relation", "lb only applies to S^g checks");
    if (const auto* id = std::get_if<IdentityCheck>(&c.kind)) {
      for (std::size_t k = 0; k < id->lhs.size(); ++k) {
        const auto it = ids.find(id->lhs[k].first);
        const std::string tp = path + ".lhs[" + std::to_string(k) + "].check";
        if (it == ids.end()) fail(tp, "unknown check '" + id->lhs[k].first + "'");
        if (std::holds_alternative<IdentityCheck>(s.checks[it->second].kind)) fail(tp, "identities cannot nest");
      }
    }
    if (const auto* f = std::get_if<FiberProfileCheck>(&c.kind)) {
      with_path(path + ".regions", [&] { validate_fiber_profile(f->profile); });
    }
    if (const auto* p = std::get_if<PointProfileCheck>(&c.kind)) {
      with_path(path + ".regions", [&] { validate_point_profile(p->profile, p->offsets); });
    }
  }
  for (std::size_t i = 0; i < s.tree.size(); ++i)
    validate_node(s, ids, s.tree[i], "refinement_tree[" + std::to_string(i) + "]");
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

Report run_scenario(const Scenario& s, const RunOptions& options) {
  validate_scenario(s);
  const auto start = std::chrono::steady_clock::now();

  Report rep;
  rep.scenario = s.name;

  std::optional<OkounkovBody> body;
  DensityProfile density;
  if (s.cone) {
    const ConeSpec& cs = *s.cone;
    ConeReport cone = cs.bundle ? bundle_scenario(cs.n, cs.r, cs.a, cs.lpow) : cone_scenario(cs.n, cs.r, cs.lpow);
    density = cone_density(cs.n, cs.r, cs.lpow, cone.lo, cone.hi);
    if (s.soliton) {
      cone.xi0 = *s.soliton;
      cone.vg = weighted_volume(density, cone.xi0);
      cone.identity_residual = cone_identity_residual(cs.n, cs.r, cone.lo, cone.hi, cone.xi0);
    }
    rep.xi0 = cone.xi0;
    rep.vg = cone.vg;
    rep.cone = cone;
  } else {
    body.emplace(s.vertices, s.name);
    density = DensityProfile::from_slices(slice_area_profile(*body));
    if (s.soliton) {
      rep.xi0 = *s.soliton;
    } else {
      const SolitonResult sol = solve_soliton(density);
      rep.xi0 = sol.xi0;
      rep.iterations = sol.iterations;
    }
    rep.vg = weighted_volume(density, rep.xi0);
  }
  rep.futaki_residual = futaki(density, rep.xi0);

  std::map<std::string, real> values;
  std::map<std::string, SgResult> sg;
  std::map<std::string, const Check*> by_id;
  std::vector<std::optional<real>> computed(s.checks.size());

  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const Check& c = s.checks[i];
    by_id[c.id] = &c;
    if (std::holds_alternative<IdentityCheck>(c.kind)) continue;
    real value = 0;
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, XiCheck>) {
            value = rep.xi0;
          } else if constexpr (std::is_same_v<K, FutakiCheck>) {
            value = rep.futaki_residual;
          } else if constexpr (std::is_same_v<K, BodyVolumeCheck>) {
            value = body_volume(*body);
          } else if constexpr (std::is_same_v<K, WeightedVolumeCheck>) {
            value = weighted_volume(density, k.xi.value_or(rep.xi0));
          } else if constexpr (std::is_same_v<K, LinearTransformCheck>) {
            sg[c.id] = sg_linear_transform(*body, k.g, rep.xi0);
          } else if constexpr (std::is_same_v<K, FiberProfileCheck>) {
            sg[c.id] = sg_fiber_profile(k.profile, rep.xi0, rep.vg);
          } else if constexpr (std::is_same_v<K, PointProfileCheck>) {
            sg[c.id] = sg_point(k.profile, k.offsets, rep.xi0, rep.vg);
          } else if constexpr (std::is_same_v<K, ConeIdentityCheck>) {
            value = rep.cone->identity_residual;
          }
        },
        c.kind);
    if (auto it = sg.find(c.id); it != sg.end()) {
      it->second.is_lower_bound = c.relation == Relation::Lb;
      value = it->second.value;
    }
    values[c.id] = value;
    computed[i] = value;
  }

  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    const Check& c = s.checks[i];
    CheckResult res;
    res.id = c.id;
    res.type = std::string(check_type_name(c.kind));
    res.relation = c.relation;
    res.expected = c.expect;
    if (const auto* id = std::get_if<IdentityCheck>(&c.kind)) {
      CompensatedSum acc;
      for (const auto& [ref, coeff] : id->lhs) acc += coeff * values.at(ref);
      res.computed = acc.value();
      res.tol = c.tol.value_or(options.identity_tol);
    } else {
      res.computed = *computed[i];
      res.tol = c.tol.value_or(options.tol);
    }
    if (res.expected) {
      res.pass = c.relation == Relation::Lb ? res.computed >= *res.expected - res.tol
                                            : std::fabs(res.computed - *res.expected) <= res.tol;
    }
    rep.checks.push_back(std::move(res));
  }

  if (!s.tree.empty()) {
    real bound = std::numeric_limits<real>::infinity();
    std::vector<DivisorEntry> entries;
    for (const auto& root : s.tree) {
      const AZNode node = build_node(root, by_id, sg);
      bound = std::min(bound, az_lower_bound(node));
      report_tree(node, 0, rep.tree);
      const auto flat = flatten(node);
      entries.insert(entries.end(), flat.begin(), flat.end());
    }
    rep.verdict = verdict(bound, entries);
  }

  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<LatticeTable> lattice_check(const Scenario& s, int m, std::uint64_t cap) {
  validate_scenario(s);
  if (s.vertices.empty()) throw Error(ErrorKind::InvalidInput, "lattice-check requires a scenario with a body");
  if (m < 4) throw Error(ErrorKind::InvalidInput, "--m must be at least 4");
  const OkounkovBody body(s.vertices, s.name);
  const DensityProfile density = DensityProfile::from_slices(slice_area_profile(body));
  const real xi0 = s.soliton ? *s.soliton : solve_soliton(density).xi0;

  std::vector<LatticeTable> out;
  for (const auto& c : s.checks) {
    const auto* lt = std::get_if<LinearTransformCheck>(&c.kind);
    if (lt == nullptr) continue;
    LatticeTable table;
    table.check = c.id;
    table.exact = sg_linear_transform(body, lt->g, xi0).value;
    for (int mm : {m / 4, m / 2, m}) {
      const real d = discrete_sg(body, lt->g, xi0, mm, cap);
      table.rows.push_back({mm, d, std::fabs(d - table.exact)});
    }
    table.decreasing = true;
    for (std::size_t k = 1; k < table.rows.size(); ++k)
      table.decreasing = table.decreasing && table.rows[k].error < table.rows[k - 1].error;
    out.push_back(std::move(table));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "checks: scenario has no linear_transform checks");
  return out;
}

}  // namespace wkstab
