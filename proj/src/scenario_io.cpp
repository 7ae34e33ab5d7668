#include "wkstab/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wkstab/error.hpp"

namespace wkstab {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::InvalidInput, (path.empty() ? std::string("<root>") : path) + ": " + msg);
}

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* allowed : keys) known = known || k == allowed;
    if (!known) fail(at(path, k), "unknown field");
  }
}

const json& required(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(at(path, key), "missing required field");
  return *it;
}

const json* optional_field(const json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::int64_t read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<std::int64_t>();
}

std::string read_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool read_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

Rational read_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_array() || j.size() != 2) fail(path, "expected an integer or a [num, den] pair");
  const std::int64_t num = read_int(j[0], at(path, 0));
  const std::int64_t den = read_int(j[1], at(path, 1));
  if (den == 0) fail(path, "zero denominator");
  Rational r;
  r.num = num;
  r.den = den;
  if (!r.in_lowest_terms()) fail(path, "rational not in lowest terms with positive denominator");
  return r;
}

real read_real(const json& j, const std::string& path) {
  if (j.is_number()) {
    const real v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }
  if (j.is_array()) return read_rational(j, path).to_real();
  fail(path, "expected a number or a [num, den] pair");
}

AffineForm read_affine(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [a, b] meaning a*w + b");
  return {read_real(j[0], at(path, 0)), read_real(j[1], at(path, 1))};
}

BiPoly read_bipoly(const json& j, const std::string& path) {
  if (j.is_number()) return BiPoly::constant(read_real(j, path));
  if (!j.is_array()) fail(path, "expected a coefficient matrix [[c00, c01, ...], [c10, ...], ...]");
  std::vector<std::vector<real>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string row_path = at(path, i);
    if (!j[i].is_array()) fail(row_path, "expected a coefficient row");
    std::vector<real> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(read_real(j[i][k], at(row_path, k)));
    rows.push_back(std::move(row));
  }
  return BiPoly(std::move(rows));
}

FiberRegion read_region(const json& j, const std::string& path) {
  only_keys(j, path, {"w", "t_lower", "t_upper", "poly"});
  const json& w = required(j, path, "w");
  if (!w.is_array() || w.size() != 2) fail(at(path, "w"), "expected [w_lo, w_hi]");
  FiberRegion r;
  r.w_lo = read_real(w[0], at(at(path, "w"), 0));
  r.w_hi = read_real(w[1], at(at(path, "w"), 1));
  if (!(r.w_lo < r.w_hi)) fail(at(path, "w"), "empty interval (w_lo must be < w_hi)");
  r.t_lower = read_affine(required(j, path, "t_lower"), at(path, "t_lower"));
  r.t_upper = read_affine(required(j, path, "t_upper"), at(path, "t_upper"));
  r.vol = read_bipoly(required(j, path, "poly"), at(path, "poly"));
  return r;
}

std::vector<FiberRegion> read_regions(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of regions");
  std::vector<FiberRegion> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_region(j[i], at(path, i)));
  return out;
}

LinearForm3 read_coeffs(const json& j, const std::string& path) {
  only_keys(j, path, {"w", "y", "x", "const"});
  LinearForm3 g;
  if (const json* v = optional_field(j, "w")) g.c_w = read_real(*v, at(path, "w"));
  if (const json* v = optional_field(j, "y")) g.c_y = read_real(*v, at(path, "y"));
  if (const json* v = optional_field(j, "x")) g.c_x = read_real(*v, at(path, "x"));
  if (const json* v = optional_field(j, "const")) g.constant = read_real(*v, at(path, "const"));
  return g;
}

Check read_check(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  Check c;
  c.id = read_string(required(j, path, "id"), at(path, "id"));
  if (c.id.empty()) fail(at(path, "id"), "empty id");
  const std::string type = read_string(required(j, path, "type"), at(path, "type"));

  if (const json* v = optional_field(j, "expect")) c.expect = read_real(*v, at(path, "expect"));
  if (const json* v = optional_field(j, "tol")) {
    c.tol = read_real(*v, at(path, "tol"));
    if (!(*c.tol > 0)) fail(at(path, "tol"), "tolerance must be positive");
  }
  if (const json* v = optional_field(j, "relation")) {
    const std::string rel = read_string(*v, at(path, "relation"));
    if (rel == "eq") {
      c.relation = Relation::Eq;
    } else if (rel == "lb") {
      c.relation = Relation::Lb;
    } else {
      fail(at(path, "relation"), "expected \"eq\" or \"lb\"");
    }
  }
  if (const json* v = optional_field(j, "A")) {
    c.log_discrepancy = read_real(*v, at(path, "A"));
    if (!(*c.log_discrepancy > 0)) fail(at(path, "A"), "log discrepancy must be positive");
  }

  if (type == "xi0") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation"});
    c.kind = XiCheck{};
  } else if (type == "futaki") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation"});
    c.kind = FutakiCheck{};
  } else if (type == "body_volume") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation"});
    c.kind = BodyVolumeCheck{};
  } else if (type == "weighted_volume") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation", "xi"});
    WeightedVolumeCheck k;
    if (const json* v = optional_field(j, "xi")) k.xi = read_real(*v, at(path, "xi"));
    c.kind = k;
  } else if (type == "linear_transform") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation", "A", "coeffs"});
    c.kind = LinearTransformCheck{read_coeffs(required(j, path, "coeffs"), at(path, "coeffs"))};
  } else if (type == "fiber_profile") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation", "A", "dim", "regions"});
    FiberVolumeProfile p;
    p.label = c.id;
    if (const json* v = optional_field(j, "dim")) {
      const std::int64_t dim = read_int(*v, at(path, "dim"));
      if (dim < 1 || dim > 2) fail(at(path, "dim"), "fiber dimension must be 1 or 2");
      p.dim = static_cast<int>(dim);
    }
    p.regions = read_regions(required(j, path, "regions"), at(path, "regions"));
    if (p.regions.empty()) fail(at(path, "regions"), "at least one region is required");
    c.kind = FiberProfileCheck{std::move(p)};
  } else if (type == "point_profile") {
    only_keys(j, path, {"id", "type", "expect", "tol", "relation", "A", "regions", "offsets"});
    PointProfileCheck k;
    k.profile.degrees.dim = 1;
    k.profile.degrees.label = c.id;
    k.profile.degrees.regions = read_regions(required(j, path, "regions"), at(path, "regions"));
    if (k.profile.degrees.regions.empty()) fail(at(path, "regions"), "at least one region is required");
    if (const json* v = optional_field(j, "offsets")) k.offsets = read_regions(*v, at(path, "offsets"));
    c.kind = std::move(k);
  } else if (type == "identity") {
    only_keys(j, path, {"id", "type", "tol", "lhs", "rhs"});
    IdentityCheck k;
    const json& lhs = required(j, path, "lhs");
    const std::string lhs_path = at(path, "lhs");
    if (!lhs.is_array() || lhs.empty()) fail(lhs_path, "expected a non-empty array of {check, coeff} terms");
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      const std::string term_path = at(lhs_path, i);
      only_keys(lhs[i], term_path, {"check", "coeff"});
      k.lhs.emplace_back(read_string(required(lhs[i], term_path, "check"), at(term_path, "check")),
                         read_real(required(lhs[i], term_path, "coeff"), at(term_path, "coeff")));
    }
    k.rhs = read_real(required(j, path, "rhs"), at(path, "rhs"));
    c.expect = k.rhs;
    c.kind = std::move(k);
  } else if (type == "cone_identity") {
    only_keys(j, path, {"id", "type", "expect", "tol"});
    c.kind = ConeIdentityCheck{};
  } else {
    fail(at(path, "type"), "unknown check type '" + type + "'");
  }
  return c;
}

TreeNode read_node(const json& j, const std::string& path) {
  only_keys(j, path, {"check", "name", "A", "toric", "children"});
  TreeNode n;
  n.check = read_string(required(j, path, "check"), at(path, "check"));
  if (const json* v = optional_field(j, "name")) n.name = read_string(*v, at(path, "name"));
  if (const json* v = optional_field(j, "A")) {
    n.log_discrepancy = read_real(*v, at(path, "A"));
    if (!(*n.log_discrepancy > 0)) fail(at(path, "A"), "log discrepancy must be positive");
  }
  if (const json* v = optional_field(j, "toric")) n.toric = read_bool(*v, at(path, "toric"));
  if (const json* v = optional_field(j, "children")) {
    const std::string cp = at(path, "children");
    if (!v->is_array()) fail(cp, "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) n.children.push_back(read_node((*v)[i], at(cp, i)));
  }
  return n;
}

ConeSpec read_cone(const json& j, const std::string& path) {
  only_keys(j, path, {"n", "r", "lpow", "bundle", "a"});
  ConeSpec c;
  const std::int64_t n = read_int(required(j, path, "n"), at(path, "n"));
  if (n < 1 || n > 64) fail(at(path, "n"), "dimension must be in [1, 64]");
  c.n = static_cast<int>(n);
  c.r = read_real(required(j, path, "r"), at(path, "r"));
  if (!(c.r > 0)) fail(at(path, "r"), "must be positive");
  if (const json* v = optional_field(j, "lpow")) {
    c.lpow = read_real(*v, at(path, "lpow"));
    if (!(c.lpow > 0)) fail(at(path, "lpow"), "must be positive");
  }
  if (const json* v = optional_field(j, "bundle")) c.bundle = read_bool(*v, at(path, "bundle"));
  if (const json* v = optional_field(j, "a")) c.a = read_real(*v, at(path, "a"));
  return c;
}

// ---------------------------------------------------------------------------
// Serialization.

// Exact [num, den] when v is a rational with a small denominator, so that
// parsing reproduces the same long double; otherwise a double.
json full(real v) {
  if (!std::isfinite(v)) return static_cast<double>(v);
  for (std::int64_t den = 1; den <= 720; ++den) {
    const real scaled = v * static_cast<real>(den);
    if (std::fabs(scaled) > 1e15L) break;
    const real num = std::round(scaled);
    const auto n = static_cast<std::int64_t>(num);
    if (std::gcd(n, den) != 1) continue;
    if (static_cast<real>(n) / static_cast<real>(den) == v) return den == 1 ? json(n) : json::array({n, den});
  }
  return static_cast<double>(v);
}

json rounded(real v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return std::strtod(buf, nullptr);
}

json write_rational(const Rational& r) {
  if (r.den == 1) return r.num;
  return json::array({r.num, r.den});
}

json write_bipoly(const BiPoly& p) {
  json rows = json::array();
  for (const auto& row : p.coeffs()) {
    json out = json::array();
    for (real c : row) out.push_back(full(c));
    rows.push_back(std::move(out));
  }
  return rows;
}

json write_regions(const std::vector<FiberRegion>& regions) {
  json out = json::array();
  for (const auto& r : regions) {
    out.push_back(json{{"w", json::array({full(r.w_lo), full(r.w_hi)})},
                       {"t_lower", json::array({full(r.t_lower.a), full(r.t_lower.b)})},
                       {"t_upper", json::array({full(r.t_upper.a), full(r.t_upper.b)})},
                       {"poly", write_bipoly(r.vol)}});
  }
  return out;
}

json write_check(const Check& c) {
  json j;
  j["id"] = c.id;
  j["type"] = std::string(check_type_name(c.kind));
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, WeightedVolumeCheck>) {
          if (k.xi) j["xi"] = full(*k.xi);
        } else if constexpr (std::is_same_v<K, LinearTransformCheck>) {
          j["coeffs"] = json{{"w", full(k.g.c_w)}, {"y", full(k.g.c_y)}, {"x", full(k.g.c_x)},
                             {"const", full(k.g.constant)}};
        } else if constexpr (std::is_same_v<K, FiberProfileCheck>) {
          j["dim"] = k.profile.dim;
          j["regions"] = write_regions(k.profile.regions);
        } else if constexpr (std::is_same_v<K, PointProfileCheck>) {
          j["regions"] = write_regions(k.profile.degrees.regions);
          if (!k.offsets.empty()) j["offsets"] = write_regions(k.offsets);
        } else if constexpr (std::is_same_v<K, IdentityCheck>) {
          json lhs = json::array();
          for (const auto& [id, coeff] : k.lhs) lhs.push_back(json{{"check", id}, {"coeff", full(coeff)}});
          j["lhs"] = std::move(lhs);
          j["rhs"] = full(k.rhs);
        }
      },
      c.kind);
  if (!std::holds_alternative<IdentityCheck>(c.kind) && c.expect) j["expect"] = full(*c.expect);
  if (c.tol) j["tol"] = full(*c.tol);
  if (c.relation == Relation::Lb) j["relation"] = "lb";
  if (c.log_discrepancy) j["A"] = full(*c.log_discrepancy);
  return j;
}

json write_node(const TreeNode& n) {
  json j;
  j["check"] = n.check;
  if (n.name) j["name"] = *n.name;
  if (n.log_discrepancy) j["A"] = full(*n.log_discrepancy);
  if (n.toric) j["toric"] = true;
  if (!n.children.empty()) {
    json children = json::array();
    for (const auto& c : n.children) children.push_back(write_node(c));
    j["children"] = std::move(children);
  }
  return j;
}

std::string fmt(real v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15Lg", v);
  return buf;
}

std::string fmt_short(real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3Lg", v);
  return buf;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("<root>", std::string("invalid JSON: ") + e.what());
  }
  only_keys(root, "", {"name", "note", "body", "cone", "soliton", "checks", "refinement_tree"});

  Scenario s;
  s.name = read_string(required(root, "", "name"), "name");
  if (s.name.empty()) fail("name", "empty scenario name");
  if (const json* v = optional_field(root, "note")) s.note = read_string(*v, "note");

  if (const json* body = optional_field(root, "body")) {
    only_keys(*body, "body", {"vertices"});
    const json& verts = required(*body, "body", "vertices");
    if (!verts.is_array()) fail("body.vertices", "expected an array of [w, y, x] points");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const std::string vp = at("body.vertices", i);
      if (!verts[i].is_array() || verts[i].size() != 3) fail(vp, "expected [w, y, x]");
      s.vertices.push_back(
          {read_rational(verts[i][0], at(vp, 0)), read_rational(verts[i][1], at(vp, 1)),
           read_rational(verts[i][2], at(vp, 2))});
    }
  }
  if (const json* cone = optional_field(root, "cone")) s.cone = read_cone(*cone, "cone");

  if (const json* sol = optional_field(root, "soliton")) {
    if (sol->is_string()) {
      if (sol->get<std::string>() != "solve") fail("soliton", "expected \"solve\" or a number");
    } else {
      s.soliton = read_real(*sol, "soliton");
    }
  }

  const json& checks = required(root, "", "checks");
  if (!checks.is_array()) fail("checks", "expected an array");
  for (std::size_t i = 0; i < checks.size(); ++i) s.checks.push_back(read_check(checks[i], at("checks", i)));

  if (const json* tree = optional_field(root, "refinement_tree")) {
    if (!tree->is_array()) fail("refinement_tree", "expected an array of nodes");
    for (std::size_t i = 0; i < tree->size(); ++i) s.tree.push_back(read_node((*tree)[i], at("refinement_tree", i)));
  }

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin_scenario(source.substr(prefix.size()));
  std::ifstream in(source);
  if (!in) throw Error(ErrorKind::InvalidInput, source + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) {
  json j;
  j["name"] = s.name;
  if (!s.note.empty()) j["note"] = s.note;
  if (!s.vertices.empty()) {
    json verts = json::array();
    for (const auto& v : s.vertices)
      verts.push_back(json::array({write_rational(v.w), write_rational(v.y), write_rational(v.x)}));
    j["body"] = json{{"vertices", std::move(verts)}};
  }
  if (s.cone) {
    json c{{"n", s.cone->n}, {"r", full(s.cone->r)}, {"lpow", full(s.cone->lpow)}, {"bundle", s.cone->bundle}};
    if (s.cone->a) c["a"] = full(*s.cone->a);
    j["cone"] = std::move(c);
  }
  j["soliton"] = s.soliton ? full(*s.soliton) : json("solve");
  json checks = json::array();
  for (const auto& c : s.checks) checks.push_back(write_check(c));
  j["checks"] = std::move(checks);
  if (!s.tree.empty()) {
    json tree = json::array();
    for (const auto& n : s.tree) tree.push_back(write_node(n));
    j["refinement_tree"] = std::move(tree);
  }
  return j.dump(2) + "\n";
}

std::string report_json(const Report& r) {
  json j;
  j["scenario"] = r.scenario;
  j["xi0"] = rounded(r.xi0);
  j["vg"] = rounded(r.vg);
  j["soliton"] = json{{"futaki_residual", rounded(r.futaki_residual)}, {"iterations", r.iterations}};
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back(json{{"id", c.id},
                          {"type", c.type},
                          {"computed", rounded(c.computed)},
                          {"expected", c.expected ? rounded(*c.expected) : json(nullptr)},
                          {"tol", rounded(c.tol)},
                          {"relation", c.relation == Relation::Lb ? "lb" : "eq"},
                          {"pass", c.pass}});
  }
  j["checks"] = std::move(checks);
  if (!r.tree.empty()) {
    json tree = json::array();
    for (const auto& e : r.tree) {
      tree.push_back(json{{"name", e.name},
                          {"depth", e.depth},
                          {"A", rounded(e.log_discrepancy)},
                          {"sg", rounded(e.sg)},
                          {"ratio", rounded(e.ratio)},
                          {"toric", e.toric},
                          {"is_lower_bound", e.is_lower_bound}});
    }
    j["refinement"] = std::move(tree);
  }
  if (r.verdict) {
    j["verdict"] = json{{"kind", std::string(to_string(r.verdict->kind))},
                        {"bound", rounded(r.verdict->bound)},
                        {"witness", r.verdict->witness ? json(*r.verdict->witness) : json(nullptr)},
                        {"margin", rounded(r.verdict->margin)},
                        {"note", r.verdict->note}};
  } else {
    j["verdict"] = nullptr;
  }
  if (r.cone) {
    json c{{"n", r.cone->n},
           {"r", rounded(r.cone->r)},
           {"moment_interval", json::array({rounded(r.cone->lo), rounded(r.cone->hi)})},
           {"xi0", rounded(r.cone->xi0)},
           {"identity_residual", rounded(r.cone->identity_residual)},
           {"s_ratio", rounded(r.cone->s_ratio)}};
    c["a"] = r.cone->a ? rounded(*r.cone->a) : json(nullptr);
    j["cone"] = std::move(c);
  }
  j["all_pass"] = r.all_pass();
  j["elapsed_ms"] = std::round(r.elapsed_ms * 1000) / 1000;
  return j.dump(2) + "\n";
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  os << "scenario  " << r.scenario << "\n";
  os << "xi0       " << fmt(r.xi0) << "  (iterations " << r.iterations << ", Fut_g " << fmt_short(r.futaki_residual)
     << ")\n";
  os << "v^g       " << fmt(r.vg) << "\n";
  if (r.cone) {
    os << "cone      n=" << r.cone->n << " r=" << fmt(r.cone->r);
    if (r.cone->a) os << " a=" << fmt(*r.cone->a);
    os << " P=[" << fmt(r.cone->lo) << ", " << fmt(r.cone->hi) << "] residual " << fmt_short(r.cone->identity_residual)
       << " s_ratio " << fmt(r.cone->s_ratio) << "\n";
  }
  os << "checks\n";
  for (const auto& c : r.checks) {
    os << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.id << " [" << c.type << "]  computed " << fmt(c.computed);
    if (c.expected) {
      os << (c.relation == Relation::Lb ? "  expected >= " : "  expected ") << fmt(*c.expected) << "  tol "
         << fmt_short(c.tol);
    }
    os << "\n";
  }
  if (!r.tree.empty()) {
    os << "refinement\n";
    for (const auto& e : r.tree) {
      os << "  " << std::string(static_cast<std::size_t>(2 * e.depth), ' ') << e.name << "  A=" << fmt(e.log_discrepancy)
         << "  S^g" << (e.is_lower_bound ? ">=" : "=") << fmt(e.sg) << "  A/S^g=" << fmt(e.ratio)
         << (e.toric ? "  (toric)" : "") << "\n";
    }
  }
  if (r.verdict) {
    os << "verdict   " << to_string(r.verdict->kind) << "  bound " << fmt(r.verdict->bound) << "  margin "
       << fmt_short(r.verdict->margin);
    if (r.verdict->witness) os << "  witness " << *r.verdict->witness;
    os << "\n          " << r.verdict->note << "\n";
  }
  os << "result    " << (r.all_pass() ? "all checks pass" : "CHECK FAILURE") << "\n";
  return os.str();
}

}  // namespace wkstab
