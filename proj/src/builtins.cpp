#include <utility>

#include "wkstab/error.hpp"
#include "wkstab/scenario.hpp"

namespace wkstab {

namespace {

const BiPoly W = BiPoly::w();
const BiPoly T = BiPoly::t();

RationalPoint3 pt(std::int64_t w, std::int64_t y, std::int64_t x) { return {Rational(w), Rational(y), Rational(x)}; }

// Blowup of P^3 along a plane cubic: moment body over w in [-1, 3].
std::vector<RationalPoint3> body_228() {
  return {pt(3, 0, 3), pt(0, 0, 0), pt(0, 0, 3), pt(0, 3, 0), pt(-1, 0, 0), pt(-1, 1, 0), pt(-1, 0, 1)};
}

// Same body cut at w <= 1.
std::vector<RationalPoint3> body_314() {
  return {pt(-1, 0, 0), pt(-1, 0, 1), pt(-1, 1, 0), pt(0, 0, 0), pt(0, 0, 3),
          pt(0, 3, 0),  pt(1, 0, 1),  pt(1, 0, 3),  pt(1, 2, 1)};
}

struct Family {
  std::string prefix;
  std::vector<RationalPoint3> vertices;
  real top;  // w_max
  real xi0;
  real xi0_tol;
  std::optional<real> vg;
  real volume;
};

// The reference 2.28 root carries an error of about 1.5e-9.
Family family_228() { return {"2.28", body_228(), 3, 0.9377815610300645L, 1e-8L, 5.61542L, 20.0L / 3}; }
Family family_314() { return {"3.14", body_314(), 1, 0.5265255550640977L, 1e-9L, std::nullopt, 16.0L / 3}; }

// t-bounds a w + b
constexpr AffineForm af(real a, real b) { return {a, b}; }

FiberRegion neg(AffineForm lo, AffineForm hi, BiPoly v) { return {-1, 0, lo, hi, std::move(v)}; }
FiberRegion pos(const Family& f, AffineForm lo, AffineForm hi, BiPoly v) { return {0, f.top, lo, hi, std::move(v)}; }

Check make(std::string id, CheckKind kind, std::optional<real> expect = std::nullopt,
           std::optional<real> tol = std::nullopt, std::optional<real> a = std::nullopt) {
  Check c;
  c.id = std::move(id);
  c.kind = std::move(kind);
  c.expect = expect;
  c.tol = tol;
  c.log_discrepancy = a;
  return c;
}

Check identity(std::string id, std::vector<std::pair<std::string, real>> lhs, real rhs,
               std::optional<real> tol = std::nullopt) {
  return make(std::move(id), IdentityCheck{std::move(lhs), rhs}, rhs, tol);
}

Check fiber(std::string id, std::vector<FiberRegion> regions, std::optional<real> expect, real a) {
  FiberVolumeProfile p{2, std::move(regions), id};
  return make(std::move(id), FiberProfileCheck{std::move(p)}, expect, std::nullopt, a);
}

Check point(std::string id, std::vector<FiberRegion> degrees, std::vector<FiberRegion> offsets,
            std::optional<real> expect, real a) {
  PointProfile p{{1, std::move(degrees), id}};
  return make(std::move(id), PointProfileCheck{std::move(p), std::move(offsets)}, expect, std::nullopt, a);
}

Check linear(std::string id, LinearForm3 g, std::optional<real> expect, real a) {
  return make(std::move(id), LinearTransformCheck{g}, expect, std::nullopt, a);
}

TreeNode node(std::string check, std::vector<TreeNode> children = {}, std::optional<real> a = std::nullopt,
              std::optional<std::string> name = std::nullopt) {
  TreeNode n;
  n.check = std::move(check);
  n.children = std::move(children);
  n.log_discrepancy = a;
  n.name = std::move(name);
  return n;
}

// Soliton, volume and toric-root checks shared by every body scenario.
Scenario base(const Family& f, const std::string& suffix) {
  Scenario s;
  s.name = f.prefix + suffix;
  s.vertices = f.vertices;
  s.checks.push_back(make("xi0", XiCheck{}, f.xi0, f.xi0_tol));
  s.checks.push_back(make("futaki", FutakiCheck{}, 0, 1e-12L));
  s.checks.push_back(make("vg", WeightedVolumeCheck{}, f.vg));
  s.checks.push_back(make("vol", WeightedVolumeCheck{0}, f.volume, 1e-12L));
  s.checks.push_back(make("body_volume", BodyVolumeCheck{}, f.volume, 1e-12L));
  s.checks.push_back(make("H_u", LinearTransformCheck{{1, 0, 0, 1}}, 1, 1e-10L, 1));
  return s;
}

TreeNode toric_root(std::vector<TreeNode> children) {
  TreeNode root = node("H_u", std::move(children));
  root.toric = true;
  return root;
}

// p not on the cubic: the line l through p and the point p on l.
Scenario case_a(const Family& f, real expect) {
  Scenario s = base(f, "-A");
  s.note = "general point of H_u off the cubic";
  s.checks.push_back(fiber("l", {neg(af(0, 0), af(2, 3), (3 + 2 * W - T).pow(2)),
                                 pos(f, af(0, 0), af(-1, 3), (3 - W - T).pow(2))},
                           expect, 1));
  s.checks.push_back(linear("l_G", {0, 1, 0, 0}, expect, 1));
  s.checks.push_back(point("p", {neg(af(0, 0), af(2, 3), 3 + 2 * W - T), pos(f, af(0, 0), af(-1, 3), 3 - W - T)}, {},
                           expect, 1));
  s.checks.push_back(identity("l=p", {{"l", 1}, {"p", -1}}, 0));
  s.checks.push_back(identity("l=l_G", {{"l", 1}, {"l_G", -1}}, 0));
  s.tree.push_back(toric_root({node("l", {node("p")})}));
  return s;
}

// p on the cubic, tangent line of multiplicity 2: (2,1)-weighted blowup.
Scenario case_b(const Family& f, real e, real p0, real p1, std::optional<real> p2, std::optional<real> p1_minus_p0,
                std::optional<real> p2_minus_p0) {
  Scenario s = base(f, "-B");
  s.note = "point of the cubic with simple tangent";
  const BiPoly a = 3 + 2 * W;
  const BiPoly b = 3 - W;
  s.checks.push_back(fiber("E",
                           {neg(af(0, 0), af(2, 3), a * a - T * T * 0.5L),
                            neg(af(2, 3), af(4, 6), a * a - T * T * 0.5L + (T - a).pow(2)),
                            pos(f, af(0, 0), af(2, 0), b * b),
                            pos(f, af(2, 0), af(1, 3), b * b - (T - 2 * W).pow(2) * 0.5L),
                            pos(f, af(1, 3), af(0, 6), b * b - (T - 2 * W).pow(2) * 0.5L + (T - 3 - W).pow(2))},
                           e, 3));
  s.checks.push_back(linear("E_G", {0, 1, 2, 0}, e, 3));

  const std::vector<FiberRegion> deg = {neg(af(0, 0), af(2, 3), T * 0.5L), neg(af(2, 3), af(4, 6), a - T * 0.5L),
                                        pos(f, af(2, 0), af(1, 3), T * 0.5L - W),
                                        pos(f, af(1, 3), af(0, 6), 3 - T * 0.5L)};
  s.checks.push_back(point("P0", deg, {}, p0, 0.5L));
  s.checks.push_back(point("P1", deg,
                           {neg(af(2, 3), af(4, 6), (T - a) * (a - T * 0.5L)),
                            pos(f, af(1, 3), af(0, 6), (T - 3 - W) * (3 - T * 0.5L))},
                           p1, 1));
  s.checks.push_back(point("P2", deg,
                           {pos(f, af(2, 0), af(1, 3), W * (T * 0.5L - W)),
                            pos(f, af(1, 3), af(0, 6), W * (3 - T * 0.5L))},
                           p2, 1));
  s.checks.push_back(identity("E=E_G", {{"E", 1}, {"E_G", -1}}, 0));
  if (p1_minus_p0) s.checks.push_back(identity("P1-P0", {{"P1", 1}, {"P0", -1}}, *p1_minus_p0, 5e-6L));
  if (p2_minus_p0) s.checks.push_back(identity("P2-P0", {{"P2", 1}, {"P0", -1}}, *p2_minus_p0, 5e-6L));
  s.checks.push_back(identity("P1=2P0", {{"P1", 1}, {"P0", -2}}, 0));
  s.checks.push_back(identity("P2+P0=1", {{"P2", 1}, {"P0", 1}}, 1));
  s.tree.push_back(toric_root({node("E", {node("P0"), node("P1"), node("P2")})}));
  return s;
}

// p on the cubic, flex tangent: (3,1)-weighted blowup.
Scenario case_c(const Family& f, real e, real p, real p1, std::optional<real> p2, std::optional<real> p1_minus_p,
                std::optional<real> p2_minus_p) {
  Scenario s = base(f, "-C");
  s.note = "flex point of the cubic";
  const BiPoly a = 3 + 2 * W;
  const BiPoly b = 3 - W;
  const real third = 1.0L / 3;
  s.checks.push_back(fiber("E",
                           {neg(af(0, 0), af(2, 3), a * a - T * T * third),
                            neg(af(2, 3), af(6, 9), (T - 3 * a).pow(2) * (1.0L / 6)),
                            pos(f, af(0, 0), af(3, 0), b * b),
                            pos(f, af(3, 0), af(2, 3), b * b - (T - 3 * W).pow(2) * third),
                            pos(f, af(2, 3), af(0, 9),
                                b * b - (T - 3 * W).pow(2) * third + (T - 3 - 2 * W).pow(2) * 0.5L)},
                           e, 4));
  s.checks.push_back(linear("E_G", {0, 1, 3, 0}, e, 4));

  const std::vector<FiberRegion> deg = {neg(af(0, 0), af(2, 3), T * third),
                                        neg(af(2, 3), af(6, 9), (a - T * third) * 0.5L),
                                        pos(f, af(3, 0), af(2, 3), T * third - W),
                                        pos(f, af(2, 3), af(0, 9), (3 - T * third) * 0.5L)};
  s.checks.push_back(point("P", deg, {}, p, 1));
  s.checks.push_back(point("P1", deg,
                           {neg(af(2, 3), af(6, 9), (T - a) * (a - T * third) * 0.25L),
                            pos(f, af(2, 3), af(0, 9), (T - 3 - 2 * W) * (3 - T * third) * 0.25L)},
                           p1, 1));
  s.checks.push_back(point("P2", deg,
                           {pos(f, af(3, 0), af(2, 3), W * (T * third - W)),
                            pos(f, af(2, 3), af(0, 9), W * (3 - T * third) * 0.5L)},
                           p2, 1));
  s.checks.push_back(identity("E=E_G", {{"E", 1}, {"E_G", -1}}, 0));
  if (p1_minus_p) s.checks.push_back(identity("P1-P", {{"P1", 1}, {"P", -1}}, *p1_minus_p, 5e-6L));
  if (p2_minus_p) s.checks.push_back(identity("P2-P", {{"P2", 1}, {"P", -1}}, *p2_minus_p, 5e-6L));
  s.checks.push_back(identity("P1=3P", {{"P1", 1}, {"P", -3}}, 0));
  s.checks.push_back(identity("P2+2P=1", {{"P2", 1}, {"P", 2}}, 1));
  s.tree.push_back(toric_root({node("E", {node("P", {}, 1.0L / 3, "P0"), node("P1"), node("P2")})}));
  return s;
}

// Degenerate cubics with an ordinary double point: (1,1)-blowup line l.
Scenario git_node(const std::string& id, const std::string& note) {
  const Family f = family_228();
  Scenario s = base(f, "");
  s.name = id;
  s.note = note;
  s.checks.push_back(make("l", LinearTransformCheck{{0, 0, 2, 0}}, 2, 1e-10L, 2));
  const std::vector<FiberRegion> deg = {neg(af(0, 0), af(2, 3), T), pos(f, af(2, 0), af(1, 3), T - 2 * W)};
  const std::vector<FiberRegion> fixed = {pos(f, af(2, 0), af(1, 3), W * (T - 2 * W))};
  s.checks.push_back(point("P", deg, {}, 0.587831L, 1));
  s.checks.push_back(point("P1", deg, fixed, 0.625755L, 1));
  s.checks.push_back(point("P2", deg, fixed, 0.625755L, 1));
  s.checks.push_back(identity("P1=P2", {{"P1", 1}, {"P2", -1}}, 0));
  s.tree.push_back(toric_root({node("l", {node("P"), node("P1"), node("P2")})}));
  return s;
}

Scenario git_cuspidal() {
  const Family f = family_228();
  Scenario s = base(f, "");
  s.name = "git:cuspidal";
  s.note = "cuspidal cubic: (2,3)-blowup line l, transform 6x - y is a lower bound";
  Check l = make("l", LinearTransformCheck{{0, -1, 6, 0}}, 5.226098L, std::nullopt, 5);
  l.relation = Relation::Lb;
  s.checks.push_back(l);
  s.tree.push_back(toric_root({node("l")}));
  return s;
}

Scenario cone(const std::string& id, ConeSpec spec, const std::string& note) {
  Scenario s;
  s.name = id;
  s.note = note;
  s.cone = spec;
  s.checks.push_back(make("futaki", FutakiCheck{}, 0, 1e-12L));
  s.checks.push_back(make("cone_identity", ConeIdentityCheck{}, 0, 1e-11L));
  return s;
}

}  // namespace

const std::vector<std::string>& builtin_ids() {
  static const std::vector<std::string> ids = {"2.28-A",    "2.28-B",           "2.28-C",          "3.14-A",
                                               "3.14-B",    "3.14-C",           "git:nodal",       "git:secant-conic",
                                               "git:three-lines", "git:cuspidal", "cone",          "bundle"};
  return ids;
}

Scenario builtin_scenario(const std::string& id) {
  if (id == "2.28-A") return case_a(family_228(), 0.773902L);
  if (id == "2.28-B") return case_b(family_228(), 2.773902L, 0.386951L, 0.773902L, std::nullopt, 0.386951L, 0.226098L);
  if (id == "2.28-C") return case_c(family_228(), 3.773902L, 0.257967L, 0.773902L, std::nullopt, 0.515935L, 0.226098L);
  if (id == "3.14-A") return case_a(family_314(), 0.806338L);
  if (id == "3.14-B") return case_b(family_314(), 2.806338L, 0.403169L, 0.806338L, 0.596831L, std::nullopt, std::nullopt);
  if (id == "3.14-C") return case_c(family_314(), 3.806338L, 0.268799L, 0.806338L, 0.462442L, std::nullopt, std::nullopt);
  if (id == "git:nodal") return git_node(id, "nodal cubic: ordinary double point");
  if (id == "git:secant-conic") return git_node(id, "conic and secant line: ordinary double points");
  if (id == "git:three-lines") return git_node(id, "three lines without common point: ordinary double points");
  if (id == "git:cuspidal") return git_cuspidal();
  if (id == "cone") return cone(id, {4, 2, 1, false, std::nullopt}, "cone over a Fano fourfold base, r = 2");
  if (id == "bundle") return cone(id, {3, 1, 1, true, 0.5L}, "P^1-bundle, r = 1, boundary a = 1/2");
  throw Error(ErrorKind::UnknownScenario, "unknown builtin scenario '" + id + "'");
}

}  // namespace wkstab
