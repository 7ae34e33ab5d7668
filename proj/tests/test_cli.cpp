#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome wkstab(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / ("wkstab_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter));
  const fs::path err = dir / ("err" + std::to_string(counter++));
  const std::string cmd = std::string("'") + WKSTAB_CLI + "' " + args + " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = slurp(out);
  o.err = slurp(err);
  return o;
}

json without_timing(const std::string& text) {
  json j = json::parse(text);
  j.erase("elapsed_ms");
  return j;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(wkstab("run --scenario builtin:2.28-C").code == 0);
  CHECK(wkstab("run --scenario builtin:2.28-B").code == 0);
  CHECK(wkstab("run --scenario builtin:git:cuspidal").code == 0);
  // These builtins carry reference values that the computation does not reproduce.
  CHECK(wkstab("run --scenario builtin:3.14-C").code == 2);
  CHECK(wkstab("run --scenario builtin:git:nodal").code == 2);

  CHECK(wkstab("run --scenario builtin:nope").code == 1);
  CHECK(wkstab("run --scenario /nonexistent/scenario.json").code == 1);
  CHECK(wkstab("frobnicate").code == 1);
  CHECK(wkstab("run").code == 1);
  CHECK(wkstab("cone --n 3 --r 0.5 --a 0.3 --bundle").code == 1);
  CHECK(wkstab("cone --n 4 --r 2").code == 0);
  CHECK(wkstab("lattice-check --scenario builtin:2.28-B --m 40").code == 0);
  CHECK(wkstab("lattice-check --scenario builtin:2.28-B --m 2").code == 1);
}

TEST_CASE("list names every builtin") {
  const Outcome o = wkstab("list");
  REQUIRE(o.code == 0);
  for (const char* id : {"2.28-A", "2.28-B", "2.28-C", "3.14-A", "3.14-B", "3.14-C", "git:nodal", "git:cuspidal",
                         "cone", "bundle"})
    CHECK(o.out.find(id) != std::string::npos);
}

TEST_CASE("json reports are deterministic apart from timing") {
  for (const char* id : {"2.28-B", "3.14-A", "git:cuspidal", "cone"}) {
    const std::string args = std::string("run --report json --scenario builtin:") + id;
    const Outcome a = wkstab(args), b = wkstab(args);
    CHECK(a.code == b.code);
    CHECK(without_timing(a.out) == without_timing(b.out));
  }
}

TEST_CASE("dump and reload reproduces the report") {
  const fs::path dir = fs::temp_directory_path() / ("wkstab_roundtrip_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  for (const char* id : {"2.28-A", "2.28-B", "2.28-C", "3.14-B", "3.14-C", "git:nodal", "git:cuspidal", "bundle"}) {
    INFO(id);
    const Outcome d = wkstab(std::string("dump --scenario builtin:") + id);
    REQUIRE(d.code == 0);
    std::string stem = id;
    std::replace(stem.begin(), stem.end(), ':', '_');
    const fs::path file = dir / (stem + ".json");
    std::ofstream(file) << d.out;

    CHECK(wkstab("dump --scenario '" + file.string() + "'").out == d.out);

    const Outcome a = wkstab(std::string("run --report json --scenario builtin:") + id);
    const Outcome b = wkstab("run --report json --scenario '" + file.string() + "'");
    CHECK(a.code == b.code);
    const json ja = json::parse(a.out), jb = json::parse(b.out);
    REQUIRE(ja["checks"].size() == jb["checks"].size());
    for (std::size_t i = 0; i < ja["checks"].size(); ++i) {
      const double x = ja["checks"][i]["computed"], y = jb["checks"][i]["computed"];
      CHECK(std::fabs(x - y) <= 1e-14 * std::max(1.0, std::fabs(x)));
    }
  }
}

TEST_CASE("malformed scenarios name the offending field") {
  const std::pair<const char*, const char*> cases[] = {
      {"missing_name.json", "name: "},
      {"three_vertices.json", "body.vertices: "},
      {"nonlowest_rational.json", "body.vertices[1][0]: "},
      {"zero_denominator.json", "body.vertices[1][0]: "},
      {"unknown_check_type.json", "checks[0].type: "},
      {"duplicate_ids.json", "checks[1].id: "},
      {"tree_missing_check.json", "refinement_tree[0].check: "},
      {"identity_unknown_ref.json", "checks[1].lhs[0].check: "},
      {"inverted_w.json", "checks[0].regions[0].w: "},
      {"bad_relation.json", "checks[0].relation: "},
      {"bad_soliton.json", "soliton: "},
      {"invalid_json.json", "<root>: invalid JSON"},
      {"unknown_field.json", "checks[0].expcet: "},
  };
  for (const auto& [file, path] : cases) {
    INFO(file);
    const std::string src = std::string(WKSTAB_FIXTURES) + "/malformed/" + file;
    const Outcome o = wkstab("run --scenario '" + src + "'");
    CHECK(o.code == 1);
    CHECK(o.err.find(std::string("error: InvalidInput: ") + path) != std::string::npos);
    CHECK(o.out.empty());
  }
}
