#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "epshull/report.hpp"
#include "helpers.hpp"

using namespace epshull;
using namespace epshull::testing;

namespace {

std::string json_for(const std::string& txt) {
  const auto s = scene_from(txt);
  const auto g = build_boundary(s);
  BoundaryAnalysis an(s, g);
  const auto classes = an.classify_all_vertices();
  const auto d = decompose(an, classes);
  return report_to_json(build_report(s, g, classes, &d, nullptr, true, nullptr, nullptr));
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(EPS_HULL_BIN) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("JSON report is byte-identical across runs") {
  for (const auto& txt : {single_point_txt(), triangle_hole_txt(), q2_pocket_txt()}) {
    CHECK(json_for(txt) == json_for(txt));
  }
}

TEST_CASE("JSON report carries the documented keys") {
  const auto j = nlohmann::json::parse(json_for(triangle_hole_txt()));
  REQUIRE(j.contains("vertices"));
  REQUIRE(j.contains("curves"));
  CHECK(j["curves"].size() == 2);
  for (const auto& v : j["vertices"]) {
    CHECK(v.contains("x"));
    CHECK(v.contains("y"));
    CHECK(v.contains("class"));
    CHECK(v.contains("theta"));
    CHECK(v.contains("q_split"));
  }
  for (const auto& c : j["curves"]) {
    CHECK(c.contains("id"));
    CHECK(c.contains("component"));
    CHECK(c.contains("elements"));
    CHECK(c.contains("signed_area"));
  }
}

TEST_CASE("single-point JSON: one curve, no singular vertices") {
  const auto j = nlohmann::json::parse(json_for(single_point_txt()));
  CHECK(j["curves"].size() == 1);
  int singular = 0;
  for (const auto& v : j["vertices"])
    if (v["class"] != "smooth") ++singular;
  CHECK(singular == 0);
}

TEST_CASE("SVG render has one path per curve and class-keyed markers") {
  const auto s = scene_from(q2_pocket_txt());
  const auto g = build_boundary(s);
  BoundaryAnalysis an(s, g);
  const auto classes = an.classify_all_vertices();
  const auto d = decompose(an, classes);
  const std::string svg = render_svg(s, g, classes, d);
  size_t paths = 0;
  for (size_t pos = 0; (pos = svg.find("<path", pos)) != std::string::npos; ++pos) ++paths;
  CHECK(paths == d.curves.size());
  CHECK(svg.find("\"A ") == std::string::npos);  // arcs emitted inline in path data
  CHECK(svg.find(" A ") != std::string::npos);
  CHECK(svg.find("#7209b7") != std::string::npos);  // sharp-sharp marker color present
}

TEST_CASE("CLI: exit codes and JSON determinism end to end") {
  char dir_template[] = "/tmp/epshull_cli_XXXXXX";
  REQUIRE(mkdtemp(dir_template) != nullptr);
  const std::string dir = dir_template;
  {
    std::ofstream f(dir + "/scene.txt");
    f << single_point_txt();
  }
  {
    std::ofstream f(dir + "/bad.txt");
    f << "point 0 0\n";
  }

  CHECK(run_cli("decompose " + dir + "/scene.txt --json " + dir + "/a.json") == 0);
  CHECK(run_cli("decompose " + dir + "/scene.txt --json " + dir + "/b.json") == 0);
  CHECK(slurp(dir + "/a.json") == slurp(dir + "/b.json"));
  CHECK_FALSE(slurp(dir + "/a.json").empty());

  CHECK(run_cli("decompose " + dir + "/bad.txt") == 1);          // validation error
  CHECK(run_cli("decompose " + dir + "/missing.txt") == 1);      // unreadable scene
  CHECK(run_cli("frobnicate " + dir + "/scene.txt") == 64);      // unknown command
  CHECK(run_cli("decompose --bogus-flag " + dir + "/scene.txt") == 64);
  CHECK(run_cli("check " + dir + "/scene.txt --grid 128") == 0);

  CHECK(run_cli("render " + dir + "/scene.txt --svg " + dir + "/fig.svg") == 0);
  CHECK(slurp(dir + "/fig.svg").find("<svg") == 0);
}
