#include <doctest.h>

#include <random>
#include <sstream>

#include "epshull/jordan.hpp"
#include "helpers.hpp"

using namespace epshull;
using namespace epshull::testing;

TEST_CASE("complement components of the canonical scenes") {
  CHECK(complement_components(scene_from(single_point_txt()), build_boundary(scene_from(single_point_txt()))).size() == 1);
  {
    const auto s = scene_from(triangle_hole_txt());
    const auto comps = complement_components(s, build_boundary(s));
    REQUIRE(comps.size() == 2);
    CHECK_FALSE(comps[0].bounded);
    CHECK(comps[1].bounded);
    CHECK(distance_to_scene(s, comps[1].witness) > s.epsilon);
  }
  {
    const auto s = scene_from(tangent_discs_txt());
    CHECK(complement_components(s, build_boundary(s)).size() == 1);
  }
}

TEST_CASE("decomposition: single disc") {
  const auto s = scene_from(single_point_txt());
  const auto d = decompose(s, build_boundary(s));
  REQUIRE(d.curves.size() == 1);
  CHECK(d.curves[0].cycle.size() == 1);
  CHECK(d.curves[0].signed_area < 0.0);
  CHECK(d.inaccessible.empty());
}

TEST_CASE("decomposition: tangent discs pass through the Q1 vertex") {
  const auto s = scene_from(tangent_discs_txt());
  const auto g = build_boundary(s);
  const auto d = decompose(s, g);
  REQUIRE(d.curves.size() == 2);
  CHECK(d.components.size() == 1);
  // each curve is one loop element visiting the shared vertex exactly once
  for (const auto& c : d.curves) {
    CHECK(c.cycle.size() == 1);
    REQUIRE(c.vertices.size() == 1);
    CHECK(c.vertices[0] == 0);
    CHECK(c.component == 0);
  }
  // and they are the left and the right circle, not a mixture
  const auto& e0 = g.elements[d.curves[0].cycle[0].first].support;
  const auto& e1 = g.elements[d.curves[1].cycle[0].first].support;
  CHECK(dist(e0.center, e1.center) > 1.0);
}

TEST_CASE("decomposition: triangle hole") {
  const auto s = scene_from(triangle_hole_txt());
  const auto g = build_boundary(s);
  const auto d = decompose(s, g);
  REQUIRE(d.curves.size() == 2);
  REQUIRE(d.components.size() == 2);
  const auto& hole = d.curves[0].signed_area > 0 ? d.curves[0] : d.curves[1];
  const auto& outer = d.curves[0].signed_area > 0 ? d.curves[1] : d.curves[0];
  CHECK(hole.cycle.size() == 3);
  CHECK(outer.cycle.size() == 3);
  CHECK(d.components[hole.component].bounded);
  CHECK_FALSE(d.components[outer.component].bounded);
  BoundaryAnalysis an(s, g);
  int wedges = 0;
  for (const auto& cls : an.classify_all_vertices())
    if (cls.tag == SingTag::Wedge) ++wedges;
  CHECK(wedges == 6);
}

TEST_CASE("decomposition: Q2 pocket bounces and splits components") {
  const auto s = scene_from(q2_pocket_txt());
  const auto g = build_boundary(s);
  const auto d = decompose(s, g);
  REQUIRE(d.curves.size() == 2);
  REQUIRE(d.components.size() == 2);
  const auto& pocket = d.curves[0].signed_area > 0 ? d.curves[0] : d.curves[1];
  const auto& outer = d.curves[0].signed_area > 0 ? d.curves[1] : d.curves[0];
  CHECK(pocket.component != outer.component);
  // the tangency vertex lies on both curves
  int origin_vid = -1;
  for (const auto& v : g.vertices)
    if (dist(v.pos, {0, 0}) < 1e-6) origin_vid = v.id;
  REQUIRE(origin_vid >= 0);
  for (const auto& c : d.curves)
    CHECK(std::count(c.vertices.begin(), c.vertices.end(), origin_vid) == 1);
}

TEST_CASE("accessibility") {
  {
    const auto s = scene_from(tangent_discs_txt());
    const auto g = build_boundary(s);
    const auto d = decompose(s, g);
    const auto acc = accessibility(g, d, {0, 0});
    CHECK(acc.accessible);
    CHECK(acc.component_ids == std::vector<int>{0});
  }
  {
    const auto s = scene_from(triangle_hole_txt());
    const auto g = build_boundary(s);
    const auto d = decompose(s, g);
    // a point on the inner hole arc: directly above the bottom-left site
    const Point2 p{1.0, std::sqrt(1.1 * 1.1 - 1.0)};
    const auto acc = accessibility(g, d, p);
    REQUIRE(acc.component_ids.size() == 1);
    CHECK(d.components[acc.component_ids[0]].bounded);
  }
  {
    const auto s = scene_from(q2_pocket_txt());
    const auto g = build_boundary(s);
    const auto d = decompose(s, g);
    const auto acc = accessibility(g, d, {0, 0});
    CHECK(acc.component_ids.size() == 2);  // outer and pocket
  }
  {
    const auto s = scene_from(single_point_txt());
    const auto g = build_boundary(s);
    const auto d = decompose(s, g);
    CHECK_THROWS_AS(accessibility(g, d, {0.5, 0.5}), NotOnBoundary);
  }
}

TEST_CASE("structural checks pass on canonical and random scenes") {
  std::mt19937 rng(41);
  std::vector<std::string> texts = {single_point_txt(), tangent_discs_txt(), lens_txt(),
                                    triangle_hole_txt(), triple_sharp_txt(), stadium_txt(),
                                    q2_pocket_txt(),     collinear_overlap_txt()};
  for (int k = 0; k < 15; ++k) texts.push_back(random_scene(rng).text);
  for (const auto& txt : texts) {
    CAPTURE(txt);
    const auto s = scene_from(txt);
    const auto g = build_boundary(s);
    BoundaryAnalysis an(s, g);
    const auto classes = an.classify_all_vertices();
    const auto d = decompose(an, classes);
    const auto checks = check_decomposition(s, g, d, classes);
    CAPTURE(checks.witness);
    CHECK(checks.all_ok());
  }
}

TEST_CASE("knife-edge overlap: micro-separated wedge pairs stay consistent") {
  // sites almost exactly 2*eps apart (overlap depth ~2e-9): each near-tangency
  // splits into two wedges a few 1e-5 apart with a sliver arc between them;
  // the hole still separates and all structural checks hold
  const auto s = parse_scene("epsilon 1\npoint 0 0\npoint 2 0\npoint 1 1.7320508\n");
  const auto g = build_boundary(s);
  BoundaryAnalysis an(s, g);
  const auto classes = an.classify_all_vertices();
  const auto d = decompose(an, classes);
  CHECK(d.components.size() == 2);
  CHECK(check_decomposition(s, g, d, classes).all_ok());
}

TEST_CASE("tangent-disc grid: pockets split at Q2 vertices") {
  // 3x3 grid of discs tangent to their axis neighbours: four diamond pockets,
  // every tangency separates two components
  std::string txt = "epsilon 1\n";
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      txt += "point " + std::to_string(2 * i) + " " + std::to_string(2 * j) + "\n";
  const auto s = parse_scene(txt);
  const auto g = build_boundary(s);
  BoundaryAnalysis an(s, g);
  const auto classes = an.classify_all_vertices();
  int q2 = 0;
  for (const auto& c : classes)
    if (c.tag == SingTag::SharpSharp && c.q == QSplit::Q2) ++q2;
  CHECK(q2 == 12);
  const auto d = decompose(an, classes);
  CHECK(d.curves.size() == 5);
  CHECK(d.components.size() == 5);
  CHECK(check_decomposition(s, g, d, classes).all_ok());
}

TEST_CASE("tangent-disc chain: every circle is its own curve through Q1 vertices") {
  const auto s = parse_scene("epsilon 1\npoint 0 0\npoint 2 0\npoint 4 0\npoint 6 0\n");
  const auto g = build_boundary(s);
  BoundaryAnalysis an(s, g);
  const auto classes = an.classify_all_vertices();
  int q1 = 0;
  for (const auto& c : classes)
    if (c.tag == SingTag::SharpSharp && c.q == QSplit::Q1) ++q1;
  CHECK(q1 == 3);
  const auto d = decompose(an, classes);
  CHECK(d.curves.size() == 4);  // one per circle, flowing through the tangencies
  CHECK(d.components.size() == 1);
  for (const auto& c : d.curves) CHECK(c.cycle.size() <= 2);
  CHECK(check_decomposition(s, g, d, classes).all_ok());
}

TEST_CASE("nested island: curve inside a hole attaches to the hole component") {
  std::ostringstream os;
  os.precision(17);
  os << "epsilon 1.3\n";
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * std::acos(-1.0) * k / 8;
    os << "point " << 3.0 * std::cos(a) << " " << 3.0 * std::sin(a) << "\n";
  }
  os << "point 0 0\n";
  const auto s = parse_scene(os.str());
  const auto g = build_boundary(s);
  const auto d = decompose(s, g);
  REQUIRE(d.curves.size() == 3);
  REQUIRE(d.components.size() == 2);
  const JordanCurve* island = nullptr;
  const JordanCurve* hole = nullptr;
  for (const auto& c : d.curves) {
    if (c.cycle.size() == 1) island = &c;
    if (c.signed_area > 0) hole = &c;
  }
  REQUIRE(island != nullptr);
  REQUIRE(hole != nullptr);
  CHECK(island->signed_area == doctest::Approx(-std::acos(-1.0) * 1.3 * 1.3));
  CHECK(island->component == hole->component);
  CHECK(d.components[island->component].bounded);
}

TEST_CASE("curve areas add up to the region area") {
  // stadium: area 4 + pi with the set on the right (negative orientation)
  const auto s = scene_from(stadium_txt());
  const auto d = decompose(s, build_boundary(s));
  double total = 0.0;
  for (const auto& c : d.curves) total += c.signed_area;
  CHECK(total == doctest::Approx(-(4.0 + std::acos(-1.0))).epsilon(1e-9));
}
