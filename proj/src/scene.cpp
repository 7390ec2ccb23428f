#include "epshull/scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace epshull {

Point2 GeneratorScene::bbox_min() const {
  Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  for (const auto& g : generators) {
    lo.x = std::min({lo.x, g.a.x, g.shape == GenShape::SiteSegment ? g.b.x : g.a.x});
    lo.y = std::min({lo.y, g.a.y, g.shape == GenShape::SiteSegment ? g.b.y : g.a.y});
  }
  return lo;
}

Point2 GeneratorScene::bbox_max() const {
  Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& g : generators) {
    hi.x = std::max({hi.x, g.a.x, g.shape == GenShape::SiteSegment ? g.b.x : g.a.x});
    hi.y = std::max({hi.y, g.a.y, g.shape == GenShape::SiteSegment ? g.b.y : g.a.y});
  }
  return hi;
}

namespace {

bool same_generator(const Generator& p, const Generator& q, double tol) {
  if (p.shape != q.shape) return false;
  if (p.shape == GenShape::SitePoint) return dist(p.a, q.a) <= tol;
  return (dist(p.a, q.a) <= tol && dist(p.b, q.b) <= tol) ||
         (dist(p.a, q.b) <= tol && dist(p.b, q.a) <= tol);
}

double parse_float(const std::string& tok, int line) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw SyntaxError(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size()) throw SyntaxError(line, "trailing characters in number '" + tok + "'");
  if (!std::isfinite(v)) throw SyntaxError(line, "non-finite number");
  return v;
}

}  // namespace

GeneratorScene parse_scene(std::string_view text, std::optional<double> tol_pos) {
  GeneratorScene scene;
  bool have_eps = false;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string cmd;
    if (!(ls >> cmd)) continue;

    std::vector<std::string> args;
    for (std::string t; ls >> t;) args.push_back(t);

    if (cmd == "epsilon") {
      if (have_eps) throw ValidationError("epsilon given more than once");
      if (args.size() != 1) throw SyntaxError(lineno, "epsilon takes one value");
      scene.epsilon = parse_float(args[0], lineno);
      have_eps = true;
    } else if (cmd == "point") {
      if (args.size() != 2) throw SyntaxError(lineno, "point takes two coordinates");
      Generator g;
      g.shape = GenShape::SitePoint;
      g.a = {parse_float(args[0], lineno), parse_float(args[1], lineno)};
      scene.generators.push_back(g);
    } else if (cmd == "segment") {
      if (args.size() != 4) throw SyntaxError(lineno, "segment takes four coordinates");
      Generator g;
      g.shape = GenShape::SiteSegment;
      g.a = {parse_float(args[0], lineno), parse_float(args[1], lineno)};
      g.b = {parse_float(args[2], lineno), parse_float(args[3], lineno)};
      scene.generators.push_back(g);
    } else {
      throw SyntaxError(lineno, "unknown directive '" + cmd + "'");
    }
  }

  if (!have_eps) throw ValidationError("missing epsilon");
  if (scene.epsilon <= 0.0) throw ValidationError("epsilon must be positive");
  if (scene.generators.empty()) throw ValidationError("scene has no generators");

  for (size_t i = 0; i < scene.generators.size(); ++i) scene.generators[i].id = static_cast<int>(i);

  const Point2 lo = scene.bbox_min();
  const Point2 hi = scene.bbox_max();
  scene.scale = std::max(dist(lo, hi), scene.epsilon);
  scene.tol.pos = tol_pos.value_or(1e-9 * scene.scale);
  scene.tol.unit = 1e-9;
  scene.tol.ang = 1e-6;
  if (scene.tol.pos <= 0.0) throw ValidationError("tolerance must be positive");
  // The coincidence tolerance has to sit far below the feature scale, or
  // snapping merges genuinely distinct structures.
  if (scene.tol.pos > scene.epsilon / 100.0)
    throw ValidationError("tolerance too large relative to epsilon");

  for (const auto& g : scene.generators) {
    if (g.shape == GenShape::SiteSegment && dist(g.a, g.b) <= scene.tol.pos)
      throw ValidationError("zero-length segment (generator " + std::to_string(g.id) + ")");
  }
  for (size_t i = 0; i < scene.generators.size(); ++i) {
    for (size_t j = i + 1; j < scene.generators.size(); ++j) {
      if (same_generator(scene.generators[i], scene.generators[j], scene.tol.pos))
        throw ValidationError("duplicate generators " + std::to_string(i) + " and " + std::to_string(j));
    }
  }
  return scene;
}

GeneratorScene load_scene_file(const std::string& path, std::optional<double> tol_pos) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open scene file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scene(ss.str(), tol_pos);
}

double distance_to_generator(const Generator& g, Point2 p) {
  if (g.shape == GenShape::SitePoint) return dist(g.a, p);
  return dist_point_segment(p, g.a, g.b);
}

Point2 nearest_point_on_generator(const Generator& g, Point2 p) {
  if (g.shape == GenShape::SitePoint) return g.a;
  return closest_point_on_segment(p, g.a, g.b);
}

double distance_to_scene(const GeneratorScene& s, Point2 p) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& g : s.generators) best = std::min(best, distance_to_generator(g, p));
  return best;
}

void at_epsilon_points(const Generator& g, Point2 p, double eps, double band, std::vector<Point2>* out) {
  if (g.shape == GenShape::SitePoint) {
    if (std::fabs(dist(g.a, p) - eps) <= band) out->push_back(g.a);
    return;
  }
  const Vec2 w = g.b - g.a;
  const double L2 = norm2(w);
  const Vec2 ap = g.a - p;
  // || ap + t w ||^2 = eps^2
  const double bq = dot(ap, w);
  const double cq = norm2(ap) - eps * eps;
  const double disc = bq * bq - L2 * cq;
  auto push_if_at_eps = [&](double t) {
    t = std::clamp(t, 0.0, 1.0);
    const Point2 y = g.a + w * t;
    if (std::fabs(dist(y, p) - eps) <= band) {
      for (const auto& q : *out)
        if (dist(q, y) <= band) return;
      out->push_back(y);
    }
  };
  // Roots closer than the tangential resolution are one geometric contributor:
  // a band-deep tangency spreads into a chord of length ~2*sqrt(2*eps*band).
  const double sep_ambient = disc >= 0.0 ? 2.0 * std::sqrt(disc) / std::sqrt(L2) : 0.0;
  if (disc >= 0.0 && sep_ambient > 2.0 * std::sqrt(2.0 * eps * band)) {
    const double sq = std::sqrt(disc);
    push_if_at_eps((-bq - sq) / L2);
    push_if_at_eps((-bq + sq) / L2);
  } else {
    // Tangential: the only candidate is the foot of p on the segment.
    double t;
    closest_point_on_segment(p, g.a, g.b, &t);
    push_if_at_eps(t);
  }
}

double generator_set_distance(const Generator& a, const Generator& b) {
  const bool sa = a.shape == GenShape::SiteSegment;
  const bool sb = b.shape == GenShape::SiteSegment;
  if (!sa && !sb) return dist(a.a, b.a);
  if (sa && !sb) return dist_point_segment(b.a, a.a, a.b);
  if (!sa && sb) return dist_point_segment(a.a, b.a, b.b);
  return dist_segment_segment(a.a, a.b, b.a, b.b);
}

}  // namespace epshull
