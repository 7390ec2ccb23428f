#include "epshull/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "epshull/errors.hpp"

namespace epshull {

GeodesicArc OutwardSet::as_geodesic(const Tolerance& tol) const {
  switch (kind) {
    case Kind::Arc:
      return make_geodesic(a, b, tol);
    case Kind::Singleton:
      return GeodesicArc{a, a, GeodesicKind::Singleton};
    case Kind::AntipodalPair:
      return GeodesicArc{a, a.negated(), GeodesicKind::HalfCirclePair};
    case Kind::HalfCircle: {
      // Endpoints of the half circle are the tangents orthogonal to the normal.
      const UnitDir t1{rot90(a.vec())};
      return GeodesicArc{t1, t1.negated(), GeodesicKind::HalfCirclePair};
    }
  }
  return GeodesicArc{};
}

BoundaryAnalysis::BoundaryAnalysis(const GeneratorScene& scene, const BoundaryGraph& graph, int oracle_grid)
    : scene_(scene), graph_(graph), grid_(oracle_grid) {}

const RasterField& BoundaryAnalysis::oracle_field() const {
  std::lock_guard<std::mutex> lock(mu_);
  if (!field_) field_ = build_field(scene_, grid_);
  return *field_;
}

const FloodLabels& BoundaryAnalysis::oracle_labels() const {
  oracle_field();
  std::lock_guard<std::mutex> lock(mu_);
  if (!labels_) labels_ = flood_labels(*field_, scene_.epsilon);
  return *labels_;
}

int BoundaryAnalysis::component_label_at(Point2 p) const {
  const RasterField& f = oracle_field();
  const FloodLabels& fl = oracle_labels();
  int ix, iy;
  if (!f.cell_of(p, &ix, &iy)) return 0;  // outside the grid: unbounded
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int jx = ix + dx, jy = iy + dy;
      if (jx < 0 || jx >= f.nx || jy < 0 || jy >= f.ny) continue;
      const int lab = fl.label[static_cast<size_t>(jy) * f.nx + jx];
      if (lab < 0) continue;
      const double d = dist(p, f.center(jx, jy));
      if (d < best_d) {
        best_d = d;
        best = lab;
      }
    }
  }
  return best;
}

BoundaryAnalysis::Location BoundaryAnalysis::locate(Point2 x) const {
  Location loc;
  const double tolp = graph_.tol.pos;
  for (const auto& v : graph_.vertices) {
    if (dist(v.pos, x) <= 4.0 * tolp) {
      loc.vertex = v.id;
      return loc;
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : graph_.elements) {
    const double d = e.support.distance_to(x);
    if (d < best) {
      best = d;
      loc.element = e.id;
    }
  }
  if (best > 4.0 * tolp) {
    loc.element = -1;
    return loc;
  }
  loc.param = graph_.elements[loc.element].support.param_of(x);
  return loc;
}

double BoundaryAnalysis::nearest_other_vertex(Point2 x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : graph_.vertices) {
    const double d = dist(v.pos, x);
    if (d > 4.0 * graph_.tol.pos) best = std::min(best, d);
  }
  return best;
}

OutwardSet BoundaryAnalysis::outward_set(Point2 x) const {
  if (std::fabs(distance_to_scene(scene_, x) - scene_.epsilon) > 4.0 * scene_.tol.pos)
    throw NotOnBoundary("outward_set: point is off the boundary");
  const auto contribs = contributors_near(scene_, x, 4.0 * scene_.tol.pos);
  if (contribs.empty()) throw NotOnBoundary("outward_set: no contributors");
  if (contribs.size() == 1) {
    OutwardSet os;
    os.kind = OutwardSet::Kind::HalfCircle;
    os.a = UnitDir(x - contribs[0]);
    os.b = os.a;
    return os;
  }

  const Location loc = locate(x);
  std::vector<Vec2> dirs;
  if (loc.vertex >= 0) {
    for (const auto& [eid, end] : graph_.vertices[loc.vertex].incident)
      dirs.push_back(end_outgoing_dir(graph_.elements[eid], end));
  } else if (loc.element >= 0) {
    const Vec2 t = graph_.elements[loc.element].support.tangent_at(loc.param);
    dirs.push_back(t);
    dirs.push_back(-t);
  } else {
    throw NotOnBoundary("outward_set: point not on any element");
  }

  std::vector<UnitDir> uniq;
  for (const Vec2& d : dirs) {
    const UnitDir u(d);
    bool dup = false;
    for (const auto& q : uniq)
      if (angle_between(u, q) <= scene_.tol.ang) dup = true;
    if (!dup) uniq.push_back(u);
  }
  std::sort(uniq.begin(), uniq.end(),
            [](UnitDir a, UnitDir b) { return std::atan2(a.uy, a.ux) < std::atan2(b.uy, b.ux); });

  OutwardSet os;
  if (uniq.size() == 1) {
    os.kind = OutwardSet::Kind::Singleton;
    os.a = os.b = uniq[0];
  } else if (uniq.size() == 2) {
    if (angle_between(uniq[0], uniq[1].negated()) <= scene_.tol.ang) {
      os.kind = OutwardSet::Kind::AntipodalPair;
      os.a = uniq[0];
      os.b = uniq[0].negated();
    } else {
      os.kind = OutwardSet::Kind::Arc;
      os.a = uniq[0];
      os.b = uniq[1];
    }
  } else {
    throw InternalError("more than two distinct tangent directions at a boundary point");
  }
  return os;
}

std::vector<ExtremalPair> BoundaryAnalysis::extremal_pairs(Point2 x) const {
  const OutwardSet os = outward_set(x);
  const auto contribs = contributors_near(scene_, x, 4.0 * scene_.tol.pos);
  std::vector<UnitDir> dirs;
  switch (os.kind) {
    case OutwardSet::Kind::HalfCircle: {
      const UnitDir t{rot90(os.a.vec())};
      dirs = {t, t.negated()};
      break;
    }
    case OutwardSet::Kind::Arc:
      dirs = {os.a, os.b};
      break;
    case OutwardSet::Kind::AntipodalPair:
      dirs = {os.a, os.a.negated()};
      break;
    case OutwardSet::Kind::Singleton:
      dirs = {os.a};
      break;
  }
  std::vector<ExtremalPair> pairs;
  for (const auto& xi : dirs) {
    for (const auto& y : contribs) {
      if (std::fabs(dot(y - x, xi.vec())) <= scene_.epsilon * scene_.tol.ang) {
        pairs.push_back(ExtremalPair{xi, y});
      }
    }
  }
  if (pairs.empty()) throw InternalError("no extremal pair at boundary point");
  if (pairs.size() > 4) throw InternalError("more than four extremal pairs at a boundary point");
  std::sort(pairs.begin(), pairs.end(), [](const ExtremalPair& a, const ExtremalPair& b) {
    const double ta = std::atan2(a.xi.uy, a.xi.ux), tb = std::atan2(b.xi.uy, b.xi.ux);
    if (ta != tb) return ta < tb;
    return a.y.x != b.y.x ? a.y.x < b.y.x : a.y.y < b.y.y;
  });
  return pairs;
}

std::optional<Point2> BoundaryAnalysis::probe_complement(Point2 x, Vec2 xi, double radius) const {
  const double eps = scene_.epsilon;
  const Vec2 eta = rot90(xi);
  const double margin = std::max(1e-13 * scene_.scale, 2.0 * scene_.tol.pos);
  for (double delta = radius; delta > 16.0 * scene_.tol.pos; delta *= 0.5) {
    const double w1 = delta * delta / (4.0 * eps);
    for (const double w : {0.0, w1, -w1, 2.0 * w1, -2.0 * w1, 3.0 * w1, -3.0 * w1}) {
      const Point2 p = x + xi * delta + eta * w;
      if (distance_to_scene(scene_, p) > eps + margin) return p;
    }
  }
  return std::nullopt;
}

int BoundaryAnalysis::side_label(Point2 x, Vec2 xi, double radius) const {
  const RasterField& f = oracle_field();
  const double eps = scene_.epsilon;
  const Vec2 eta = rot90(xi);
  // Outermost probes first: deeper into the cusp means grid-visible complement.
  for (double delta = radius; delta > 2.0 * f.cell; delta *= 0.7) {
    const double w1 = delta * delta / (4.0 * eps);
    for (const double w : {0.0, w1, -w1, 2.0 * w1, -2.0 * w1}) {
      const Point2 p = x + xi * delta + eta * w;
      if (distance_to_scene(scene_, p) <= eps) continue;
      const int lab = component_label_at(p);
      if (lab >= 0) return lab;
    }
  }
  throw OracleMismatch("complement cusp is below oracle resolution; raise --grid");
}

SingularityClass BoundaryAnalysis::classify_vertex(Point2 x) const {
  if (std::fabs(distance_to_scene(scene_, x) - scene_.epsilon) > 4.0 * scene_.tol.pos)
    throw NotOnBoundary("classify_vertex: point is off the boundary");
  SingularityClass cls;
  const auto contribs = contributors_near(scene_, x, 4.0 * scene_.tol.pos);
  if (contribs.size() <= 1) {
    // Unique nearest point. Finite scenes have finitely many singular vertices,
    // so a neighbourhood of unique-contributor points always exists here.
    cls.tag = SingTag::Smooth;
    cls.theta = std::acos(-1.0);
    return cls;
  }
  const OutwardSet os = outward_set(x);
  switch (os.kind) {
    case OutwardSet::Kind::HalfCircle:
      cls.tag = SingTag::Smooth;
      cls.theta = std::acos(-1.0);
      return cls;
    case OutwardSet::Kind::Arc:
      cls.tag = SingTag::Wedge;
      cls.theta = angle_between(os.a, os.b);
      return cls;
    case OutwardSet::Kind::Singleton: {
      cls.tag = SingTag::Sharp;
      cls.theta = 0.0;
      // Antipodal contributor geometry reached from one side only.
      for (size_t i = 0; i < contribs.size() && !cls.one_sided_antipodal; ++i)
        for (size_t j = i + 1; j < contribs.size(); ++j)
          if (norm((contribs[i] - x) + (contribs[j] - x)) <= 8.0 * scene_.tol.pos) {
            cls.one_sided_antipodal = true;
            break;
          }
      return cls;
    }
    case OutwardSet::Kind::AntipodalPair: {
      const double r = std::min(scene_.epsilon / 4.0, 0.5 * nearest_other_vertex(x));
      // Four incident ends mean two boundary pieces leave along each extremal
      // direction, so both cusps exist by construction and only the Q split
      // needs the oracle.
      const Location loc = locate(x);
      const bool four_ends = loc.vertex >= 0 && graph_.vertices[loc.vertex].incident.size() == 4;
      const bool plus = four_ends || probe_complement(x, os.a.vec(), r).has_value();
      const bool minus = four_ends || probe_complement(x, -os.a.vec(), r).has_value();
      if (plus && minus) {
        cls.tag = SingTag::SharpSharp;
        cls.theta = std::acos(-1.0);
        const int lp = side_label(x, os.a.vec(), r);
        const int lm = side_label(x, -os.a.vec(), r);
        cls.q = (lp == lm) ? QSplit::Q1 : QSplit::Q2;
      } else if (plus || minus) {
        cls.tag = SingTag::Sharp;
        cls.theta = 0.0;
        cls.one_sided_antipodal = true;
      } else {
        throw InternalError("antipodal vertex with no complement on either side");
      }
      return cls;
    }
  }
  throw InternalError("unreachable outward-set kind");
}

std::vector<SingularityClass> BoundaryAnalysis::classify_all_vertices() const {
  std::vector<SingularityClass> out(graph_.vertices.size());
  for (const auto& v : graph_.vertices) out[v.id] = classify_vertex(v.pos);
  return out;
}

double GraphWindow::f_at(double s) const {
  const ElementSupport& es = element->support;
  if (es.type == ElementSupport::Type::Segment) {
    const double u0 = dot(es.p0 - base, e1), v0 = dot(es.p0 - base, e2);
    const double u1 = dot(es.p1 - base, e1), v1 = dot(es.p1 - base, e2);
    if (std::fabs(u1 - u0) < 1e-300) throw NoGraphRepresentation("segment is orthogonal to the frame axis");
    return v0 + (s - u0) * (v1 - v0) / (u1 - u0);
  }
  const double cu = dot(es.center - base, e1);
  const double cv = dot(es.center - base, e2);
  const double r = es.radius;
  const double disc = r * r - (s - cu) * (s - cu);
  if (disc < 0.0) throw NoGraphRepresentation("frame line misses the arc");
  const double root = std::sqrt(disc);
  // Branch fixed by f(0) = 0.
  const double sb = (cv <= 0.0) ? 1.0 : -1.0;
  return cv + sb * root;
}

GraphWindow BoundaryAnalysis::make_window(Point2 x, const ExtremalPair& pair) const {
  const double eps = scene_.epsilon;
  const double tolp = scene_.tol.pos;
  GraphWindow w;
  w.base = x;
  w.e1 = pair.xi.vec();
  w.e2 = UnitDir(x - pair.y).vec();

  const Location loc = locate(x);
  if (loc.vertex >= 0) {
    const auto& v = graph_.vertices[loc.vertex];
    int best = -1;
    double best_score = -2.0;
    for (size_t k = 0; k < v.incident.size(); ++k) {
      const auto& [eid, end] = v.incident[k];
      const Vec2 d = end_outgoing_dir(graph_.elements[eid], end);
      const double align = dot(d, w.e1);
      if (align < 0.5) continue;
      const double endparam = (end == End::Start) ? 0.0 : graph_.elements[eid].support.length();
      const Point2 yk = element_contributor_point(scene_, graph_.elements[eid], endparam);
      const double score = align + (dist(yk, pair.y) <= eps * 0.5 ? 10.0 : 0.0);
      if (score > best_score) {
        best_score = score;
        best = static_cast<int>(k);
      }
    }
    if (best < 0) throw NoGraphRepresentation("no incident element leaves along the frame axis");
    const auto& [eid, end] = v.incident[best];
    w.element = &graph_.elements[eid];
    w.param0 = (end == End::Start) ? 0.0 : w.element->support.length();
    w.walk = (end == End::Start) ? +1 : -1;
  } else if (loc.element >= 0) {
    w.element = &graph_.elements[loc.element];
    w.param0 = loc.param;
    const double align = dot(w.element->support.tangent_at(loc.param), w.e1);
    if (std::fabs(align) < 0.5) throw NoGraphRepresentation("frame axis is transversal to the element");
    w.walk = (align >= 0.0) ? +1 : -1;
  } else {
    throw NotOnBoundary("local_repr: point (" + std::to_string(x.x) + ", " + std::to_string(x.y) +
                        ") not on the boundary");
  }

  const ElementSupport& es = w.element->support;
  double u_reach;
  if (es.full_circle) {
    u_reach = eps;  // no vertex to stop at
  } else {
    const double end_param = (w.walk > 0) ? es.length() : 0.0;
    const double u_end = dot(es.point_at(end_param) - x, w.e1);
    if (es.type == ElementSupport::Type::Arc) {
      // Past a quarter turn the u-coordinate has already covered [0, radius].
      const double span = std::fabs(end_param - w.param0) / es.radius;
      u_reach = (span >= std::acos(-1.0) / 2.0) ? eps : u_end;
    } else {
      u_reach = u_end;
    }
  }
  w.s_max = std::min(eps / 2.0, u_reach);
  if (w.s_max < 4.0 * tolp) throw NoGraphRepresentation("window collapses at an element end");
  return w;
}

LocalRepr BoundaryAnalysis::local_repr(Point2 x, const ExtremalPair& pair, int n_samples) const {
  if (n_samples < 2) throw DomainError("local_repr needs at least 2 samples");
  const GraphWindow w = make_window(x, pair);
  LocalRepr lr;
  lr.base = x;
  lr.pair = pair;
  lr.s_max = w.s_max;
  lr.samples.reserve(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double s = w.s_max * i / (n_samples - 1);
    lr.samples.emplace_back(s, w.f_at(s));
  }
  return lr;
}

OutwardSet outward_set(const GeneratorScene& s, const BoundaryGraph& g, Point2 x) {
  return BoundaryAnalysis(s, g).outward_set(x);
}
std::vector<ExtremalPair> extremal_pairs(const GeneratorScene& s, const BoundaryGraph& g, Point2 x) {
  return BoundaryAnalysis(s, g).extremal_pairs(x);
}
SingularityClass classify_vertex(const GeneratorScene& s, const BoundaryGraph& g, Point2 x) {
  return BoundaryAnalysis(s, g).classify_vertex(x);
}
LocalRepr local_repr(const GeneratorScene& s, const BoundaryGraph& g, Point2 x, const ExtremalPair& pair,
                     int n_samples) {
  return BoundaryAnalysis(s, g).local_repr(x, pair, n_samples);
}

}  // namespace epshull
