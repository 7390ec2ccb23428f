#include "epshull/geometry.hpp"

#include <algorithm>

namespace epshull {

GeodesicArc make_geodesic(UnitDir a, UnitDir b, const Tolerance& tol) {
  GeodesicArc g;
  g.a = a;
  g.b = b;
  if (angle_between(a, b) <= tol.ang) {
    g.kind = GeodesicKind::Singleton;
  } else if (angle_between(a, b.negated()) <= tol.ang) {
    g.kind = GeodesicKind::HalfCirclePair;
  } else {
    g.kind = GeodesicKind::ProperArc;
  }
  return g;
}

bool geodesic_contains(const GeodesicArc& g, UnitDir u, const Tolerance& tol) {
  switch (g.kind) {
    case GeodesicKind::Singleton:
      return angle_between(u, g.a) <= tol.ang;
    case GeodesicKind::HalfCirclePair:
      // Nonnegative combinations of v and -v stay on the spanned line.
      return angle_between(u, g.a) <= tol.ang || angle_between(u, g.a.negated()) <= tol.ang;
    case GeodesicKind::ProperArc: {
      // u = a*va + b*vb with a,b >= 0. Solve the 2x2 system by cross products.
      const Vec2 va = g.a.vec(), vb = g.b.vec(), vu = u.vec();
      const double det = cross(va, vb);
      const double a = cross(vu, vb) / det;
      const double b = cross(va, vu) / det;
      return a >= -tol.unit && b >= -tol.unit;
    }
  }
  return false;
}

CircleIntersection circle_circle_intersect(const Circle& c1, const Circle& c2, const Tolerance& tol) {
  const double d = dist(c1.center, c2.center);
  const double rsum = c1.radius + c2.radius;
  const double rdiff = std::fabs(c1.radius - c2.radius);
  CircleIntersection res;

  if (d <= tol.pos) {
    if (rdiff <= tol.pos) throw ConcentricEqual{};
    return res;  // concentric, distinct radii: empty
  }

  const Vec2 u = (c2.center - c1.center) * (1.0 / d);
  if (std::fabs(d - rsum) <= tol.pos) {
    res.kind = CircleIntersection::Kind::Tangent;
    res.p1 = c1.center + u * c1.radius;
    return res;
  }
  if (std::fabs(d - rdiff) <= tol.pos && rdiff > tol.pos) {
    res.kind = CircleIntersection::Kind::Tangent;
    const double s = (c1.radius >= c2.radius) ? 1.0 : -1.0;
    res.p1 = c1.center + u * (s * c1.radius);
    return res;
  }
  if (d > rsum || d < rdiff) return res;

  const double a = (d * d + c1.radius * c1.radius - c2.radius * c2.radius) / (2.0 * d);
  const double h2 = c1.radius * c1.radius - a * a;
  const double h = std::sqrt(std::max(0.0, h2));
  const Point2 base = c1.center + u * a;
  const Vec2 perp = rot90(u);
  res.kind = CircleIntersection::Kind::Pair;
  res.p1 = base + perp * h;
  res.p2 = base - perp * h;
  return res;
}

Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b, double* t_out) {
  const Vec2 w = b - a;
  const double L2 = norm2(w);
  double t = (L2 > 0.0) ? dot(p - a, w) / L2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  if (t_out) *t_out = t;
  return a + w * t;
}

double dist_point_segment(Point2 p, Point2 a, Point2 b) {
  return dist(p, closest_point_on_segment(p, a, b));
}

double dist_segment_segment(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  Point2 ignore;
  Tolerance t0;  // crossing test only, default slack is fine
  if (segment_segment_intersect(a0, a1, b0, b1, t0, &ignore)) return 0.0;
  double d = dist_point_segment(b0, a0, a1);
  d = std::min(d, dist_point_segment(b1, a0, a1));
  d = std::min(d, dist_point_segment(a0, b0, b1));
  d = std::min(d, dist_point_segment(a1, b0, b1));
  return d;
}

std::vector<Point2> circle_segment_intersect(const Circle& c, Point2 a, Point2 b, const Tolerance& tol) {
  std::vector<Point2> out;
  const Vec2 w = b - a;
  const double L = norm(w);
  if (L <= 0.0) return out;
  const Vec2 u = w * (1.0 / L);

  // Distance from the center to the supporting line (not the clamped foot).
  const double line_off = std::fabs(cross(u, c.center - a));
  const double miss = line_off - c.radius;

  if (miss > tol.pos) return out;
  if (miss >= -tol.pos) {
    // Tangential contact: the touch point is the line foot, if the segment reaches it.
    const double s = dot(c.center - a, u);
    if (s >= -tol.pos && s <= L + tol.pos) {
      out.push_back(a + u * std::clamp(s, 0.0, L));
    }
    return out;
  }

  const double s0 = dot(c.center - a, u);
  const double h = std::sqrt(std::max(0.0, c.radius * c.radius - line_off * line_off));
  for (const double s : {s0 - h, s0 + h}) {
    if (s >= -tol.pos && s <= L + tol.pos) {
      out.push_back(a + u * std::clamp(s, 0.0, L));
    }
  }
  return out;
}

bool segment_segment_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1, const Tolerance& tol, Point2* out) {
  const Vec2 r = a1 - a0;
  const Vec2 s = b1 - b0;
  const double denom = cross(r, s);
  const double lr = norm(r), ls = norm(s);
  if (std::fabs(denom) <= tol.unit * lr * ls) return false;  // parallel or collinear
  const double t = cross(b0 - a0, s) / denom;
  const double u = cross(b0 - a0, r) / denom;
  const double tt = tol.pos / std::max(lr, 1e-300);
  const double tu = tol.pos / std::max(ls, 1e-300);
  if (t < -tt || t > 1.0 + tt || u < -tu || u > 1.0 + tu) return false;
  if (out) *out = a0 + r * std::clamp(t, 0.0, 1.0);
  return true;
}

}  // namespace epshull
