#pragma once

#include <cmath>
#include <vector>

#include "epshull/errors.hpp"

namespace epshull {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};
using Vec2 = Point2;

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double norm(Vec2 v) { return std::sqrt(norm2(v)); }
inline double dist(Point2 a, Point2 b) { return norm(b - a); }
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }  // +90 deg, counterclockwise

/// Unit direction on S^1. Construction normalizes; a zero vector is a DomainError.
struct UnitDir {
  double ux = 1.0;
  double uy = 0.0;

  UnitDir() = default;
  explicit UnitDir(Vec2 v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("cannot normalize zero/non-finite vector");
    ux = v.x / n;
    uy = v.y / n;
  }
  UnitDir(double x, double y) : UnitDir(Vec2{x, y}) {}

  Vec2 vec() const { return {ux, uy}; }
  UnitDir negated() const {
    UnitDir d;
    d.ux = -ux;
    d.uy = -uy;
    return d;
  }
};

/// Unsigned angle between two unit directions, in [0, pi].
inline double angle_between(UnitDir a, UnitDir b) {
  return std::atan2(std::fabs(cross(a.vec(), b.vec())), dot(a.vec(), b.vec()));
}

struct Circle {
  Point2 center;
  double radius = 0.0;
};

/// Numerical tolerances. pos is an absolute coincidence distance in scene units,
/// unit the allowed unit-vector slack, ang an angle slack in radians.
struct Tolerance {
  double pos = 1e-9;
  double unit = 1e-9;
  double ang = 1e-6;
};

enum class GeodesicKind { ProperArc, Singleton, HalfCirclePair };

/// Geodesic arc-segment on S^1: the set of unit vectors expressible as a
/// nonnegative combination of the two endpoints. For antipodal endpoints that
/// set degenerates to the endpoint pair itself, flagged HalfCirclePair.
struct GeodesicArc {
  UnitDir a;
  UnitDir b;
  GeodesicKind kind = GeodesicKind::ProperArc;
};

GeodesicArc make_geodesic(UnitDir a, UnitDir b, const Tolerance& tol);
bool geodesic_contains(const GeodesicArc& g, UnitDir u, const Tolerance& tol);

struct CircleIntersection {
  enum class Kind { Empty, Tangent, Pair } kind = Kind::Empty;
  Point2 p1;
  Point2 p2;  // valid only for Pair
};

/// Intersection of two circles with tolerance-snapped tangency detection.
/// Throws ConcentricEqual when the circles coincide within tol.pos.
CircleIntersection circle_circle_intersect(const Circle& c1, const Circle& c2, const Tolerance& tol);

/// Closest point of the closed segment [a,b] to p, and its parameter in [0,1].
Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b, double* t_out = nullptr);
double dist_point_segment(Point2 p, Point2 a, Point2 b);
double dist_segment_segment(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

/// Intersections of a circle with the closed segment [a,b]; tangential contact
/// within tol.pos of the line yields the single touch point.
std::vector<Point2> circle_segment_intersect(const Circle& c, Point2 a, Point2 b, const Tolerance& tol);

/// Proper (non-parallel) crossing of two closed segments, if any.
bool segment_segment_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1, const Tolerance& tol, Point2* out);

}  // namespace epshull
