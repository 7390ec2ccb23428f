#pragma once

#include <utility>
#include <vector>

#include "epshull/scene.hpp"

namespace epshull {

enum class End { Start, Stop };
enum class LocusKind { PointSite, SegmentEndpoint, SegmentInterior };

/// Which part of which generator realizes the distance for an element or hit.
struct ContributorRef {
  int gen = -1;
  LocusKind locus = LocusKind::PointSite;
  int endpoint = 0;  // 0/1, meaningful for SegmentEndpoint
};
inline bool operator==(const ContributorRef& a, const ContributorRef& b) {
  return a.gen == b.gen && a.locus == b.locus &&
         (a.locus != LocusKind::SegmentEndpoint || a.endpoint == b.endpoint);
}

/// Geometric carrier of a boundary element: a circular arc of radius epsilon or
/// a straight offset segment. Elements are oriented so the offset set lies on
/// the right of the traversal direction (outward normal on the left).
struct ElementSupport {
  enum class Type { Arc, Segment } type = Type::Segment;
  // Arc (always clockwise in this orientation convention)
  Point2 center;
  double radius = 0.0;
  UnitDir from;
  UnitDir to;
  bool ccw = false;
  bool full_circle = false;
  double sweep_rad = 0.0;  // signed radians, negative = clockwise; set at construction
  // Segment
  Point2 p0;
  Point2 p1;

  double length() const;
  Point2 point_at(double s) const;        // s = arclength in [0, length]
  Vec2 tangent_at(double s) const;        // unit, traversal direction
  Vec2 outward_at(double s) const;        // unit, away from the offset set
  double sweep() const;
  double param_of(Point2 p) const;        // arclength of the projection of p
  double distance_to(Point2 p) const;
};

struct BoundaryElement {
  int id = -1;
  ElementSupport support;
  ContributorRef contributor;
  std::vector<ContributorRef> co_contributors;  // extra loci at distance epsilon (overlaps)
  int v_start = -1;
  int v_stop = -1;  // both -1 for closed full-circle elements
  bool multi_contributor() const { return !co_contributors.empty(); }
};

struct BoundaryVertex {
  int id = -1;
  Point2 pos;
  std::vector<std::pair<int, End>> incident;  // (element id, which end)
  std::vector<Point2> contributors;
};

struct BuildOptions {
  bool prune = true;  // skip candidate pairs whose generators are > 2*eps apart
};

struct BoundaryGraph {
  std::vector<BoundaryElement> elements;
  std::vector<BoundaryVertex> vertices;
  double epsilon = 0.0;
  Tolerance tol;
};

/// Computes the offset boundary as an arrangement of maximal arc/segment
/// elements at distance exactly epsilon from the generator set, with vertices
/// at element junctions.
BoundaryGraph build_boundary(const GeneratorScene& s, const BuildOptions& opts = {});

/// All generator points at distance epsilon from p (deduplicated). Throws
/// NotOnBoundary unless |distance_to_scene(p) - eps| <= 2*tol.pos.
std::vector<Point2> contributors_at(const GeneratorScene& s, Point2 p);

/// contributors_at with a caller-chosen distance band and no precondition.
std::vector<Point2> contributors_near(const GeneratorScene& s, Point2 p, double band);

/// Structural equality up to id permutation and positional tolerance.
bool graphs_equal(const BoundaryGraph& a, const BoundaryGraph& b, double tol);

/// Outgoing unit tangent at the given end (pointing away from the vertex).
Vec2 end_outgoing_dir(const BoundaryElement& e, End end);

/// The element's own contributor point at arclength s (arc center or segment foot).
Point2 element_contributor_point(const GeneratorScene& s, const BoundaryElement& e, double arclen);

}  // namespace epshull
