#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "epshull/boundary.hpp"
#include "epshull/raster.hpp"

namespace epshull {

/// Directions along which the complement is reachable from a boundary point.
/// HalfCircle: unique contributor, the closed half circle around `a`.
/// Arc: geodesic arc between the two extremal directions (wedge geometry).
/// AntipodalPair: {a, -a}. Singleton: {a}.
struct OutwardSet {
  enum class Kind { HalfCircle, Arc, AntipodalPair, Singleton } kind = Kind::HalfCircle;
  UnitDir a;
  UnitDir b;
  GeodesicArc as_geodesic(const Tolerance& tol) const;
};

/// An outward direction orthogonal to a contributor offset; the local frame of
/// the boundary's graph representation.
struct ExtremalPair {
  UnitDir xi;
  Point2 y;
};

enum class SingTag {
  Smooth,
  Wedge,       // one-sided tangents at an angle strictly between 0 and pi
  Sharp,       // tangents agree, one connected complement cusp
  SharpSharp,  // antipodal tangents, complement cusps on both sides
  // Accumulation-type singularities. They require infinitely many generators
  // and are never produced for finite scenes; the classifier asserts that.
  Shallow,
  ShallowShallow,
  Chain,
  ChainChain,
  SharpChain,
};
enum class QSplit { None, Q1, Q2 };

struct SingularityClass {
  SingTag tag = SingTag::Smooth;
  double theta = 0.0;  // angle between extremal directions
  QSplit q = QSplit::None;
  // Antipodal contributor geometry whose complement reaches in from one side
  // only; classified Sharp, flagged for the report.
  bool one_sided_antipodal = false;
};

/// One-sided graph window of the boundary at `base` in the frame (xi, (x-y)/eps);
/// samples are (s, f) with the boundary point at base + s*xi + f*(x-y)/eps.
struct LocalRepr {
  Point2 base;
  ExtremalPair pair;
  double s_max = 0.0;
  std::vector<std::pair<double, double>> samples;
};

/// Internal handle for evaluating the boundary as a graph over one frame axis,
/// valid on a single element (windows never cross vertices).
struct GraphWindow {
  Point2 base;
  Vec2 e1, e2;
  const BoundaryElement* element = nullptr;
  double param0 = 0.0;  // arclength of base on the element
  int walk = +1;        // +1 along traversal, -1 against
  double s_max = 0.0;
  double f_at(double s) const;  // closed-form solve on the element's carrier, s in [0, s_max]
};

/// Per-scene singularity queries with a lazily built, mutex-guarded raster
/// cache for complement-connectivity probes.
class BoundaryAnalysis {
 public:
  BoundaryAnalysis(const GeneratorScene& scene, const BoundaryGraph& graph, int oracle_grid = 512);

  struct Location {
    int vertex = -1;
    int element = -1;
    double param = 0.0;
    bool on_boundary() const { return vertex >= 0 || element >= 0; }
  };
  Location locate(Point2 x) const;

  OutwardSet outward_set(Point2 x) const;
  std::vector<ExtremalPair> extremal_pairs(Point2 x) const;
  SingularityClass classify_vertex(Point2 x) const;
  std::vector<SingularityClass> classify_all_vertices() const;
  LocalRepr local_repr(Point2 x, const ExtremalPair& pair, int n_samples) const;
  GraphWindow make_window(Point2 x, const ExtremalPair& pair) const;

  const GeneratorScene& scene() const { return scene_; }
  const BoundaryGraph& graph() const { return graph_; }
  int oracle_grid() const { return grid_; }
  const RasterField& oracle_field() const;
  const FloodLabels& oracle_labels() const;
  /// Complement-component label of the cell at/near p; -1 when none is found
  /// within a one-cell neighbourhood.
  int component_label_at(Point2 p) const;

 private:
  std::optional<Point2> probe_complement(Point2 x, Vec2 xi, double radius) const;
  int side_label(Point2 x, Vec2 xi, double radius) const;
  double nearest_other_vertex(Point2 x) const;

  const GeneratorScene& scene_;
  const BoundaryGraph& graph_;
  int grid_;
  mutable std::mutex mu_;
  mutable std::optional<RasterField> field_;
  mutable std::optional<FloodLabels> labels_;
};

// Free-function forms; each builds a throwaway analysis (fine for one-off queries).
OutwardSet outward_set(const GeneratorScene& s, const BoundaryGraph& g, Point2 x);
std::vector<ExtremalPair> extremal_pairs(const GeneratorScene& s, const BoundaryGraph& g, Point2 x);
SingularityClass classify_vertex(const GeneratorScene& s, const BoundaryGraph& g, Point2 x);
LocalRepr local_repr(const GeneratorScene& s, const BoundaryGraph& g, Point2 x, const ExtremalPair& pair,
                     int n_samples);

}  // namespace epshull
