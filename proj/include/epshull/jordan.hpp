#pragma once

#include <string>
#include <vector>

#include "epshull/singularity.hpp"

namespace epshull {

struct ComplementComponent {
  int id = -1;
  bool bounded = false;
  Point2 witness;  // interior sample, distance_to_scene(witness) > epsilon
  std::vector<int> boundary_curve_ids;
};

/// A simple closed curve of boundary elements, traversed with the offset set
/// on the right. All elements run forward under that convention; the direction
/// flag is kept for the record.
struct JordanCurve {
  int id = -1;
  int component = -1;
  std::vector<std::pair<int, bool>> cycle;  // (element id, forward)
  std::vector<int> vertices;                // ids in traversal order; empty for a bare circle
  double signed_area = 0.0;
};

struct Decomposition {
  std::vector<JordanCurve> curves;
  std::vector<Point2> inaccessible;  // provably empty for finite scenes; asserted
  std::vector<ComplementComponent> components;
  std::vector<std::vector<int>> per_component;  // component id -> curve ids
};

/// Unique Jordan-curve decomposition of the boundary: successor traversal with
/// pass-through at Q1 sharp-sharp vertices and bounce-back at Q2.
/// Cross-validates the component count against the raster flood fill unless
/// oracle_check is disabled.
Decomposition decompose(const GeneratorScene& s, const BoundaryGraph& g);
Decomposition decompose(const BoundaryAnalysis& an, const std::vector<SingularityClass>& vertex_classes,
                        bool oracle_check = true);

std::vector<ComplementComponent> complement_components(const GeneratorScene& s, const BoundaryGraph& g);

struct Accessibility {
  bool accessible = true;
  std::vector<int> component_ids;  // 1 or 2 entries
};
Accessibility accessibility(const BoundaryGraph& g, const Decomposition& d, Point2 x);

double curve_signed_area(const BoundaryGraph& g, const JordanCurve& c);
std::vector<Point2> sample_curve(const BoundaryGraph& g, const JordanCurve& c, double step);

/// Structural validation of a decomposition (partition, simplicity, pairwise
/// intersections, orientation signs, per-component curve bound, accessibility).
struct DecompositionChecks {
  bool partition_ok = false;
  bool simplicity_ok = false;
  bool pairwise_ok = false;
  bool orientation_ok = false;
  bool curve_bound_ok = false;
  bool inaccessible_ok = false;
  std::string witness;
  bool all_ok() const {
    return partition_ok && simplicity_ok && pairwise_ok && orientation_ok && curve_bound_ok && inaccessible_ok;
  }
};
DecompositionChecks check_decomposition(const GeneratorScene& s, const BoundaryGraph& g, const Decomposition& d,
                                        const std::vector<SingularityClass>& vertex_classes);

}  // namespace epshull
