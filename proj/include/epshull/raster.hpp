#pragma once

#include <vector>

#include "epshull/scene.hpp"

namespace epshull {

/// Sampled distance field over a grid of cell centers. Ground truth for the
/// symbolic pipeline: values are exact distance_to_scene evaluations.
struct RasterField {
  Point2 origin;  // center of cell (0,0)
  double cell = 0.0;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;  // row-major, ix + iy*nx

  double value(int ix, int iy) const { return values[static_cast<size_t>(iy) * nx + ix]; }
  Point2 center(int ix, int iy) const { return {origin.x + cell * ix, origin.y + cell * iy}; }
  bool cell_of(Point2 p, int* ix, int* iy) const;
};

/// Grid covering the scene bounding box inflated by 2*eps plus a 4-cell margin;
/// cell size is the inflated box's max dimension divided by `resolution`.
RasterField build_field(const GeneratorScene& s, int resolution);

/// Connected-component labels of the complement cells (value > epsilon),
/// 4-connected, with every border-touching cell merged into component 0
/// (the unbounded one). label = -1 on covered cells, -2 on sub-resolution
/// slivers (bounded groups with no cell deeper than epsilon + cell).
struct FloodLabels {
  std::vector<int> label;
  int count = 0;
};
FloodLabels flood_labels(const RasterField& f, double epsilon);
int flood_components(const RasterField& f, double epsilon);

/// Marching-squares level set of the distance field at epsilon.
/// Returns closed polylines with deterministic vertex order.
std::vector<std::vector<Point2>> contour(const RasterField& f, double epsilon);

/// Symmetric Hausdorff distance between two point samples.
double hausdorff_distance(const std::vector<Point2>& a, const std::vector<Point2>& b);

/// One-sided Hausdorff distance: max over `from` of the nearest-point distance into `to`.
double directed_hausdorff_distance(const std::vector<Point2>& from, const std::vector<Point2>& to);

}  // namespace epshull
