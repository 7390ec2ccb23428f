#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "epshull/geometry.hpp"

namespace epshull {

enum class GenShape { SitePoint, SiteSegment };

/// One generator of the compact set: a point site or a closed segment.
struct Generator {
  int id = 0;
  GenShape shape = GenShape::SitePoint;
  Point2 a;
  Point2 b;  // segment endpoint; unused for points
};

/// The generator set together with the offset radius and tolerances.
/// Immutable after parse; all queries are pure.
struct GeneratorScene {
  std::vector<Generator> generators;
  double epsilon = 0.0;
  Tolerance tol;
  double scale = 1.0;  // max(bbox diagonal, epsilon); basis for default tolerances

  Point2 bbox_min() const;
  Point2 bbox_max() const;
};

/// Parses the scene text format:
///   epsilon <float>               (required exactly once)
///   point <x> <y>
///   segment <x1> <y1> <x2> <y2>
/// '#' starts a comment; directives may appear in any order after parsing.
/// tol_pos overrides the default coincidence tolerance of 1e-9 * scene scale.
GeneratorScene parse_scene(std::string_view text, std::optional<double> tol_pos = std::nullopt);

GeneratorScene load_scene_file(const std::string& path, std::optional<double> tol_pos = std::nullopt);

/// Euclidean distance from p to the generator set (min over generators).
double distance_to_scene(const GeneratorScene& s, Point2 p);

double distance_to_generator(const Generator& g, Point2 p);
Point2 nearest_point_on_generator(const Generator& g, Point2 p);

/// All points y on generator g with | ||y-p|| - eps | <= band. Near-tangential
/// configurations yield the single foot point.
void at_epsilon_points(const Generator& g, Point2 p, double eps, double band, std::vector<Point2>* out);

/// Set distance between two generators (0 if they touch or cross).
double generator_set_distance(const Generator& a, const Generator& b);

}  // namespace epshull
