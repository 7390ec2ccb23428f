#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epshull/curvature.hpp"

namespace epshull {

struct VertexRow {
  int id = -1;
  Point2 pos;
  SingularityClass cls;
};

struct CurveRow {
  int id = -1;
  int component = -1;
  std::vector<int> elements;
  double signed_area = 0.0;
};

struct ElementCurvatureRow {
  int element = -1;
  double kappa = 0.0;
};

/// Machine-readable analysis report. Field order and float formatting are
/// deterministic: floats carry 9 significant digits.
struct Report {
  int points = 0;
  int segments = 0;
  double epsilon = 0.0;
  double tol_pos = 0.0;
  int n_elements = 0;
  int n_vertices = 0;
  std::vector<VertexRow> vertices;

  bool have_curves = false;
  std::vector<CurveRow> curves;
  int components = 0;

  bool have_curvature = false;
  std::vector<ElementCurvatureRow> per_element;
  bool bv_ok = false;

  bool have_oracle = false;
  int oracle_components = 0;
  double oracle_hausdorff = 0.0;

  std::vector<std::string> notes;
};

const char* class_name(SingTag tag);

Report build_report(const GeneratorScene& s, const BoundaryGraph& g, const std::vector<SingularityClass>& classes,
                    const Decomposition* d, const std::vector<CurvatureSample>* curvature, bool bv_ok,
                    const int* oracle_components, const double* oracle_hausdorff);

std::string report_to_json(const Report& r);
std::string report_to_text(const Report& r);

/// SVG rendering: one path per Jordan curve (arcs as native arc commands),
/// vertices as markers colored by singularity class, generators in grey.
std::string render_svg(const GeneratorScene& s, const BoundaryGraph& g,
                       const std::vector<SingularityClass>& classes, const Decomposition& d);

/// Dense samples of all boundary elements (for oracle comparisons).
std::vector<Point2> sample_elements(const BoundaryGraph& g, double step);

struct CheckOutcome {
  bool ok = true;
  std::vector<std::string> lines;  // one "ok ..." / "FAIL ..." line per validation
  Report report;
};

/// Runs the full invariant suite on a scene: boundary soundness, oracle
/// agreement, decomposition structure, window Lipschitz bounds, curvature
/// cross-checks, derivative lower bounds, pruning neutrality.
CheckOutcome check_scene(const GeneratorScene& s, int grid);

}  // namespace epshull
