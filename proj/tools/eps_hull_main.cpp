// eps-hull: offset-boundary analysis of point/segment scenes.
// Subcommands: build, classify, decompose, curvature, check, render.
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epshull/report.hpp"

namespace {

struct CommonOpts {
  std::string scene_path;
  double tolerance = -1.0;
  int grid = 512;
  std::string json_path;
  std::string svg_path;
};

void add_common(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("scene", o->scene_path, "scene file")->required();
  cmd->add_option("--tolerance", o->tolerance, "coincidence tolerance (scene units)");
  cmd->add_option("--grid", o->grid, "oracle grid resolution")->default_val(512)->check(CLI::Range(64, 8192));
  cmd->add_option("--json", o->json_path, "write JSON report to this path");
  cmd->add_option("--svg", o->svg_path, "write SVG figure to this path");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw epshull::ValidationError("cannot write '" + path + "'");
  f << content;
}

epshull::GeneratorScene load(const CommonOpts& o) {
  std::optional<double> tol;
  if (o.tolerance > 0.0) tol = o.tolerance;
  return epshull::load_scene_file(o.scene_path, tol);
}

int run_analysis(const CommonOpts& o, bool want_classes, bool want_curves, bool want_curvature, bool want_svg) {
  using namespace epshull;
  const GeneratorScene scene = load(o);
  const BoundaryGraph graph = build_boundary(scene);
  BoundaryAnalysis an(scene, graph, o.grid);
  std::vector<SingularityClass> classes(graph.vertices.size());
  if (want_classes || want_curves || !o.json_path.empty()) classes = an.classify_all_vertices();

  Decomposition d;
  const bool have_curves = want_curves || want_svg || want_curvature;
  if (have_curves) d = decompose(an, classes);

  std::vector<CurvatureSample> samples;
  bool bv_ok = true;
  if (want_curvature) {
    for (const auto& c : d.curves) {
      auto cs = curvature_on_curve(an, d, c.id, 8);
      samples.insert(samples.end(), cs.begin(), cs.end());
      if (!bv_check(an, c, 33).ok) bv_ok = false;
    }
  }

  const Report rep = build_report(scene, graph, classes, have_curves ? &d : nullptr,
                                  want_curvature ? &samples : nullptr, bv_ok, nullptr, nullptr);
  std::cout << report_to_text(rep);
  if (!o.json_path.empty()) write_file(o.json_path, report_to_json(rep));
  if (!o.svg_path.empty() || want_svg) {
    const std::string path = o.svg_path.empty() ? "out.svg" : o.svg_path;
    write_file(path, render_svg(scene, graph, classes, d));
  }
  return 0;
}

int run_check(const CommonOpts& o) {
  using namespace epshull;
  const GeneratorScene scene = load(o);
  const CheckOutcome outcome = check_scene(scene, o.grid);
  for (const auto& line : outcome.lines) std::cout << line << "\n";
  std::cout << report_to_text(outcome.report);
  if (!o.json_path.empty()) write_file(o.json_path, report_to_json(outcome.report));
  return outcome.ok ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offset-boundary analysis: arrangement, singularities, Jordan curves, curvature"};
  app.require_subcommand(1);

  CommonOpts o_build, o_classify, o_decompose, o_curv, o_check, o_render;
  auto* c_build = app.add_subcommand("build", "build the boundary arrangement");
  add_common(c_build, &o_build);
  auto* c_classify = app.add_subcommand("classify", "classify boundary vertices");
  add_common(c_classify, &o_classify);
  auto* c_decompose = app.add_subcommand("decompose", "Jordan-curve decomposition");
  add_common(c_decompose, &o_decompose);
  auto* c_curv = app.add_subcommand("curvature", "curvature samples and derivative bounds");
  add_common(c_curv, &o_curv);
  auto* c_check = app.add_subcommand("check", "run the full invariant suite");
  add_common(c_check, &o_check);
  auto* c_render = app.add_subcommand("render", "emit an SVG figure");
  add_common(c_render, &o_render);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (c_build->parsed()) return run_analysis(o_build, true, false, false, false);
    if (c_classify->parsed()) return run_analysis(o_classify, true, false, false, false);
    if (c_decompose->parsed()) return run_analysis(o_decompose, true, true, false, false);
    if (c_curv->parsed()) return run_analysis(o_curv, true, true, true, false);
    if (c_check->parsed()) return run_check(o_check);
    if (c_render->parsed()) return run_analysis(o_render, true, true, false, true);
  } catch (const epshull::SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const epshull::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const epshull::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 64;
}
