#include "epshull/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>

#include <json.hpp>

#include "epshull/errors.hpp"

namespace epshull {

namespace {

// Round to 9 significant digits so repeated runs serialize byte-identically.
double round9(double x) {
  if (x == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return std::strtod(buf, nullptr);
}

}  // namespace

const char* class_name(SingTag tag) {
  switch (tag) {
    case SingTag::Smooth: return "smooth";
    case SingTag::Wedge: return "wedge";
    case SingTag::Sharp: return "sharp";
    case SingTag::SharpSharp: return "sharp_sharp";
    case SingTag::Shallow: return "shallow";
    case SingTag::ShallowShallow: return "shallow_shallow";
    case SingTag::Chain: return "chain";
    case SingTag::ChainChain: return "chain_chain";
    case SingTag::SharpChain: return "sharp_chain";
  }
  return "?";
}

Report build_report(const GeneratorScene& s, const BoundaryGraph& g, const std::vector<SingularityClass>& classes,
                    const Decomposition* d, const std::vector<CurvatureSample>* curvature, bool bv_ok,
                    const int* oracle_components, const double* oracle_hausdorff) {
  Report r;
  for (const auto& gen : s.generators) (gen.shape == GenShape::SitePoint ? r.points : r.segments)++;
  r.epsilon = s.epsilon;
  r.tol_pos = s.tol.pos;
  r.n_elements = static_cast<int>(g.elements.size());
  r.n_vertices = static_cast<int>(g.vertices.size());
  for (const auto& v : g.vertices) r.vertices.push_back(VertexRow{v.id, v.pos, classes[v.id]});
  if (d) {
    r.have_curves = true;
    r.components = static_cast<int>(d->components.size());
    for (const auto& c : d->curves) {
      CurveRow row;
      row.id = c.id;
      row.component = c.component;
      for (const auto& [eid, fwd] : c.cycle) {
        row.elements.push_back(eid);
        (void)fwd;
      }
      row.signed_area = c.signed_area;
      r.curves.push_back(std::move(row));
    }
  }
  if (curvature) {
    r.have_curvature = true;
    r.bv_ok = bv_ok;
    std::vector<bool> seen(g.elements.size(), false);
    for (const auto& cs : *curvature) {
      if (cs.element >= 0 && !seen[cs.element]) {
        seen[cs.element] = true;
        r.per_element.push_back(ElementCurvatureRow{cs.element, cs.kappa});
      }
    }
  }
  if (oracle_components) {
    r.have_oracle = true;
    r.oracle_components = *oracle_components;
    r.oracle_hausdorff = oracle_hausdorff ? *oracle_hausdorff : 0.0;
  }
  for (const auto& v : r.vertices) {
    if (v.cls.one_sided_antipodal) {
      r.notes.push_back("vertex " + std::to_string(v.id) +
                        ": antipodal contributors with one-sided complement; classified sharp");
    }
  }
  return r;
}

std::string report_to_json(const Report& r) {
  using json = nlohmann::ordered_json;
  json j;
  j["scene"] = {{"points", r.points},
                {"segments", r.segments},
                {"epsilon", round9(r.epsilon)},
                {"tolerance", round9(r.tol_pos)},
                {"elements", r.n_elements},
                {"vertices", r.n_vertices}};
  j["vertices"] = json::array();
  for (const auto& v : r.vertices) {
    json row;
    row["x"] = round9(v.pos.x);
    row["y"] = round9(v.pos.y);
    row["class"] = class_name(v.cls.tag);
    row["theta"] = round9(v.cls.theta);
    if (v.cls.q == QSplit::None)
      row["q_split"] = nullptr;
    else
      row["q_split"] = v.cls.q == QSplit::Q1 ? "q1" : "q2";
    j["vertices"].push_back(row);
  }
  if (r.have_curves) {
    j["curves"] = json::array();
    for (const auto& c : r.curves) {
      j["curves"].push_back({{"id", c.id},
                             {"component", c.component},
                             {"elements", c.elements},
                             {"signed_area", round9(c.signed_area)}});
    }
    j["components"] = r.components;
  }
  if (r.have_curvature) {
    json pe = json::array();
    for (const auto& row : r.per_element) pe.push_back({{"element", row.element}, {"kappa", round9(row.kappa)}});
    j["curvature"] = {{"per_element", pe}, {"bv_ok", r.bv_ok}};
  }
  if (r.have_oracle) {
    j["oracle"] = {{"components", r.oracle_components}, {"hausdorff", round9(r.oracle_hausdorff)}};
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::string report_to_text(const Report& r) {
  std::ostringstream os;
  char buf[64];
  auto f9 = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.9g", round9(x));
    return std::string(buf);
  };
  os << "scene: " << r.points << " points, " << r.segments << " segments, epsilon " << f9(r.epsilon) << "\n";
  os << "boundary: " << r.n_elements << " elements, " << r.n_vertices << " vertices\n";
  int wedges = 0;
  for (const auto& v : r.vertices)
    if (v.cls.tag == SingTag::Wedge) ++wedges;
  if (!r.vertices.empty()) {
    os << "vertex table (id x y class theta q):\n";
    for (const auto& v : r.vertices) {
      os << "  " << v.id << " " << f9(v.pos.x) << " " << f9(v.pos.y) << " " << class_name(v.cls.tag) << " "
         << f9(v.cls.theta) << " "
         << (v.cls.q == QSplit::None ? "-" : v.cls.q == QSplit::Q1 ? "q1" : "q2") << "\n";
    }
  }
  if (r.have_curves) {
    os << "components: " << r.components << ", curves: " << r.curves.size() << ", wedges: " << wedges << "\n";
    for (const auto& c : r.curves) {
      os << "  curve " << c.id << " component " << c.component << " elements " << c.elements.size()
         << " signed_area " << f9(c.signed_area) << "\n";
    }
  }
  if (r.have_curvature) {
    os << "curvature (element kappa):\n";
    for (const auto& row : r.per_element) os << "  " << row.element << " " << f9(row.kappa) << "\n";
    os << "bv_check: " << (r.bv_ok ? "ok" : "VIOLATED") << "\n";
  }
  if (r.have_oracle) {
    os << "oracle: components " << r.oracle_components << ", hausdorff " << f9(r.oracle_hausdorff) << "\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

namespace {

const char* class_color(SingTag tag) {
  switch (tag) {
    case SingTag::Wedge: return "#e76f51";
    case SingTag::Sharp: return "#d62828";
    case SingTag::SharpSharp: return "#7209b7";
    default: return "#8d99ae";
  }
}

}  // namespace

std::string render_svg(const GeneratorScene& s, const BoundaryGraph& g,
                       const std::vector<SingularityClass>& classes, const Decomposition& d) {
  const Point2 lo = s.bbox_min() - Vec2{1.5 * s.epsilon, 1.5 * s.epsilon};
  const Point2 hi = s.bbox_max() + Vec2{1.5 * s.epsilon, 1.5 * s.epsilon};
  const double w = hi.x - lo.x, h = hi.y - lo.y;
  const double stroke = std::max(w, h) / 400.0;
  char buf[128];
  std::ostringstream os;
  auto f = [&](double x) {
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return std::string(buf);
  };
  // SVG y axis points down; flip world y.
  auto sx = [&](double x) { return f(x); };
  auto sy = [&](double y) { return f(-y); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" << f(lo.x) << " " << f(-hi.y)
     << " " << f(w) << " " << f(h) << "\">\n";
  os << "<g fill=\"none\" stroke=\"#bfc9d4\" stroke-width=\"" << f(stroke) << "\">\n";
  for (const auto& gen : s.generators) {
    if (gen.shape == GenShape::SitePoint) {
      os << "<circle cx=\"" << sx(gen.a.x) << "\" cy=\"" << sy(gen.a.y) << "\" r=\"" << f(2.0 * stroke)
         << "\" fill=\"#bfc9d4\"/>\n";
    } else {
      os << "<line x1=\"" << sx(gen.a.x) << "\" y1=\"" << sy(gen.a.y) << "\" x2=\"" << sx(gen.b.x) << "\" y2=\""
         << sy(gen.b.y) << "\"/>\n";
    }
  }
  os << "</g>\n";

  for (const auto& c : d.curves) {
    os << "<path stroke=\"#1d3557\" fill=\"none\" stroke-width=\"" << f(1.6 * stroke) << "\" d=\"";
    bool first = true;
    for (const auto& [eid, fwd] : c.cycle) {
      const ElementSupport& es = g.elements[eid].support;
      const Point2 a = es.point_at(0.0);
      if (first) {
        os << "M " << sx(a.x) << " " << sy(a.y) << " ";
        first = false;
      }
      if (es.type == ElementSupport::Type::Segment) {
        os << "L " << sx(es.p1.x) << " " << sy(es.p1.y) << " ";
      } else {
        // After the y flip a clockwise world arc sweeps positively in SVG.
        const int svg_sweep = es.sweep_rad < 0.0 ? 1 : 0;
        const double L = es.length();
        auto arc_to = [&](Point2 q, double sweep_part) {
          os << "A " << f(es.radius) << " " << f(es.radius) << " 0 " << (std::fabs(sweep_part) > 3.141592653589793 ? 1 : 0)
             << " " << svg_sweep << " " << sx(q.x) << " " << sy(q.y) << " ";
        };
        if (es.full_circle || std::fabs(es.sweep_rad) > 6.0) {
          arc_to(es.point_at(0.5 * L), es.sweep_rad / 2.0);
          arc_to(es.point_at(L), es.sweep_rad / 2.0);
        } else {
          arc_to(es.point_at(L), es.sweep_rad);
        }
      }
      (void)fwd;
    }
    os << "Z\"/>\n";
  }

  for (const auto& v : g.vertices) {
    os << "<circle cx=\"" << sx(v.pos.x) << "\" cy=\"" << sy(v.pos.y) << "\" r=\"" << f(2.5 * stroke)
       << "\" fill=\"" << class_color(classes[v.id].tag) << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<Point2> sample_elements(const BoundaryGraph& g, double step) {
  std::vector<Point2> pts;
  for (const auto& e : g.elements) {
    const double L = e.support.length();
    const int n = std::max(4, static_cast<int>(std::ceil(L / step)));
    for (int k = 0; k <= n; ++k) pts.push_back(e.support.point_at(L * k / n));
  }
  return pts;
}

CheckOutcome check_scene(const GeneratorScene& s, int grid) {
  CheckOutcome out;
  auto record = [&](bool ok, const std::string& what, const std::string& detail = "") {
    out.ok = out.ok && ok;
    out.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what + (detail.empty() ? "" : ": " + detail));
  };

  const BoundaryGraph g = build_boundary(s);
  {
    BuildOptions no_prune;
    no_prune.prune = false;
    const BoundaryGraph g2 = build_boundary(s, no_prune);
    record(graphs_equal(g, g2, 4.0 * s.tol.pos), "pruning neutrality");
  }

  // Element soundness: sampled interior points sit at distance epsilon.
  {
    std::mt19937 rng(20250101);
    std::uniform_real_distribution<double> uni(0.02, 0.98);
    bool ok = true;
    std::string detail;
    for (const auto& e : g.elements) {
      for (int k = 0; k < 1000 && ok; ++k) {
        const Point2 p = e.support.point_at(uni(rng) * e.support.length());
        if (std::fabs(distance_to_scene(s, p) - s.epsilon) > 2.0 * s.tol.pos) {
          ok = false;
          detail = "element " + std::to_string(e.id);
        }
      }
    }
    record(ok, "element soundness (distance == epsilon)", detail);
  }

  BoundaryAnalysis an(s, g, grid);
  const auto classes = an.classify_all_vertices();
  {
    bool ok = true;
    for (const auto& c : classes)
      ok = ok && (c.tag == SingTag::Smooth || c.tag == SingTag::Wedge || c.tag == SingTag::Sharp ||
                  c.tag == SingTag::SharpSharp);
    record(ok, "classification exhaustiveness (smooth/wedge/sharp/sharp-sharp)");
  }
  {
    // Tangent identity: incident tangents equal extremal direction endpoints.
    bool ok = true;
    bool ortho_ok = true;
    bool contrib_ok = true;
    std::string detail, odetail, cdetail;
    for (const auto& v : g.vertices) {
      const OutwardSet os_v = an.outward_set(v.pos);
      const GeodesicArc arc = os_v.as_geodesic(s.tol);
      for (const auto& [eid, end] : v.incident) {
        const UnitDir t{end_outgoing_dir(g.elements[eid], end)};
        const bool is_endpoint = angle_between(t, arc.a) <= 8.0 * s.tol.ang ||
                                 angle_between(t, arc.b) <= 8.0 * s.tol.ang ||
                                 (os_v.kind == OutwardSet::Kind::AntipodalPair &&
                                  angle_between(t, os_v.a.negated()) <= 8.0 * s.tol.ang);
        if (!is_endpoint) {
          ok = false;
          detail = "vertex " + std::to_string(v.id);
        }
      }
      for (const auto& pr : an.extremal_pairs(v.pos)) {
        if (std::fabs(dot(pr.y - v.pos, pr.xi.vec())) > s.epsilon * s.tol.ang) {
          ortho_ok = false;
          odetail = "vertex " + std::to_string(v.id);
        }
      }
      for (const auto& y : v.contributors) {
        if (std::fabs(dist(y, v.pos) - s.epsilon) > 4.0 * s.tol.pos) {
          contrib_ok = false;
          cdetail = "vertex " + std::to_string(v.id);
        }
      }
    }
    record(ok, "tangent identity at vertices", detail);
    record(ortho_ok, "extremal pair orthogonality", odetail);
    record(contrib_ok, "vertex contributors at distance epsilon", cdetail);
  }

  Decomposition d;
  bool decompose_ok = true;
  try {
    d = decompose(an, classes);
  } catch (const Error& e) {
    decompose_ok = false;
    record(false, "decomposition", e.what());
  }
  if (decompose_ok) {
    const auto checks = check_decomposition(s, g, d, classes);
    record(checks.partition_ok, "curve partition of elements", checks.witness);
    record(checks.simplicity_ok, "curve simplicity sweep", checks.witness);
    record(checks.pairwise_ok, "pairwise curve intersections", checks.witness);
    record(checks.orientation_ok, "orientation signs", checks.witness);
    record(checks.curve_bound_ok, "per-component curve bound", checks.witness);
    record(checks.inaccessible_ok, "inaccessible set empty");
  }

  // Oracle agreement: contour proximity. A complement cusp of opening angle
  // theta stays narrower than a cell out to ~cell/tan(theta/2) from its tip,
  // capped at ~sqrt(eps*cell) for tangential (theta = 0) cusps, so element
  // samples inside that reach of a singular vertex see no contour at this
  // grid. They are excluded from the element->contour direction (same
  // carve-out as the documented flood-fill tangency exception); the
  // contour->elements direction stays unfiltered.
  double hausdorff = 0.0;
  {
    const RasterField& f = an.oracle_field();
    const auto loops = contour(f, s.epsilon);
    std::vector<Point2> cpts;
    for (const auto& loop : loops) cpts.insert(cpts.end(), loop.begin(), loop.end());
    if (cpts.empty()) {
      record(false, "oracle contour agreement", "empty contour");
    } else {
      std::vector<std::pair<Point2, double>> cusp_tips;
      const double cap = 3.0 * std::sqrt(s.epsilon * f.cell);
      for (const auto& v : g.vertices) {
        const auto& cls = classes[v.id];
        if (cls.tag == SingTag::Sharp || cls.tag == SingTag::SharpSharp) {
          cusp_tips.emplace_back(v.pos, cap);
        } else if (cls.tag == SingTag::Wedge) {
          const double reach = 1.5 * f.cell / std::tan(0.5 * cls.theta);
          if (reach > 2.0 * f.cell) cusp_tips.emplace_back(v.pos, std::min(cap, reach));
        }
      }
      const std::vector<Point2> all_epts = sample_elements(g, f.cell * 0.5);
      std::vector<Point2> epts;
      for (const auto& p : all_epts) {
        bool near_tip = false;
        for (const auto& [t, r] : cusp_tips)
          if (dist(p, t) < r) near_tip = true;
        if (!near_tip) epts.push_back(p);
      }
      if (epts.empty()) epts = all_epts;  // degenerate: everything sits in cusp zones
      hausdorff = std::max(directed_hausdorff_distance(epts, cpts),
                           directed_hausdorff_distance(cpts, all_epts));
      record(hausdorff <= 2.0 * std::sqrt(2.0) * f.cell, "oracle contour agreement (hausdorff <= 2*sqrt(2)*cell)",
             std::to_string(hausdorff));
    }
  }

  // Window Lipschitz bounds.
  {
    bool ok = true;
    std::string detail;
    int windows = 0;
    for (const auto& e : g.elements) {
      for (const double frac : {0.25, 0.5, 0.75}) {
        const double sp = frac * e.support.length();
        const Point2 x = e.support.point_at(sp);
        const ExtremalPair pr{UnitDir(e.support.tangent_at(sp)), element_contributor_point(s, e, sp)};
        try {
          const LocalRepr lr = an.local_repr(x, pr, 33);
          ++windows;
          for (size_t i = 0; i < lr.samples.size() && ok; ++i) {
            for (size_t j = i + 1; j < lr.samples.size(); ++j) {
              const double dsl = std::fabs(lr.samples[j].second - lr.samples[i].second) /
                                 (lr.samples[j].first - lr.samples[i].first);
              if (dsl > 1.0 / std::sqrt(3.0) + 1e-6) {
                ok = false;
                detail = "element " + std::to_string(e.id);
                break;
              }
            }
          }
        } catch (const NoGraphRepresentation&) {
        }
      }
    }
    record(ok && windows > 0, "window Lipschitz bound (1/sqrt(3))", detail);
  }

  // Curvature cross-check and derivative lower bounds per curve.
  bool bv_all = true;
  if (decompose_ok) {
    bool kok = true;
    std::string kdetail;
    for (const auto& c : d.curves) {
      for (const auto& cs : curvature_on_curve(an, d, c.id, 8)) {
        if (!cs.defined) continue;
        if (std::fabs(cs.kappa_fd - cs.kappa) > 10.0 * cs.fd_step) {
          kok = false;
          kdetail = "element " + std::to_string(cs.element);
        }
      }
      const BvReport bv = bv_check(an, c, 33);
      if (!bv.ok) {
        bv_all = false;
        record(false, "derivative lower bound", bv.witness);
      }
    }
    record(kok, "curvature graph-formula agreement", kdetail);
    if (bv_all) record(true, "derivative lower bound (all windows)");
  }

  const int oc = decompose_ok ? static_cast<int>(d.components.size()) : 0;
  out.report = build_report(s, g, classes, decompose_ok ? &d : nullptr, nullptr, bv_all, &oc, &hausdorff);
  out.report.oracle_components = an.oracle_labels().count;
  return out;
}

}  // namespace epshull
