#include "epshull/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "epshull/errors.hpp"

namespace epshull {

namespace {

struct EndKey {
  int elem;
  End end;
  bool operator<(const EndKey& o) const {
    return elem != o.elem ? elem < o.elem : static_cast<int>(end) < static_cast<int>(o.end);
  }
  bool operator==(const EndKey& o) const { return elem == o.elem && end == o.end; }
};

// Perfect matching of element ends at a vertex: arriving on one end continues
// on its partner. Two ends pair trivially; four ends occur only at sharp-sharp
// vertices, where Q1 pairs by shared contributor (curves flow through) and Q2
// pairs by tangent direction (curves bounce back into their own component).
std::map<EndKey, EndKey> vertex_matching(const GeneratorScene& s, const BoundaryGraph& g,
                                         const BoundaryVertex& v, const SingularityClass& cls) {
  struct E {
    EndKey key;
    Vec2 out;
    Point2 contrib;
  };
  std::vector<E> ends;
  for (const auto& [eid, end] : v.incident) {
    const auto& el = g.elements[eid];
    const double p = (end == End::Start) ? 0.0 : el.support.length();
    ends.push_back({EndKey{eid, end}, end_outgoing_dir(el, end), element_contributor_point(s, el, p)});
  }
  std::map<EndKey, EndKey> match;
  auto pair_up = [&](const E& a, const E& b) {
    match[a.key] = b.key;
    match[b.key] = a.key;
  };
  if (ends.size() == 2) {
    pair_up(ends[0], ends[1]);
    return match;
  }
  if (ends.size() != 4) {
    throw TraversalStuck("vertex " + std::to_string(v.id) + " has " + std::to_string(ends.size()) +
                         " incident ends");
  }
  if (cls.tag != SingTag::SharpSharp) {
    throw TraversalStuck("four-end vertex " + std::to_string(v.id) + " not classified sharp-sharp");
  }
  std::vector<int> partner(4, -1);
  for (int i = 1; i < 4; ++i) {
    const bool same_group = (cls.q == QSplit::Q1)
                                ? dist(ends[i].contrib, ends[0].contrib) <= s.epsilon * 0.5
                                : dot(ends[i].out, ends[0].out) > 0.0;
    if (same_group) partner[i] = 0;
  }
  int first_partner = -1, other_a = -1, other_b = -1;
  for (int i = 1; i < 4; ++i) {
    if (partner[i] == 0) {
      if (first_partner >= 0) throw TraversalStuck("ambiguous end grouping at vertex " + std::to_string(v.id));
      first_partner = i;
    } else {
      (other_a < 0 ? other_a : other_b) = i;
    }
  }
  if (first_partner < 0 || other_b < 0)
    throw TraversalStuck("degenerate end grouping at vertex " + std::to_string(v.id));
  pair_up(ends[0], ends[first_partner]);
  pair_up(ends[other_a], ends[other_b]);
  return match;
}

// Ray-parity containment of a point in a sampled closed polyline.
bool polyline_contains(const std::vector<Point2>& poly, Point2 p) {
  bool inside = false;
  const double ry = p.y;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Point2& a = poly[j];
    const Point2& b = poly[i];
    if ((a.y > ry) != (b.y > ry)) {
      const double xint = a.x + (ry - a.y) * (b.x - a.x) / (b.y - a.y);
      if (xint > p.x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

double curve_signed_area(const BoundaryGraph& g, const JordanCurve& c) {
  double area = 0.0;
  for (const auto& [eid, fwd] : c.cycle) {
    const ElementSupport& es = g.elements[eid].support;
    if (es.type == ElementSupport::Type::Segment) {
      area += 0.5 * cross(es.p0, es.p1);
    } else {
      const Point2 a = es.point_at(0.0);
      const Point2 b = es.point_at(es.length());
      area += 0.5 * cross(es.center, b - a) + 0.5 * es.radius * es.radius * es.sweep_rad;
    }
    (void)fwd;
  }
  return area;
}

std::vector<Point2> sample_curve(const BoundaryGraph& g, const JordanCurve& c, double step) {
  std::vector<Point2> pts;
  for (const auto& [eid, fwd] : c.cycle) {
    const ElementSupport& es = g.elements[eid].support;
    const double L = es.length();
    const int n = std::max(8, static_cast<int>(std::ceil(L / step)));
    for (int k = 0; k < n; ++k) pts.push_back(es.point_at(L * k / n));
    (void)fwd;
  }
  return pts;
}

Decomposition decompose(const BoundaryAnalysis& an, const std::vector<SingularityClass>& vertex_classes,
                        bool oracle_check) {
  const GeneratorScene& s = an.scene();
  const BoundaryGraph& g = an.graph();
  Decomposition d;

  // Continuation maps, one per vertex.
  std::vector<std::map<EndKey, EndKey>> matching(g.vertices.size());
  for (const auto& v : g.vertices) matching[v.id] = vertex_matching(s, g, v, vertex_classes[v.id]);

  std::vector<bool> used(g.elements.size(), false);
  for (const auto& start_el : g.elements) {
    if (used[start_el.id]) continue;
    JordanCurve curve;
    curve.id = static_cast<int>(d.curves.size());
    if (start_el.v_start < 0) {
      used[start_el.id] = true;
      curve.cycle.emplace_back(start_el.id, true);
    } else {
      int cur = start_el.id;
      while (true) {
        if (used[cur]) throw TraversalStuck("element revisited during curve traversal");
        used[cur] = true;
        curve.cycle.emplace_back(cur, true);
        const int vstop = g.elements[cur].v_stop;
        curve.vertices.push_back(vstop);
        const EndKey next = matching[vstop].at(EndKey{cur, End::Stop});
        if (next.end != End::Start)
          throw TraversalStuck("continuation enters an element against its orientation");
        if (next.elem == start_el.id) break;
        cur = next.elem;
      }
      // Rotate so the recorded vertex order starts at the starting element's own start vertex.
      std::rotate(curve.vertices.begin(), curve.vertices.end() - 1, curve.vertices.end());
    }
    curve.signed_area = curve_signed_area(g, curve);
    d.curves.push_back(std::move(curve));
  }

  // Component assembly. Every bounded complement component has exactly one
  // positive-area (hole) curve; negative-area curves attach to the innermost
  // hole curve containing them, or to the unbounded component.
  const double step = std::max(s.epsilon / 16.0, 8.0 * s.tol.pos);
  std::vector<std::vector<Point2>> polys(d.curves.size());
  for (const auto& c : d.curves) polys[c.id] = sample_curve(g, c, step);
  std::vector<Point2> reps(d.curves.size());
  for (const auto& c : d.curves) {
    const auto& es = g.elements[c.cycle.front().first].support;
    reps[c.id] = es.point_at(0.5 * es.length());
    // dodge exact polyline-node alignments in the parity test
    reps[c.id].y += 1.2345e-7 * s.epsilon;
  }

  std::vector<int> hole_component(d.curves.size(), -1);
  ComplementComponent unbounded;
  unbounded.id = 0;
  unbounded.bounded = false;
  unbounded.witness = s.bbox_min() - Vec2{2.5 * s.epsilon, 2.5 * s.epsilon};
  d.components.push_back(unbounded);
  for (const auto& c : d.curves) {
    if (c.signed_area <= 0.0) continue;
    ComplementComponent comp;
    comp.id = static_cast<int>(d.components.size());
    comp.bounded = true;
    hole_component[c.id] = comp.id;
    // Witness just left of the first element (the complement side).
    const auto& el = g.elements[c.cycle.front().first];
    const double mid = 0.5 * el.support.length();
    const Point2 m = el.support.point_at(mid);
    const Vec2 nu = el.support.outward_at(mid);
    bool found = false;
    for (double delta = s.epsilon / 4.0; delta > 8.0 * s.tol.pos; delta *= 0.5) {
      const Point2 w = m + nu * delta;
      if (distance_to_scene(s, w) > s.epsilon + delta * 0.5) {
        comp.witness = w;
        found = true;
        break;
      }
    }
    if (!found) throw OracleMismatch("no witness point found inside a bounded component");
    d.components.push_back(std::move(comp));
  }

  for (auto& c : d.curves) {
    if (c.signed_area > 0.0) {
      c.component = hole_component[c.id];
      continue;
    }
    int parent = -1;
    double parent_area = std::numeric_limits<double>::infinity();
    for (const auto& h : d.curves) {
      if (h.id == c.id || h.signed_area <= 0.0) continue;
      if (h.signed_area < parent_area && polyline_contains(polys[h.id], reps[c.id])) {
        parent = h.id;
        parent_area = h.signed_area;
      }
    }
    c.component = (parent < 0) ? 0 : hole_component[parent];
  }

  d.per_component.assign(d.components.size(), {});
  for (const auto& c : d.curves) {
    d.per_component[c.component].push_back(c.id);
    d.components[c.component].boundary_curve_ids.push_back(c.id);
  }

  if (!oracle_check) return d;

  // Oracle cross-validation: flood-fill component count and witness labels.
  const int flood = an.oracle_labels().count;
  if (flood != static_cast<int>(d.components.size())) {
    throw OracleMismatch("component count mismatch: symbolic " + std::to_string(d.components.size()) +
                         ", flood fill " + std::to_string(flood));
  }
  std::vector<int> seen_labels;
  for (const auto& comp : d.components) {
    const int lab = an.component_label_at(comp.witness);
    if (lab < 0) throw OracleMismatch("component witness falls on a covered cell");
    if (!comp.bounded && lab != 0) throw OracleMismatch("unbounded witness not in the border component");
    if (comp.bounded && lab == 0) throw OracleMismatch("bounded witness reached the border component");
    if (std::find(seen_labels.begin(), seen_labels.end(), lab) != seen_labels.end())
      throw OracleMismatch("two components share a flood-fill label");
    seen_labels.push_back(lab);
  }
  return d;
}

Decomposition decompose(const GeneratorScene& s, const BoundaryGraph& g) {
  BoundaryAnalysis an(s, g);
  return decompose(an, an.classify_all_vertices());
}

std::vector<ComplementComponent> complement_components(const GeneratorScene& s, const BoundaryGraph& g) {
  return decompose(s, g).components;
}

Accessibility accessibility(const BoundaryGraph& g, const Decomposition& d, Point2 x) {
  // Locate x among vertices first, then elements.
  int vid = -1, eid = -1;
  for (const auto& v : g.vertices)
    if (dist(v.pos, x) <= 4.0 * g.tol.pos) vid = v.id;
  if (vid < 0) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : g.elements) {
      const double dd = e.support.distance_to(x);
      if (dd < best) {
        best = dd;
        eid = e.id;
      }
    }
    if (best > 4.0 * g.tol.pos) throw NotOnBoundary("accessibility: point not on the boundary");
  }
  Accessibility acc;
  for (const auto& c : d.curves) {
    bool hit = false;
    if (vid >= 0) {
      hit = std::find(c.vertices.begin(), c.vertices.end(), vid) != c.vertices.end();
    } else {
      for (const auto& [e, fwd] : c.cycle) {
        if (e == eid) hit = true;
        (void)fwd;
      }
    }
    if (hit && std::find(acc.component_ids.begin(), acc.component_ids.end(), c.component) == acc.component_ids.end())
      acc.component_ids.push_back(c.component);
  }
  if (acc.component_ids.empty())
    throw InternalError("boundary point on no curve: inaccessible points cannot occur in finite scenes");
  std::sort(acc.component_ids.begin(), acc.component_ids.end());
  acc.accessible = true;
  return acc;
}

namespace {

// Support-level intersection points between two elements (coarse; used by the
// simplicity sweep, where any hit away from shared vertices is a violation).
std::vector<Point2> element_intersections(const BoundaryElement& a, const BoundaryElement& b, const Tolerance& tol) {
  std::vector<Point2> pts;
  const bool aarc = a.support.type == ElementSupport::Type::Arc;
  const bool barc = b.support.type == ElementSupport::Type::Arc;
  auto live = [&](const BoundaryElement& e, Point2 p) { return e.support.distance_to(p) <= 4.0 * tol.pos; };
  if (aarc && barc) {
    if (dist(a.support.center, b.support.center) <= tol.pos) return pts;  // same carrier circle
    try {
      const auto res = circle_circle_intersect({a.support.center, a.support.radius},
                                               {b.support.center, b.support.radius}, tol);
      if (res.kind != CircleIntersection::Kind::Empty) {
        pts.push_back(res.p1);
        if (res.kind == CircleIntersection::Kind::Pair) pts.push_back(res.p2);
      }
    } catch (const ConcentricEqual&) {
      return pts;
    }
  } else if (aarc != barc) {
    const auto& arc = aarc ? a : b;
    const auto& seg = aarc ? b : a;
    pts = circle_segment_intersect({arc.support.center, arc.support.radius}, seg.support.p0, seg.support.p1, tol);
  } else {
    Point2 q;
    if (segment_segment_intersect(a.support.p0, a.support.p1, b.support.p0, b.support.p1, tol, &q)) pts.push_back(q);
  }
  std::vector<Point2> out;
  for (const auto& p : pts)
    if (live(a, p) && live(b, p)) out.push_back(p);
  return out;
}

}  // namespace

DecompositionChecks check_decomposition(const GeneratorScene& s, const BoundaryGraph& g, const Decomposition& d,
                                        const std::vector<SingularityClass>& vertex_classes) {
  DecompositionChecks out;
  auto fail = [&](std::string msg) {
    if (out.witness.empty()) out.witness = std::move(msg);
  };

  // Partition: every element in exactly one curve, one direction.
  std::vector<int> count(g.elements.size(), 0);
  for (const auto& c : d.curves)
    for (const auto& [eid, fwd] : c.cycle) {
      ++count[eid];
      (void)fwd;
    }
  out.partition_ok = std::all_of(count.begin(), count.end(), [](int c) { return c == 1; });
  if (!out.partition_ok) fail("element not covered exactly once by the curve set");

  // Simplicity: within one curve, elements may only meet at curve vertices.
  out.simplicity_ok = true;
  for (const auto& c : d.curves) {
    for (size_t i = 0; i < c.cycle.size() && out.simplicity_ok; ++i) {
      for (size_t j = i + 1; j < c.cycle.size() && out.simplicity_ok; ++j) {
        const auto& ea = g.elements[c.cycle[i].first];
        const auto& eb = g.elements[c.cycle[j].first];
        for (const auto& p : element_intersections(ea, eb, g.tol)) {
          bool at_vertex = false;
          for (int vid : c.vertices)
            if (dist(g.vertices[vid].pos, p) <= 8.0 * g.tol.pos) at_vertex = true;
          if (!at_vertex) {
            out.simplicity_ok = false;
            fail("curve " + std::to_string(c.id) + " self-intersects away from its vertices");
            break;
          }
        }
      }
    }
  }

  // Pairwise: same-component curves share at most one vertex and never cross.
  out.pairwise_ok = true;
  for (size_t i = 0; i < d.curves.size(); ++i) {
    for (size_t j = i + 1; j < d.curves.size(); ++j) {
      const auto& ca = d.curves[i];
      const auto& cb = d.curves[j];
      if (ca.component != cb.component) continue;
      int shared = 0;
      for (int va : ca.vertices)
        for (int vb : cb.vertices)
          if (va == vb) ++shared;
      if (shared > 1) {
        out.pairwise_ok = false;
        fail("curves " + std::to_string(ca.id) + "," + std::to_string(cb.id) + " share " +
             std::to_string(shared) + " vertices");
      }
      for (const auto& [ea, fa] : ca.cycle) {
        for (const auto& [eb, fb] : cb.cycle) {
          for (const auto& p : element_intersections(g.elements[ea], g.elements[eb], g.tol)) {
            bool at_vertex = false;
            for (const auto& v : g.vertices)
              if (dist(v.pos, p) <= 8.0 * g.tol.pos) at_vertex = true;
            if (!at_vertex) {
              out.pairwise_ok = false;
              fail("curves " + std::to_string(ca.id) + "," + std::to_string(cb.id) + " cross");
            }
          }
          (void)fb;
        }
        (void)fa;
      }
    }
  }

  // Orientation: each bounded component has exactly one positive-area curve;
  // every other curve is negative.
  out.orientation_ok = true;
  for (const auto& comp : d.components) {
    int positive = 0;
    for (int cid : comp.boundary_curve_ids)
      if (d.curves[cid].signed_area > 0.0) ++positive;
    const int expect = comp.bounded ? 1 : 0;
    if (positive != expect) {
      out.orientation_ok = false;
      fail("component " + std::to_string(comp.id) + " has " + std::to_string(positive) +
           " hole-oriented curves");
    }
  }

  // Curve count per component: at most one curve per connected piece of the
  // component's boundary, plus one extra per Q1 pass-through vertex.
  out.curve_bound_ok = true;
  for (const auto& comp : d.components) {
    const auto& cids = comp.boundary_curve_ids;
    std::vector<int> q1;
    for (int cid : cids) {
      for (int vid : d.curves[cid].vertices) {
        if (vertex_classes[vid].tag == SingTag::SharpSharp && vertex_classes[vid].q == QSplit::Q1 &&
            std::find(q1.begin(), q1.end(), vid) == q1.end())
          q1.push_back(vid);
      }
    }
    // connected pieces of the boundary: curves linked when they share a vertex
    std::vector<int> root(cids.size());
    for (size_t i = 0; i < cids.size(); ++i) root[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int i) { return root[i] == i ? i : root[i] = find(root[i]); };
    for (size_t i = 0; i < cids.size(); ++i)
      for (size_t j = i + 1; j < cids.size(); ++j)
        for (int va : d.curves[cids[i]].vertices)
          for (int vb : d.curves[cids[j]].vertices)
            if (va == vb) root[find(static_cast<int>(i))] = find(static_cast<int>(j));
    int pieces = 0;
    for (size_t i = 0; i < cids.size(); ++i)
      if (find(static_cast<int>(i)) == static_cast<int>(i)) ++pieces;
    if (static_cast<int>(cids.size()) > pieces + static_cast<int>(q1.size())) {
      out.curve_bound_ok = false;
      fail("component " + std::to_string(comp.id) + " exceeds the boundary-pieces + Q1 curve bound");
    }
  }

  out.inaccessible_ok = d.inaccessible.empty();
  if (!out.inaccessible_ok) fail("inaccessible set not empty");
  (void)s;
  return out;
}

}  // namespace epshull
