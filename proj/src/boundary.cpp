#include "epshull/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "epshull/errors.hpp"

namespace epshull {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

double wrap_nonneg(double a) {
  // into [0, 2*pi)
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}
}  // namespace

double ElementSupport::sweep() const { return sweep_rad; }

double ElementSupport::length() const {
  if (type == Type::Arc) return std::fabs(sweep_rad) * radius;
  return dist(p0, p1);
}

Point2 ElementSupport::point_at(double s) const {
  if (type == Type::Segment) {
    const double L = length();
    const double t = (L > 0.0) ? s / L : 0.0;
    return p0 + (p1 - p0) * t;
  }
  const double th0 = std::atan2(from.uy, from.ux);
  const double th = th0 + sweep_rad * (s / length());
  return center + Vec2{std::cos(th), std::sin(th)} * radius;
}

Vec2 ElementSupport::tangent_at(double s) const {
  if (type == Type::Segment) {
    const Vec2 d = p1 - p0;
    return d * (1.0 / norm(d));
  }
  const Vec2 radial = (point_at(s) - center) * (1.0 / radius);
  return (sweep_rad >= 0.0) ? rot90(radial) : -rot90(radial);
}

Vec2 ElementSupport::outward_at(double s) const {
  if (type == Type::Arc) return (point_at(s) - center) * (1.0 / radius);
  return rot90(tangent_at(s));  // complement on the left
}

double ElementSupport::param_of(Point2 p) const {
  if (type == Type::Segment) {
    const Vec2 d = p1 - p0;
    const double L = length();
    return std::clamp(dot(p - p0, d * (1.0 / L)), 0.0, L);
  }
  const double th0 = std::atan2(from.uy, from.ux);
  const double phi = std::atan2(p.y - center.y, p.x - center.x);
  double d = (sweep_rad >= 0.0) ? wrap_nonneg(phi - th0) : wrap_nonneg(th0 - phi);
  const double span = std::fabs(sweep_rad);
  if (d > span) {
    // past the live range; snap to whichever end is closer in angle
    d = (d - span < kTwoPi - d) ? span : 0.0;
  }
  return d * radius;
}

double ElementSupport::distance_to(Point2 p) const {
  if (type == Type::Segment) return dist_point_segment(p, p0, p1);
  const double th0 = std::atan2(from.uy, from.ux);
  const double phi = std::atan2(p.y - center.y, p.x - center.x);
  const double d = (sweep_rad >= 0.0) ? wrap_nonneg(phi - th0) : wrap_nonneg(th0 - phi);
  if (full_circle || d <= std::fabs(sweep_rad)) {
    return std::fabs(dist(p, center) - radius);
  }
  return std::min(dist(p, point_at(0.0)), dist(p, point_at(length())));
}

Vec2 end_outgoing_dir(const BoundaryElement& e, End end) {
  if (end == End::Start) return e.support.tangent_at(0.0);
  return -e.support.tangent_at(e.support.length());
}

Point2 element_contributor_point(const GeneratorScene& s, const BoundaryElement& e, double arclen) {
  if (e.support.type == ElementSupport::Type::Arc) return e.support.center;
  const Generator& g = s.generators[e.contributor.gen];
  return closest_point_on_segment(e.support.point_at(arclen), g.a, g.b);
}

std::vector<Point2> contributors_near(const GeneratorScene& s, Point2 p, double band) {
  std::vector<Point2> raw;
  for (const auto& g : s.generators) {
    if (distance_to_generator(g, p) > s.epsilon + band) continue;
    at_epsilon_points(g, p, s.epsilon, band, &raw);
  }
  // global dedupe; at_epsilon_points only dedupes within one generator
  std::vector<Point2> out;
  for (const auto& y : raw) {
    bool dup = false;
    for (const auto& q : out)
      if (dist(q, y) <= s.tol.pos) dup = true;
    if (!dup) out.push_back(y);
  }
  std::sort(out.begin(), out.end(), [](Point2 a, Point2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  return out;
}

std::vector<Point2> contributors_at(const GeneratorScene& s, Point2 p) {
  if (std::fabs(distance_to_scene(s, p) - s.epsilon) > 2.0 * s.tol.pos)
    throw NotOnBoundary("point is not on the offset boundary");
  auto out = contributors_near(s, p, 2.0 * s.tol.pos);
  if (out.empty()) throw InternalError("boundary point with no contributor");
  return out;
}

namespace {

struct CandPiece {
  enum class Type { Circle, Offset } type = Type::Circle;
  // circle
  Point2 center;
  // offset
  Point2 p0, p1;
  Vec2 dir;  // traversal direction (offset set on the right)
  Vec2 nu;   // outward normal
  double len = 0.0;
  std::vector<ContributorRef> refs;
  std::vector<int> gens;
  std::vector<double> cuts;  // circle: angle in (-pi,pi]; offset: arclength
};

struct RawElement {
  ElementSupport support;
  std::vector<ContributorRef> records;  // inward contributor records at the midpoint
  ContributorRef primary;
  Point2 e0, e1;  // endpoints (unused when full circle)
  bool closed = false;
};

ContributorRef make_ref(const GeneratorScene& s, int gen, Point2 y, double tolp) {
  const Generator& g = s.generators[gen];
  ContributorRef r;
  r.gen = gen;
  if (g.shape == GenShape::SitePoint) {
    r.locus = LocusKind::PointSite;
    return r;
  }
  const double L = dist(g.a, g.b);
  double t;
  closest_point_on_segment(y, g.a, g.b, &t);
  const double tt = tolp / L;
  if (t <= tt) {
    r.locus = LocusKind::SegmentEndpoint;
    r.endpoint = 0;
  } else if (t >= 1.0 - tt) {
    r.locus = LocusKind::SegmentEndpoint;
    r.endpoint = 1;
  } else {
    r.locus = LocusKind::SegmentInterior;
  }
  return r;
}

// Decide whether the midpoint of a candidate sub-piece lies on the offset
// boundary, and collect the contributor records there. A point at distance
// exactly eps from the set fails to be boundary only when some other locus
// covers its outward side; at sub-piece midpoints (which are never tangency or
// crossing points -- those were cut) a covering locus shows up as a contributor
// sitting on the outward side of the piece.
bool keep_midpoint(const GeneratorScene& s, Point2 m, Vec2 nu, std::vector<ContributorRef>* records,
                   std::vector<Point2>* record_points) {
  const double eps = s.epsilon;
  const double band = 2.0 * s.tol.pos;
  double dmin = std::numeric_limits<double>::infinity();
  for (const auto& g : s.generators) dmin = std::min(dmin, distance_to_generator(g, m));
  if (dmin < eps - band) return false;

  for (const auto& g : s.generators) {
    if (distance_to_generator(g, m) > eps + band) continue;
    std::vector<Point2> ys;
    at_epsilon_points(g, m, eps, band, &ys);
    for (const auto& y : ys) {
      const double side = dot(y - m, nu);
      if (side > eps * 0.5) return false;  // covered from outside
      ContributorRef r = make_ref(s, g.id, y, s.tol.pos);
      bool dup = false;
      for (const auto& q : *records)
        if (q == r) dup = true;
      if (!dup) {
        records->push_back(r);
        record_points->push_back(y);
      }
    }
  }
  return true;
}

UnitDir dir_of_angle(double th) { return UnitDir(std::cos(th), std::sin(th)); }

ElementSupport make_arc(Point2 center, double radius, double th_lo, double th_hi) {
  // clockwise element spanning the ccw gap (th_lo, th_hi)
  ElementSupport es;
  es.type = ElementSupport::Type::Arc;
  es.center = center;
  es.radius = radius;
  es.from = dir_of_angle(th_hi);
  es.to = dir_of_angle(th_lo);
  es.ccw = false;
  es.full_circle = false;
  es.sweep_rad = -(th_hi - th_lo);
  return es;
}

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

BoundaryGraph build_boundary(const GeneratorScene& s, const BuildOptions& opts) {
  const double eps = s.epsilon;
  const double tolp = s.tol.pos;

  // Candidate pieces: one circle per point site and per segment endpoint
  // (coincident centers merged), two straight offsets per segment.
  std::vector<CandPiece> pieces;
  auto add_circle = [&](Point2 c, ContributorRef ref, int gen) {
    for (auto& p : pieces) {
      if (p.type == CandPiece::Type::Circle && dist(p.center, c) <= tolp) {
        p.refs.push_back(ref);
        p.gens.push_back(gen);
        return;
      }
    }
    CandPiece p;
    p.type = CandPiece::Type::Circle;
    p.center = c;
    p.refs.push_back(ref);
    p.gens.push_back(gen);
    pieces.push_back(std::move(p));
  };
  for (const auto& g : s.generators) {
    if (g.shape == GenShape::SitePoint) {
      add_circle(g.a, ContributorRef{g.id, LocusKind::PointSite, 0}, g.id);
    } else {
      add_circle(g.a, ContributorRef{g.id, LocusKind::SegmentEndpoint, 0}, g.id);
      add_circle(g.b, ContributorRef{g.id, LocusKind::SegmentEndpoint, 1}, g.id);
    }
  }
  for (const auto& g : s.generators) {
    if (g.shape != GenShape::SiteSegment) continue;
    const Vec2 w = g.b - g.a;
    const double L = norm(w);
    const Vec2 u = w * (1.0 / L);
    const Vec2 n = rot90(u);
    for (int side = 0; side < 2; ++side) {
      CandPiece p;
      p.type = CandPiece::Type::Offset;
      if (side == 0) {
        p.p0 = g.a + n * eps;
        p.p1 = g.b + n * eps;
        p.dir = u;
        p.nu = n;
      } else {
        p.p0 = g.b - n * eps;
        p.p1 = g.a - n * eps;
        p.dir = -u;
        p.nu = -n;
      }
      p.len = L;
      p.refs.push_back(ContributorRef{g.id, LocusKind::SegmentInterior, 0});
      p.gens.push_back(g.id);
      pieces.push_back(std::move(p));
    }
  }

  auto prunable = [&](const CandPiece& a, const CandPiece& b) {
    if (!opts.prune) return false;
    double dmin = std::numeric_limits<double>::infinity();
    for (int ga : a.gens)
      for (int gb : b.gens)
        dmin = std::min(dmin, generator_set_distance(s.generators[ga], s.generators[gb]));
    // Loci of generators farther apart than 2*eps cannot meet: any common point
    // would be at distance eps from both.
    return dmin > 2.0 * eps + 8.0 * tolp;
  };

  auto cut_circle = [&](CandPiece& c, Point2 q) {
    c.cuts.push_back(std::atan2(q.y - c.center.y, q.x - c.center.x));
  };
  auto cut_offset = [&](CandPiece& o, Point2 q) {
    o.cuts.push_back(std::clamp(dot(q - o.p0, o.dir), 0.0, o.len));
  };

  for (size_t i = 0; i < pieces.size(); ++i) {
    for (size_t j = i + 1; j < pieces.size(); ++j) {
      CandPiece& A = pieces[i];
      CandPiece& B = pieces[j];
      if (prunable(A, B)) continue;
      const bool ac = A.type == CandPiece::Type::Circle;
      const bool bc = B.type == CandPiece::Type::Circle;
      if (ac && bc) {
        try {
          const auto res = circle_circle_intersect({A.center, eps}, {B.center, eps}, s.tol);
          if (res.kind != CircleIntersection::Kind::Empty) {
            cut_circle(A, res.p1);
            cut_circle(B, res.p1);
            if (res.kind == CircleIntersection::Kind::Pair) {
              cut_circle(A, res.p2);
              cut_circle(B, res.p2);
            }
          }
        } catch (const ConcentricEqual&) {
          // coincident candidate circles were merged up front; nothing to cut
        }
      } else if (ac != bc) {
        CandPiece& C = ac ? A : B;
        CandPiece& O = ac ? B : A;
        for (const auto& q : circle_segment_intersect({C.center, eps}, O.p0, O.p1, s.tol)) {
          cut_circle(C, q);
          cut_offset(O, q);
        }
      } else {
        Point2 q;
        if (segment_segment_intersect(A.p0, A.p1, B.p0, B.p1, s.tol, &q)) {
          cut_offset(A, q);
          cut_offset(B, q);
        }
      }
    }
  }
  // Endpoints of offset pieces lying on other pieces are status-change points
  // too (cap transitions, T-junctions, collinear overlap ends).
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].type != CandPiece::Type::Offset) continue;
    for (const Point2 q : {pieces[i].p0, pieces[i].p1}) {
      for (size_t j = 0; j < pieces.size(); ++j) {
        if (i == j) continue;
        CandPiece& A = pieces[j];
        if (prunable(pieces[i], A)) continue;
        if (A.type == CandPiece::Type::Circle) {
          if (std::fabs(dist(q, A.center) - eps) <= tolp) cut_circle(A, q);
        } else {
          if (dist_point_segment(q, A.p0, A.p1) <= tolp) cut_offset(A, q);
        }
      }
    }
  }

  // Assemble kept sub-pieces.
  std::vector<RawElement> raw;
  auto process = [&](const ElementSupport& es, Point2 mid, Vec2 nu_mid, const CandPiece& piece, bool closed) {
    std::vector<ContributorRef> records;
    std::vector<Point2> record_points;
    if (!keep_midpoint(s, mid, nu_mid, &records, &record_points)) return;
    RawElement re;
    re.support = es;
    re.closed = closed;
    if (!closed) {
      re.e0 = es.point_at(0.0);
      re.e1 = es.point_at(es.length());
    }
    // Primary record: the one realizing the piece's own geometry.
    int prim = -1;
    for (size_t k = 0; k < records.size(); ++k) {
      const bool match = (piece.type == CandPiece::Type::Circle)
                             ? dist(record_points[k], piece.center) <= 4.0 * tolp
                             : (records[k].gen == piece.gens[0] && records[k].locus == LocusKind::SegmentInterior);
      if (match && (prim < 0 || records[k].gen < records[prim].gen)) prim = static_cast<int>(k);
    }
    if (prim < 0) throw InternalError("kept element without its defining contributor");
    re.primary = records[prim];
    records.erase(records.begin() + prim);
    re.records = std::move(records);
    raw.push_back(std::move(re));
  };

  for (const auto& piece : pieces) {
    if (piece.type == CandPiece::Type::Circle) {
      std::vector<double> angles = piece.cuts;
      std::sort(angles.begin(), angles.end());
      // dedupe, including across the wrap
      std::vector<double> uniq;
      for (double a : angles) {
        if (uniq.empty() || (a - uniq.back()) * eps > 2.0 * tolp) uniq.push_back(a);
      }
      if (uniq.size() >= 2 && (uniq.front() + kTwoPi - uniq.back()) * eps <= 2.0 * tolp) uniq.pop_back();
      if (uniq.empty()) {
        ElementSupport es;
        es.type = ElementSupport::Type::Arc;
        es.center = piece.center;
        es.radius = eps;
        es.from = es.to = UnitDir(1.0, 0.0);
        es.ccw = false;
        es.full_circle = true;
        es.sweep_rad = -kTwoPi;
        const Point2 mid = piece.center + Vec2{eps, 0.0};
        process(es, mid, Vec2{1.0, 0.0}, piece, /*closed=*/true);
        continue;
      }
      for (size_t k = 0; k < uniq.size(); ++k) {
        const double lo = uniq[k];
        const double hi = (k + 1 < uniq.size()) ? uniq[k + 1] : uniq[0] + kTwoPi;
        if ((hi - lo) * eps <= tolp) continue;
        const double mth = 0.5 * (lo + hi);
        const Vec2 numid{std::cos(mth), std::sin(mth)};
        process(make_arc(piece.center, eps, lo, hi), piece.center + numid * eps, numid, piece, false);
      }
    } else {
      std::vector<double> ts = piece.cuts;
      ts.push_back(0.0);
      ts.push_back(piece.len);
      std::sort(ts.begin(), ts.end());
      std::vector<double> uniq;
      for (double t : ts) {
        if (uniq.empty() || t - uniq.back() > 2.0 * tolp) uniq.push_back(t);
      }
      for (size_t k = 0; k + 1 < uniq.size(); ++k) {
        const double lo = std::max(0.0, uniq[k]);
        const double hi = std::min(piece.len, uniq[k + 1]);
        if (hi - lo <= tolp) continue;
        ElementSupport es;
        es.type = ElementSupport::Type::Segment;
        es.p0 = piece.p0 + piece.dir * lo;
        es.p1 = piece.p0 + piece.dir * hi;
        const Point2 mid = piece.p0 + piece.dir * (0.5 * (lo + hi));
        process(es, mid, piece.nu, piece, false);
      }
    }
  }

  // Same-side collinear overlaps produce coincident copies from two pieces;
  // merge them into one element carrying both contributor records.
  std::vector<RawElement> merged;
  for (auto& re : raw) {
    bool absorbed = false;
    for (auto& m : merged) {
      if (m.support.type != re.support.type || m.closed != re.closed) continue;
      const bool same =
          m.support.type == ElementSupport::Type::Segment
              ? (dist(m.support.p0, re.support.p0) <= 2.0 * tolp && dist(m.support.p1, re.support.p1) <= 2.0 * tolp)
              : (dist(m.support.center, re.support.center) <= 2.0 * tolp &&
                 dist(m.support.point_at(0.0), re.support.point_at(0.0)) <= 2.0 * tolp &&
                 std::fabs(m.support.sweep_rad - re.support.sweep_rad) * eps <= 4.0 * tolp);
      if (!same) continue;
      for (const auto& r : re.records) {
        bool dup = r == m.primary;
        for (const auto& q : m.records)
          if (q == r) dup = true;
        if (!dup) m.records.push_back(r);
      }
      if (!(re.primary == m.primary)) {
        bool dup = false;
        for (const auto& q : m.records)
          if (q == re.primary) dup = true;
        if (!dup) m.records.push_back(re.primary);
      }
      absorbed = true;
      break;
    }
    if (!absorbed) merged.push_back(std::move(re));
  }

  if (merged.empty()) throw DegenerateScene("no boundary elements survived trimming");

  // Vertex snapping: cluster sub-piece endpoints within the coincidence tolerance.
  std::vector<Point2> endpoints;
  std::vector<std::pair<int, End>> owners;
  for (size_t k = 0; k < merged.size(); ++k) {
    if (merged[k].closed) continue;
    endpoints.push_back(merged[k].e0);
    owners.emplace_back(static_cast<int>(k), End::Start);
    endpoints.push_back(merged[k].e1);
    owners.emplace_back(static_cast<int>(k), End::Stop);
  }
  DisjointSet ds(endpoints.size());
  for (size_t i = 0; i < endpoints.size(); ++i)
    for (size_t j = i + 1; j < endpoints.size(); ++j)
      if (dist(endpoints[i], endpoints[j]) <= 2.0 * tolp) ds.unite(static_cast<int>(i), static_cast<int>(j));

  std::vector<int> root_of(endpoints.size());
  std::vector<std::vector<int>> members;
  {
    std::vector<int> root_index(endpoints.size(), -1);
    for (size_t i = 0; i < endpoints.size(); ++i) {
      const int r = ds.find(static_cast<int>(i));
      if (root_index[r] < 0) {
        root_index[r] = static_cast<int>(members.size());
        members.emplace_back();
      }
      root_of[i] = root_index[r];
      members[root_index[r]].push_back(static_cast<int>(i));
    }
  }
  std::vector<Point2> cluster_pos(members.size());
  for (size_t c = 0; c < members.size(); ++c) {
    Point2 acc{0, 0};
    for (int i : members[c]) acc = acc + endpoints[i];
    cluster_pos[c] = acc * (1.0 / members[c].size());
  }

  // Order vertices by position for reproducible ids.
  std::vector<int> order(members.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return cluster_pos[a].x != cluster_pos[b].x ? cluster_pos[a].x < cluster_pos[b].x
                                                : cluster_pos[a].y < cluster_pos[b].y;
  });
  std::vector<int> vertex_id(members.size());
  for (size_t k = 0; k < order.size(); ++k) vertex_id[order[k]] = static_cast<int>(k);

  BoundaryGraph graph;
  graph.epsilon = eps;
  graph.tol = s.tol;
  graph.vertices.resize(members.size());
  for (size_t c = 0; c < members.size(); ++c) {
    BoundaryVertex& v = graph.vertices[vertex_id[c]];
    v.id = vertex_id[c];
    v.pos = cluster_pos[c];
    v.contributors = contributors_near(s, v.pos, 4.0 * tolp);
  }

  for (size_t k = 0, ep = 0; k < merged.size(); ++k) {
    BoundaryElement el;
    el.id = static_cast<int>(graph.elements.size());
    el.support = merged[k].support;
    el.contributor = merged[k].primary;
    el.co_contributors = merged[k].records;
    std::sort(el.co_contributors.begin(), el.co_contributors.end(), [](const ContributorRef& a, const ContributorRef& b) {
      if (a.gen != b.gen) return a.gen < b.gen;
      if (a.locus != b.locus) return static_cast<int>(a.locus) < static_cast<int>(b.locus);
      return a.endpoint < b.endpoint;
    });
    if (!merged[k].closed) {
      el.v_start = graph.vertices[vertex_id[root_of[ep]]].id;
      el.v_stop = graph.vertices[vertex_id[root_of[ep + 1]]].id;
      ep += 2;
    }
    graph.elements.push_back(std::move(el));
  }

  for (const auto& el : graph.elements) {
    if (el.v_start >= 0) graph.vertices[el.v_start].incident.emplace_back(el.id, End::Start);
    if (el.v_stop >= 0) graph.vertices[el.v_stop].incident.emplace_back(el.id, End::Stop);
  }
  for (auto& v : graph.vertices) {
    std::sort(v.incident.begin(), v.incident.end(), [](auto a, auto b) {
      return a.first != b.first ? a.first < b.first : static_cast<int>(a.second) < static_cast<int>(b.second);
    });
    if (v.incident.empty()) throw InternalError("vertex without incident elements");
    // A junction of distinct contributor loci usually has >= 2 contributor
    // points, but smooth cap junctions reuse one point (segment endpoint) for
    // both the arc and the straight offset.
    if (v.contributors.empty()) throw InternalError("junction vertex without contributors");
  }
  return graph;
}

namespace {
bool support_close(const ElementSupport& a, const ElementSupport& b, double tol) {
  if (a.type != b.type) return false;
  if (a.type == ElementSupport::Type::Segment) {
    return dist(a.p0, b.p0) <= tol && dist(a.p1, b.p1) <= tol;
  }
  if (a.full_circle != b.full_circle) return false;
  if (dist(a.center, b.center) > tol || std::fabs(a.radius - b.radius) > tol) return false;
  if (a.full_circle) return true;
  return dist(a.point_at(0.0), b.point_at(0.0)) <= tol &&
         dist(a.point_at(a.length()), b.point_at(b.length())) <= tol;
}
}  // namespace

bool graphs_equal(const BoundaryGraph& a, const BoundaryGraph& b, double tol) {
  if (a.elements.size() != b.elements.size()) return false;
  if (a.vertices.size() != b.vertices.size()) return false;
  std::vector<bool> used(b.elements.size(), false);
  for (const auto& ea : a.elements) {
    bool found = false;
    for (size_t j = 0; j < b.elements.size(); ++j) {
      if (used[j]) continue;
      const auto& eb = b.elements[j];
      if (!support_close(ea.support, eb.support, tol)) continue;
      if (!(ea.contributor == eb.contributor)) continue;
      if (ea.co_contributors.size() != eb.co_contributors.size()) continue;
      used[j] = true;
      found = true;
      break;
    }
    if (!found) return false;
  }
  for (const auto& va : a.vertices) {
    bool found = false;
    for (const auto& vb : b.vertices) {
      if (dist(va.pos, vb.pos) <= tol && va.incident.size() == vb.incident.size()) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace epshull
