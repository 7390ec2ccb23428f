#include "epshull/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "epshull/errors.hpp"

namespace epshull {

bool RasterField::cell_of(Point2 p, int* ix, int* iy) const {
  const int cx = static_cast<int>(std::lround((p.x - origin.x) / cell));
  const int cy = static_cast<int>(std::lround((p.y - origin.y) / cell));
  if (cx < 0 || cx >= nx || cy < 0 || cy >= ny) return false;
  *ix = cx;
  *iy = cy;
  return true;
}

RasterField build_field(const GeneratorScene& s, int resolution) {
  if (resolution < 64) throw DomainError("raster resolution must be >= 64");
  const double inflate = 2.0 * s.epsilon;
  const Point2 lo0 = s.bbox_min() - Vec2{inflate, inflate};
  const Point2 hi0 = s.bbox_max() + Vec2{inflate, inflate};
  const double maxdim = std::max(hi0.x - lo0.x, hi0.y - lo0.y);

  RasterField f;
  f.cell = maxdim > 0.0 ? maxdim / resolution : s.epsilon / resolution;
  // Irrational sub-cell offset keeps sample rows/columns off scene features;
  // an exactly aligned column would thread a spurious one-cell path through
  // single-point pinches of the complement.
  f.origin = lo0 - Vec2{(4.0 - 0.3183098861837907) * f.cell, (4.0 - 0.3678794411714423) * f.cell};
  f.nx = static_cast<int>(std::ceil((hi0.x - lo0.x) / f.cell)) + 9;
  f.ny = static_cast<int>(std::ceil((hi0.y - lo0.y) / f.cell)) + 9;
  f.values.resize(static_cast<size_t>(f.nx) * f.ny);
  for (int iy = 0; iy < f.ny; ++iy) {
    for (int ix = 0; ix < f.nx; ++ix) {
      f.values[static_cast<size_t>(iy) * f.nx + ix] = distance_to_scene(s, f.center(ix, iy));
    }
  }
  return f;
}

FloodLabels flood_labels(const RasterField& f, double epsilon) {
  FloodLabels out;
  const size_t n = f.values.size();
  out.label.assign(n, -1);
  auto idx = [&](int ix, int iy) { return static_cast<size_t>(iy) * f.nx + ix; };
  auto is_comp = [&](int ix, int iy) { return f.value(ix, iy) > epsilon; };

  // Component 0: everything reachable from the border. The grid is inflated
  // well past the set, so the entire border is complement.
  std::deque<std::pair<int, int>> queue;
  auto seed = [&](int ix, int iy) {
    if (is_comp(ix, iy) && out.label[idx(ix, iy)] == -1) {
      out.label[idx(ix, iy)] = 0;
      queue.emplace_back(ix, iy);
    }
  };
  for (int ix = 0; ix < f.nx; ++ix) {
    seed(ix, 0);
    seed(ix, f.ny - 1);
  }
  for (int iy = 0; iy < f.ny; ++iy) {
    seed(0, iy);
    seed(f.nx - 1, iy);
  }
  int next = 1;
  auto flood = [&](int label) {
    while (!queue.empty()) {
      auto [ix, iy] = queue.front();
      queue.pop_front();
      const int dx[4] = {1, -1, 0, 0};
      const int dy[4] = {0, 0, 1, -1};
      for (int k = 0; k < 4; ++k) {
        const int jx = ix + dx[k], jy = iy + dy[k];
        if (jx < 0 || jx >= f.nx || jy < 0 || jy >= f.ny) continue;
        if (!is_comp(jx, jy) || out.label[idx(jx, jy)] != -1) continue;
        out.label[idx(jx, jy)] = label;
        queue.emplace_back(jx, jy);
      }
    }
  };
  flood(0);
  for (int iy = 0; iy < f.ny; ++iy) {
    for (int ix = 0; ix < f.nx; ++ix) {
      if (is_comp(ix, iy) && out.label[idx(ix, iy)] == -1) {
        out.label[idx(ix, iy)] = next;
        queue.emplace_back(ix, iy);
        flood(next);
        ++next;
      }
    }
  }

  // Bounded "components" without a single cell of resolvable depth are
  // sampling slivers pinched off near wedge tips, not regions this grid can
  // certify; mark them unresolved so counts are stable under refinement.
  std::vector<double> depth(next, -std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < n; ++i)
    if (out.label[i] > 0) depth[out.label[i]] = std::max(depth[out.label[i]], f.values[i]);
  std::vector<int> remap(next, -2);
  remap[0] = 0;
  int dense = 1;
  for (int l = 1; l < next; ++l)
    if (depth[l] > epsilon + f.cell) remap[l] = dense++;
  for (size_t i = 0; i < n; ++i)
    if (out.label[i] >= 0) out.label[i] = remap[out.label[i]];
  out.count = dense;
  return out;
}

int flood_components(const RasterField& f, double epsilon) {
  return flood_labels(f, epsilon).count;
}

namespace {

// Crossing of the iso-level on a grid edge, keyed so stitching is deterministic.
// Edge key: (iy*nx + ix)*2 + (0 horizontal / 1 vertical), where the edge starts
// at sample (ix,iy) and runs to (ix+1,iy) or (ix,iy+1).
struct Crossing {
  Point2 p;
  long nbr[2] = {-1, -1};
  int nnbr = 0;
};

}  // namespace

std::vector<std::vector<Point2>> contour(const RasterField& f, double epsilon) {
  std::map<long, Crossing> crossings;
  auto sample = [&](int ix, int iy) { return f.value(ix, iy); };
  auto inside = [&](int ix, int iy) { return sample(ix, iy) < epsilon; };
  auto edge_key = [&](int ix, int iy, int vertical) {
    return (static_cast<long>(iy) * f.nx + ix) * 2 + vertical;
  };
  auto interp = [&](int ix, int iy, int vertical) {
    const double v0 = sample(ix, iy);
    const double v1 = vertical ? sample(ix, iy + 1) : sample(ix + 1, iy);
    double t = (epsilon - v0) / (v1 - v0);
    t = std::clamp(t, 0.0, 1.0);
    const Point2 a = f.center(ix, iy);
    return vertical ? Point2{a.x, a.y + t * f.cell} : Point2{a.x + t * f.cell, a.y};
  };
  auto link = [&](long ka, long kb, int ixa, int iya, int va, int ixb, int iyb, int vb) {
    auto& A = crossings[ka];
    auto& B = crossings[kb];
    A.p = interp(ixa, iya, va);
    B.p = interp(ixb, iyb, vb);
    A.nbr[A.nnbr++] = kb;
    B.nbr[B.nnbr++] = ka;
  };

  // Square corners: 0=(ix,iy) 1=(ix+1,iy) 2=(ix+1,iy+1) 3=(ix,iy+1).
  // Square edges: bottom B=(ix,iy,H), right R=(ix+1,iy,V), top T=(ix,iy+1,H), left L=(ix,iy,V).
  for (int iy = 0; iy + 1 < f.ny; ++iy) {
    for (int ix = 0; ix + 1 < f.nx; ++ix) {
      const int c0 = inside(ix, iy), c1 = inside(ix + 1, iy), c2 = inside(ix + 1, iy + 1), c3 = inside(ix, iy + 1);
      const int code = c0 | (c1 << 1) | (c2 << 2) | (c3 << 3);
      if (code == 0 || code == 15) continue;
      struct E {
        long key;
        int ix, iy, v;
      };
      const E B{edge_key(ix, iy, 0), ix, iy, 0};
      const E R{edge_key(ix + 1, iy, 1), ix + 1, iy, 1};
      const E T{edge_key(ix, iy + 1, 0), ix, iy + 1, 0};
      const E L{edge_key(ix, iy, 1), ix, iy, 1};
      auto seg = [&](const E& a, const E& b) { link(a.key, b.key, a.ix, a.iy, a.v, b.ix, b.iy, b.v); };
      switch (code) {
        case 1: case 14: seg(L, B); break;
        case 2: case 13: seg(B, R); break;
        case 3: case 12: seg(L, R); break;
        case 4: case 11: seg(R, T); break;
        case 6: case 9:  seg(B, T); break;
        case 7: case 8:  seg(L, T); break;
        case 5: case 10: {
          // Saddle: disambiguate with the cell-center mean.
          const double mean = 0.25 * (sample(ix, iy) + sample(ix + 1, iy) + sample(ix + 1, iy + 1) + sample(ix, iy + 1));
          const bool center_in = mean < epsilon;
          const bool flip = (code == 5) ? center_in : !center_in;
          if (flip) {
            seg(L, B);
            seg(R, T);
          } else {
            seg(L, T);
            seg(B, R);
          }
          break;
        }
        default: break;
      }
    }
  }

  std::vector<std::vector<Point2>> loops;
  std::map<long, bool> used;
  for (auto& [key, c] : crossings) {
    if (used[key] || c.nnbr != 2) continue;
    std::vector<Point2> loop;
    long prev = -1;
    long cur = key;
    while (true) {
      used[cur] = true;
      const Crossing& cc = crossings[cur];
      loop.push_back(cc.p);
      const long next = (cc.nbr[0] == prev) ? cc.nbr[1] : cc.nbr[0];
      prev = cur;
      cur = next;
      if (cur == key) break;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

namespace {

// Uniform-grid point index; good enough for the dense samples the oracle produces.
class PointGrid {
 public:
  explicit PointGrid(const std::vector<Point2>& pts) : pts_(pts) {
    lo_ = hi_ = pts[0];
    for (const auto& p : pts) {
      lo_.x = std::min(lo_.x, p.x);
      lo_.y = std::min(lo_.y, p.y);
      hi_.x = std::max(hi_.x, p.x);
      hi_.y = std::max(hi_.y, p.y);
    }
    const double span = std::max({hi_.x - lo_.x, hi_.y - lo_.y, 1e-30});
    gn_ = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(pts.size()))));
    cell_ = span / gn_;
    buckets_.resize(static_cast<size_t>(gn_) * gn_);
    for (size_t i = 0; i < pts.size(); ++i) {
      buckets_[bucket(pts[i])].push_back(static_cast<int>(i));
    }
  }

  double nearest(Point2 p) const {
    double best = std::numeric_limits<double>::infinity();
    const int px = clampix(p.x - lo_.x), py = clampix(p.y - lo_.y);
    for (int ring = 0; ring < 2 * gn_ + 2; ++ring) {
      for (int dy = -ring; dy <= ring; ++dy) {
        for (int dx = -ring; dx <= ring; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
          const int cx = px + dx, cy = py + dy;
          if (cx < 0 || cx >= gn_ || cy < 0 || cy >= gn_) continue;
          for (int i : buckets_[static_cast<size_t>(cy) * gn_ + cx]) best = std::min(best, dist(p, pts_[i]));
        }
      }
      // Cells in farther rings only hold points at least (ring-1)*cell away.
      if (best < ring * cell_) break;
    }
    return best;
  }

 private:
  int clampix(double v) const { return std::clamp(static_cast<int>(v / cell_), 0, gn_ - 1); }
  size_t bucket(Point2 p) const {
    return static_cast<size_t>(clampix(p.y - lo_.y)) * gn_ + clampix(p.x - lo_.x);
  }
  const std::vector<Point2>& pts_;
  Point2 lo_, hi_;
  int gn_ = 1;
  double cell_ = 1.0;
  std::vector<std::vector<int>> buckets_;
};

double directed_hausdorff(const std::vector<Point2>& from, const PointGrid& to) {
  double worst = 0.0;
  for (const auto& p : from) worst = std::max(worst, to.nearest(p));
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  if (a.empty() || b.empty()) throw EmptyInput("hausdorff_distance needs non-empty point sets");
  const PointGrid ga(a), gb(b);
  return std::max(directed_hausdorff(a, gb), directed_hausdorff(b, ga));
}

double directed_hausdorff_distance(const std::vector<Point2>& from, const std::vector<Point2>& to) {
  if (from.empty() || to.empty()) throw EmptyInput("directed_hausdorff_distance needs non-empty point sets");
  const PointGrid gt(to);
  return directed_hausdorff(from, gt);
}

}  // namespace epshull
