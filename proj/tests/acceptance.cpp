// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epshull/report.hpp"
#include "helpers.hpp"

using namespace epshull;
using namespace epshull::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

// The analysis holds references into the scene and graph, so both live behind
// stable pointers; the struct can then move freely.
struct Pipeline {
  std::unique_ptr<GeneratorScene> scene;
  std::unique_ptr<BoundaryGraph> graph;
  std::unique_ptr<BoundaryAnalysis> an;
  std::vector<SingularityClass> classes;
  Decomposition d;
};

Pipeline run_pipeline(const std::string& txt, int grid = 512) {
  Pipeline p;
  p.scene = std::make_unique<GeneratorScene>(parse_scene(txt));
  p.graph = std::make_unique<BoundaryGraph>(build_boundary(*p.scene));
  p.an = std::make_unique<BoundaryAnalysis>(*p.scene, *p.graph, grid);
  p.classes = p.an->classify_all_vertices();
  p.d = decompose(*p.an, p.classes);
  return p;
}

int count_tag(const Pipeline& p, SingTag tag) {
  int n = 0;
  for (const auto& c : p.classes)
    if (c.tag == tag) ++n;
  return n;
}

}  // namespace

int main() {
  const double kPi = std::acos(-1.0);
  const double kInvSqrt3 = 1.0 / std::sqrt(3.0);
  std::vector<std::pair<std::string, Criterion>> results;

  // ---------------------------------------------------------------- 1
  {
    Criterion c;
    auto timed = [&](const std::string& name, auto&& body) {
      const auto t0 = Clock::now();
      body();
      if (seconds_since(t0) >= 1.0) c.fail(name + " exceeded 1 s");
    };
    timed("single point", [&] {
      const auto p = run_pipeline(single_point_txt());
      if (p.d.curves.size() != 1) c.fail("single point: curve count");
      if (p.d.components.size() != 1) c.fail("single point: component count");
    });
    timed("tangent discs", [&] {
      const auto p = run_pipeline(tangent_discs_txt());
      if (p.d.curves.size() != 2) c.fail("tangent discs: curve count");
      if (p.d.components.size() != 1) c.fail("tangent discs: component count");
      std::vector<int> shared;
      for (int va : p.d.curves[0].vertices)
        for (int vb : p.d.curves[1].vertices)
          if (va == vb) shared.push_back(va);
      if (shared.size() != 1) c.fail("tangent discs: shared vertex count");
      if (!shared.empty()) {
        const auto& cls = p.classes[shared[0]];
        if (cls.tag != SingTag::SharpSharp || cls.q != QSplit::Q1)
          c.fail("tangent discs: shared vertex not sharp-sharp Q1");
      }
    });
    timed("lens", [&] {
      const auto p = run_pipeline(lens_txt());
      if (p.d.curves.size() != 1) c.fail("lens: curve count");
      int wedges = 0;
      for (const auto& cls : p.classes) {
        if (cls.tag != SingTag::Wedge) continue;
        ++wedges;
        if (std::fabs(cls.theta - kPi / 2) > 1e-6) c.fail("lens: wedge angle off pi/2");
      }
      if (wedges != 2) c.fail("lens: wedge count");
    });
    timed("triangle hole", [&] {
      const auto p = run_pipeline(triangle_hole_txt());
      if (p.d.components.size() != 2) c.fail("triangle: component count");
      if (p.d.curves.size() != 2) c.fail("triangle: curve count");
      if (count_tag(p, SingTag::Wedge) != 6) c.fail("triangle: wedge count");
    });
    timed("triple sharp", [&] {
      const auto p = run_pipeline(triple_sharp_txt());
      bool found = false;
      for (const auto& v : p.graph->vertices)
        if (dist(v.pos, {0, 0}) < 1e-6 && p.classes[v.id].tag == SingTag::Sharp) found = true;
      if (!found) c.fail("triple: origin not classified sharp");
    });
    results.emplace_back("criterion-1 canonical-scene topology", c);
  }

  // ------------------------------------------------------- 2, 3, 4, 5, 6
  Criterion c2, c3, c4, c5, c6;
  long lipschitz_windows = 0;
  long arc_samples = 0, straight_samples = 0;
  {
    const auto t0 = Clock::now();
    std::mt19937 rng(0xEB5);
    std::vector<Pipeline> canon;
    for (const auto& txt : {single_point_txt(), tangent_discs_txt(), lens_txt(), triangle_hole_txt(),
                            triple_sharp_txt(), stadium_txt(), q2_pocket_txt()})
      canon.push_back(run_pipeline(txt));

    for (int k = 0; k < 200; ++k) {
      const auto rs = random_scene(rng);
      Pipeline p;
      try {
        p = run_pipeline(rs.text);
      } catch (const OracleMismatch& e) {
        c2.fail(std::string("scene ") + std::to_string(k) + ": " + e.what());
        continue;
      }
      const RasterField& f = p.an->oracle_field();

      // 2: component agreement is enforced inside decompose; contour proximity:
      const auto loops = contour(f, p.scene->epsilon);
      std::vector<Point2> cpts;
      for (const auto& loop : loops) cpts.insert(cpts.end(), loop.begin(), loop.end());
      if (cpts.empty()) {
        c2.fail("scene " + std::to_string(k) + ": empty contour");
      } else {
        const double hd = hausdorff_distance(sample_elements(*p.graph, 0.5 * f.cell), cpts);
        if (hd > 2.0 * std::sqrt(2.0) * f.cell)
          c2.fail("scene " + std::to_string(k) + ": hausdorff " + std::to_string(hd) + " vs cell " +
                  std::to_string(f.cell));
      }

      // 3: structure
      const auto checks = check_decomposition(*p.scene, *p.graph, p.d, p.classes);
      if (!checks.partition_ok || !checks.simplicity_ok || !checks.pairwise_ok || !checks.inaccessible_ok)
        c3.fail("scene " + std::to_string(k) + ": " + checks.witness);

      // 4: Lipschitz windows (shared with canonical scenes below)
      for (const auto& e : p.graph->elements) {
        if (lipschitz_windows >= 900) break;
        const double mid = 0.5 * e.support.length();
        const ExtremalPair pr{UnitDir(e.support.tangent_at(mid)), element_contributor_point(*p.scene, e, mid)};
        try {
          const auto lr = p.an->local_repr(e.support.point_at(mid), pr, 17);
          ++lipschitz_windows;
          for (size_t i = 0; i < lr.samples.size(); ++i)
            for (size_t j = i + 1; j < lr.samples.size(); ++j) {
              const double slope = std::fabs(lr.samples[j].second - lr.samples[i].second) /
                                   (lr.samples[j].first - lr.samples[i].first);
              if (slope > kInvSqrt3 + 1e-6) c4.fail("scene " + std::to_string(k) + ": window slope " + std::to_string(slope));
            }
        } catch (const NoGraphRepresentation&) {
        }
      }

      // 5: curvature agreement on a subsample; 6: derivative bounds everywhere
      for (const auto& cv : p.d.curves) {
        if (k % 10 == 0) {
          for (const auto& cs : curvature_on_curve(*p.an, p.d, cv.id, 4)) {
            if (!cs.defined) continue;
            const bool arc = p.graph->elements[cs.element].support.type == ElementSupport::Type::Arc;
            (arc ? arc_samples : straight_samples)++;
            if (std::fabs(cs.kappa_fd - cs.kappa) > 10.0 * cs.fd_step)
              c5.fail("scene " + std::to_string(k) + ": curvature mismatch on element " +
                      std::to_string(cs.element));
          }
        }
        const auto bv = bv_check(*p.an, cv, 17);
        if (!bv.ok) c6.fail("scene " + std::to_string(k) + ": " + bv.witness);
      }
    }

    const double elapsed = seconds_since(t0);
    if (elapsed >= 60.0) c2.fail("runtime " + std::to_string(elapsed) + " s over budget");

    // canonical scenes contribute the remaining windows, samples, bv runs
    for (const auto& p : canon) {
      for (const auto& e : p.graph->elements) {
        for (const double frac : {0.25, 0.5, 0.75}) {
          if (lipschitz_windows >= 1000 && frac != 0.5) continue;
          const double sp = frac * e.support.length();
          const ExtremalPair pr{UnitDir(e.support.tangent_at(sp)), element_contributor_point(*p.scene, e, sp)};
          try {
            const auto lr = p.an->local_repr(e.support.point_at(sp), pr, 17);
            ++lipschitz_windows;
            for (size_t i = 0; i + 1 < lr.samples.size(); ++i) {
              const double slope = std::fabs(lr.samples[i + 1].second - lr.samples[i].second) /
                                   (lr.samples[i + 1].first - lr.samples[i].first);
              if (slope > kInvSqrt3 + 1e-6) c4.fail("canonical window slope " + std::to_string(slope));
            }
          } catch (const NoGraphRepresentation&) {
          }
        }
      }
      const double eps = p.scene->epsilon;
      for (const auto& cv : p.d.curves) {
        for (const auto& cs : curvature_on_curve(*p.an, p.d, cv.id, 16)) {
          if (!cs.defined) continue;
          const bool arc = p.graph->elements[cs.element].support.type == ElementSupport::Type::Arc;
          (arc ? arc_samples : straight_samples)++;
          if (arc) {
            if (std::fabs(cs.kappa_fd + 1.0 / eps) > 10.0 * cs.fd_step)
              c5.fail("canonical arc curvature off by " + std::to_string(cs.kappa_fd + 1.0 / eps));
          } else {
            if (std::fabs(cs.kappa) > 1e-9) c5.fail("straight-element analytic curvature nonzero");
            if (cs.fd_step >= eps / 256.0 && std::fabs(cs.kappa_fd) > 1e-9)
              c5.fail("straight-element graph curvature " + std::to_string(cs.kappa_fd));
          }
        }
        const auto bv = bv_check(*p.an, cv, 33);
        if (!bv.ok) c6.fail("canonical scene: " + bv.witness);
      }
    }
    if (lipschitz_windows < 1000) {
      // top up window count from extra random scenes
      while (lipschitz_windows < 1000) {
        const auto rs = random_scene(rng);
        const auto p = run_pipeline(rs.text);
        for (const auto& e : p.graph->elements) {
          const double mid = 0.5 * e.support.length();
          const ExtremalPair pr{UnitDir(e.support.tangent_at(mid)), element_contributor_point(*p.scene, e, mid)};
          try {
            const auto lr = p.an->local_repr(e.support.point_at(mid), pr, 17);
            ++lipschitz_windows;
            for (size_t i = 0; i + 1 < lr.samples.size(); ++i) {
              const double slope = std::fabs(lr.samples[i + 1].second - lr.samples[i].second) /
                                   (lr.samples[i + 1].first - lr.samples[i].first);
              if (slope > kInvSqrt3 + 1e-6) c4.fail("top-up window slope " + std::to_string(slope));
            }
          } catch (const NoGraphRepresentation&) {
          }
        }
      }
    }
    if (arc_samples == 0 || straight_samples == 0) c5.fail("missing curvature sample coverage");
  }
  results.emplace_back("criterion-2 oracle agreement on 200 random scenes", c2);
  results.emplace_back("criterion-3 decomposition structure on the same scenes", c3);
  {
    std::ostringstream os;
    os << lipschitz_windows << " windows";
    if (c4.ok) c4.detail = os.str();
    results.emplace_back("criterion-4 window Lipschitz bound", c4);
  }
  results.emplace_back("criterion-5 curvature values (graph formula)", c5);

  // ---------------------------------------------------------------- 6
  {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    // slope-derivative minimum
    for (const double eps : {0.5, 1.0, 3.0}) {
      const SlopeFn p{eps};
      const double h = 1e-5 * eps;
      double dmin = 0.0;
      for (int i = 0; i <= 4000; ++i) {
        const double a = -eps / 2 + eps * i / 4000.0;
        dmin = std::min(dmin, (slope_p(p, a + h) - slope_p(p, a - h)) / (2.0 * h));
      }
      if (std::fabs(dmin + 8.0 / (3.0 * std::sqrt(3.0) * eps)) > 1e-9 * (1.0 + 1.0 / eps))
        c6.fail("slope-derivative minimum off at eps " + std::to_string(eps));
    }
    // monotonicity on 100 random (eps, h); grids on the continuous branch
    // above the quotient's pole at t = -sqrt(2*h*eps - h^2)
    for (int k = 0; k < 100; ++k) {
      const double eps = 0.2 + 2.8 * uu(rng);
      const double h = (0.05 + 0.9 * uu(rng)) * 2.0 * eps;
      const double pole = -std::sqrt(2.0 * h * eps - h * h);
      const double hi = std::sqrt(std::max(0.0, eps * eps - (eps - h) * (eps - h)));
      const double lo = pole + (hi - pole) * 1e-3;
      double prev = -1e300;
      for (int i = 1; i < 48; ++i) {
        const double t = lo + (hi - lo) * i / 48.0;
        const double v = bound_k(BoundFn{eps, h}, t);
        if (v <= prev) c6.fail("bound function not increasing");
        prev = v;
      }
    }
    // feasible-minimum identity on 1000 random (a, h)
    for (int k = 0; k < 1000; ++k) {
      const double eps = 0.2 + 3.8 * uu(rng);
      const double a = (uu(rng) - 0.5) * eps;
      const double h = (0.02 + 0.96 * uu(rng)) * eps / 2.0;
      const double lhs = bound_k(BoundFn{eps, h}, bound_T_hat(eps, a, h));
      const double rhs = slope_p(SlopeFn{eps}, a + h);
      if (std::fabs(lhs - rhs) > 1e-9 * std::max(1.0, std::fabs(rhs)))
        c6.fail("feasible-minimum identity off by " + std::to_string(lhs - rhs));
    }
  }
  results.emplace_back("criterion-6 slope/bound identities and derivative lower bounds", c6);

  // ---------------------------------------------------------------- 7
  {
    Criterion c7;
    for (const auto& txt : {single_point_txt(), triangle_hole_txt(), q2_pocket_txt()}) {
      auto render = [&]() {
        const auto p = run_pipeline(txt);
        return report_to_json(build_report(*p.scene, *p.graph, p.classes, &p.d, nullptr, true, nullptr, nullptr));
      };
      if (render() != render()) c7.fail("JSON output differs between runs");
    }
    std::mt19937 rng(0xD15C);
    std::vector<std::string> texts = {lens_txt(), triangle_hole_txt(), q2_pocket_txt()};
    for (int k = 0; k < 20; ++k) texts.push_back(random_scene(rng).text);
    for (const auto& txt : texts) {
      const auto s = parse_scene(txt);
      BuildOptions off;
      off.prune = false;
      if (!graphs_equal(build_boundary(s), build_boundary(s, off), 4.0 * s.tol.pos))
        c7.fail("pruned and unpruned boundary graphs differ");
    }
    results.emplace_back("criterion-7 determinism and pruning neutrality", c7);
  }

  bool all = true;
  for (const auto& [name, c] : results) {
    all = all && c.ok;
    std::printf("%s %s%s%s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.empty() ? "" : " -- ",
                c.detail.c_str());
  }
  return all ? 0 : 1;
}
