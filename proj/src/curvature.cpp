#include "epshull/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "epshull/errors.hpp"

namespace epshull {

double slope_p(const SlopeFn& fn, double a) {
  const double e = fn.epsilon;
  if (!(std::fabs(a) < e)) throw DomainError("slope_p: |a| must be below epsilon");
  return -a / std::sqrt(e * e - a * a);
}

double bound_k(const BoundFn& fn, double T) {
  const double e = fn.epsilon;
  const double h = fn.h;
  if (!(h > 0.0 && h < 2.0 * e)) throw DomainError("bound_k: h must lie in (0, 2*epsilon)");
  const double P = 0.5 * std::sqrt(h * h + T * T);
  if (!(P < e)) throw DomainError("bound_k: P(T) must be below epsilon");
  const double A = std::sqrt(e * e - P * P);
  return (T * A - h * P) / (h * A + T * P);
}

double bound_T_hat(double epsilon, double a, double h) {
  // -sqrt(e^2-a^2) + sqrt(e^2-(a+h)^2) without cancellation:
  // difference of squares over the sum.
  const double b0 = std::sqrt(epsilon * epsilon - a * a);
  const double b1 = std::sqrt(epsilon * epsilon - (a + h) * (a + h));
  return -h * (2.0 * a + h) / (b0 + b1);
}

namespace {

// f at +/-h around an element-interior point, via one-sided windows in the
// frame (tangent, (x-y)/eps). Returns false when either window cannot reach h.
bool central_f(const BoundaryAnalysis& an, const BoundaryElement& el, double s, double h, double* f_plus,
               double* f_minus) {
  const Point2 x = el.support.point_at(s);
  const Vec2 t = el.support.tangent_at(s);
  const Point2 y = element_contributor_point(an.scene(), el, s);
  const ExtremalPair fwd{UnitDir(t), y};
  const ExtremalPair bwd{UnitDir(-t), y};
  try {
    const GraphWindow wf = an.make_window(x, fwd);
    const GraphWindow wb = an.make_window(x, bwd);
    if (wf.s_max < h || wb.s_max < h) return false;
    *f_plus = wf.f_at(h);
    *f_minus = wb.f_at(h);
    return true;
  } catch (const NoGraphRepresentation&) {
    return false;
  }
}

}  // namespace

std::vector<CurvatureSample> curvature_on_curve(const BoundaryAnalysis& an, const Decomposition& d, int curve_id,
                                                int n) {
  if (n < 1) throw DomainError("curvature_on_curve: need n >= 1");
  const BoundaryGraph& g = an.graph();
  const double eps = an.scene().epsilon;
  const JordanCurve& curve = d.curves.at(curve_id);
  std::vector<CurvatureSample> out;
  for (const auto& [eid, fwd] : curve.cycle) {
    const BoundaryElement& el = g.elements[eid];
    const double L = el.support.length();
    const bool arc = el.support.type == ElementSupport::Type::Arc;
    for (int k = 0; k < n; ++k) {
      CurvatureSample cs;
      cs.curve = curve_id;
      cs.element = eid;
      cs.s = L * (k + 0.5) / n;
      cs.kappa = arc ? -1.0 / eps : 0.0;

      // closed elements have no endpoint for the stencil to run into
      const double end_dist =
          el.support.full_circle ? std::numeric_limits<double>::infinity() : std::min(cs.s, L - cs.s);
      double h = std::min(eps / 128.0, 0.9 * end_dist);
      const double h_floor = std::max(1e-5 * eps, 200.0 * g.tol.pos);
      if (h < h_floor) {
        out.push_back(cs);
        continue;
      }
      double fp, fm;
      if (!central_f(an, el, cs.s, h, &fp, &fm)) {
        out.push_back(cs);
        continue;
      }
      const double fpp = (fp + fm) / (h * h);         // f(0) = 0 by construction
      const double fprime = (fp - fm) / (2.0 * h);
      cs.kappa_fd = fpp / std::pow(1.0 + fprime * fprime, 1.5);
      cs.fd_step = h;
      cs.defined = true;
      out.push_back(cs);
    }
    (void)fwd;
  }
  return out;
}

BvReport bv_check(const BoundaryAnalysis& an, const JordanCurve& curve, int n) {
  if (n < 3) throw DomainError("bv_check: need n >= 3 samples per window");
  const GeneratorScene& s = an.scene();
  const BoundaryGraph& g = an.graph();
  const double eps = s.epsilon;
  const double q = 8.0 / (3.0 * std::sqrt(3.0) * eps);
  const SlopeFn p{eps};
  BvReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();

  auto run_window = [&](Point2 anchor, const ExtremalPair& pair) {
    GraphWindow w;
    try {
      w = an.make_window(anchor, pair);
    } catch (const NoGraphRepresentation&) {
      return;
    }
    const double ds = w.s_max / (n - 1);
    const double tol_fd = 10.0 * ds;
    std::vector<double> sv(n), fv(n);
    for (int i = 0; i < n; ++i) {
      sv[i] = ds * i;
      fv[i] = w.f_at(sv[i]);
    }
    // forward quotients approximate D+f
    std::vector<double> D(n - 1);
    for (int i = 0; i + 1 < n; ++i) D[i] = (fv[i + 1] - fv[i]) / ds;

    // contributor offsets a_s; within one element the right-derivative branch
    // is the contributor itself (arcs) or the foot (slope 0, straight parts)
    std::vector<double> av(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
      const Point2 xs = w.base + w.e1 * sv[i] + w.e2 * fv[i];
      const auto ys = contributors_near(s, xs, 4.0 * s.tol.pos);
      double amin = std::numeric_limits<double>::infinity();
      for (const auto& y : ys) amin = std::min(amin, dot(xs - y, w.e1));
      av[i] = amin;
    }

    ++rep.windows;
    for (int i = 0; i + 1 < n - 1; ++i) {
      for (int j = i + 1; j < n - 1; ++j) {
        const double h = sv[j] - sv[i];
        const double diff = D[j] - D[i];
        const double floor_q = -q * h;
        ++rep.pairs_checked;
        const double margin = diff - (floor_q - tol_fd);
        rep.worst_margin = std::min(rep.worst_margin, margin);
        bool bad = diff < floor_q - tol_fd;
        double chain = floor_q;
        if (std::fabs(av[i] + h) < eps * (1.0 - 1e-12) && std::fabs(av[i]) < eps * (1.0 - 1e-12)) {
          chain = slope_p(p, av[i] + h) - slope_p(p, av[i]);
          if (diff < chain - tol_fd) bad = true;
          if (chain < floor_q - 1e-9 / eps) bad = true;
        }
        if (bad && rep.ok) {
          rep.ok = false;
          std::ostringstream os;
          os << "window at (" << w.base.x << "," << w.base.y << "): D+f(" << sv[j] << ")-D+f(" << sv[i]
             << ") = " << diff << " vs chain " << chain << " vs bound " << floor_q << " (tol " << tol_fd << ")";
          rep.witness = os.str();
        }
      }
    }
    // q-criterion total-variation bound on the sampled derivative
    double tv = 0.0;
    for (size_t i = 0; i + 1 < D.size(); ++i) tv += std::fabs(D[i + 1] - D[i]);
    const double range = sv[n - 2] - sv[0];
    const double spread = *std::max_element(D.begin(), D.end()) - *std::min_element(D.begin(), D.end());
    if (tv > spread + 2.0 * q * range + 2.0 * n * tol_fd && rep.ok) {
      rep.ok = false;
      rep.witness = "sampled derivative exceeds the q-criterion variation bound";
    }
  };

  for (const auto& [eid, fwd] : curve.cycle) {
    const BoundaryElement& el = g.elements[eid];
    const double L = el.support.length();
    // window anchored at the element's start vertex, looking into the element
    if (el.v_start >= 0) {
      const Point2 x = g.vertices[el.v_start].pos;
      const ExtremalPair pr{UnitDir(el.support.tangent_at(0.0)), element_contributor_point(s, el, 0.0)};
      run_window(x, pr);
    }
    // window anchored mid-element
    const Point2 xm = el.support.point_at(0.5 * L);
    const ExtremalPair prm{UnitDir(el.support.tangent_at(0.5 * L)), element_contributor_point(s, el, 0.5 * L)};
    run_window(xm, prm);
    (void)fwd;
  }
  return rep;
}

}  // namespace epshull
