#pragma once

#include <string>
#include <vector>

#include "epshull/jordan.hpp"

namespace epshull {

/// Tangent slope induced by a contributor offset a in the local frame:
/// p(a) = -a / sqrt(eps^2 - a^2), defined on |a| < eps.
struct SlopeFn {
  double epsilon = 1.0;
};
double slope_p(const SlopeFn& fn, double a);

/// Lower-bound function for right-derivative differences:
/// k(T,h) = (T*A(T) - h*P(T)) / (h*A(T) + T*P(T)) with P(T) = sqrt(h^2+T^2)/2,
/// A(T) = sqrt(eps^2 - P(T)^2). Defined while P(T) < eps; h in (0, 2*eps).
struct BoundFn {
  double epsilon = 1.0;
  double h = 0.5;
};
double bound_k(const BoundFn& fn, double T);

/// The feasible lower bound for f(s+h) - f(s) given the slope offset a at s:
/// T_hat = -sqrt(eps^2-a^2) + sqrt(eps^2-(a+h)^2), evaluated cancellation-free.
double bound_T_hat(double epsilon, double a, double h);

struct CurvatureSample {
  int curve = -1;
  int element = -1;
  double s = 0.0;        // arclength within the element
  double kappa = 0.0;    // analytic: -1/eps on arcs, 0 on straight offsets
  double kappa_fd = 0.0; // graph-formula value from central differences
  double fd_step = 0.0;
  bool defined = false;
};

/// Signed curvature samples along one Jordan curve, n per element. Analytic
/// values cross-checked by the graph formula f'' / (1+f'^2)^(3/2) on local
/// windows; samples whose stencil would leave the element are marked undefined.
std::vector<CurvatureSample> curvature_on_curve(const BoundaryAnalysis& an, const Decomposition& d, int curve_id,
                                                int n);

struct BvReport {
  bool ok = true;
  int windows = 0;
  long pairs_checked = 0;
  double worst_margin = 0.0;  // most negative slack seen against the -8h/(3*sqrt(3)*eps) bound
  std::string witness;        // first violation, if any
};

/// Verifies, on sampled local windows along the curve, that one-sided
/// derivative differences respect the chain
///   D+f(s+h) - D+f(s) >= p(a_s+h) - p(a_s) >= -8h/(3*sqrt(3)*eps)
/// and that the sampled D+f has the q-criterion total-variation bound.
BvReport bv_check(const BoundaryAnalysis& an, const JordanCurve& curve, int n);

}  // namespace epshull
