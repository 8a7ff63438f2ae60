#pragma once

#include "cusp/geometry.hpp"

namespace cusp {

/// Metric factor h of the straightened tube and its first two s-derivatives.
struct MetricFactor {
  Scalar h = 1.0;
  Scalar h1 = 0.0;
  Scalar h11 = 0.0;
};

/// Plane tube: h = 1 + u gamma(s), h1 = u gamma', h11 = u gamma''.
MetricFactor metric_2d(const PlaneCurveSpec& curve, Scalar s, Scalar u);

/// Tube in R^d: h = 1 - kappa_1 sum_mu R_{mu 2} u_mu with h1, h11 from the
/// closed-form index sums over R, K, K' and K''. `u` holds the d-1
/// transverse coordinates.
MetricFactor metric_nd(const CurveSpecNd& curve, const TangFrame& frame, Scalar s,
                       const VectorX& u);

/// Curvature-induced potential of the straightened plane tube,
///   W = -gamma^2 / (4 h^2) + u gamma'' / (2 h^3) - 5 u^2 gamma'^2 / (4 h^4).
/// Throws Singularity when h vanishes.
Scalar w_full_2d(const PlaneCurveSpec& curve, Scalar s, Scalar u);

/// Same potential in R^d: -kappa_1^2/(4h^2) + h11/(2h^3) - 5 h1^2/(4h^4).
Scalar w_full_nd(const CurveSpecNd& curve, const TangFrame& frame, Scalar s,
                 const VectorX& u);

/// Cross-section-uniform majorant of -W for the plane tube. Requires
/// f|gamma| < 1 at s (WidthCondition otherwise).
Scalar w_minus_2d(const PlaneCurveSpec& curve, const ProfileSpec& profile, Scalar s);

/// Majorant of -W for circular tubes in R^d, assembled term by term from the
/// absolute index sums over R, K, K', K''.
Scalar w_minus_nd(const CurveSpecNd& curve, const TangFrame& frame,
                  const ProfileSpec& profile, Scalar s);

/// The same majorant from explicit matrices (rotation block r, Frenet-Serret
/// matrix k and its derivatives). Exposed so degenerate instantiations
/// (e.g. d = 2) can be evaluated directly.
Scalar w_minus_from_matrices(const MatrixX& r, const MatrixX& k, const MatrixX& k_dot,
                             const MatrixX& k_ddot, Scalar f);

}  // namespace cusp
