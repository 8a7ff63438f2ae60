#include "cusp/effective_potential.hpp"

#include <cmath>
#include <sstream>

namespace cusp {

namespace {

Scalar checked_gap(Scalar f, Scalar kappa, Scalar s) {
  const Scalar gap = 1.0 - f * std::abs(kappa);
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "width condition violated at s = " << s << ": f|curvature| = " << 1.0 - gap;
    throw Error(ErrorCode::WidthCondition, msg.str());
  }
  return gap;
}

void check_metric(Scalar h, Scalar s) {
  if (std::abs(h) < 1e-300) {
    std::ostringstream msg;
    msg << "metric factor vanishes at s = " << s;
    throw Error(ErrorCode::Singularity, msg.str());
  }
}

}  // namespace

MetricFactor metric_2d(const PlaneCurveSpec& curve, Scalar s, Scalar u) {
  const Jet g = curve.gamma.jet(s);
  return {1.0 + u * g.value, u * g.d1, u * g.d2};
}

MetricFactor metric_nd(const CurveSpecNd& curve, const TangFrame& frame, Scalar s,
                       const VectorX& u) {
  const int d = curve.dimension;
  if (u.size() != d - 1) throw Error(ErrorCode::Domain, "metric_nd: u must have d-1 entries");
  const MatrixX r = frame.rotation(s);
  const MatrixX k = curve.frenet_matrix(s, 0);
  const MatrixX kd = curve.frenet_matrix(s, 1);
  const MatrixX kdd = curve.frenet_matrix(s, 2);
  const Eigen::Index n = d - 1;

  // column "1" of the products, restricted to rows alpha = 2..d
  const VectorX first = kd.col(0).tail(n) - (k * k).col(0).tail(n);
  const Scalar kappa1 = k(0, 1);
  const VectorX second = kdd.col(0).tail(n) - (kd * k + 2.0 * k * kd).col(0).tail(n) +
                         (k * k * k).col(0).tail(n) + kappa1 * kappa1 * k.col(0).tail(n);
  const VectorX ru = r.transpose() * u;  // sum_mu u_mu R_{mu alpha}

  MetricFactor m;
  m.h = 1.0 - kappa1 * r.col(0).dot(u);
  m.h1 = ru.dot(first);
  m.h11 = ru.dot(second);
  return m;
}

Scalar w_full_2d(const PlaneCurveSpec& curve, Scalar s, Scalar u) {
  const Jet g = curve.gamma.jet(s);
  const Scalar h = 1.0 + u * g.value;
  check_metric(h, s);
  const Scalar h2 = h * h;
  return -g.value * g.value / (4.0 * h2) + u * g.d2 / (2.0 * h2 * h) -
         1.25 * u * u * g.d1 * g.d1 / (h2 * h2);
}

Scalar w_full_nd(const CurveSpecNd& curve, const TangFrame& frame, Scalar s,
                 const VectorX& u) {
  const MetricFactor m = metric_nd(curve, frame, s, u);
  check_metric(m.h, s);
  const Scalar k1 = curve.kappa1(s);
  const Scalar h2 = m.h * m.h;
  return -0.25 * k1 * k1 / h2 + 0.5 * m.h11 / (h2 * m.h) - 1.25 * m.h1 * m.h1 / (h2 * h2);
}

Scalar w_minus_2d(const PlaneCurveSpec& curve, const ProfileSpec& profile, Scalar s) {
  const Jet g = curve.gamma.jet(s);
  const Scalar f = profile(s);
  const Scalar gap = checked_gap(f, g.value, s);
  const Scalar gap2 = gap * gap;
  return g.value * g.value / (4.0 * gap2) + f * std::abs(g.d2) / (2.0 * gap2 * gap) +
         5.0 * f * f * g.d1 * g.d1 / (4.0 * gap2 * gap2);
}

Scalar w_minus_from_matrices(const MatrixX& r, const MatrixX& k, const MatrixX& k_dot,
                             const MatrixX& k_ddot, Scalar f) {
  const Eigen::Index d = k.rows();
  const Eigen::Index n = d - 1;
  if (r.rows() != n || r.cols() != n) {
    throw Error(ErrorCode::Domain, "w_minus: rotation block must be (d-1)x(d-1)");
  }
  const Scalar kappa1 = k(0, 1);
  const Scalar gap = 1.0 - f * std::abs(kappa1);
  if (!(gap > 0.0)) throw Error(ErrorCode::WidthCondition, "w_minus: f|kappa_1| >= 1");

  // One-based index alpha = 2..d is row a = 1..d-1 of K and column a-1 of
  // R; index 1 is row 0.
  Scalar second = 0.0, mixed = 0.0, triple = 0.0, first = 0.0, pair = 0.0;
  for (Eigen::Index mu = 0; mu < n; ++mu) {
    Scalar s_second = 0.0, s_mixed = 0.0, s_triple = 0.0, s_first = 0.0, s_pair = 0.0;
    for (Eigen::Index a = 1; a < d; ++a) {
      const Scalar rma = r(mu, a - 1);
      s_second += std::abs(rma * k_ddot(a, 0));
      s_first += std::abs(rma * k_dot(a, 0));
      for (Eigen::Index b = 0; b < d; ++b) {
        s_mixed += std::abs(rma) *
                   (std::abs(k_dot(a, b) * k(b, 0)) + 2.0 * std::abs(k(a, b) * k_dot(b, 0)));
        s_pair += std::abs(rma * k(a, b) * k(b, 0));
        for (Eigen::Index c = 0; c < d; ++c) {
          s_triple += std::abs(rma * k(a, b) * k(b, c) * k(c, 0));
        }
      }
    }
    second += s_second * s_second;
    mixed += s_mixed * s_mixed;
    triple += s_triple * s_triple;
    first += s_first * s_first;
    pair += s_pair * s_pair;
  }

  const Scalar g2 = gap * gap;
  const Scalar c3 = f / (2.0 * g2 * gap);
  const Scalar c4 = 5.0 * f / (4.0 * g2 * g2);
  return kappa1 * kappa1 / (4.0 * g2) +
         c3 * (std::sqrt(second) + std::sqrt(mixed) + std::sqrt(triple)) +
         c4 * (std::sqrt(first) + std::sqrt(pair));
}

Scalar w_minus_nd(const CurveSpecNd& curve, const TangFrame& frame,
                  const ProfileSpec& profile, Scalar s) {
  const Scalar f = profile(s);
  checked_gap(f, curve.kappa1(s), s);
  return w_minus_from_matrices(frame.rotation(s), curve.frenet_matrix(s, 0),
                               curve.frenet_matrix(s, 1), curve.frenet_matrix(s, 2), f);
}

}  // namespace cusp
