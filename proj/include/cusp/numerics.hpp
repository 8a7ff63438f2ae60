#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "cusp/types.hpp"

namespace cusp {

/// Semiclassical one-dimensional Lieb-Thirring constant
/// Gamma(sigma+1) / (sqrt(4 pi) Gamma(sigma+3/2)).
Scalar lt_constant(Scalar sigma);

/// First-kind Bessel function J_nu(x) for real nu >= 0, x >= 0.
Scalar bessel_j(Scalar nu, Scalar x);

/// Returns {J_nu(x), J_{nu+1}(x)} from one backward-recurrence sweep.
std::pair<Scalar, Scalar> bessel_j_pair(Scalar nu, Scalar x);

/// m-th positive zero of J_nu (m >= 1).
Scalar bessel_zero(Scalar nu, int m);

/// All positive zeros of J_nu that are <= limit, ascending.
std::vector<Scalar> bessel_zeros_below(Scalar nu, Scalar limit);

/// One transverse level of the (d-1)-dimensional Dirichlet unit disc.
struct DiscLevel {
  int angular_index = 0;  // k >= 0
  int radial_index = 1;   // m >= 1
  Scalar zero = 0.0;      // j_{k+(d-3)/2, m}
  int multiplicity = 1;
};

/// How angular degeneracy is counted in sums over disc levels.
///   Verbatim: every (k, m) counted once.
///   Weighted: (k, m) counted with the dimension of the degree-k spherical
///             harmonics on S^{d-2}.
enum class MultiplicityMode { Verbatim, Weighted };

/// Dimension of the space of degree-k spherical harmonics on S^{d-2}.
int harmonic_multiplicity(int d, int k);

/// Every disc level with zero <= threshold, sorted by zero.
std::vector<DiscLevel> enumerate_disc_levels(int d, Scalar threshold,
                                             MultiplicityMode mode);

struct QuadResult {
  Scalar value = 0.0;
  Scalar error = 0.0;  // estimated absolute error
  std::size_t evaluations = 0;
};

inline constexpr int kQuadDepthCap = 40;

/// Adaptive Simpson quadrature on the finite interval [a, b]. Throws
/// Error(NonConvergence) naming the worst subinterval when the depth cap is
/// hit before the local tolerance is met.
QuadResult adaptive_quad(const std::function<Scalar(Scalar)>& fn, Scalar a,
                         Scalar b, Scalar tol);

/// Sum of max(x, 0)^p. Nonpositive entries contribute nothing, also for p = 0.
Scalar riesz_sum(std::span<const Scalar> values, Scalar p);

/// Natural cubic spline through (x_i, y_i) with strictly increasing x.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<Scalar> x, std::vector<Scalar> y);

  Scalar operator()(Scalar t) const { return eval(t, 0); }
  /// order 0, 1 or 2. Outside the knot range the end cubic is extrapolated.
  Scalar eval(Scalar t, int order) const;

  Scalar front() const { return x_.front(); }
  Scalar back() const { return x_.back(); }
  const std::vector<Scalar>& knots() const { return x_; }
  const std::vector<Scalar>& values() const { return y_; }

 private:
  std::size_t segment(Scalar t) const;

  std::vector<Scalar> x_;
  std::vector<Scalar> y_;
  std::vector<Scalar> m_;  // second derivatives at knots
};

/// Shape-preserving (Fritsch-Carlson) cubic Hermite interpolant. Monotone
/// data gives a monotone interpolant.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<Scalar> x, std::vector<Scalar> y);

  Scalar operator()(Scalar t) const;
  Scalar front() const { return x_.front(); }
  Scalar back() const { return x_.back(); }

 private:
  std::vector<Scalar> x_;
  std::vector<Scalar> y_;
  std::vector<Scalar> d_;
};

}  // namespace cusp
