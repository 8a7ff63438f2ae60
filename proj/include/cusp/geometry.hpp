#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cusp/numerics.hpp"
#include "cusp/types.hpp"

namespace cusp {

/// Value and first two derivatives of a scalar function at one point.
struct Jet {
  Scalar value = 0.0;
  Scalar d1 = 0.0;
  Scalar d2 = 0.0;
};

/// A scalar function of the arc length with analytic (or spline) derivatives.
///
/// Families:
///   zero                 0
///   constant(a)          a
///   gaussian(a, s0, w)   a exp(-(s - s0)^2 / (2 w^2))
///   power_tail(alpha, N) (pi/2) max(|s|, N)^(-1-alpha)
///   table                natural cubic spline through samples; when the
///                        table carries d1/d2 columns those are splined too
class ScalarFunction {
 public:
  enum class Family { Zero, Constant, Gaussian, PowerTail, Table };

  static ScalarFunction zero();
  static ScalarFunction constant(Scalar a);
  static ScalarFunction gaussian(Scalar a, Scalar s0, Scalar w);
  static ScalarFunction power_tail(Scalar alpha, Scalar n);
  static ScalarFunction table(std::vector<Scalar> s, std::vector<Scalar> values,
                              std::vector<Scalar> d1 = {},
                              std::vector<Scalar> d2 = {});

  Family family() const { return family_; }
  std::string family_name() const;

  Jet jet(Scalar s) const;
  Scalar operator()(Scalar s) const { return jet(s).value; }
  Scalar d1(Scalar s) const { return jet(s).d1; }
  Scalar d2(Scalar s) const { return jet(s).d2; }

  /// Knot range for tables; the whole line otherwise.
  std::pair<Scalar, Scalar> domain() const;

  Scalar amplitude() const { return a_; }
  Scalar center() const { return s0_; }
  Scalar width() const { return w_; }
  Scalar alpha() const { return alpha_; }
  Scalar plateau() const { return n_; }

 private:
  Family family_ = Family::Zero;
  Scalar a_ = 0.0, s0_ = 0.0, w_ = 1.0, alpha_ = 1.0, n_ = 1.0;
  CubicSpline value_spline_, d1_spline_, d2_spline_;
  bool has_d1_ = false, has_d2_ = false;
};

/// Cusp half-width f(s) > 0.
struct ProfileSpec {
  ScalarFunction f;
  bool decays = false;  // lim_{|s|->inf} f(s) = 0

  Scalar operator()(Scalar s) const { return f(s); }
  Scalar derivative(Scalar s) const { return f.d1(s); }
};

enum class ProfileFamily { PowerTail, Constant, Gaussian, Table };

struct ProfileParams {
  Scalar alpha = 1.0;
  Scalar n = 1.0;
  Scalar a = 1.0;
  Scalar s0 = 0.0;
  Scalar w = 1.0;
  std::vector<Scalar> s, values, d1, d2;  // table family
  bool table_decays = false;
};

ProfileSpec make_profile(ProfileFamily family, const ProfileParams& params);

enum class Smoothness { Analytic, Spline };

/// Signed curvature gamma(s) of a unit-speed plane reference curve.
struct PlaneCurveSpec {
  ScalarFunction gamma;
  Smoothness smoothness = Smoothness::Analytic;

  static PlaneCurveSpec zero() { return {ScalarFunction::zero()}; }
  static PlaneCurveSpec constant(Scalar g) { return {ScalarFunction::constant(g)}; }
  static PlaneCurveSpec gaussian_bump(Scalar c, Scalar s0, Scalar w) {
    return {ScalarFunction::gaussian(c, s0, w)};
  }
  static PlaneCurveSpec table(std::vector<Scalar> s, std::vector<Scalar> values,
                              std::vector<Scalar> d1 = {}, std::vector<Scalar> d2 = {}) {
    return {ScalarFunction::table(std::move(s), std::move(values), std::move(d1),
                                  std::move(d2)),
            Smoothness::Spline};
  }
};

/// Curvatures kappa_1..kappa_{d-1} of a curve in R^d. Matrix indices are
/// zero-based: K(0,1) = kappa_1.
struct CurveSpecNd {
  int dimension = 3;
  std::vector<ScalarFunction> kappa;

  CurveSpecNd(int d, std::vector<ScalarFunction> curvatures);

  /// Frenet-Serret matrix and its first two derivatives (order 0, 1, 2).
  MatrixX frenet_matrix(Scalar s, int order = 0) const;
  Scalar kappa1(Scalar s) const { return kappa.front()(s); }
};

/// Rotation R(s) of the normal block solving R' + R K_normal = 0, sampled
/// on a uniform grid.
class TangFrame {
 public:
  TangFrame(const CurveSpecNd& curve, std::vector<Scalar> grid,
            std::vector<MatrixX> samples, std::vector<Scalar> projections,
            Scalar step);

  /// R(s); RK4 from the nearest sample at or below s. Throws FrameCoverage
  /// outside the sampled range.
  MatrixX rotation(Scalar s) const;
  /// R'(s) = -R(s) K_normal(s).
  MatrixX rotation_derivative(Scalar s) const;

  const std::vector<Scalar>& grid() const { return grid_; }
  const std::vector<MatrixX>& samples() const { return samples_; }
  const std::vector<Scalar>& projection_events() const { return projections_; }
  Scalar step() const { return step_; }
  Scalar begin() const { return grid_.front(); }
  Scalar end() const { return grid_.back(); }
  bool covers(Scalar s) const { return s >= begin() && s <= end(); }
  const CurveSpecNd& curve() const { return curve_; }

 private:
  CurveSpecNd curve_;
  std::vector<Scalar> grid_;
  std::vector<MatrixX> samples_;
  std::vector<Scalar> projections_;
  Scalar step_;
};

/// Normal block K_{mu nu}, mu, nu = 2..d of the Frenet-Serret matrix.
MatrixX normal_block(const MatrixX& k);

/// Fourth-order integration of R' = -R K_normal from s_range.first with
/// R(s_range.first) = initial (identity when empty). Re-projects onto SO(d-1)
/// only when the orthogonality drift exceeds 1e-8; halves the step when the
/// drift exceeds 1e-4.
TangFrame tang_frame(const CurveSpecNd& curve, std::pair<Scalar, Scalar> s_range,
                     Scalar step, std::optional<MatrixX> initial = std::nullopt);

/// Sampled unit-speed plane curve.
struct CurveSamples {
  std::vector<Scalar> s;
  std::vector<Scalar> a;
  std::vector<Scalar> b;
  std::vector<Scalar> angle;  // tangent angle: (a', b') = (cos, sin)
};

/// Integrates a' = cos(theta), b' = sin(theta), theta' = gamma from s0 with
/// (a, b)(s0) = (a0, b0) and theta(s0) = angle0, reporting every grid point.
CurveSamples reconstruct_curve(const PlaneCurveSpec& curve, Scalar s0, Scalar a0,
                               Scalar b0, std::vector<Scalar> grid,
                               Scalar angle0 = 0.0);

/// Centerline of a curve in R^d rebuilt from its curvatures (Frenet-Serret
/// with identity frame at s_range.first). Row i is Gamma(grid[i]).
struct CurveSamplesNd {
  std::vector<Scalar> s;
  MatrixX points;
};

CurveSamplesNd reconstruct_curve_nd(const CurveSpecNd& curve,
                                    std::pair<Scalar, Scalar> s_range, Scalar step);

/// Twist data needed for the rho ||f theta'|| < 1 condition.
struct TwistCondition {
  ScalarFunction theta_dot;
  Scalar rho = 1.0;
};

struct ValidityReport {
  Scalar sup_width_curvature = 0.0;  // sup |f gamma| or sup |f kappa_1|
  bool passes_width = true;
  bool passes_injectivity = true;
  Scalar resolution = 0.0;           // centerline sampling step
  std::vector<std::pair<Scalar, Scalar>> offending_pairs;
  std::optional<Scalar> twist_sup;   // rho ||f theta'||_inf
  bool passes_twist = true;

  bool ok() const { return passes_width && passes_injectivity && passes_twist; }
};

/// Dense-grid supremum of |fn| over [a, b], doubling the grid until two
/// successive estimates agree within tol.
Scalar sup_abs(const std::function<Scalar(Scalar)>& fn, Scalar a, Scalar b,
               Scalar tol = 1e-6);

ValidityReport validity_check(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                              std::pair<Scalar, Scalar> s_range,
                              const std::optional<TwistCondition>& twist = std::nullopt);

ValidityReport validity_check(const CurveSpecNd& curve, const ProfileSpec& profile,
                              std::pair<Scalar, Scalar> s_range,
                              const std::optional<TwistCondition>& twist = std::nullopt);

/// Columns read from a header-first CSV file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Scalar>> columns;

  const std::vector<Scalar>* column(const std::string& name) const;
};

CsvTable read_csv_table(const std::string& path);

/// Table function from a CSV with columns s,value and optional d1,d2.
ScalarFunction load_function_csv(const std::string& path);

}  // namespace cusp
