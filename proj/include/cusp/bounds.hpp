#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "cusp/effective_potential.hpp"
#include "cusp/geometry.hpp"
#include "cusp/transverse.hpp"

namespace cusp {

/// Where the s-integral runs.
struct IntegrationRange {
  enum class Kind { TwoSided, OneSided, Finite };
  Kind kind = Kind::TwoSided;
  Scalar a = 0.0;  // scan center (two-sided), s_min (one-sided), left end (finite)
  Scalar b = 0.0;  // right end (finite)

  static IntegrationRange two_sided(Scalar center = 0.0) { return {Kind::TwoSided, center, 0.0}; }
  static IntegrationRange one_sided(Scalar s_min) { return {Kind::OneSided, s_min, 0.0}; }
  static IntegrationRange finite(Scalar a, Scalar b) { return {Kind::Finite, a, b}; }
};

enum class Regime { Standard, Extended };

/// Factor r(sigma, 1) applied to the constant in the extended regime.
inline constexpr Scalar kExtendedFactor = 2.0;

struct BoundQuery {
  Scalar sigma = 1.5;
  std::function<Scalar(Scalar)> v = [](Scalar) { return 0.0; };  // sup-profile of V
  IntegrationRange range;
  Regime regime = Regime::Standard;
  Scalar quad_tol = 1e-10;

  int support_margin = 10;      // consecutive empty probes that end a scan
  Scalar scan_stride = 1.0 / 64.0;
  Scalar scan_limit = 1e7;      // largest probed distance from the scan start
  int panels = 64;
  int report_samples = 257;

  static BoundQuery constant(Scalar lambda, Scalar sigma,
                             IntegrationRange range = IntegrationRange::two_sided());
};

struct IntegrandSample {
  Scalar s = 0.0;
  Scalar value = 0.0;
  int truncation = 0;  // J(s): number of active transverse levels
};

struct BoundReport {
  Scalar value = 0.0;
  Scalar l_constant = 0.0;
  std::vector<IntegrandSample> samples;
  std::optional<std::pair<Scalar, Scalar>> support;
  Scalar quad_error = 0.0;
  Scalar norm = 1.0;          // ||1 + f|gamma|||, ||1 + f|kappa_1|||, or rho||f theta'||
  std::pair<Scalar, Scalar> window{0.0, 0.0};  // interval the norm was taken over
};

BoundReport bound_moment_2d(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                            const BoundQuery& q);

BoundReport bound_moment_nd(const CurveSpecNd& curve, const TangFrame& frame,
                            const ProfileSpec& profile, const BoundQuery& q, int d,
                            MultiplicityMode mode = MultiplicityMode::Weighted);

/// Analytic disc levels j_{m,k}^2 + c^2 m^2 (disc of the given radius).
struct DiscLevelSource {
  Scalar radius = 1.0;
  MultiplicityMode mode = MultiplicityMode::Weighted;
};

using LevelSource = std::variant<DiscLevelSource, const TwistTable*>;

BoundReport bound_moment_twist(const TwistSpec& twist, const ProfileSpec& profile,
                               const BoundQuery& q, const LevelSource& source);

/// Largest c(s)^2 = (f theta')^2 the twist integrand can touch for this
/// query; sizes the eigenvalue table.
Scalar twist_c2_extent(const TwistSpec& twist, const ProfileSpec& profile, const BoundQuery& q);

/// L^cl Lambda^{sigma+1} vol; sigma >= 1.
Scalar phase_space_bound(Scalar lambda, Scalar vol, Scalar sigma);

struct ThinComparison {
  Scalar cusp_rhs = 0.0;
  Scalar phase_rhs = 0.0;
  Scalar ratio = 0.0;
  bool lambda_admissible = false;
  std::optional<Scalar> curved_diagnostic;  // only when a curvature bound c is given
};

/// Thin-cusp right-hand sides for f = (pi/2) max(|s|, N)^{-1-alpha}. With
/// `c` (a bound on |f gamma|, 0 < c < 1) the curved-cusp intermediate
/// constant is evaluated as a diagnostic.
ThinComparison thin_comparison(Scalar alpha, Scalar n, Scalar lambda, Scalar sigma,
                               std::optional<Scalar> c = std::nullopt);

}  // namespace cusp
