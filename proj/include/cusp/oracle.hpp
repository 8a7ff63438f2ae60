#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cusp/bounds.hpp"
#include "cusp/eigensolver.hpp"
#include "cusp/geometry.hpp"
#include "cusp/lattice.hpp"
#include "cusp/transverse.hpp"

namespace cusp {

enum class Provenance { Cartesian2d, Straightened2d, Twisted3d };

const char* to_string(Provenance p) noexcept;

/// Lattice mask of a truncated region. Exactly one of grid2 / grid3 is set.
struct RegionMask {
  Provenance provenance = Provenance::Cartesian2d;
  VectorX lo, hi;  // bounding box
  Scalar h = 0.0;
  std::optional<MaskedGrid<2>> grid2;
  std::optional<MaskedGrid<3>> grid3;
  std::vector<Scalar> cuts;  // s-values carrying Dirichlet walls

  int interior_count() const { return grid2 ? grid2->size() : (grid3 ? grid3->size() : 0); }
};

/// Tube coordinates (s, u) of Cartesian points near a plane tube: p =
/// Gamma(s) + u n(s), with Gamma(a) = (a, 0) and tangent (1, 0) there.
class TubeLocator {
 public:
  TubeLocator(const PlaneCurveSpec& curve, const ProfileSpec& profile,
              std::pair<Scalar, Scalar> s_cut, Scalar resolution);

  /// (s, u) with a < s < b and |u| < f(s), if p lies in the open tube.
  std::optional<std::pair<Scalar, Scalar>> locate(const Vector2& p) const;
  bool inside(const Vector2& p) const { return locate(p).has_value(); }

  Vector2 lo() const { return lo_; }
  Vector2 hi() const { return hi_; }

 private:
  Vector2 centre(std::size_t i, Scalar t) const;  // Hermite on segment i
  Scalar angle(std::size_t i, Scalar t) const;
  std::vector<std::size_t> candidates(const Vector2& p) const;

  PlaneCurveSpec curve_;
  ProfileSpec profile_;
  std::pair<Scalar, Scalar> cut_;
  CurveSamples samples_;
  Scalar ds_ = 0.0;
  Scalar reach_ = 0.0;
  Vector2 lo_, hi_;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<std::size_t>> buckets_;
};

/// Cartesian mask of {Gamma(s) + u n(s) : a < s < b, |u| < f(s)}.
RegionMask rasterize_region(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                            std::pair<Scalar, Scalar> s_cut, Scalar h);

/// Mask of the twisted straight tube {(s, L_theta(s)(f(s) omega_0))},
/// theta(s_cut.first) = 0.
RegionMask rasterize_twisted(const TwistSpec& twist, const ProfileSpec& profile,
                             std::pair<Scalar, Scalar> s_cut, Scalar h);

struct EigResult {
  std::vector<Scalar> values;  // ascending
  int requested = 0;
  int converged = 0;
  Scalar h = 0.0;
  std::vector<Scalar> residuals;
};

/// Lowest k eigenvalues of the Dirichlet Laplacian on the mask.
EigResult fd_dirichlet_eigs(const RegionMask& mask, int k,
                            const EigenSolverOptions& options = {});

using Potential2 = std::function<Scalar(Scalar s, Scalar u)>;

/// Lowest k eigenvalues of -d_s (1+u gamma)^{-2} d_s - d_u^2 + W - V on
/// {(s, u) : a < s < b, |u| < f(s)}.
EigResult straightened_eigs(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                            const Potential2& v, std::pair<Scalar, Scalar> s_cut, Scalar h,
                            int k, const EigenSolverOptions& options = {});

enum class OracleForm { Cartesian, Straightened, Twisted3d };

struct VerifyScenario {
  OracleForm form = OracleForm::Cartesian;
  PlaneCurveSpec curve = PlaneCurveSpec::zero();
  ProfileSpec profile;
  std::optional<TwistSpec> twist;  // Twisted3d only
  std::pair<Scalar, Scalar> s_cut{0.0, 1.0};
  Scalar lambda = 0.0;
  Scalar sigma = 1.5;
  Potential2 potential;                      // optional V(s, u) >= 0
  std::function<Scalar(Scalar)> potential_sup;  // sup_u V(s, u), needed with potential
  std::vector<Scalar> grid_steps{1.0 / 32, 1.0 / 64};
  int batch = 8;
  bool phase_space = true;
  Scalar quad_tol = 1e-10;
};

struct GridMoment {
  Scalar h = 0.0;
  Scalar moment = 0.0;
  int eigenvalues_below = 0;
  int unknowns = 0;
  EigResult eigs;
};

struct BoundVerdict {
  std::string name;  // "cusp_2d", "twist", "phase_space"
  Scalar value = 0.0;
  Scalar margin = 0.0;  // bound - (moment + convergence error)
  std::string verdict;  // certified | inconclusive | violated
};

struct VerifyReport {
  Scalar lambda = 0.0;
  Scalar sigma = 0.0;
  Scalar moment = 0.0;             // Richardson-extrapolated Riesz moment
  Scalar convergence_error = 0.0;  // |difference of the two finest moments|
  std::optional<Scalar> observed_order;
  std::vector<GridMoment> grids;
  std::vector<BoundVerdict> bounds;
  bool potential_exact = false;  // oracle used V(s,u); bounds its sup-profile
  Scalar volume = 0.0;           // truncated-region volume
};

/// Riesz moments of the truncated region at every grid step, extrapolated,
/// against every applicable bound.
VerifyReport verify_bound(const VerifyScenario& scenario);

/// Verdict for a moment with error estimate against a bound.
std::string classify(Scalar moment, Scalar error, Scalar bound);

}  // namespace cusp
