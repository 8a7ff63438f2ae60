#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cusp/geometry.hpp"
#include "cusp/lattice.hpp"
#include "cusp/numerics.hpp"

namespace cusp {

/// Bounded planar cross section omega_0. Coordinates are stored relative to
/// the twist axis, which is the centroid unless overridden.
class CrossSection {
 public:
  enum class Shape { Disc, Rectangle, Ellipse, Polygon };

  static CrossSection disc(Scalar radius);
  /// Full side lengths a (along x) and b (along y).
  static CrossSection rectangle(Scalar a, Scalar b);
  /// Semi-axes a (along x) and b (along y).
  static CrossSection ellipse(Scalar a, Scalar b);
  /// Simple polygon; the ring is closed automatically.
  static CrossSection polygon(std::vector<Vector2> vertices);
  static CrossSection polygon_csv(const std::string& path);

  /// Moves the twist axis to `point`, given in the shape's centroid frame.
  CrossSection with_axis(const Vector2& point) const;

  Shape shape() const { return shape_; }
  std::string shape_name() const;
  bool centroid_at_origin() const { return axis_.isZero(0.0); }

  bool contains(const Vector2& p) const;
  /// rho = sup |p| over the section.
  Scalar circumradius() const;
  std::pair<Vector2, Vector2> bounding_box() const;
  Scalar area() const;
  Scalar radius() const { return a_; }

  MaskedGrid<2> mask(Scalar h) const;

 private:
  Shape shape_ = Shape::Disc;
  Scalar a_ = 1.0, b_ = 1.0;
  std::vector<Vector2> vertices_;  // centroid frame
  Vector2 axis_ = Vector2::Zero();  // twist axis in the centroid frame
};

/// Rotation rate theta'(s) of the cross section along a straight axis.
struct TwistSpec {
  ScalarFunction theta_dot;
  CrossSection section;

  /// c(s) = f(s) theta'(s).
  Scalar twist_rate(const ProfileSpec& profile, Scalar s) const {
    return profile(s) * theta_dot(s);
  }
  TwistCondition condition() const { return {theta_dot, section.circumradius()}; }
};

/// Dirichlet levels (pi j / 2f)^2, j = 1..count, of the interval (-f, f).
std::vector<Scalar> interval_levels(Scalar f, int count);

struct WeightedLevel {
  Scalar level = 0.0;
  int multiplicity = 1;
};

/// Dirichlet levels (j_{k+(d-3)/2, m} / f)^2 <= threshold of the
/// (d-1)-dimensional disc of radius f.
std::vector<WeightedLevel> disc_levels(Scalar f, int d, Scalar threshold,
                                       MultiplicityMode mode);

/// Lowest `count` eigenvalues of -Delta_D + c2 L_trans^2 on the section,
/// discretised as L_h + c2 A^T A with A the skew rotation generator.
std::vector<Scalar> twist_eigs(const CrossSection& section, Scalar c2, int count, Scalar h);

/// Assembled twisted transverse operator (exposed for structural tests).
struct TwistOperator {
  MaskedGrid<2> grid;
  SparseMatrix laplacian;
  SparseMatrix generator;  // A, skew
  SparseMatrix matrix(Scalar c2) const;
};

TwistOperator assemble_twist_operator(const CrossSection& section, Scalar h);

/// Eigenvalues lambda_j(c^2), j = 1..count, tabulated on a grid of c^2 and
/// interpolated with monotone cubics.
class TwistTable {
 public:
  TwistTable(std::vector<Scalar> c2_grid, std::vector<std::vector<Scalar>> eigenvalues);

  /// Interpolated spectrum at c2; throws TableCoverage beyond the grid.
  std::vector<Scalar> eigenvalues(Scalar c2) const;
  Scalar c2_max() const { return grid_.back(); }
  int count() const { return count_; }
  const std::vector<Scalar>& grid() const { return grid_; }
  const std::vector<std::vector<Scalar>>& samples() const { return samples_; }

 private:
  std::vector<Scalar> grid_;
  std::vector<std::vector<Scalar>> samples_;  // [grid point][level]
  std::vector<MonotoneCubic> curves_;
  int count_ = 0;
};

struct TwistTableOptions {
  int points = 33;
  Scalar relative_budget = 5e-3;
  int max_refinements = 3;
};

/// Builds the table on [0, c2_max], doubling the grid until the
/// interpolant predicts the newly computed midpoints within the budget.
TwistTable build_twist_table(const CrossSection& section, Scalar c2_max, int count, Scalar h,
                             const TwistTableOptions& options = {});

}  // namespace cusp
