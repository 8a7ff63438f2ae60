#include "cusp/geometry.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace cusp {

// ---------------------------------------------------------------------------
// ScalarFunction
// ---------------------------------------------------------------------------

ScalarFunction ScalarFunction::zero() { return {}; }

ScalarFunction ScalarFunction::constant(Scalar a) {
  ScalarFunction fn;
  fn.family_ = Family::Constant;
  fn.a_ = a;
  return fn;
}

ScalarFunction ScalarFunction::gaussian(Scalar a, Scalar s0, Scalar w) {
  if (!(w > 0.0)) throw Error(ErrorCode::Domain, "gaussian: width must be > 0");
  ScalarFunction fn;
  fn.family_ = Family::Gaussian;
  fn.a_ = a;
  fn.s0_ = s0;
  fn.w_ = w;
  return fn;
}

ScalarFunction ScalarFunction::power_tail(Scalar alpha, Scalar n) {
  if (!(alpha > 0.0) || !(n > 0.0)) {
    throw Error(ErrorCode::Domain, "power_tail: requires alpha > 0 and N > 0");
  }
  ScalarFunction fn;
  fn.family_ = Family::PowerTail;
  fn.alpha_ = alpha;
  fn.n_ = n;
  return fn;
}

ScalarFunction ScalarFunction::table(std::vector<Scalar> s, std::vector<Scalar> values,
                                     std::vector<Scalar> d1, std::vector<Scalar> d2) {
  ScalarFunction fn;
  fn.family_ = Family::Table;
  if (!d1.empty()) {
    fn.d1_spline_ = CubicSpline(s, std::move(d1));
    fn.has_d1_ = true;
  }
  if (!d2.empty()) {
    fn.d2_spline_ = CubicSpline(s, std::move(d2));
    fn.has_d2_ = true;
  }
  fn.value_spline_ = CubicSpline(std::move(s), std::move(values));
  return fn;
}

std::string ScalarFunction::family_name() const {
  switch (family_) {
    case Family::Zero: return "zero";
    case Family::Constant: return "constant";
    case Family::Gaussian: return "gaussian";
    case Family::PowerTail: return "power_tail";
    case Family::Table: return "table";
  }
  return "unknown";
}

Jet ScalarFunction::jet(Scalar s) const {
  switch (family_) {
    case Family::Zero:
      return {};
    case Family::Constant:
      return {a_, 0.0, 0.0};
    case Family::Gaussian: {
      const Scalar z = (s - s0_) / w_;
      const Scalar e = a_ * std::exp(-0.5 * z * z);
      return {e, -z / w_ * e, (z * z - 1.0) / (w_ * w_) * e};
    }
    case Family::PowerTail: {
      const Scalar c = 0.5 * std::numbers::pi;
      const Scalar x = std::abs(s);
      if (x <= n_) return {c * std::pow(n_, -1.0 - alpha_), 0.0, 0.0};
      const Scalar sign = s < 0.0 ? -1.0 : 1.0;
      return {c * std::pow(x, -1.0 - alpha_),
              -sign * (1.0 + alpha_) * c * std::pow(x, -2.0 - alpha_),
              (1.0 + alpha_) * (2.0 + alpha_) * c * std::pow(x, -3.0 - alpha_)};
    }
    case Family::Table: {
      Jet j;
      j.value = value_spline_.eval(s, 0);
      j.d1 = has_d1_ ? d1_spline_.eval(s, 0) : value_spline_.eval(s, 1);
      j.d2 = has_d2_ ? d2_spline_.eval(s, 0)
                     : (has_d1_ ? d1_spline_.eval(s, 1) : value_spline_.eval(s, 2));
      return j;
    }
  }
  return {};
}

std::pair<Scalar, Scalar> ScalarFunction::domain() const {
  if (family_ == Family::Table) return {value_spline_.front(), value_spline_.back()};
  const Scalar inf = std::numeric_limits<Scalar>::infinity();
  return {-inf, inf};
}

ProfileSpec make_profile(ProfileFamily family, const ProfileParams& p) {
  switch (family) {
    case ProfileFamily::PowerTail:
      if (!(p.alpha > 0.0) || !(p.n >= 1.0)) {
        throw Error(ErrorCode::Domain, "power_tail profile: requires alpha > 0, N >= 1");
      }
      return {ScalarFunction::power_tail(p.alpha, p.n), true};
    case ProfileFamily::Constant:
      if (!(p.a > 0.0)) throw Error(ErrorCode::Domain, "constant profile: a must be > 0");
      return {ScalarFunction::constant(p.a), false};
    case ProfileFamily::Gaussian:
      if (!(p.a > 0.0) || !(p.w > 0.0)) {
        throw Error(ErrorCode::Domain, "gaussian profile: requires a > 0, w > 0");
      }
      return {ScalarFunction::gaussian(p.a, p.s0, p.w), true};
    case ProfileFamily::Table:
      for (const Scalar v : p.values) {
        if (!(v > 0.0)) throw Error(ErrorCode::Domain, "table profile: values must be > 0");
      }
      return {ScalarFunction::table(p.s, p.values, p.d1, p.d2), p.table_decays};
  }
  throw Error(ErrorCode::Domain, "make_profile: unknown family");
}

// ---------------------------------------------------------------------------
// Frenet-Serret matrix and the Tang frame
// ---------------------------------------------------------------------------

CurveSpecNd::CurveSpecNd(int d, std::vector<ScalarFunction> curvatures)
    : dimension(d), kappa(std::move(curvatures)) {
  if (d < 2) throw Error(ErrorCode::Domain, "CurveSpecNd: dimension must be >= 2");
  if (static_cast<int>(kappa.size()) != d - 1) {
    throw Error(ErrorCode::Domain, "CurveSpecNd: need exactly d-1 curvatures");
  }
}

MatrixX CurveSpecNd::frenet_matrix(Scalar s, int order) const {
  MatrixX k = MatrixX::Zero(dimension, dimension);
  for (int i = 0; i + 1 < dimension; ++i) {
    const Jet j = kappa[static_cast<std::size_t>(i)].jet(s);
    const Scalar v = order == 0 ? j.value : (order == 1 ? j.d1 : j.d2);
    k(i, i + 1) = v;
    k(i + 1, i) = -v;
  }
  return k;
}

MatrixX normal_block(const MatrixX& k) {
  const Eigen::Index n = k.rows() - 1;
  return k.bottomRightCorner(n, n);
}

namespace {

MatrixX frame_rhs(const CurveSpecNd& curve, Scalar s, const MatrixX& r) {
  return -r * normal_block(curve.frenet_matrix(s));
}

MatrixX rk4_frame_step(const CurveSpecNd& curve, Scalar s, const MatrixX& r, Scalar h) {
  const MatrixX k1 = frame_rhs(curve, s, r);
  const MatrixX k2 = frame_rhs(curve, s + 0.5 * h, r + 0.5 * h * k1);
  const MatrixX k3 = frame_rhs(curve, s + 0.5 * h, r + 0.5 * h * k2);
  const MatrixX k4 = frame_rhs(curve, s + h, r + h * k3);
  return r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Scalar orthogonality_drift(const MatrixX& r) {
  return (r * r.transpose() - MatrixX::Identity(r.rows(), r.cols())).norm();
}

MatrixX project_rotation(const MatrixX& r) {
  Eigen::JacobiSVD<MatrixX> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

TangFrame::TangFrame(const CurveSpecNd& curve, std::vector<Scalar> grid,
                     std::vector<MatrixX> samples, std::vector<Scalar> projections,
                     Scalar step)
    : curve_(curve),
      grid_(std::move(grid)),
      samples_(std::move(samples)),
      projections_(std::move(projections)),
      step_(step) {}

MatrixX TangFrame::rotation(Scalar s) const {
  if (!covers(s)) {
    std::ostringstream msg;
    msg << "TangFrame: s = " << s << " outside sampled range [" << begin() << ", "
        << end() << "]";
    throw Error(ErrorCode::FrameCoverage, msg.str());
  }
  auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - grid_.begin());
  i = i == 0 ? 0 : i - 1;
  const Scalar h = s - grid_[i];
  if (h == 0.0) return samples_[i];
  return rk4_frame_step(curve_, grid_[i], samples_[i], h);
}

MatrixX TangFrame::rotation_derivative(Scalar s) const {
  return frame_rhs(curve_, s, rotation(s));
}

TangFrame tang_frame(const CurveSpecNd& curve, std::pair<Scalar, Scalar> s_range,
                     Scalar step, std::optional<MatrixX> initial) {
  const auto [s_begin, s_end] = s_range;
  if (!(step > 0.0) || !(s_end >= s_begin)) {
    throw Error(ErrorCode::Domain, "tang_frame: requires step > 0 and a valid range");
  }
  const int n = curve.dimension - 1;
  MatrixX r0 = initial.value_or(MatrixX::Identity(n, n));
  if (r0.rows() != n || r0.cols() != n || orthogonality_drift(r0) > 1e-8 ||
      r0.determinant() <= 0.0) {
    throw Error(ErrorCode::Domain, "tang_frame: initial condition must be a rotation");
  }

  constexpr Scalar kProjectThreshold = 1e-8;
  constexpr Scalar kFailThreshold = 1e-4;
  Scalar h = step;
  for (int attempt = 0; attempt < 12; ++attempt, h *= 0.5) {
    const auto steps = static_cast<std::size_t>(std::ceil((s_end - s_begin) / h - 1e-9));
    std::vector<Scalar> grid{s_begin};
    std::vector<MatrixX> samples{r0};
    std::vector<Scalar> projections;
    grid.reserve(steps + 1);
    samples.reserve(steps + 1);
    MatrixX r = r0;
    bool failed = false;
    for (std::size_t i = 0; i < steps; ++i) {
      const Scalar s = grid.back();
      const Scalar s_next = i + 1 == steps ? s_end : s_begin + static_cast<Scalar>(i + 1) * h;
      r = rk4_frame_step(curve, s, r, s_next - s);
      const Scalar drift = orthogonality_drift(r);
      if (drift > kFailThreshold) {
        failed = true;
        break;
      }
      if (drift > kProjectThreshold) {
        r = project_rotation(r);
        projections.push_back(s_next);
      }
      grid.push_back(s_next);
      samples.push_back(r);
    }
    if (!failed) {
      return TangFrame(curve, std::move(grid), std::move(samples), std::move(projections), h);
    }
  }
  throw Error(ErrorCode::NonConvergence,
              "tang_frame: orthogonality drift above 1e-4 after step halving");
}

// ---------------------------------------------------------------------------
// Curve reconstruction
// ---------------------------------------------------------------------------

namespace {

struct PlaneState {
  Scalar angle, a, b;
};

PlaneState plane_rk4(const PlaneCurveSpec& curve, Scalar s, PlaneState y, Scalar h) {
  auto rhs = [&](Scalar t, const PlaneState& st) {
    return PlaneState{curve.gamma(t), std::cos(st.angle), std::sin(st.angle)};
  };
  auto axpy = [](const PlaneState& st, Scalar c, const PlaneState& k) {
    return PlaneState{st.angle + c * k.angle, st.a + c * k.a, st.b + c * k.b};
  };
  const PlaneState k1 = rhs(s, y);
  const PlaneState k2 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, k1));
  const PlaneState k3 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, k2));
  const PlaneState k4 = rhs(s + h, axpy(y, h, k3));
  return {y.angle + h / 6.0 * (k1.angle + 2 * k2.angle + 2 * k3.angle + k4.angle),
          y.a + h / 6.0 * (k1.a + 2 * k2.a + 2 * k3.a + k4.a),
          y.b + h / 6.0 * (k1.b + 2 * k2.b + 2 * k3.b + k4.b)};
}

constexpr Scalar kCurveSubstep = 1e-3;

PlaneState advance(const PlaneCurveSpec& curve, Scalar from, Scalar to, PlaneState y) {
  const Scalar span = to - from;
  if (span == 0.0) return y;
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(span) / kCurveSubstep)));
  const Scalar h = span / n;
  for (int i = 0; i < n; ++i) y = plane_rk4(curve, from + i * h, y, h);
  return y;
}

}  // namespace

CurveSamples reconstruct_curve(const PlaneCurveSpec& curve, Scalar s0, Scalar a0,
                               Scalar b0, std::vector<Scalar> grid, Scalar angle0) {
  std::sort(grid.begin(), grid.end());
  CurveSamples out;
  const std::size_t n = grid.size();
  out.s = grid;
  out.a.resize(n);
  out.b.resize(n);
  out.angle.resize(n);
  const auto split = static_cast<std::size_t>(
      std::lower_bound(grid.begin(), grid.end(), s0) - grid.begin());

  PlaneState y{angle0, a0, b0};
  Scalar at = s0;
  for (std::size_t i = split; i < n; ++i) {
    y = advance(curve, at, grid[i], y);
    at = grid[i];
    out.a[i] = y.a;
    out.b[i] = y.b;
    out.angle[i] = y.angle;
  }
  y = {angle0, a0, b0};
  at = s0;
  for (std::size_t i = split; i-- > 0;) {
    y = advance(curve, at, grid[i], y);
    at = grid[i];
    out.a[i] = y.a;
    out.b[i] = y.b;
    out.angle[i] = y.angle;
  }
  return out;
}

CurveSamplesNd reconstruct_curve_nd(const CurveSpecNd& curve,
                                    std::pair<Scalar, Scalar> s_range, Scalar step) {
  const int d = curve.dimension;
  const auto [s_begin, s_end] = s_range;
  const auto steps = static_cast<std::size_t>(
      std::max(1.0, std::ceil((s_end - s_begin) / step - 1e-9)));
  const Scalar h = (s_end - s_begin) / static_cast<Scalar>(steps);

  // state: row 0 = Gamma, rows 1..d = e_1..e_d
  auto rhs = [&](Scalar s, const MatrixX& st) {
    MatrixX out(d + 1, d);
    out.row(0) = st.row(1);
    out.bottomRows(d) = curve.frenet_matrix(s) * st.bottomRows(d);
    return out;
  };
  MatrixX state = MatrixX::Zero(d + 1, d);
  state.bottomRows(d) = MatrixX::Identity(d, d);

  CurveSamplesNd out;
  out.points.resize(static_cast<Eigen::Index>(steps + 1), d);
  out.s.push_back(s_begin);
  out.points.row(0) = state.row(0);
  for (std::size_t i = 0; i < steps; ++i) {
    const Scalar s = s_begin + static_cast<Scalar>(i) * h;
    const MatrixX k1 = rhs(s, state);
    const MatrixX k2 = rhs(s + 0.5 * h, state + 0.5 * h * k1);
    const MatrixX k3 = rhs(s + 0.5 * h, state + 0.5 * h * k2);
    const MatrixX k4 = rhs(s + h, state + h * k3);
    state += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.s.push_back(s + h);
    out.points.row(static_cast<Eigen::Index>(i + 1)) = state.row(0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validity
// ---------------------------------------------------------------------------

Scalar sup_abs(const std::function<Scalar(Scalar)>& fn, Scalar a, Scalar b, Scalar tol) {
  if (!(b >= a) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::Domain, "sup_abs: requires a finite range");
  }
  if (a == b) return std::abs(fn(a));
  std::size_t n = 1024;
  Scalar best = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    best = std::max(best, std::abs(fn(a + (b - a) * static_cast<Scalar>(i) / n)));
  }
  for (int level = 0; level < 10; ++level) {
    // new midpoints of the doubled grid
    Scalar refined = best;
    for (std::size_t i = 0; i < n; ++i) {
      const Scalar t = a + (b - a) * (static_cast<Scalar>(i) + 0.5) / n;
      refined = std::max(refined, std::abs(fn(t)));
    }
    n *= 2;
    const bool stable = refined - best <= tol;
    best = refined;
    if (stable) break;
  }
  return best;
}

namespace {

constexpr std::size_t kMaxCenterlineSamples = 4000;
constexpr std::size_t kMaxReportedPairs = 32;

void flag_pair(ValidityReport& report, Scalar si, Scalar sj) {
  report.passes_injectivity = false;
  if (report.offending_pairs.size() < kMaxReportedPairs) report.offending_pairs.emplace_back(si, sj);
}

// Conservative test: centerline points further apart in arc length than
// 2 max_width must be at least width_i + width_j apart in space.
template <typename Distance>
void check_injectivity(ValidityReport& report, const std::vector<Scalar>& s,
                       const std::vector<Scalar>& width, Scalar max_width,
                       Distance distance) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(s[j] - s[i]) <= 2.0 * max_width) continue;
      if (distance(i, j) < width[i] + width[j]) flag_pair(report, s[i], s[j]);
    }
  }
}

bool inside_polygon(const std::array<Vector2, 4>& poly, const Vector2& p) {
  bool in = false;
  for (std::size_t i = 0, j = 3; i < 4; j = i++) {
    const Vector2& u = poly[i];
    const Vector2& v = poly[j];
    if ((u.y() > p.y()) != (v.y() > p.y()) &&
        p.x() < (v.x() - u.x()) * (p.y() - u.y()) / (v.y() - u.y()) + u.x()) {
      in = !in;
    }
  }
  return in;
}

// A plane tube overlaps itself when a point of one normal segment lies in a
// cell (the quadrilateral between consecutive normal segments) that is not
// adjacent to it.
void check_plane_cells(ValidityReport& report, const CurveSamples& c,
                       const std::vector<Scalar>& width) {
  const std::size_t n = c.s.size();
  if (n < 3) return;
  std::vector<Vector2> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector2 centre(c.a[i], c.b[i]);
    const Vector2 normal(-std::sin(c.angle[i]), std::cos(c.angle[i]));
    lo[i] = centre - width[i] * normal;
    hi[i] = centre + width[i] * normal;
  }
  std::vector<std::array<Vector2, 4>> cells(n - 1);
  std::vector<Vector2> box_lo(n - 1), box_hi(n - 1);
  for (std::size_t j = 0; j + 1 < n; ++j) {
    cells[j] = {lo[j], hi[j], hi[j + 1], lo[j + 1]};
    box_lo[j] = lo[j].cwiseMin(hi[j]).cwiseMin(hi[j + 1]).cwiseMin(lo[j + 1]);
    box_hi[j] = lo[j].cwiseMax(hi[j]).cwiseMax(hi[j + 1]).cwiseMax(lo[j + 1]);
  }
  constexpr int kPoints = 9;
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < kPoints; ++k) {
      const Scalar t = 0.05 + 0.9 * k / (kPoints - 1);
      const Vector2 p = lo[i] + t * (hi[i] - lo[i]);
      for (std::size_t j = 0; j + 1 < n; ++j) {
        if (j + 1 == i || j == i) continue;
        if ((p.array() < box_lo[j].array()).any() || (p.array() > box_hi[j].array()).any()) continue;
        if (inside_polygon(cells[j], p)) {
          flag_pair(report, c.s[i], c.s[j]);
          break;
        }
      }
    }
  }
}

std::vector<Scalar> centerline_grid(const ProfileSpec& profile, Scalar a, Scalar b,
                                    Scalar& spacing) {
  Scalar min_width = std::numeric_limits<Scalar>::infinity();
  for (int i = 0; i <= 1024; ++i) {
    min_width = std::min(min_width, profile(a + (b - a) * i / 1024.0));
  }
  min_width = std::max(min_width, 1e-6);
  auto count = static_cast<std::size_t>(std::ceil((b - a) / (0.25 * min_width)));
  count = std::clamp<std::size_t>(count, 16, kMaxCenterlineSamples);
  spacing = (b - a) / static_cast<Scalar>(count);
  std::vector<Scalar> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i) grid[i] = a + spacing * static_cast<Scalar>(i);
  return grid;
}

void check_twist(ValidityReport& report, const ProfileSpec& profile, Scalar a, Scalar b,
                 const std::optional<TwistCondition>& twist) {
  if (!twist) return;
  const Scalar sup = sup_abs(
      [&](Scalar t) { return profile(t) * twist->theta_dot(t); }, a, b);
  report.twist_sup = twist->rho * sup;
  report.passes_twist = *report.twist_sup < 1.0;
}

}  // namespace

ValidityReport validity_check(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                              std::pair<Scalar, Scalar> s_range,
                              const std::optional<TwistCondition>& twist) {
  const auto [a, b] = s_range;
  ValidityReport report;
  report.sup_width_curvature =
      sup_abs([&](Scalar t) { return profile(t) * curve.gamma(t); }, a, b);
  report.passes_width = report.sup_width_curvature < 1.0;

  auto grid = centerline_grid(profile, a, b, report.resolution);
  const CurveSamples c = reconstruct_curve(curve, a, 0.0, 0.0, grid);
  std::vector<Scalar> width(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) width[i] = profile(grid[i]);
  if (report.passes_width) check_plane_cells(report, c, width);
  check_twist(report, profile, a, b, twist);
  return report;
}

ValidityReport validity_check(const CurveSpecNd& curve, const ProfileSpec& profile,
                              std::pair<Scalar, Scalar> s_range,
                              const std::optional<TwistCondition>& twist) {
  const auto [a, b] = s_range;
  ValidityReport report;
  report.sup_width_curvature =
      sup_abs([&](Scalar t) { return profile(t) * curve.kappa1(t); }, a, b);
  report.passes_width = report.sup_width_curvature < 1.0;

  const Scalar max_width = sup_abs([&](Scalar t) { return profile(t); }, a, b);
  Scalar spacing = 0.0;
  const auto grid = centerline_grid(profile, a, b, spacing);
  report.resolution = spacing;
  const CurveSamplesNd c = reconstruct_curve_nd(curve, {a, b}, spacing);
  std::vector<Scalar> width(c.s.size());
  for (std::size_t i = 0; i < c.s.size(); ++i) width[i] = profile(c.s[i]);
  check_injectivity(report, c.s, width, max_width, [&](std::size_t i, std::size_t j) {
    return (c.points.row(static_cast<Eigen::Index>(i)) -
            c.points.row(static_cast<Eigen::Index>(j)))
        .norm();
  });
  check_twist(report, profile, a, b, twist);
  return report;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (const char c : line) {
    if (c == '"') {
      quoted = !quoted;
      cell += c;
    } else if (c == ',' && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

}  // namespace

const std::vector<Scalar>* CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return nullptr;
  return &columns[static_cast<std::size_t>(it - header.begin())];
}

CsvTable read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Validation, "cannot open CSV file: " + path);
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Validation, "empty CSV: " + path);
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  table.header = split_row(line);
  table.columns.resize(table.header.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != table.header.size()) {
      throw Error(ErrorCode::Validation,
                  path + ": row " + std::to_string(row) + " has the wrong column count");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        const Scalar v = std::stod(cells[c], &used);
        if (used != cells[c].size()) throw std::invalid_argument("trailing");
        table.columns[c].push_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Validation,
                    path + ": row " + std::to_string(row) + " is not numeric");
      }
    }
  }
  return table;
}

ScalarFunction load_function_csv(const std::string& path) {
  const CsvTable t = read_csv_table(path);
  const auto* s = t.column("s");
  const auto* v = t.column("value");
  if (!s || !v) throw Error(ErrorCode::Validation, path + ": needs columns s,value");
  const auto* d1 = t.column("d1");
  const auto* d2 = t.column("d2");
  return ScalarFunction::table(*s, *v, d1 ? *d1 : std::vector<Scalar>{},
                               d2 ? *d2 : std::vector<Scalar>{});
}

}  // namespace cusp
