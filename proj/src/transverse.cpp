#include "cusp/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cusp/eigensolver.hpp"

namespace cusp {

namespace {

void require_positive(Scalar v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorCode::Domain, std::string("cross section: ") + what + " must be > 0");
  }
}

Scalar signed_area(const std::vector<Vector2>& v) {
  Scalar a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vector2& p = v[i];
    const Vector2& q = v[(i + 1) % v.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vector2 polygon_centroid(const std::vector<Vector2>& v, Scalar area) {
  Vector2 c = Vector2::Zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vector2& p = v[i];
    const Vector2& q = v[(i + 1) % v.size()];
    const Scalar cross = p.x() * q.y() - q.x() * p.y();
    c += (p + q) * cross;
  }
  return c / (6.0 * area);
}

}  // namespace

CrossSection CrossSection::disc(Scalar radius) {
  require_positive(radius, "radius");
  CrossSection cs;
  cs.shape_ = Shape::Disc;
  cs.a_ = cs.b_ = radius;
  return cs;
}

CrossSection CrossSection::rectangle(Scalar a, Scalar b) {
  require_positive(a, "side a");
  require_positive(b, "side b");
  CrossSection cs;
  cs.shape_ = Shape::Rectangle;
  cs.a_ = a;
  cs.b_ = b;
  return cs;
}

CrossSection CrossSection::ellipse(Scalar a, Scalar b) {
  require_positive(a, "semi-axis a");
  require_positive(b, "semi-axis b");
  CrossSection cs;
  cs.shape_ = Shape::Ellipse;
  cs.a_ = a;
  cs.b_ = b;
  return cs;
}

CrossSection CrossSection::polygon(std::vector<Vector2> vertices) {
  if (vertices.size() >= 2 && (vertices.front() - vertices.back()).norm() == 0.0) {
    vertices.pop_back();
  }
  if (vertices.size() < 3) {
    throw Error(ErrorCode::Validation, "cross section: polygon needs at least 3 vertices");
  }
  const Scalar area = signed_area(vertices);
  if (std::abs(area) < 1e-14) {
    throw Error(ErrorCode::Validation, "cross section: polygon has zero area");
  }
  const Vector2 c = polygon_centroid(vertices, area);
  for (auto& v : vertices) v -= c;
  CrossSection cs;
  cs.shape_ = Shape::Polygon;
  cs.vertices_ = std::move(vertices);
  return cs;
}

CrossSection CrossSection::polygon_csv(const std::string& path) {
  const CsvTable t = read_csv_table(path);
  const auto* x = t.column("x");
  const auto* y = t.column("y");
  if (x == nullptr || y == nullptr) {
    throw Error(ErrorCode::Validation, path + ": polygon CSV needs columns x,y");
  }
  std::vector<Vector2> v;
  for (std::size_t i = 0; i < x->size(); ++i) v.emplace_back((*x)[i], (*y)[i]);
  return polygon(std::move(v));
}

CrossSection CrossSection::with_axis(const Vector2& point) const {
  CrossSection cs = *this;
  cs.axis_ = point;
  return cs;
}

std::string CrossSection::shape_name() const {
  switch (shape_) {
    case Shape::Disc: return "disc";
    case Shape::Rectangle: return "rectangle";
    case Shape::Ellipse: return "ellipse";
    case Shape::Polygon: return "polygon";
  }
  return "unknown";
}

bool CrossSection::contains(const Vector2& p) const {
  const Vector2 q = p + axis_;
  switch (shape_) {
    case Shape::Disc:
      return q.squaredNorm() < a_ * a_;
    case Shape::Rectangle:
      return std::abs(q.x()) < 0.5 * a_ && std::abs(q.y()) < 0.5 * b_;
    case Shape::Ellipse:
      return (q.x() / a_) * (q.x() / a_) + (q.y() / b_) * (q.y() / b_) < 1.0;
    case Shape::Polygon: {
      bool in = false;
      const std::size_t n = vertices_.size();
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vector2& a = vertices_[i];
        const Vector2& b = vertices_[j];
        if ((a.y() > q.y()) != (b.y() > q.y())) {
          const Scalar x = a.x() + (q.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
          if (q.x() < x) in = !in;
        }
      }
      return in;
    }
  }
  return false;
}

Scalar CrossSection::circumradius() const {
  switch (shape_) {
    case Shape::Disc:
      return axis_.norm() + a_;
    case Shape::Rectangle: {
      Scalar r = 0.0;
      for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
          r = std::max(r, (Vector2(0.5 * sx * a_, 0.5 * sy * b_) - axis_).norm());
        }
      }
      return r;
    }
    case Shape::Ellipse: {
      Scalar r = 0.0;
      constexpr int kSamples = 4096;
      for (int i = 0; i < kSamples; ++i) {
        const Scalar t = 2.0 * std::numbers::pi * i / kSamples;
        r = std::max(r, (Vector2(a_ * std::cos(t), b_ * std::sin(t)) - axis_).norm());
      }
      return r;
    }
    case Shape::Polygon: {
      Scalar r = 0.0;
      for (const auto& v : vertices_) r = std::max(r, (v - axis_).norm());
      return r;
    }
  }
  return 0.0;
}

std::pair<Vector2, Vector2> CrossSection::bounding_box() const {
  Vector2 lo, hi;
  switch (shape_) {
    case Shape::Disc:
    case Shape::Ellipse:
      lo = Vector2(-a_, -b_);
      hi = Vector2(a_, b_);
      break;
    case Shape::Rectangle:
      lo = Vector2(-0.5 * a_, -0.5 * b_);
      hi = -lo;
      break;
    case Shape::Polygon:
      lo = hi = vertices_.front();
      for (const auto& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
      }
      break;
  }
  return {lo - axis_, hi - axis_};
}

Scalar CrossSection::area() const {
  switch (shape_) {
    case Shape::Disc: return std::numbers::pi * a_ * a_;
    case Shape::Rectangle: return a_ * b_;
    case Shape::Ellipse: return std::numbers::pi * a_ * b_;
    case Shape::Polygon: return std::abs(signed_area(vertices_));
  }
  return 0.0;
}

MaskedGrid<2> CrossSection::mask(Scalar h) const {
  require_positive(h, "grid step");
  const auto [lo, hi] = bounding_box();
  const Lattice<2> lat = box_lattice<2>(lo, hi, h);
  return build_masked_grid<2>(lat, [this](const Vector2& p) { return contains(p); });
}

std::vector<Scalar> interval_levels(Scalar f, int count) {
  require_positive(f, "half-width");
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int j = 1; j <= count; ++j) {
    const Scalar k = std::numbers::pi * j / (2.0 * f);
    out.push_back(k * k);
  }
  return out;
}

std::vector<WeightedLevel> disc_levels(Scalar f, int d, Scalar threshold,
                                       MultiplicityMode mode) {
  require_positive(f, "radius");
  std::vector<WeightedLevel> out;
  if (threshold <= 0.0) return out;
  for (const auto& lv : enumerate_disc_levels(d, f * std::sqrt(threshold), mode)) {
    out.push_back({(lv.zero / f) * (lv.zero / f), lv.multiplicity});
  }
  return out;
}

SparseMatrix TwistOperator::matrix(Scalar c2) const {
  if (c2 == 0.0) return laplacian;
  SparseMatrix ata = SparseMatrix(generator.transpose()) * generator;
  return laplacian + c2 * ata;
}

TwistOperator assemble_twist_operator(const CrossSection& section, Scalar h) {
  TwistOperator op;
  op.grid = section.mask(h);
  if (op.grid.size() == 0) {
    throw Error(ErrorCode::Domain, "cross section: grid step too coarse, no interior nodes");
  }
  op.laplacian = assemble_laplacian<2>(op.grid);
  op.generator = assemble_rotation_generator(op.grid);
  return op;
}

namespace {

std::vector<Scalar> solve_twist(const TwistOperator& op, Scalar c2, int count) {
  EigenSolverOptions opts;
  opts.lower_bound = 0.0;
  const EigenPairs pairs = smallest_eigenpairs(op.matrix(c2), count, opts);
  return {pairs.values.data(), pairs.values.data() + pairs.values.size()};
}

}  // namespace

std::vector<Scalar> twist_eigs(const CrossSection& section, Scalar c2, int count, Scalar h) {
  if (c2 < 0.0) throw Error(ErrorCode::Domain, "twist_eigs: c^2 must be >= 0");
  return solve_twist(assemble_twist_operator(section, h), c2, count);
}

TwistTable::TwistTable(std::vector<Scalar> c2_grid, std::vector<std::vector<Scalar>> eigenvalues)
    : grid_(std::move(c2_grid)), samples_(std::move(eigenvalues)) {
  if (grid_.size() < 2 || grid_.size() != samples_.size()) {
    throw Error(ErrorCode::Validation, "twist table: need >= 2 grid points with samples");
  }
  count_ = static_cast<int>(samples_.front().size());
  for (int j = 0; j < count_; ++j) {
    std::vector<Scalar> y;
    for (const auto& row : samples_) y.push_back(row[static_cast<std::size_t>(j)]);
    curves_.emplace_back(grid_, std::move(y));
  }
}

std::vector<Scalar> TwistTable::eigenvalues(Scalar c2) const {
  if (c2 < grid_.front() || c2 > grid_.back() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "twist table covers c^2 in [" << grid_.front() << ", " << grid_.back()
        << "], requested " << c2;
    throw Error(ErrorCode::TableCoverage, msg.str());
  }
  std::vector<Scalar> out;
  out.reserve(curves_.size());
  for (const auto& c : curves_) out.push_back(c(std::min(c2, grid_.back())));
  return out;
}

TwistTable build_twist_table(const CrossSection& section, Scalar c2_max, int count, Scalar h,
                             const TwistTableOptions& options) {
  if (c2_max < 0.0) throw Error(ErrorCode::Domain, "twist table: c^2 range must be >= 0");
  if (options.points < 2) throw Error(ErrorCode::Domain, "twist table: need >= 2 points");
  const TwistOperator op = assemble_twist_operator(section, h);
  const Scalar top = c2_max > 0.0 ? c2_max : 1e-12;

  // geometric spacing shifted to start at zero: dense near c^2 = 0
  const int p = options.points;
  const Scalar ratio = std::pow(2.0, 8.0 / (p - 1));
  std::vector<Scalar> grid(static_cast<std::size_t>(p));
  const Scalar span = std::pow(ratio, p - 1) - 1.0;
  for (int i = 0; i < p; ++i) grid[static_cast<std::size_t>(i)] = top * (std::pow(ratio, i) - 1.0) / span;
  grid.back() = top;

  std::vector<std::vector<Scalar>> values;
  for (Scalar c2 : grid) values.push_back(solve_twist(op, c2, count));

  for (int round = 0; round < options.max_refinements; ++round) {
    const TwistTable current(grid, values);
    std::vector<Scalar> merged_grid;
    std::vector<std::vector<Scalar>> merged_values;
    Scalar worst = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      merged_grid.push_back(grid[i]);
      merged_values.push_back(values[i]);
      const Scalar mid = 0.5 * (grid[i] + grid[i + 1]);
      std::vector<Scalar> exact = solve_twist(op, mid, count);
      const std::vector<Scalar> guess = current.eigenvalues(mid);
      for (int j = 0; j < count; ++j) {
        const auto k = static_cast<std::size_t>(j);
        worst = std::max(worst, std::abs(guess[k] - exact[k]) / std::abs(exact[k]));
      }
      merged_grid.push_back(mid);
      merged_values.push_back(std::move(exact));
    }
    merged_grid.push_back(grid.back());
    merged_values.push_back(values.back());
    grid = std::move(merged_grid);
    values = std::move(merged_values);
    if (worst <= options.relative_budget) break;
  }
  return TwistTable(std::move(grid), std::move(values));
}

}  // namespace cusp
