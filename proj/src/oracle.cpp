#include "cusp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "cusp/effective_potential.hpp"

namespace cusp {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Cartesian2d: return "cartesian_2d";
    case Provenance::Straightened2d: return "straightened_2d";
    case Provenance::Twisted3d: return "twisted_3d";
  }
  return "unknown";
}

namespace {

void require_cut(std::pair<Scalar, Scalar> cut) {
  if (!(cut.second > cut.first)) throw Error(ErrorCode::Domain, "oracle: s_cut needs a < b");
}

void require_step(Scalar h) {
  if (!(h > 0.0)) throw Error(ErrorCode::Domain, "oracle: grid step must be > 0");
}

void require_width(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                   std::pair<Scalar, Scalar> cut) {
  const Scalar w = sup_abs([&](Scalar s) { return profile(s) * curve.gamma(s); }, cut.first,
                           cut.second);
  if (w >= 1.0) {
    std::ostringstream msg;
    msg << "oracle: sup |f gamma| = " << w << " >= 1 on the cut";
    throw Error(ErrorCode::WidthCondition, msg.str());
  }
}

Scalar hermite(Scalar p0, Scalar m0, Scalar p1, Scalar m1, Scalar t) {
  const Scalar t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * p0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * p1 +
         (t3 - t2) * m1;
}

}  // namespace

TubeLocator::TubeLocator(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                         std::pair<Scalar, Scalar> s_cut, Scalar resolution)
    : curve_(curve), profile_(profile), cut_(s_cut) {
  require_cut(s_cut);
  const auto [a, b] = s_cut;
  const auto segments = static_cast<std::size_t>(std::ceil((b - a) / resolution - 1e-9));
  ds_ = (b - a) / static_cast<Scalar>(std::max<std::size_t>(segments, 1));
  std::vector<Scalar> grid;
  for (std::size_t i = 0; i <= std::max<std::size_t>(segments, 1); ++i) grid.push_back(a + ds_ * i);
  grid.back() = b;
  samples_ = reconstruct_curve(curve, a, a, 0.0, grid);

  Scalar fmax = 0.0;
  for (Scalar s : grid) fmax = std::max(fmax, profile(s));
  fmax = std::max(fmax, sup_abs([&](Scalar s) { return profile(s); }, a, b));
  reach_ = 1.01 * fmax + ds_;

  lo_ = hi_ = Vector2(samples_.a.front(), samples_.b.front());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Vector2 p(samples_.a[i], samples_.b[i]);
    lo_ = lo_.cwiseMin(p);
    hi_ = hi_.cwiseMax(p);
  }
  lo_.array() -= reach_;
  hi_.array() += reach_;
  nx_ = std::max(1, static_cast<int>(std::ceil((hi_.x() - lo_.x()) / reach_)));
  ny_ = std::max(1, static_cast<int>(std::ceil((hi_.y() - lo_.y()) / reach_)));
  buckets_.assign(static_cast<std::size_t>(nx_) * ny_, {});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int ix = std::clamp(static_cast<int>((samples_.a[i] - lo_.x()) / reach_), 0, nx_ - 1);
    const int iy = std::clamp(static_cast<int>((samples_.b[i] - lo_.y()) / reach_), 0, ny_ - 1);
    buckets_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(i);
  }
}

Vector2 TubeLocator::centre(std::size_t i, Scalar t) const {
  const Scalar c0 = std::cos(samples_.angle[i]), s0 = std::sin(samples_.angle[i]);
  const Scalar c1 = std::cos(samples_.angle[i + 1]), s1 = std::sin(samples_.angle[i + 1]);
  return {hermite(samples_.a[i], ds_ * c0, samples_.a[i + 1], ds_ * c1, t),
          hermite(samples_.b[i], ds_ * s0, samples_.b[i + 1], ds_ * s1, t)};
}

Scalar TubeLocator::angle(std::size_t i, Scalar t) const {
  const Scalar g0 = curve_.gamma(samples_.s[i]), g1 = curve_.gamma(samples_.s[i + 1]);
  return hermite(samples_.angle[i], ds_ * g0, samples_.angle[i + 1], ds_ * g1, t);
}

std::vector<std::size_t> TubeLocator::candidates(const Vector2& p) const {
  std::set<std::size_t> segs;
  const int cx = static_cast<int>(std::floor((p.x() - lo_.x()) / reach_));
  const int cy = static_cast<int>(std::floor((p.y() - lo_.y()) / reach_));
  const std::size_t last = samples_.s.size() - 1;
  for (int iy = std::max(cy - 1, 0); iy <= std::min(cy + 1, ny_ - 1); ++iy) {
    for (int ix = std::max(cx - 1, 0); ix <= std::min(cx + 1, nx_ - 1); ++ix) {
      for (std::size_t i : buckets_[static_cast<std::size_t>(iy) * nx_ + ix]) {
        if (i > 0) segs.insert(i - 1);
        if (i < last) segs.insert(i);
      }
    }
  }
  return {segs.begin(), segs.end()};
}

std::optional<std::pair<Scalar, Scalar>> TubeLocator::locate(const Vector2& p) const {
  // roots of g(s) = (p - Gamma(s)) . t(s) on each nearby segment
  auto g = [&](std::size_t i, Scalar t) {
    const Scalar th = angle(i, t);
    const Vector2 d = p - centre(i, t);
    return d.x() * std::cos(th) + d.y() * std::sin(th);
  };
  for (std::size_t i : candidates(p)) {
    Scalar lo = 0.0, hi = 1.0;
    Scalar glo = g(i, lo);
    const Scalar ghi = g(i, hi);
    if (glo * ghi > 0.0) continue;
    for (int it = 0; it < 60; ++it) {
      const Scalar mid = 0.5 * (lo + hi);
      const Scalar gm = g(i, mid);
      if ((gm > 0.0) == (glo > 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    const Scalar t = 0.5 * (lo + hi);
    const Scalar s = samples_.s[i] + t * ds_;
    if (!(s > cut_.first && s < cut_.second)) continue;
    const Scalar th = angle(i, t);
    const Vector2 d = p - centre(i, t);
    const Scalar u = -d.x() * std::sin(th) + d.y() * std::cos(th);
    if (std::abs(u) < profile_(s)) return std::make_pair(s, u);
  }
  return std::nullopt;
}

RegionMask rasterize_region(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                            std::pair<Scalar, Scalar> s_cut, Scalar h) {
  require_cut(s_cut);
  require_step(h);
  const ValidityReport check = validity_check(curve, profile, s_cut);
  if (!check.passes_width) {
    std::ostringstream msg;
    msg << "rasterize_region: sup |f gamma| = " << check.sup_width_curvature << " >= 1";
    throw Error(ErrorCode::WidthCondition, msg.str());
  }
  if (!check.passes_injectivity) {
    std::ostringstream msg;
    const auto [s1, s2] = check.offending_pairs.front();
    msg << "rasterize_region: tube overlaps itself near s = " << s1 << " and s = " << s2;
    throw Error(ErrorCode::SelfIntersection, msg.str());
  }
  const TubeLocator tube(curve, profile, s_cut, std::min(h, 0.02));
  RegionMask mask;
  mask.provenance = Provenance::Cartesian2d;
  mask.h = h;
  mask.cuts = {s_cut.first, s_cut.second};
  const Lattice<2> lat = box_lattice<2>(tube.lo(), tube.hi(), h);
  mask.h = lat.step;
  mask.lo = tube.lo();
  mask.hi = tube.hi();
  mask.grid2 = build_masked_grid<2>(lat, [&](const Vector2& p) { return tube.inside(p); });
  return mask;
}

namespace {

// theta(s) = int_a^s theta', splined.
CubicSpline twist_angle(const ScalarFunction& theta_dot, Scalar a, Scalar b) {
  const int n = std::max(64, static_cast<int>(std::ceil((b - a) / 0.01)));
  std::vector<Scalar> s(static_cast<std::size_t>(n) + 1), th(s.size(), 0.0);
  for (int i = 0; i <= n; ++i) s[static_cast<std::size_t>(i)] = a + (b - a) * i / n;
  for (int i = 1; i <= n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    th[k] = th[k - 1] + adaptive_quad([&](Scalar t) { return theta_dot(t); }, s[k - 1], s[k],
                                      1e-13).value;
  }
  return CubicSpline(std::move(s), std::move(th));
}

}  // namespace

RegionMask rasterize_twisted(const TwistSpec& twist, const ProfileSpec& profile,
                             std::pair<Scalar, Scalar> s_cut, Scalar h) {
  require_cut(s_cut);
  require_step(h);
  const auto [a, b] = s_cut;
  const Scalar rho = twist.section.circumradius();
  const Scalar k = rho * sup_abs([&](Scalar s) { return profile(s) * twist.theta_dot(s); }, a, b);
  if (k >= 1.0) {
    std::ostringstream msg;
    msg << "rasterize_twisted: rho sup |f theta'| = " << k << " >= 1";
    throw Error(ErrorCode::TwistCondition, msg.str());
  }
  const Scalar fmax = sup_abs([&](Scalar s) { return profile(s); }, a, b);
  const CubicSpline theta = twist_angle(twist.theta_dot, a, b);
  const CrossSection& section = twist.section;

  auto inside = [&](const Matrix<Scalar, 3, 1>& p) {
    const Scalar s = p[0];
    if (!(s > a && s < b)) return false;
    const Scalar f = profile(s);
    if (!(f > 0.0)) return false;
    const Scalar th = theta(s);
    const Scalar c = std::cos(th), sn = std::sin(th);
    const Vector2 q(p[1] * c - p[2] * sn, p[1] * sn + p[2] * c);
    return section.contains(q / f);
  };
  const Scalar r = rho * fmax;
  Matrix<Scalar, 3, 1> lo(a, -r, -r), hi(b, r, r);
  const Lattice<3> lat = box_lattice<3>(lo, hi, h);
  RegionMask mask;
  mask.provenance = Provenance::Twisted3d;
  mask.h = lat.step;
  mask.lo = lo;
  mask.hi = hi;
  mask.cuts = {a, b};
  mask.grid3 = build_masked_grid<3>(lat, inside);
  return mask;
}

namespace {

EigResult to_result(const EigenPairs& pairs, int k, Scalar h) {
  EigResult out;
  out.requested = k;
  out.converged = static_cast<int>(pairs.values.size());
  out.h = h;
  out.values.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
  out.residuals.assign(pairs.residuals.data(), pairs.residuals.data() + pairs.residuals.size());
  return out;
}

SparseMatrix laplacian_of(const RegionMask& mask) {
  if (mask.grid2) return assemble_laplacian<2>(*mask.grid2);
  if (mask.grid3) return assemble_laplacian<3>(*mask.grid3);
  throw Error(ErrorCode::Domain, "oracle: empty region mask");
}

}  // namespace

EigResult fd_dirichlet_eigs(const RegionMask& mask, int k, const EigenSolverOptions& options) {
  EigenSolverOptions opts = options;
  if (!opts.lower_bound) opts.lower_bound = 0.0;
  return to_result(smallest_eigenpairs(laplacian_of(mask), k, opts), k, mask.h);
}

namespace {

struct StraightenedSystem {
  MaskedGrid<2> grid;
  SparseMatrix matrix;
};

StraightenedSystem straightened_system(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                                       const Potential2& v, std::pair<Scalar, Scalar> s_cut,
                                       Scalar h) {
  require_cut(s_cut);
  require_step(h);
  require_width(curve, profile, s_cut);
  const auto [a, b] = s_cut;
  const Scalar fmax = sup_abs([&](Scalar s) { return profile(s); }, a, b);
  const Lattice<2> lat = box_lattice<2>(Vector2(a, -fmax), Vector2(b, fmax), h);
  StraightenedSystem sys;
  sys.grid = build_masked_grid<2>(lat, [&](const Vector2& p) {
    return p.x() > a && p.x() < b && std::abs(p.y()) < profile(p.x());
  });
  if (sys.grid.size() == 0) throw Error(ErrorCode::Domain, "straightened_eigs: empty grid");
  sys.matrix = assemble_operator<2>(
      sys.grid,
      [&](int axis, const Vector2& p) {
        if (axis != 0) return 1.0;
        const Scalar m = 1.0 + p.y() * curve.gamma(p.x());
        return 1.0 / (m * m);
      },
      [&](const Vector2& p) {
        const Scalar w = w_full_2d(curve, p.x(), p.y());
        return v ? w - v(p.x(), p.y()) : w;
      });
  return sys;
}

}  // namespace

EigResult straightened_eigs(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                            const Potential2& v, std::pair<Scalar, Scalar> s_cut, Scalar h,
                            int k, const EigenSolverOptions& options) {
  const StraightenedSystem sys = straightened_system(curve, profile, v, s_cut, h);
  return to_result(smallest_eigenpairs(sys.matrix, k, options), k, sys.grid.step());
}

std::string classify(Scalar moment, Scalar error, Scalar bound) {
  if (moment + error <= bound) return "certified";
  if (moment - error > bound) return "violated";
  return "inconclusive";
}

namespace {

// Operator of the scenario at one grid step; diagonal shift absorbed by Lambda.
struct GridOperator {
  SparseMatrix matrix;
  std::optional<Scalar> lower_bound;
  Scalar h = 0.0;
};

GridOperator scenario_operator(const VerifyScenario& sc, Scalar h) {
  GridOperator op;
  switch (sc.form) {
    case OracleForm::Cartesian: {
      const RegionMask mask = rasterize_region(sc.curve, sc.profile, sc.s_cut, h);
      op.h = mask.h;
      if (!sc.potential) {
        op.matrix = assemble_laplacian<2>(*mask.grid2);
        op.lower_bound = 0.0;
      } else {
        const TubeLocator tube(sc.curve, sc.profile, sc.s_cut, std::min(h, 0.02));
        op.matrix = assemble_operator<2>(*mask.grid2, nullptr, [&](const Vector2& p) {
          const auto su = tube.locate(p);
          return su ? -sc.potential(su->first, su->second) : 0.0;
        });
      }
      break;
    }
    case OracleForm::Straightened: {
      const StraightenedSystem sys =
          straightened_system(sc.curve, sc.profile, sc.potential, sc.s_cut, h);
      op.matrix = sys.matrix;
      op.h = sys.grid.step();
      break;
    }
    case OracleForm::Twisted3d: {
      if (!sc.twist) throw Error(ErrorCode::Validation, "verify: twisted form needs a twist block");
      if (sc.potential) {
        throw Error(ErrorCode::Validation, "verify: twisted form supports constant Lambda only");
      }
      const RegionMask mask = rasterize_twisted(*sc.twist, sc.profile, sc.s_cut, h);
      op.matrix = assemble_laplacian<3>(*mask.grid3);
      op.lower_bound = 0.0;
      op.h = mask.h;
      break;
    }
  }
  return op;
}

GridMoment grid_moment(const VerifyScenario& sc, Scalar h) {
  const GridOperator op = scenario_operator(sc, h);
  const int n = static_cast<int>(op.matrix.rows());
  if (n == 0) throw Error(ErrorCode::Domain, "verify: no interior nodes at this grid step");
  EigenSolverOptions opts;
  opts.lower_bound = op.lower_bound;
  int k = std::min(std::max(sc.batch, 1), n);
  EigenPairs pairs;
  while (true) {
    pairs = smallest_eigenpairs(op.matrix, k, opts);
    if (pairs.values[k - 1] > sc.lambda || k == n) break;
    k = std::min(2 * k, n);
  }
  GridMoment gm;
  gm.h = op.h;
  gm.unknowns = n;
  gm.eigs = to_result(pairs, k, op.h);
  std::vector<Scalar> gaps;
  for (Scalar mu : gm.eigs.values) {
    gaps.push_back(sc.lambda - mu);
    if (mu < sc.lambda) ++gm.eigenvalues_below;
  }
  gm.moment = riesz_sum(gaps, sc.sigma);
  return gm;
}

Scalar region_volume(const VerifyScenario& sc) {
  const auto [a, b] = sc.s_cut;
  if (sc.form == OracleForm::Twisted3d) {
    const Scalar area = sc.twist->section.area();
    return area * adaptive_quad([&](Scalar s) { return sc.profile(s) * sc.profile(s); }, a, b,
                                1e-12)
                      .value;
  }
  return 2.0 * adaptive_quad([&](Scalar s) { return sc.profile(s); }, a, b, 1e-12).value;
}

}  // namespace

VerifyReport verify_bound(const VerifyScenario& sc) {
  if (sc.grid_steps.size() < 2) {
    throw Error(ErrorCode::Validation, "verify: at least two grid steps are required");
  }
  if (!(sc.lambda >= 0.0)) throw Error(ErrorCode::Domain, "verify: Lambda must be >= 0");
  if (!(sc.sigma >= 0.5)) throw Error(ErrorCode::Domain, "verify: sigma must be >= 1/2");
  if (sc.potential && !sc.potential_sup) {
    throw Error(ErrorCode::Validation, "verify: potential needs its sup-profile");
  }
  std::vector<Scalar> steps = sc.grid_steps;
  std::sort(steps.begin(), steps.end(), std::greater<>());
  if (std::adjacent_find(steps.begin(), steps.end()) != steps.end()) {
    throw Error(ErrorCode::Validation, "verify: grid steps must be distinct");
  }

  VerifyReport rep;
  rep.lambda = sc.lambda;
  rep.sigma = sc.sigma;
  rep.potential_exact = static_cast<bool>(sc.potential);
  for (Scalar h : steps) rep.grids.push_back(grid_moment(sc, h));

  const std::size_t g = rep.grids.size();
  const GridMoment& coarse = rep.grids[g - 2];
  const GridMoment& fine = rep.grids[g - 1];
  const Scalar r = coarse.h / fine.h;
  const Scalar diff = fine.moment - coarse.moment;
  rep.moment = std::max(fine.moment + diff / (r * r - 1.0), 0.0);
  rep.convergence_error = std::abs(diff);
  if (g >= 3) {
    const Scalar prev = rep.grids[g - 2].moment - rep.grids[g - 3].moment;
    if (diff != 0.0 && prev != 0.0) {
      rep.observed_order = std::log(std::abs(prev / diff)) / std::log(r);
    }
  }

  const Scalar lambda = sc.lambda;
  const auto v_sup = sc.potential_sup;
  BoundQuery q;
  q.sigma = sc.sigma;
  q.regime = sc.sigma >= 1.5 ? Regime::Standard : Regime::Extended;
  q.quad_tol = sc.quad_tol;
  q.v = [lambda, v_sup](Scalar s) { return lambda + (v_sup ? v_sup(s) : 0.0); };
  q.range = sc.profile.decays ? IntegrationRange::two_sided(0.5 * (sc.s_cut.first + sc.s_cut.second))
                              : IntegrationRange::finite(sc.s_cut.first, sc.s_cut.second);

  auto add = [&](const std::string& name, Scalar value) {
    const Scalar margin = value - (rep.moment + rep.convergence_error);
    rep.bounds.push_back({name, value, margin, classify(rep.moment, rep.convergence_error, value)});
  };

  if (sc.form == OracleForm::Twisted3d) {
    const TwistSpec& tw = *sc.twist;
    if (tw.section.shape() == CrossSection::Shape::Disc && tw.section.centroid_at_origin()) {
      add("twist", bound_moment_twist(tw, sc.profile, q,
                                      DiscLevelSource{tw.section.radius(), MultiplicityMode::Weighted})
                       .value);
    } else {
      const Scalar c2 = twist_c2_extent(tw, sc.profile, q);
      const Scalar h = std::clamp(0.05 / tw.section.circumradius(), 1e-3, 0.05);
      for (int count = 8;; count *= 2) {
        const TwistTable table = build_twist_table(tw.section, c2, count, h);
        try {
          add("twist", bound_moment_twist(tw, sc.profile, q, &table).value);
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::TableCoverage || count >= 64) throw;
        }
      }
    }
  } else {
    add("cusp_2d", bound_moment_2d(sc.curve, sc.profile, q).value);
  }

  rep.volume = region_volume(sc);
  if (sc.phase_space && !sc.potential && sc.sigma >= 1.0) {
    add("phase_space", phase_space_bound(lambda, rep.volume, sc.sigma));
  }
  return rep;
}

}  // namespace cusp
