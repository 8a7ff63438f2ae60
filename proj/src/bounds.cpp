#include "cusp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>

namespace cusp {

BoundQuery BoundQuery::constant(Scalar lambda, Scalar sigma, IntegrationRange range) {
  BoundQuery q;
  q.sigma = sigma;
  q.v = [lambda](Scalar) { return lambda; };
  q.range = range;
  return q;
}

namespace {

using Term = std::function<std::pair<Scalar, int>(Scalar s, Scalar norm)>;

// Everything the support scan and the quadrature need from one bound.
struct Integrand {
  std::function<Scalar(Scalar)> density;  // the norm is sup density over the window
  std::function<void(Scalar norm)> check;
  Term term;
  std::optional<std::pair<Scalar, Scalar>> coverage;  // s outside -> FrameCoverage
};

void validate(const BoundQuery& q) {
  if (!(q.sigma >= 0.5)) throw Error(ErrorCode::Domain, "bound: sigma must be >= 1/2");
  if (q.regime == Regime::Standard && q.sigma < 1.5) {
    throw Error(ErrorCode::Domain, "bound: standard regime needs sigma >= 3/2 (use extended)");
  }
  if (!q.v) throw Error(ErrorCode::Validation, "bound: potential profile missing");
  if (!(q.quad_tol > 0.0)) throw Error(ErrorCode::Domain, "bound: quad_tol must be > 0");
  if (q.support_margin < 1 || q.panels < 1 || !(q.scan_stride > 0.0)) {
    throw Error(ErrorCode::Domain, "bound: scan parameters must be positive");
  }
  if (q.range.kind == IntegrationRange::Kind::Finite && !(q.range.b > q.range.a)) {
    throw Error(ErrorCode::Domain, "bound: finite range needs a < b");
  }
}

Scalar l_constant(const BoundQuery& q) {
  const Scalar l = lt_constant(q.sigma);
  return q.regime == Regime::Extended ? kExtendedFactor * l : l;
}

Scalar potential_at(const BoundQuery& q, Scalar s) {
  const Scalar v = q.v(s);
  if (v < 0.0 || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << "bound: potential profile must be finite and >= 0, got " << v << " at s = " << s;
    throw Error(ErrorCode::Domain, msg.str());
  }
  return v;
}

Scalar sup_over(const std::function<Scalar(Scalar)>& fn, Scalar a, Scalar b) {
  return sup_abs(fn, a, b, 1e-10);
}

struct ScanResult {
  bool any = false;
  Scalar edge = 0.0;      // distance to the last active probe
  Scalar beyond = 0.0;    // distance to the first empty probe after it
  Scalar farthest = 0.0;  // distance to the last probe
};

ScanResult scan(const Integrand& in, Scalar norm, const BoundQuery& q, Scalar start,
                Scalar dir) {
  auto active = [&](Scalar s) { return in.term(s, norm).second >= 1; };
  ScanResult r;
  r.any = active(start);
  int empty = 0;
  Scalar t = 0.0, stride = q.scan_stride;
  while (true) {
    t += stride;
    stride *= 2.0;
    Scalar s = start + dir * t;
    bool at_cover_edge = false;
    if (in.coverage) {
      const auto [lo, hi] = *in.coverage;
      if (s < lo || s > hi) {
        s = std::clamp(s, lo, hi);
        t = std::abs(s - start);
        at_cover_edge = true;
      }
    }
    if (t > q.scan_limit) {
      if (empty == 0) {
        std::ostringstream msg;
        msg << "bound: integrand does not vanish in the " << (dir > 0 ? "right" : "left")
            << " tail (still active at s = " << start + dir * r.edge << ")";
        throw Error(ErrorCode::Divergence, msg.str());
      }
      break;
    }
    r.farthest = t;
    if (active(s)) {
      r.any = true;
      r.edge = t;
      empty = 0;
      if (at_cover_edge) {
        std::ostringstream msg;
        msg << "bound: integrand active at the frame edge s = " << s
            << "; extend the frame range";
        throw Error(ErrorCode::FrameCoverage, msg.str());
      }
    } else {
      if (empty == 0) r.beyond = t;
      ++empty;
    }
    if (empty >= q.support_margin || at_cover_edge) break;
  }
  if (!r.any) return r;
  // tighten the outer edge between the last active and the next empty probe
  Scalar lo = r.edge, hi = r.beyond;
  for (int it = 0; it < 60 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
    const Scalar mid = 0.5 * (lo + hi);
    if (active(start + dir * mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  r.edge = lo;
  r.beyond = hi;
  return r;
}

BoundReport evaluate(const Integrand& in, const BoundQuery& q, const ProfileSpec& profile) {
  BoundReport rep;
  Scalar lo = 0.0, hi = 0.0, norm = 0.0;
  std::optional<Scalar> edge_lo, edge_hi;  // bisected support edges of a scan

  if (q.range.kind == IntegrationRange::Kind::Finite) {
    lo = q.range.a;
    hi = q.range.b;
    norm = sup_over(in.density, lo, hi);
    in.check(norm);
    rep.window = {lo, hi};
  } else {
    if (!profile.decays) {
      throw Error(ErrorCode::Validation,
                  "bound: infinite range needs a decaying profile; use a finite range");
    }
    const bool two = q.range.kind == IntegrationRange::Kind::TwoSided;
    const Scalar start = q.range.a;
    Scalar wlo = two ? start - 1.0 : start, whi = start + (two ? 1.0 : 2.0);
    if (in.coverage) {
      wlo = std::max(wlo, in.coverage->first);
      whi = std::min(whi, in.coverage->second);
    }
    norm = sup_over(in.density, wlo, whi);
    ScanResult right, left;
    for (int round = 0; round < 16; ++round) {
      in.check(norm);
      right = scan(in, norm, q, start, 1.0);
      left = two ? scan(in, norm, q, start, -1.0) : ScanResult{};
      wlo = std::min(wlo, start - left.farthest);
      whi = std::max(whi, start + right.farthest);
      const Scalar wider = sup_over(in.density, wlo, whi);
      if (wider <= norm * (1.0 + 1e-12)) break;
      norm = wider;
    }
    rep.window = {wlo, whi};
    if (!right.any && !left.any) {
      rep.norm = norm;
      return rep;
    }
    lo = two ? start - left.beyond : start;
    hi = start + right.beyond;
    if (two && left.any) edge_lo = start - left.edge;
    if (right.any) edge_hi = start + right.edge;
  }
  rep.norm = norm;

  auto integrand = [&](Scalar s) { return in.term(s, norm).first; };
  const int panels = q.panels;
  const Scalar width = (hi - lo) / panels;
  Scalar total = 0.0, err = 0.0;
  for (int p = 0; p < panels; ++p) {
    const Scalar a = lo + p * width;
    const Scalar b = (p + 1 == panels) ? hi : a + width;
    const QuadResult r = adaptive_quad(integrand, a, b, q.quad_tol / panels);
    total += r.value;
    err += r.error;
  }

  const int m = std::max(q.report_samples, 2);
  Scalar first = std::numeric_limits<Scalar>::quiet_NaN(), last = first;
  for (int i = 0; i < m; ++i) {
    const Scalar s = lo + (hi - lo) * i / (m - 1);
    const auto [value, j] = in.term(s, norm);
    rep.samples.push_back({s, value, j});
    if (j >= 1) {
      if (std::isnan(first)) first = s;
      last = s;
    }
  }
  if (!std::isnan(first) || edge_lo || edge_hi) {
    rep.support = std::make_pair(edge_lo.value_or(std::isnan(first) ? lo : first),
                                 edge_hi.value_or(std::isnan(last) ? hi : last));
  } else if (total > 0.0) {
    rep.support = std::make_pair(lo, hi);
  }
  rep.value = std::max(total, 0.0);
  rep.quad_error = err;
  return rep;
}

// Disc zeros cached up to a growing cap.
class ZeroCache {
 public:
  ZeroCache(int d, MultiplicityMode mode) : d_(d), mode_(mode) {}

  const std::vector<DiscLevel>& upto(Scalar limit) {
    if (limit > cap_) {
      cap_ = std::max(2.0 * limit, 16.0);
      levels_ = enumerate_disc_levels(d_, cap_, mode_);
    }
    return levels_;
  }

 private:
  int d_;
  MultiplicityMode mode_;
  Scalar cap_ = -1.0;
  std::vector<DiscLevel> levels_;
};

}  // namespace

BoundReport bound_moment_2d(const PlaneCurveSpec& curve, const ProfileSpec& profile,
                            const BoundQuery& q) {
  validate(q);
  const Scalar p = q.sigma + 0.5;
  Integrand in;
  in.density = [&](Scalar s) { return 1.0 + profile(s) * std::abs(curve.gamma(s)); };
  in.check = [](Scalar norm) {
    if (norm - 1.0 >= 1.0) {
      std::ostringstream msg;
      msg << "bound: sup |f gamma| = " << norm - 1.0 << " >= 1";
      throw Error(ErrorCode::WidthCondition, msg.str());
    }
  };
  in.term = [&](Scalar s, Scalar n) -> std::pair<Scalar, int> {
    const Scalar f = profile(s);
    const Scalar v = potential_at(q, s);
    if (!(f > 0.0)) return {0.0, 0};
    const Scalar a = n * n * (w_minus_2d(curve, profile, s) + v);
    if (!(a > 0.0)) return {0.0, 0};
    const Scalar k = std::numbers::pi / (2.0 * f);
    auto level = [k](int j) { return (k * j) * (k * j); };
    int j_max = static_cast<int>(std::floor(std::sqrt(a) / k));
    while (level(j_max + 1) < a) ++j_max;
    while (j_max > 0 && level(j_max) >= a) --j_max;
    Scalar sum = 0.0;
    for (int j = 1; j <= j_max; ++j) sum += std::pow(a - level(j), p);
    return {sum, j_max};
  };

  BoundReport rep = evaluate(in, q, profile);
  rep.l_constant = l_constant(q);
  rep.value *= std::pow(rep.norm, -2.0 * q.sigma) * rep.l_constant;
  rep.quad_error *= std::pow(rep.norm, -2.0 * q.sigma) * rep.l_constant;
  return rep;
}

BoundReport bound_moment_nd(const CurveSpecNd& curve, const TangFrame& frame,
                            const ProfileSpec& profile, const BoundQuery& q, int d,
                            MultiplicityMode mode) {
  validate(q);
  if (d < 3) throw Error(ErrorCode::Domain, "bound_moment_nd: d must be >= 3");
  if (curve.dimension != d) {
    throw Error(ErrorCode::Validation, "bound_moment_nd: curve dimension differs from d");
  }
  const Scalar p = q.sigma + 0.5;
  auto cache = std::make_shared<ZeroCache>(d, mode);
  Integrand in;
  in.coverage = std::make_pair(frame.begin(), frame.end());
  in.density = [&](Scalar s) { return 1.0 + profile(s) * std::abs(curve.kappa1(s)); };
  in.check = [](Scalar norm) {
    if (norm - 1.0 >= 1.0) {
      std::ostringstream msg;
      msg << "bound: sup |f kappa_1| = " << norm - 1.0 << " >= 1";
      throw Error(ErrorCode::WidthCondition, msg.str());
    }
  };
  in.term = [&, cache](Scalar s, Scalar n) -> std::pair<Scalar, int> {
    const Scalar f = profile(s);
    const Scalar v = potential_at(q, s);
    if (!(f > 0.0)) return {0.0, 0};
    const Scalar a = n * n * (w_minus_nd(curve, frame, profile, s) + v);
    if (!(a > 0.0)) return {0.0, 0};
    const Scalar limit = f * std::sqrt(a);
    Scalar sum = 0.0;
    int count = 0;
    for (const auto& lv : cache->upto(limit)) {
      if (lv.zero > limit) break;
      const Scalar mu = (lv.zero / f) * (lv.zero / f);
      if (mu >= a) continue;
      sum += lv.multiplicity * std::pow(a - mu, p);
      ++count;
    }
    return {sum, count};
  };

  BoundReport rep = evaluate(in, q, profile);
  rep.l_constant = l_constant(q);
  rep.value *= std::pow(rep.norm, -2.0 * q.sigma) * rep.l_constant;
  rep.quad_error *= std::pow(rep.norm, -2.0 * q.sigma) * rep.l_constant;
  return rep;
}

BoundReport bound_moment_twist(const TwistSpec& twist, const ProfileSpec& profile,
                               const BoundQuery& q, const LevelSource& source) {
  validate(q);
  const Scalar p = q.sigma + 0.5;
  const Scalar rho = twist.section.circumradius();
  auto cache = std::make_shared<ZeroCache>(3, MultiplicityMode::Weighted);
  if (const auto* disc = std::get_if<DiscLevelSource>(&source)) {
    if (!(disc->radius > 0.0)) throw Error(ErrorCode::Domain, "bound: disc radius must be > 0");
    cache = std::make_shared<ZeroCache>(3, disc->mode);
  } else if (std::get<const TwistTable*>(source) == nullptr) {
    throw Error(ErrorCode::Validation, "bound: missing eigenvalue table");
  }

  Integrand in;
  in.density = [&](Scalar s) { return rho * std::abs(profile(s) * twist.theta_dot(s)); };
  in.check = [](Scalar k) {
    if (k >= 1.0) {
      std::ostringstream msg;
      msg << "bound: rho sup |f theta'| = " << k << " >= 1";
      throw Error(ErrorCode::TwistCondition, msg.str());
    }
  };
  in.term = [&, cache](Scalar s, Scalar k) -> std::pair<Scalar, int> {
    const Scalar f = profile(s);
    const Scalar v = potential_at(q, s);
    if (!(f > 0.0) || !(v > 0.0)) return {0.0, 0};
    const Scalar vv = v / (1.0 - k);
    const Scalar top = f * f * vv;  // levels of omega_0 below this contribute
    const Scalar c = f * twist.theta_dot(s);
    Scalar sum = 0.0;
    int count = 0;
    auto add = [&](Scalar lambda, int weight) {
      if (lambda >= top) return;
      sum += weight * std::pow(vv - lambda / (f * f), p);
      ++count;
    };
    if (const auto* disc = std::get_if<DiscLevelSource>(&source)) {
      const Scalar r = disc->radius;
      const Scalar limit = r * std::sqrt(top);
      for (const auto& lv : cache->upto(limit)) {
        if (lv.zero > limit) break;
        const Scalar m = lv.angular_index;
        add((lv.zero / r) * (lv.zero / r) + c * c * m * m, lv.multiplicity);
      }
    } else {
      const TwistTable& table = *std::get<const TwistTable*>(source);
      const std::vector<Scalar> lambdas = table.eigenvalues(c * c);
      if (lambdas.back() < top) {
        std::ostringstream msg;
        msg << "bound: eigenvalue table holds " << table.count()
            << " levels, not enough to cover f^2 v/(1-K) = " << top << " at s = " << s;
        throw Error(ErrorCode::TableCoverage, msg.str());
      }
      for (Scalar lambda : lambdas) add(lambda, 1);
    }
    return {sum, count};
  };

  BoundReport rep = evaluate(in, q, profile);
  rep.l_constant = l_constant(q);
  const Scalar factor = std::pow(1.0 - rep.norm, q.sigma) * rep.l_constant;
  rep.value *= factor;
  rep.quad_error *= factor;
  return rep;
}

Scalar twist_c2_extent(const TwistSpec& twist, const ProfileSpec& profile, const BoundQuery& q) {
  const Scalar rho = twist.section.circumradius();
  if (q.range.kind != IntegrationRange::Kind::Finite) return 1.0 / (rho * rho);
  const Scalar c = sup_over([&](Scalar s) { return profile(s) * twist.theta_dot(s); },
                            q.range.a, q.range.b);
  return c * c;
}

Scalar phase_space_bound(Scalar lambda, Scalar vol, Scalar sigma) {
  if (!(sigma >= 1.0)) throw Error(ErrorCode::Domain, "phase_space_bound: sigma must be >= 1");
  if (!(lambda >= 0.0) || !(vol >= 0.0)) {
    throw Error(ErrorCode::Domain, "phase_space_bound: Lambda and vol must be >= 0");
  }
  return lt_constant(sigma) * std::pow(lambda, sigma + 1.0) * vol;
}

ThinComparison thin_comparison(Scalar alpha, Scalar n, Scalar lambda, Scalar sigma,
                               std::optional<Scalar> c) {
  if (!(alpha > 0.0) || !(n > 0.0) || !(lambda > 0.0)) {
    throw Error(ErrorCode::Domain, "thin_comparison: alpha, N, Lambda must be > 0");
  }
  const Scalar l = lt_constant(sigma);
  const Scalar pow_l = std::pow(lambda, sigma + 1.0);
  const Scalar tail = std::pow(n, -alpha);
  ThinComparison out;
  out.cusp_rhs = 4.0 * l * pow_l * tail;
  out.phase_rhs = 2.0 * std::numbers::pi * l * tail * pow_l * (1.0 / (2.0 * alpha) + 1.0);
  out.ratio = out.phase_rhs / out.cusp_rhs;
  out.lambda_admissible = lambda <= std::pow(n, 2.0 * (1.0 + alpha));

  if (c) {
    const Scalar cc = *c;
    const Scalar pi = std::numbers::pi;
    const Scalar ac2 = (pi * pi - cc * cc * (1 + cc) * (1 + cc) / ((1 - cc) * (1 - cc))) /
                       (4.0 * (1 + cc) * (1 + cc));
    if (!(cc > 0.0 && cc < 1.0) || !(ac2 > 0.0)) {
      throw Error(ErrorCode::Domain, "thin_comparison: curvature bound c out of range");
    }
    // integral of f over {f >= alpha_c Lambda^{-1/2}} for the thin-cusp profile
    const Scalar floor_f = std::sqrt(ac2 / lambda);
    const Scalar peak = 0.5 * pi * std::pow(n, -1.0 - alpha);
    Scalar integral = 0.0;
    if (floor_f <= peak) {
      const Scalar x = std::pow(0.5 * pi / floor_f, 1.0 / (1.0 + alpha));
      integral = 2.0 * (peak * n + 0.5 * pi * (tail - std::pow(x, -alpha)) / alpha);
    }
    const Scalar pre = cc * cc / (4.0 * (1 - cc) * (1 - cc) * ac2) + 1.0;
    out.curved_diagnostic = (8.0 / pi) * std::pow(pre, sigma + 1.0) * l * pow_l * integral;
  }
  return out;
}

}  // namespace cusp
