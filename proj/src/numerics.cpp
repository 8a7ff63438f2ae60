#include "cusp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace cusp {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::Validation: return "VALIDATION";
    case ErrorCode::WidthCondition: return "WIDTH_CONDITION";
    case ErrorCode::TwistCondition: return "TWIST_CONDITION";
    case ErrorCode::Singularity: return "SINGULARITY";
    case ErrorCode::Divergence: return "DIVERGENCE";
    case ErrorCode::FrameCoverage: return "FRAME_COVERAGE";
    case ErrorCode::TableCoverage: return "TABLE_COVERAGE";
    case ErrorCode::NonConvergence: return "NON_CONVERGENCE";
    case ErrorCode::SelfIntersection: return "SELF_INTERSECTION";
  }
  return "UNKNOWN";
}

Scalar lt_constant(Scalar sigma) {
  if (!(sigma >= 0.0)) {
    throw Error(ErrorCode::Domain, "lt_constant: sigma must be >= 0");
  }
  return std::exp(std::lgamma(sigma + 1.0) - std::lgamma(sigma + 1.5)) /
         std::sqrt(4.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// Bessel J: Miller backward recurrence normalised with
//   (x/2)^nu = sum_k (nu+2k) Gamma(nu+k)/k! J_{nu+2k}(x).
// ---------------------------------------------------------------------------

std::pair<Scalar, Scalar> bessel_j_pair(Scalar nu, Scalar x) {
  if (!(nu >= 0.0) || !(x >= 0.0)) {
    throw Error(ErrorCode::Domain, "bessel_j: requires nu >= 0 and x >= 0");
  }
  if (x == 0.0) {
    return {nu == 0.0 ? 1.0 : 0.0, 0.0};
  }

  int start = static_cast<int>(std::ceil(x + 30.0 + 8.0 * std::cbrt(x)));
  if (start % 2 != 0) ++start;
  const int half = start / 2;

  // normalisation weights c_k = (nu+2k) Gamma(nu+k) / (k! Gamma(nu+1))
  std::vector<Scalar> weight(half + 1);
  weight[0] = 1.0;
  if (half >= 1) weight[1] = nu + 2.0;
  for (int k = 2; k <= half; ++k) {
    weight[k] = weight[k - 1] * (nu + 2.0 * k) * (nu + k - 1.0) /
                ((nu + 2.0 * k - 2.0) * k);
  }

  constexpr Scalar kBig = 1e200;
  Scalar y_next = 0.0;  // y_{n+1}
  Scalar y = 1e-30;     // y_n, n = start
  Scalar sum = weight[half] * y;
  Scalar y1 = 0.0;
  for (int n = start; n >= 1; --n) {
    const Scalar y_prev = 2.0 * (nu + n) / x * y - y_next;
    y_next = y;
    y = y_prev;
    const int idx = n - 1;
    if (idx % 2 == 0) sum += weight[idx / 2] * y;
    if (idx == 1) y1 = y;
    if (std::abs(y) > kBig) {
      y /= kBig;
      y_next /= kBig;
      sum /= kBig;
      y1 /= kBig;
    }
  }
  if (start == 0) y1 = y_next;

  const Scalar log_norm = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
  const Scalar scale = std::exp(log_norm) / sum;
  return {y * scale, y1 * scale};
}

Scalar bessel_j(Scalar nu, Scalar x) { return bessel_j_pair(nu, x).first; }

namespace {

// McMahon's large-zero expansion.
Scalar mcmahon_guess(Scalar nu, int m) {
  const Scalar mu = 4.0 * nu * nu;
  const Scalar beta = (m + 0.5 * nu - 0.25) * std::numbers::pi;
  const Scalar e = 8.0 * beta;
  return beta - (mu - 1.0) / e -
         4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

// Safeguarded Newton on a sign-change bracket [lo, hi] of J_nu.
Scalar refine_zero(Scalar nu, Scalar lo, Scalar hi, Scalar guess) {
  Scalar f_lo = bessel_j(nu, lo);
  Scalar x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const auto [j, j_next] = bessel_j_pair(nu, x);
    if (j == 0.0) return x;
    if ((j < 0.0) == (f_lo < 0.0)) {
      lo = x;
      f_lo = j;
    } else {
      hi = x;
    }
    const Scalar dj = nu / x * j - j_next;
    Scalar next = x - j / dj;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const Scalar step = std::abs(next - x);
    x = next;
    if (step <= 4.0 * std::numeric_limits<Scalar>::epsilon() * x ||
        hi - lo <= 4.0 * std::numeric_limits<Scalar>::epsilon() * x) {
      break;
    }
  }
  return x;
}

// Consecutive zeros of J_nu are more than 2.9 apart for every nu >= 0, so a
// stride of 0.5 never straddles two of them.
constexpr Scalar kZeroScanStride = 0.5;

template <typename Stop>
std::vector<Scalar> scan_zeros(Scalar nu, Stop stop) {
  std::vector<Scalar> zeros;
  // j_{nu,1} > nu, and J_nu > 0 on (0, nu].
  Scalar a = std::max(nu, 1e-3);
  Scalar fa = bessel_j(nu, a);
  while (true) {
    const Scalar b = a + kZeroScanStride;
    if (stop(zeros, a)) break;
    const Scalar fb = bessel_j(nu, b);
    if (fb == 0.0) {
      zeros.push_back(b);
      a = b + 1e-9;
      fa = bessel_j(nu, a);
      continue;
    }
    if ((fa < 0.0) != (fb < 0.0)) {
      const int m = static_cast<int>(zeros.size()) + 1;
      zeros.push_back(refine_zero(nu, a, b, mcmahon_guess(nu, m)));
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace

Scalar bessel_zero(Scalar nu, int m) {
  if (!(nu >= 0.0) || m < 1) {
    throw Error(ErrorCode::Domain, "bessel_zero: requires nu >= 0, m >= 1");
  }
  const auto zeros = scan_zeros(nu, [m](const std::vector<Scalar>& z, Scalar) {
    return static_cast<int>(z.size()) >= m;
  });
  return zeros[static_cast<std::size_t>(m - 1)];
}

std::vector<Scalar> bessel_zeros_below(Scalar nu, Scalar limit) {
  if (!(nu >= 0.0)) {
    throw Error(ErrorCode::Domain, "bessel_zeros_below: requires nu >= 0");
  }
  if (!(limit > nu)) return {};
  auto zeros = scan_zeros(nu, [limit](const std::vector<Scalar>&, Scalar a) {
    return a > limit;
  });
  while (!zeros.empty() && zeros.back() > limit) zeros.pop_back();
  return zeros;
}

int harmonic_multiplicity(int d, int k) {
  // degree-k harmonics on S^n, n = d - 2: C(k+n, n) - C(k+n-2, n)
  const int n = d - 2;
  auto binom = [](int top, int bottom) -> long long {
    if (top < bottom || top < 0) return 0;
    long long r = 1;
    for (int i = 1; i <= bottom; ++i) r = r * (top - bottom + i) / i;
    return r;
  };
  return static_cast<int>(binom(k + n, n) - binom(k + n - 2, n));
}

std::vector<DiscLevel> enumerate_disc_levels(int d, Scalar threshold,
                                             MultiplicityMode mode) {
  if (d < 3) throw Error(ErrorCode::Domain, "enumerate_disc_levels: d < 3");
  if (!(threshold > 0.0)) {
    throw Error(ErrorCode::Domain, "enumerate_disc_levels: threshold <= 0");
  }
  std::vector<DiscLevel> levels;
  const Scalar shift = 0.5 * (d - 3);
  for (int k = 0;; ++k) {
    const auto zeros = bessel_zeros_below(k + shift, threshold);
    if (zeros.empty()) break;  // j_{nu,1} increases with nu
    const int mult =
        mode == MultiplicityMode::Weighted ? harmonic_multiplicity(d, k) : 1;
    for (std::size_t m = 0; m < zeros.size(); ++m) {
      levels.push_back({k, static_cast<int>(m) + 1, zeros[m], mult});
    }
  }
  std::sort(levels.begin(), levels.end(),
            [](const DiscLevel& a, const DiscLevel& b) { return a.zero < b.zero; });
  return levels;
}

// ---------------------------------------------------------------------------
// Adaptive Simpson
// ---------------------------------------------------------------------------

namespace {

struct SimpsonState {
  const std::function<Scalar(Scalar)>& fn;
  std::size_t evaluations = 0;
  Scalar error = 0.0;
  bool failed = false;
  Scalar floor = 0.0;  // local tolerances stop halving at roundoff of the total
  Scalar worst_a = 0.0, worst_b = 0.0, worst_err = -1.0;

  Scalar eval(Scalar x) {
    ++evaluations;
    return fn(x);
  }

  Scalar recurse(Scalar a, Scalar fa, Scalar m, Scalar fm, Scalar b, Scalar fb,
                 Scalar whole, Scalar tol, int depth) {
    const Scalar lm = 0.5 * (a + m);
    const Scalar rm = 0.5 * (m + b);
    const Scalar flm = eval(lm);
    const Scalar frm = eval(rm);
    const Scalar left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const Scalar right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const Scalar delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * std::max(tol, floor)) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= kQuadDepthCap) {
      failed = true;
      const Scalar err = std::abs(delta) / 15.0;
      error += err;
      if (err > worst_err) {
        worst_err = err;
        worst_a = a;
        worst_b = b;
      }
      return left + right + delta / 15.0;
    }
    return recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

QuadResult adaptive_quad(const std::function<Scalar(Scalar)>& fn, Scalar a,
                         Scalar b, Scalar tol) {
  if (!(tol > 0.0) || !(a <= b)) {
    throw Error(ErrorCode::Domain, "adaptive_quad: requires a <= b, tol > 0");
  }
  if (a == b) return {};
  SimpsonState st{fn};
  const Scalar m = 0.5 * (a + b);
  const Scalar fa = st.eval(a);
  const Scalar fm = st.eval(m);
  const Scalar fb = st.eval(b);
  const Scalar whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  st.floor = 16.0 * std::numeric_limits<Scalar>::epsilon() * std::abs(whole);
  const Scalar value = st.recurse(a, fa, m, fm, b, fb, whole, tol, 0);
  if (st.failed) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "adaptive_quad: depth cap " << kQuadDepthCap
        << " reached; worst subinterval [" << st.worst_a << ", " << st.worst_b
        << "] with error " << st.worst_err;
    throw Error(ErrorCode::NonConvergence, msg.str());
  }
  return {value, st.error, st.evaluations};
}

Scalar riesz_sum(std::span<const Scalar> values, Scalar p) {
  if (!(p >= 0.0)) throw Error(ErrorCode::Domain, "riesz_sum: p must be >= 0");
  Scalar total = 0.0;
  for (const Scalar x : values) {
    if (x > 0.0) total += std::pow(x, p);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Splines
// ---------------------------------------------------------------------------

namespace {

void check_knots(const std::vector<Scalar>& x, const std::vector<Scalar>& y,
                 std::size_t min_size) {
  if (x.size() != y.size() || x.size() < min_size) {
    throw Error(ErrorCode::Validation, "spline: need matching x/y with enough knots");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      throw Error(ErrorCode::Validation, "spline: knots must be strictly increasing");
    }
  }
}

}  // namespace

CubicSpline::CubicSpline(std::vector<Scalar> x, std::vector<Scalar> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_knots(x_, y_, 2);
  const std::size_t n = x_.size();
  m_.assign(n, 0.0);
  if (n < 3) return;
  // Thomas algorithm for the natural-spline tridiagonal system.
  std::vector<Scalar> c(n, 0.0), r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Scalar h0 = x_[i] - x_[i - 1];
    const Scalar h1 = x_[i + 1] - x_[i];
    const Scalar diag = 2.0 * (h0 + h1) - h0 * c[i - 1];
    c[i] = h1 / diag;
    const Scalar rhs =
        6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    r[i] = (rhs - h0 * r[i - 1]) / diag;
  }
  for (std::size_t i = n - 2; i >= 1; --i) {
    m_[i] = r[i] - c[i] * m_[i + 1];
  }
}

std::size_t CubicSpline::segment(Scalar t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

Scalar CubicSpline::eval(Scalar t, int order) const {
  const std::size_t i = segment(t);
  const Scalar h = x_[i + 1] - x_[i];
  const Scalar a = (x_[i + 1] - t) / h;
  const Scalar b = (t - x_[i]) / h;
  switch (order) {
    case 0:
      return a * y_[i] + b * y_[i + 1] +
             ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    case 1:
      return (y_[i + 1] - y_[i]) / h -
             (3.0 * a * a - 1.0) / 6.0 * h * m_[i] +
             (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
    case 2:
      return a * m_[i] + b * m_[i + 1];
    default:
      throw Error(ErrorCode::Domain, "CubicSpline::eval: order must be 0, 1 or 2");
  }
}

MonotoneCubic::MonotoneCubic(std::vector<Scalar> x, std::vector<Scalar> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_knots(x_, y_, 2);
  const std::size_t n = x_.size();
  std::vector<Scalar> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  d_.assign(n, 0.0);
  d_[0] = delta[0];
  d_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    d_[i] = (delta[i - 1] * delta[i] <= 0.0) ? 0.0 : 0.5 * (delta[i - 1] + delta[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (delta[i] == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    const Scalar al = d_[i] / delta[i];
    const Scalar be = d_[i + 1] / delta[i];
    const Scalar s = al * al + be * be;
    if (s > 9.0) {
      const Scalar tau = 3.0 / std::sqrt(s);
      d_[i] = tau * al * delta[i];
      d_[i + 1] = tau * be * delta[i];
    }
  }
}

Scalar MonotoneCubic::operator()(Scalar t) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  i = std::min(i, x_.size() - 2);
  const Scalar h = x_[i + 1] - x_[i];
  const Scalar u = (t - x_[i]) / h;
  const Scalar h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  const Scalar h10 = u * (1.0 - u) * (1.0 - u);
  const Scalar h01 = u * u * (3.0 - 2.0 * u);
  const Scalar h11 = u * u * (u - 1.0);
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

}  // namespace cusp
