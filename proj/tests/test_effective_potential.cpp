#include <doctest.h>

#include <cmath>

#include "cusp/effective_potential.hpp"
#include "oracle_values.hpp"

using namespace cusp;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::Domain;
}

ProfileSpec constant_profile(Scalar a) {
  ProfileParams p;
  p.a = a;
  return make_profile(ProfileFamily::Constant, p);
}

CurveSpecNd helix() {
  return CurveSpecNd(3, {ScalarFunction::gaussian(0.8, 0.0, 1.5), ScalarFunction::constant(0.7)});
}

}  // namespace

TEST_CASE("plane potential on constant curvature") {
  const auto c = PlaneCurveSpec::constant(0.5);
  CHECK(w_full_2d(c, 0.0, 0.5) == doctest::Approx(-0.04));
  CHECK(w_full_2d(c, 3.0, 0.0) == doctest::Approx(-0.0625));
  CHECK(w_minus_2d(c, constant_profile(0.5), 0.0) == doctest::Approx(1.0 / 9.0));
  const auto m = metric_2d(c, 1.0, 0.4);
  CHECK(m.h == doctest::Approx(1.2));
  CHECK(m.h1 == 0.0);
}

TEST_CASE("plane potential of a Gaussian bump") {
  const auto c = PlaneCurveSpec::gaussian_bump(0.5, 0.0, 1.0);
  CHECK(w_minus_2d(c, constant_profile(0.4), 1.0) ==
        doctest::Approx(oracle::wminus_bump).epsilon(1e-12));
  CHECK(w_full_2d(c, 1.0, 0.3) == doctest::Approx(oracle::wfull_bump).epsilon(1e-12));
}

TEST_CASE("plane potential errors") {
  CHECK(code_of([] { w_full_2d(PlaneCurveSpec::constant(2.0), 0.0, -0.5); }) ==
        ErrorCode::Singularity);
  CHECK(code_of([] { w_minus_2d(PlaneCurveSpec::constant(2.0), constant_profile(0.5), 0.0); }) ==
        ErrorCode::WidthCondition);
}

TEST_CASE("plane majorant dominates -W across the section") {
  const auto c = PlaneCurveSpec::gaussian_bump(0.9, 0.5, 0.7);
  const auto f = constant_profile(0.6);
  for (Scalar s = -3.0; s <= 3.0; s += 0.1) {
    const Scalar wm = w_minus_2d(c, f, s);
    for (Scalar u = -0.599; u <= 0.599; u += 0.02) CHECK(-w_full_2d(c, s, u) <= wm + 1e-14);
  }
}

TEST_CASE("metric derivatives match finite differences of h") {
  const auto c = helix();
  const TangFrame fr = tang_frame(c, {-2.0, 2.0}, 1e-3);
  VectorX u(2);
  u << 0.2, -0.15;
  const Scalar d = 1e-4;
  for (Scalar s : {-1.2, 0.0, 0.7}) {
    const auto m = metric_nd(c, fr, s, u);
    const auto p = metric_nd(c, fr, s + d, u);
    const auto q = metric_nd(c, fr, s - d, u);
    CHECK(m.h1 == doctest::Approx((p.h - q.h) / (2 * d)).epsilon(1e-6));
    CHECK(m.h11 == doctest::Approx((p.h1 - q.h1) / (2 * d)).epsilon(1e-5));
    const Scalar r = fr.rotation(s)(0, 0) * u(0) + fr.rotation(s)(1, 0) * u(1);
    CHECK(m.h == doctest::Approx(1.0 - c.kappa1(s) * r));
  }
}

TEST_CASE("tube majorant in R^3 matches an explicit term-by-term sum") {
  const auto c = helix();
  const TangFrame fr = tang_frame(c, {-2.0, 2.0}, 1e-3);
  const Scalar f = 0.3;
  for (Scalar s : {-1.0, 0.25, 1.5}) {
    const MatrixX r = fr.rotation(s);
    const MatrixX k = c.frenet_matrix(s), k1 = c.frenet_matrix(s, 1), k2 = c.frenet_matrix(s, 2);
    // One-based indices 2..3 map to rows 1..2 of K; index 1 maps to row 0.
    Scalar t[5] = {0, 0, 0, 0, 0};
    for (int mu = 0; mu < 2; ++mu) {
      Scalar a2 = 0, mix = 0, tri = 0, a1 = 0, pr = 0;
      for (int al = 1; al <= 2; ++al) {
        const Scalar w = std::abs(r(mu, al - 1));
        a2 += w * std::abs(k2(al, 0));
        a1 += w * std::abs(k1(al, 0));
        for (int be = 0; be < 3; ++be) {
          mix += w * (std::abs(k1(al, be) * k(be, 0)) + 2 * std::abs(k(al, be) * k1(be, 0)));
          pr += w * std::abs(k(al, be) * k(be, 0));
          for (int ga = 0; ga < 3; ++ga) tri += w * std::abs(k(al, be) * k(be, ga) * k(ga, 0));
        }
      }
      t[0] += a2 * a2;
      t[1] += mix * mix;
      t[2] += tri * tri;
      t[3] += a1 * a1;
      t[4] += pr * pr;
    }
    const Scalar g = 1 - f * std::abs(k(0, 1));
    const Scalar expected = k(0, 1) * k(0, 1) / (4 * g * g) +
                            f / (2 * g * g * g) * (std::sqrt(t[0]) + std::sqrt(t[1]) + std::sqrt(t[2])) +
                            5 * f / (4 * g * g * g * g) * (std::sqrt(t[3]) + std::sqrt(t[4]));
    CHECK(w_minus_nd(c, fr, constant_profile(f), s) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("tube majorant dominates -W over the disc cross section") {
  const auto c = helix();
  const TangFrame fr = tang_frame(c, {-2.0, 2.0}, 1e-3);
  const auto f = constant_profile(0.3);
  for (Scalar s = -1.9; s <= 1.9; s += 0.2) {
    const Scalar wm = w_minus_nd(c, fr, f, s);
    for (Scalar rad : {0.0, 0.15, 0.29}) {
      for (int k = 0; k < 12; ++k) {
        VectorX u(2);
        u << rad * std::cos(0.5236 * k), rad * std::sin(0.5236 * k);
        CHECK(-w_full_nd(c, fr, s, u) <= wm + 1e-14);
      }
    }
  }
}

TEST_CASE("straight tube has no curvature potential") {
  const CurveSpecNd c(3, {ScalarFunction::zero(), ScalarFunction::constant(0.7)});
  const TangFrame fr = tang_frame(c, {0.0, 1.0}, 1e-2);
  CHECK(w_minus_nd(c, fr, constant_profile(0.5), 0.5) == 0.0);
  CHECK(code_of([] {
          w_minus_from_matrices(MatrixX::Identity(1, 1), MatrixX::Zero(3, 3), MatrixX::Zero(3, 3),
                                MatrixX::Zero(3, 3), 0.1);
        }) == ErrorCode::Domain);
}
