#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cusp/numerics.hpp"
#include "oracle_values.hpp"

using namespace cusp;
using std::numbers::pi;

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

}  // namespace

TEST_CASE("lt_constant at half-integer and integer sigma") {
  CHECK(lt_constant(1.5) == doctest::Approx(oracle::L_3_2).epsilon(1e-13));
  CHECK(lt_constant(0.5) == doctest::Approx(oracle::L_1_2).epsilon(1e-13));
  CHECK(lt_constant(1.0) == doctest::Approx(oracle::L_1).epsilon(1e-13));
  CHECK(code_of([] { lt_constant(-0.5); }) == ErrorCode::Domain);
}

TEST_CASE("lt_constant recursion L(s+1) = L(s) (s+1)/(s+3/2)") {
  for (Scalar s = 0.0; s < 6.0; s += 0.37) {
    CHECK(lt_constant(s + 1.0) ==
          doctest::Approx(lt_constant(s) * (s + 1.0) / (s + 1.5)).epsilon(1e-12));
  }
}

TEST_CASE("bessel_j against the standard library") {
  for (Scalar nu : {0.0, 0.5, 1.0, 2.5, 7.0}) {
    for (Scalar x = 0.0; x < 40.0; x += 0.731) {
      CHECK(bessel_j(nu, x) == doctest::Approx(std::cyl_bessel_j(nu, x)).scale(1.0).epsilon(1e-12));
    }
  }
  const auto [j, jp] = bessel_j_pair(1.0, 3.3);
  CHECK(j == doctest::Approx(std::cyl_bessel_j(1.0, 3.3)).epsilon(1e-12));
  CHECK(jp == doctest::Approx(std::cyl_bessel_j(2.0, 3.3)).epsilon(1e-12));
}

TEST_CASE("bessel zeros") {
  CHECK(std::abs(bessel_zero(0.0, 1) - oracle::J0_1) < 1e-12);
  CHECK(std::abs(bessel_zero(0.0, 2) - oracle::J0_2) < 1e-12);
  CHECK(std::abs(bessel_zero(1.0, 1) - oracle::J1_1) < 1e-12);
  CHECK(std::abs(bessel_zero(1.0, 2) - oracle::J1_2) < 1e-12);
  CHECK(std::abs(bessel_zero(2.0, 1) - oracle::J2_1) < 1e-12);
  CHECK(std::abs(bessel_zero(1.5, 1) - oracle::J3_2_1) < 1e-12);
  for (int m = 1; m <= 20; ++m) CHECK(std::abs(bessel_zero(0.5, m) - m * pi) < 1e-12);
  CHECK(code_of([] { bessel_zero(1.0, 0); }) == ErrorCode::Domain);
}

TEST_CASE("zeros below a limit are the sign changes of J") {
  const auto z = bessel_zeros_below(0.0, 20.0);
  REQUIRE(z.size() == 6);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(std::abs(std::cyl_bessel_j(0.0, z[i])) < 1e-12);
    if (i > 0) CHECK(z[i] > z[i - 1]);
  }
  CHECK(bessel_zeros_below(3.0, 6.0).empty());
}

TEST_CASE("harmonic multiplicities") {
  CHECK(harmonic_multiplicity(3, 0) == 1);
  for (int k = 1; k < 6; ++k) CHECK(harmonic_multiplicity(3, k) == 2);
  for (int k = 0; k < 6; ++k) CHECK(harmonic_multiplicity(4, k) == 2 * k + 1);
}

TEST_CASE("disc levels of the unit disc below 6") {
  const auto verbatim = enumerate_disc_levels(3, 6.0, MultiplicityMode::Verbatim);
  REQUIRE(verbatim.size() == 4);
  CHECK(verbatim[0].zero == doctest::Approx(oracle::J0_1));
  CHECK(verbatim[1].zero == doctest::Approx(oracle::J1_1));
  CHECK(verbatim[2].zero == doctest::Approx(oracle::J2_1));
  CHECK(verbatim[3].zero == doctest::Approx(oracle::J0_2));
  for (const auto& l : verbatim) CHECK(l.multiplicity == 1);

  const auto weighted = enumerate_disc_levels(3, 6.0, MultiplicityMode::Weighted);
  REQUIRE(weighted.size() == 4);
  CHECK(weighted[0].multiplicity == 1);
  CHECK(weighted[1].multiplicity == 2);
  CHECK(weighted[2].multiplicity == 2);
  CHECK(weighted[3].multiplicity == 1);

  const auto ball = enumerate_disc_levels(4, 4.0, MultiplicityMode::Weighted);
  REQUIRE(ball.size() == 1);
  CHECK(ball[0].zero == doctest::Approx(pi));
  CHECK(code_of([] { enumerate_disc_levels(2, 5.0, MultiplicityMode::Verbatim); }) ==
        ErrorCode::Domain);
}

TEST_CASE("adaptive quadrature") {
  auto r = adaptive_quad([](Scalar x) { return std::sin(x); }, 0.0, pi, 1e-12);
  CHECK(r.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.error <= 1e-10);
  r = adaptive_quad([](Scalar x) { return std::sqrt(x); }, 0.0, 1.0, 1e-10);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  r = adaptive_quad([](Scalar x) { return std::exp(x); }, 1.0, 1.0, 1e-10);
  CHECK(r.value == 0.0);
  CHECK(code_of([] {
          adaptive_quad([](Scalar x) { return x < 0.3 ? 0.0 : 1.0 / (x - 0.3 + 1e-300); }, 0.0,
                        1.0, 1e-12);
        }) == ErrorCode::NonConvergence);
}

TEST_CASE("riesz sums skip nonpositive entries") {
  const std::vector<Scalar> v{-1.0, 0.0, 1.0, 4.0};
  CHECK(riesz_sum(v, 1.5) == doctest::Approx(9.0));
  CHECK(riesz_sum(v, 0.0) == doctest::Approx(2.0));
  CHECK(riesz_sum(std::vector<Scalar>{}, 1.0) == 0.0);
}

TEST_CASE("natural cubic spline reproduces cubics' interior and linear data") {
  std::vector<Scalar> x, y;
  for (int i = 0; i <= 10; ++i) {
    x.push_back(i * 0.5);
    y.push_back(2.0 * x.back() - 1.0);
  }
  CubicSpline s(x, y);
  for (Scalar t = -0.5; t < 5.5; t += 0.13) {
    CHECK(s(t) == doctest::Approx(2.0 * t - 1.0));
    CHECK(s.eval(t, 1) == doctest::Approx(2.0));
    CHECK(s.eval(t, 2) == doctest::Approx(0.0).scale(1.0));
  }
  std::vector<Scalar> xs, ys;
  for (int i = 0; i <= 80; ++i) {
    xs.push_back(i * 0.05);
    ys.push_back(std::sin(xs.back()));
  }
  CubicSpline sn(xs, ys);
  for (Scalar t = 0.5; t < 3.5; t += 0.071) {
    CHECK(std::abs(sn(t) - std::sin(t)) < 1e-6);
    CHECK(std::abs(sn.eval(t, 1) - std::cos(t)) < 1e-4);
  }
}

TEST_CASE("monotone cubic preserves monotone data") {
  const std::vector<Scalar> x{0.0, 1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<Scalar> y{0.0, 0.0, 0.1, 5.0, 5.0, 6.0};
  MonotoneCubic m(x, y);
  Scalar prev = m(0.0);
  for (Scalar t = 0.0; t <= 5.0; t += 0.01) {
    const Scalar v = m(t);
    CHECK(v >= prev - 1e-14);
    prev = v;
  }
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(m(x[i]) == doctest::Approx(y[i]));
}
