#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "cusp/geometry.hpp"

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

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("function families and their jets") {
  const auto g = ScalarFunction::gaussian(0.5, 1.0, 0.8);
  const Scalar d = 1e-5;
  for (Scalar s = -2.0; s < 4.0; s += 0.29) {
    CHECK(g.d1(s) == doctest::Approx((g(s + d) - g(s - d)) / (2 * d)).epsilon(1e-7));
    CHECK(g.d2(s) == doctest::Approx((g.d1(s + d) - g.d1(s - d)) / (2 * d)).epsilon(1e-6));
  }
  const auto p = ScalarFunction::power_tail(1.0, 1.0);
  CHECK(p(0.0) == doctest::Approx(pi / 2));
  CHECK(p(2.0) == doctest::Approx(pi / 8));
  CHECK(p(-2.0) == doctest::Approx(pi / 8));
  CHECK(p.d1(0.5) == 0.0);
  CHECK(p.d1(2.0) == doctest::Approx(-2.0 * pi / 16));
  CHECK(ScalarFunction::constant(3.0).d1(1.0) == 0.0);
}

TEST_CASE("profile validation") {
  ProfileParams bad;
  bad.alpha = -1.0;
  CHECK(code_of([&] { make_profile(ProfileFamily::PowerTail, bad); }) == ErrorCode::Domain);
  ProfileParams neg;
  neg.a = -0.1;
  CHECK(code_of([&] { make_profile(ProfileFamily::Constant, neg); }) == ErrorCode::Domain);
  CHECK(make_profile(ProfileFamily::PowerTail, {}).decays);
  CHECK_FALSE(make_profile(ProfileFamily::Constant, {}).decays);
}

TEST_CASE("frame of a constant-torsion curve is a uniform rotation") {
  const CurveSpecNd c(3, {ScalarFunction::constant(0.4), ScalarFunction::constant(0.7)});
  const TangFrame fr = tang_frame(c, {0.0, 10.0}, 1e-3);
  for (Scalar s : {0.0, 1.3, 5.0, 10.0}) {
    const MatrixX r = fr.rotation(s);
    MatrixX expected(2, 2);
    expected << std::cos(0.7 * s), -std::sin(0.7 * s), std::sin(0.7 * s), std::cos(0.7 * s);
    CHECK((r - expected).norm() < 1e-8);
    CHECK((r.transpose() * r - MatrixX::Identity(2, 2)).norm() < 1e-8);
    const MatrixX dr = fr.rotation_derivative(s);
    CHECK((dr + r * normal_block(c.frenet_matrix(s))).norm() < 1e-12);
  }
  CHECK(code_of([&] { fr.rotation(11.0); }) == ErrorCode::FrameCoverage);
}

TEST_CASE("frenet matrix is skew with curvatures off the diagonal") {
  const CurveSpecNd c(4, {ScalarFunction::constant(0.3), ScalarFunction::gaussian(1.0, 0.0, 1.0),
                          ScalarFunction::constant(-0.2)});
  const MatrixX k = c.frenet_matrix(0.5);
  CHECK((k + k.transpose()).norm() == 0.0);
  CHECK(k(0, 1) == doctest::Approx(0.3));
  CHECK(k(1, 2) == doctest::Approx(std::exp(-0.125)));
  CHECK(k(2, 3) == doctest::Approx(-0.2));
  CHECK(c.frenet_matrix(0.5, 1)(1, 2) == doctest::Approx(-0.5 * std::exp(-0.125)));
}

TEST_CASE("reconstructed constant-curvature curve is a circle") {
  std::vector<Scalar> grid;
  for (int i = 0; i <= 64; ++i) grid.push_back(pi * i / 64.0);
  const auto cs = reconstruct_curve(PlaneCurveSpec::constant(1.0), 0.0, 0.0, 0.0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(cs.a[i] == doctest::Approx(std::sin(grid[i])).scale(1.0).epsilon(1e-9));
    CHECK(cs.b[i] == doctest::Approx(1.0 - std::cos(grid[i])).scale(1.0).epsilon(1e-9));
    CHECK(cs.angle[i] == doctest::Approx(grid[i]).scale(1.0).epsilon(1e-9));
  }
}

TEST_CASE("validity checks") {
  ProfileParams p;
  p.a = 0.6;
  const auto f = make_profile(ProfileFamily::Constant, p);
  const auto ok = validity_check(PlaneCurveSpec::constant(1.0), f, {0.0, 2.0});
  CHECK(ok.passes_width);
  CHECK(ok.passes_injectivity);
  CHECK(ok.sup_width_curvature == doctest::Approx(0.6));

  const auto wide = validity_check(PlaneCurveSpec::constant(2.0), f, {0.0, 1.0});
  CHECK_FALSE(wide.passes_width);

  p.a = 0.5;
  const auto closed =
      validity_check(PlaneCurveSpec::constant(1.0), make_profile(ProfileFamily::Constant, p),
                     {0.0, 7.0});
  CHECK(closed.passes_width);
  CHECK_FALSE(closed.passes_injectivity);
  CHECK_FALSE(closed.offending_pairs.empty());

  const TwistCondition tw{ScalarFunction::constant(2.0), 1.0};
  const auto twisted = validity_check(PlaneCurveSpec::zero(), f, {0.0, 1.0}, tw);
  REQUIRE(twisted.twist_sup.has_value());
  CHECK(*twisted.twist_sup == doctest::Approx(1.2));
  CHECK_FALSE(twisted.passes_twist);
}

TEST_CASE("sup_abs finds an interior maximum") {
  CHECK(sup_abs([](Scalar s) { return std::sin(s); }, 0.0, 3.0) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("CSV tables") {
  const auto path = temp_file("cusp_geom_table.csv", "s,value\n0,1\n1,2\n2,5\n3,10\n");
  const auto t = read_csv_table(path.string());
  REQUIRE(t.column("value") != nullptr);
  CHECK(t.column("missing") == nullptr);
  const auto fn = load_function_csv(path.string());
  CHECK(fn(1.0) == doctest::Approx(2.0));
  CHECK(fn.domain().second == 3.0);

  const auto bad = temp_file("cusp_geom_bad.csv", "s,value\n0,1\n1,oops\n");
  CHECK(code_of([&] { read_csv_table(bad.string()); }) == ErrorCode::Validation);
  const auto unsorted = temp_file("cusp_geom_unsorted.csv", "s,value\n0,1\n0,2\n1,3\n");
  CHECK(code_of([&] { load_function_csv(unsorted.string()); }) == ErrorCode::Validation);
  CHECK(code_of([] { read_csv_table("/nonexistent/cusp.csv"); }) == ErrorCode::Validation);
}
