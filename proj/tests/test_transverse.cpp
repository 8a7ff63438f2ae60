#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cusp/transverse.hpp"
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

TEST_CASE("interval levels") {
  const auto l = interval_levels(0.5, 3);
  REQUIRE(l.size() == 3);
  CHECK(l[0] == doctest::Approx(pi * pi));
  CHECK(l[2] == doctest::Approx(9 * pi * pi));
}

TEST_CASE("disc levels scale as 1/f^2") {
  const auto a = disc_levels(1.0, 3, 30.0, MultiplicityMode::Weighted);
  const auto b = disc_levels(2.0, 3, 7.5, MultiplicityMode::Weighted);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == a.size());
  CHECK(a[0].level == doctest::Approx(oracle::J0_1 * oracle::J0_1));
  CHECK(a[1].multiplicity == 2);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i].level == doctest::Approx(a[i].level / 4));
  CHECK(disc_levels(1.0, 4, 10.0, MultiplicityMode::Weighted)[0].level ==
        doctest::Approx(pi * pi));
}

TEST_CASE("cross sections") {
  const auto r = CrossSection::rectangle(2.0, 1.0);
  CHECK(r.contains(Vector2(0.9, 0.4)));
  CHECK_FALSE(r.contains(Vector2(1.1, 0.0)));
  CHECK(r.circumradius() == doctest::Approx(std::sqrt(1.25)));
  CHECK(r.area() == doctest::Approx(2.0));

  const auto tri = CrossSection::polygon({{0, 0}, {3, 0}, {0, 3}, {0, 0}});
  CHECK(tri.area() == doctest::Approx(4.5));
  CHECK(tri.contains(Vector2(0.0, 0.0)));  // centroid (1, 1) moved to the origin
  CHECK_FALSE(tri.contains(Vector2(-1.5, 0.0)));
  CHECK(tri.circumradius() == doctest::Approx(std::sqrt(5.0)));
  CHECK(code_of([] { CrossSection::polygon({{0, 0}, {1, 1}}); }) == ErrorCode::Validation);

  const auto e = CrossSection::ellipse(2.0, 1.0);
  CHECK(e.circumradius() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(e.area() == doctest::Approx(2 * pi));

  const auto shifted = CrossSection::disc(1.0).with_axis(Vector2(0.5, 0.0));
  CHECK_FALSE(shifted.centroid_at_origin());
  CHECK(shifted.circumradius() == doctest::Approx(1.5));
  CHECK(shifted.contains(Vector2(-1.4, 0.0)));
}

TEST_CASE("section mask holds interior nodes only") {
  const auto d = CrossSection::disc(1.0);
  const auto g = d.mask(1.0 / 32);
  for (int i = 0; i < g.size(); ++i) CHECK(g.point(i).norm() < 1.0);
  CHECK(g.size() * g.step() * g.step() == doctest::Approx(pi).epsilon(0.03));
}

TEST_CASE("rotation generator is exactly skew") {
  const auto op = assemble_twist_operator(CrossSection::ellipse(1.0, 0.6), 1.0 / 16);
  const SparseMatrix sum = SparseMatrix(op.generator) + SparseMatrix(op.generator.transpose());
  CHECK(sum.norm() == 0.0);
  const SparseMatrix m = op.matrix(0.5);
  CHECK((m - SparseMatrix(m.transpose())).norm() < 1e-12);
}

TEST_CASE("unit square ground state") {
  // square centred on the axis
  const auto ev = twist_eigs(CrossSection::rectangle(1.0, 1.0), 0.0, 1, 1.0 / 64);
  CHECK(std::abs(ev[0] / (2 * pi * pi) - 1.0) < 5e-4);
}

TEST_CASE("twist raises angular modes of the disc by c^2 m^2") {
  const auto d = CrossSection::disc(1.0);
  const Scalar h = 1.0 / 32;
  const auto e0 = twist_eigs(d, 0.0, 3, h);
  const auto e1 = twist_eigs(d, 0.5, 3, h);
  CHECK(e1[0] - e0[0] < 1e-3 * 0.5);
  CHECK(e1[1] - e0[1] == doctest::Approx(0.5).epsilon(0.03));
  CHECK(e1[2] - e0[2] == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("rectangle levels are nondecreasing in c^2") {
  const auto r = CrossSection::rectangle(2.0, 1.0);
  std::vector<Scalar> prev = twist_eigs(r, 0.0, 4, 1.0 / 16);
  for (Scalar c2 : {0.25, 0.5, 1.0, 2.0}) {
    const auto cur = twist_eigs(r, c2, 4, 1.0 / 16);
    for (std::size_t j = 0; j < cur.size(); ++j) CHECK(cur[j] >= prev[j] - 1e-9);
    prev = cur;
  }
}

TEST_CASE("twist table interpolates and refuses to extrapolate") {
  const auto r = CrossSection::rectangle(2.0, 1.0);
  const Scalar h = 1.0 / 16;
  const auto table = build_twist_table(r, 2.0, 3, h);
  CHECK(table.count() == 3);
  CHECK(table.c2_max() == doctest::Approx(2.0));
  const auto direct = twist_eigs(r, 0.7, 3, h);
  const auto interp = table.eigenvalues(0.7);
  for (int j = 0; j < 3; ++j) CHECK(interp[j] == doctest::Approx(direct[j]).epsilon(5e-3));
  CHECK(code_of([&] { table.eigenvalues(2.5); }) == ErrorCode::TableCoverage);
}
