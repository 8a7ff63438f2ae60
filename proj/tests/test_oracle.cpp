#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cusp/oracle.hpp"
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

ProfileSpec constant(Scalar a) {
  ProfileParams p;
  p.a = a;
  return make_profile(ProfileFamily::Constant, p);
}

ProfileSpec thin() { return make_profile(ProfileFamily::PowerTail, {}); }

RegionMask section_mask(const CrossSection& c, Scalar h) {
  RegionMask m;
  m.h = h;
  m.grid2 = c.mask(h);
  return m;
}

const Potential2 kNoPotential = [](Scalar, Scalar) { return 0.0; };

}  // namespace

TEST_CASE("tube locator recovers tube coordinates") {
  const auto c = PlaneCurveSpec::constant(0.5);
  const TubeLocator loc(c, constant(0.4), {0.0, 3.0}, 0.01);
  std::vector<Scalar> grid{0.0, 1.7};
  const auto cs = reconstruct_curve(c, 0.0, 0.0, 0.0, grid);
  const Vector2 normal(-std::sin(cs.angle[1]), std::cos(cs.angle[1]));
  const Vector2 p = Vector2(cs.a[1], cs.b[1]) + 0.25 * normal;
  const auto su = loc.locate(p);
  REQUIRE(su.has_value());
  CHECK(su->first == doctest::Approx(1.7).epsilon(1e-6));
  CHECK(su->second == doctest::Approx(0.25).epsilon(1e-6));
  CHECK_FALSE(loc.inside(Vector2(cs.a[1], cs.b[1]) + 0.45 * normal));
  CHECK_FALSE(loc.inside(Vector2(-0.1, 0.0)));
}

TEST_CASE("straight strip mask") {
  const Scalar h = 1.0 / 32;
  const auto m = rasterize_region(PlaneCurveSpec::zero(), constant(0.5), {0.0, 2.0}, h);
  REQUIRE(m.grid2.has_value());
  CHECK(m.provenance == Provenance::Cartesian2d);
  for (int i = 0; i < m.interior_count(); ++i) {
    const Vector2 p = m.grid2->point(i);
    CHECK(p.x() > 0.0);
    CHECK(p.x() < 2.0);
    CHECK(std::abs(p.y()) < 0.5);
  }
  const Scalar cells = m.interior_count() * m.grid2->step() * m.grid2->step();
  CHECK(cells == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("annular arc area") {
  const Scalar h = 1.0 / 64;
  const auto m = rasterize_region(PlaneCurveSpec::constant(1.0), constant(0.3), {0.0, 2.0}, h);
  CHECK(m.interior_count() * m.grid2->step() * m.grid2->step() ==
        doctest::Approx(2.0 * 0.6).epsilon(0.02));
}

TEST_CASE("region errors") {
  CHECK(code_of([] {
          rasterize_region(PlaneCurveSpec::constant(1.0), constant(0.5), {0.0, 7.0}, 1.0 / 16);
        }) == ErrorCode::SelfIntersection);
  CHECK(code_of([] {
          rasterize_region(PlaneCurveSpec::constant(2.0), constant(0.6), {0.0, 1.0}, 1.0 / 16);
        }) == ErrorCode::WidthCondition);
  const TwistSpec fast{ScalarFunction::constant(3.0), CrossSection::disc(1.0)};
  CHECK(code_of([&] { rasterize_twisted(fast, constant(0.5), {0.0, 1.0}, 1.0 / 8); }) ==
        ErrorCode::TwistCondition);
}

TEST_CASE("reference spectra") {
  const auto sq = fd_dirichlet_eigs(section_mask(CrossSection::rectangle(1.0, 1.0), 1.0 / 64), 1);
  CHECK(sq.values[0] == doctest::Approx(2 * pi * pi).epsilon(1e-3));
  const auto disc = fd_dirichlet_eigs(section_mask(CrossSection::disc(1.0), 1.0 / 64), 1);
  CHECK(disc.values[0] == doctest::Approx(oracle::J0_1 * oracle::J0_1).epsilon(3e-3));
  const auto rect = fd_dirichlet_eigs(section_mask(CrossSection::rectangle(2.0, 1.0), 1.0 / 32), 3);
  REQUIRE(rect.converged == 3);
  const Scalar exact[3] = {pi * pi * 1.25, pi * pi * 2.0, pi * pi * 3.25};
  for (int j = 0; j < 3; ++j) CHECK(rect.values[j] == doctest::Approx(exact[j]).epsilon(3e-3));
  for (Scalar r : rect.residuals) CHECK(r < 1e-8);
}

TEST_CASE("straightened form of a straight strip is the rectangle") {
  const Scalar h = 1.0 / 32;
  const auto s = straightened_eigs(PlaneCurveSpec::zero(), constant(0.5), kNoPotential, {0.0, 2.0},
                                   h, 3);
  const auto c = fd_dirichlet_eigs(section_mask(CrossSection::rectangle(2.0, 1.0), h), 3);
  for (int j = 0; j < 3; ++j) CHECK(s.values[j] == doctest::Approx(c.values[j]).epsilon(1e-9));
}

TEST_CASE("bending lowers the ground state of a strip") {
  const Scalar h = 1.0 / 32;
  const auto bent = straightened_eigs(PlaneCurveSpec::constant(0.3), constant(0.3), kNoPotential,
                                      {0.0, 5.0}, h, 1);
  const auto flat = straightened_eigs(PlaneCurveSpec::zero(), constant(0.3), kNoPotential,
                                      {0.0, 5.0}, h, 1);
  CHECK(bent.values[0] < flat.values[0]);
  CHECK(flat.values[0] == doctest::Approx(std::pow(pi / 0.6, 2) + std::pow(pi / 5, 2)).epsilon(5e-3));
}

TEST_CASE("a potential shifts a straight strip uniformly") {
  const auto base = straightened_eigs(PlaneCurveSpec::zero(), constant(0.5), kNoPotential,
                                      {0.0, 2.0}, 1.0 / 16, 2);
  const auto shifted = straightened_eigs(PlaneCurveSpec::zero(), constant(0.5),
                                         [](Scalar, Scalar) { return 3.0; }, {0.0, 2.0}, 1.0 / 16, 2);
  for (int j = 0; j < 2; ++j) CHECK(shifted.values[j] == doctest::Approx(base.values[j] - 3.0));
}

TEST_CASE("enlarging the window never raises an eigenvalue") {
  // Staircase masks on one lattice: the smaller operator is a principal
  // submatrix of the larger one.
  const auto c = PlaneCurveSpec::gaussian_bump(0.5, 0.0, 1.0);
  const auto f = thin();
  const TubeLocator small(c, f, {-1.5, 1.5}, 0.01);
  const TubeLocator large(c, f, {-2.5, 2.5}, 0.01);
  const auto lat = box_lattice<2>(large.lo(), large.hi(), 1.0 / 24);
  const auto gs = build_masked_grid<2>(lat, [&](const Vector2& p) { return small.inside(p); }, false);
  const auto gl = build_masked_grid<2>(lat, [&](const Vector2& p) { return large.inside(p); }, false);
  REQUIRE(gs.size() < gl.size());
  EigenSolverOptions o;
  o.lower_bound = 0.0;
  const auto es = smallest_eigenpairs(assemble_laplacian(gs), 4, o);
  const auto el = smallest_eigenpairs(assemble_laplacian(gl), 4, o);
  for (int j = 0; j < 4; ++j) CHECK(el.values[j] <= es.values[j] + 1e-9);
}

TEST_CASE("verify on a strip below threshold") {
  VerifyScenario sc;
  sc.form = OracleForm::Straightened;
  sc.profile = constant(1.0);
  sc.s_cut = {0.0, 10.0};
  sc.lambda = 2.0;
  sc.grid_steps = {1.0 / 8, 1.0 / 16};
  const auto r = verify_bound(sc);
  CHECK(r.moment == 0.0);
  CHECK(r.volume == doctest::Approx(20.0));
  for (const auto& b : r.bounds) CHECK(b.verdict == "certified");
}

TEST_CASE("verify on a short thin cusp certifies both bounds") {
  VerifyScenario sc;
  sc.form = OracleForm::Straightened;
  sc.profile = thin();
  sc.s_cut = {-2.0, 2.0};
  sc.lambda = 4.0;
  sc.grid_steps = {1.0 / 16, 1.0 / 32};
  const auto r = verify_bound(sc);
  REQUIRE(r.grids.size() == 2);
  CHECK(r.moment > 0.0);
  REQUIRE(r.bounds.size() == 2);
  for (const auto& b : r.bounds) {
    CHECK(b.verdict == classify(r.moment, r.convergence_error, b.value));
    CHECK(b.verdict == "certified");
    CHECK(r.moment + r.convergence_error <= b.value);
  }
}

TEST_CASE("verdict classification") {
  CHECK(classify(1.0, 0.1, 2.0) == "certified");
  CHECK(classify(1.95, 0.1, 2.0) == "inconclusive");
  CHECK(classify(2.5, 0.1, 2.0) == "violated");
}

TEST_CASE("twisted straight tube of a disc matches the radial spectrum") {
  const TwistSpec tw{ScalarFunction::constant(0.8), CrossSection::disc(1.0)};
  const auto m = rasterize_twisted(tw, constant(0.5), {0.0, 2.0}, 1.0 / 12);
  REQUIRE(m.grid3.has_value());
  const auto e = fd_dirichlet_eigs(m, 1);
  const Scalar exact = std::pow(oracle::J0_1 / 0.5, 2) + std::pow(pi / 2, 2);
  CHECK(e.values[0] == doctest::Approx(exact).epsilon(0.05));
}
