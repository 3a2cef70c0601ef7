#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "pasurf/errors.hpp"

using namespace pasurf;
using namespace pasurf::testing;

namespace {

void check_invariants(const SurfaceGeometry& s) {
  CHECK(s.normal_unit_residual() <= 1e-10);
  CHECK(s.normal_orthogonality_residual() <= 1e-10);
  CHECK(s.shape_symmetry_residual() <= 1e-9);
  CHECK(s.principal_residual() <= 1e-8);
  CHECK(s.shape_route_residual() <= 1e-8);
  const Eigen::MatrixXd o = s.directions.transpose() * s.first_ff * s.directions;
  CHECK((o - Eigen::MatrixXd::Identity(s.n(), s.n())).cwiseAbs().maxCoeff() <= 1e-9);
}

}  // namespace

TEST_CASE("parameter_grid keeps a margin and is row-major") {
  const ParamBox box{{{0.0, 1.0}, {2.0, 4.0}}};
  const int counts[] = {3, 2};
  const auto g = parameter_grid(box, counts);
  REQUIRE(g.size() == 6);
  CHECK(g[0][0] == doctest::Approx(0.001));
  CHECK(g[0][1] == doctest::Approx(2.002));
  CHECK(g[1][1] == doctest::Approx(3.998));
  CHECK(g[5][0] == doctest::Approx(0.999));
  const int one[] = {1, 1};
  const auto c = parameter_grid(box, one);
  REQUIRE(c.size() == 1);
  CHECK(c[0][0] == 0.5);
  CHECK(c[0][1] == 3.0);
}

TEST_CASE("plane z=1 is totally geodesic and flat") {
  const Immersion plane = plane_polar();
  for (const auto& p : grid(plane, 5, 5)) {
    const SurfaceGeometry s = surface_geometry(plane, p);
    check_invariants(s);
    CHECK(s.shape.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(gauss_formula_check(s, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)) <= 1e-10);
    CHECK(gauss_formula_check(s, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0)) <= 1e-10);
    const ThreeCurvatures k = three_curvatures(plane, s);
    CHECK(std::abs(k.k_int) <= 1e-12);
    CHECK(std::abs(k.k_ext) <= 1e-12);
    CHECK(k.k_sec == 0.0);
    CHECK(std::abs(k.k_int_direct) <= 1e-6);
  }
}

TEST_CASE("sphere of radius 2, inward normal") {
  const Immersion sph = sphere(2.0);
  for (const auto& p : grid(sph, 6, 6)) {
    const SurfaceGeometry s = surface_geometry(sph, p, -1);
    check_invariants(s);
    CHECK(s.kappa(0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(s.kappa(1) == doctest::Approx(0.5).epsilon(1e-10));
    // inward: N = -X / r
    CHECK((s.normal + s.point / 2.0).norm() <= 1e-12);
    // umbilic tie: coordinate-aligned frame
    CHECK((s.directions - coordinate_frame(s.first_ff)).norm() == 0.0);
    CHECK(gauss_formula_check(s, Eigen::Vector2d(0.3, -1.2), Eigen::Vector2d(0.7, 0.4)) <= 1e-8);
    const ThreeCurvatures k = three_curvatures(sph, s);
    CHECK(k.k_ext == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(k.k_sec == 0.0);
    // independent route against the classical value 1/r²
    CHECK(std::abs(k.k_int_direct - 0.25) <= 1e-4);
  }
}

TEST_CASE("hemisphere in the half-space is totally geodesic with K_int = -1") {
  const Immersion hemi = hemisphere_h3(1.0);
  double kmax = 0.0, gauss = 0.0;
  for (const auto& p : grid(hemi, 10, 10)) {
    const SurfaceGeometry s = surface_geometry(hemi, p);
    check_invariants(s);
    kmax = std::max(kmax, s.kappa.cwiseAbs().maxCoeff());
    gauss = std::max({gauss, gauss_formula_check(s, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)),
                      gauss_formula_check(s, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, -2))});
    const ThreeCurvatures k = three_curvatures(hemi, s);
    CHECK(std::abs(k.k_int + 1.0) <= 1e-6);
    CHECK(std::abs(k.k_ext) <= 1e-6);
    CHECK(std::abs(k.k_sec + 1.0) <= 1e-6);
    CHECK(std::abs(k.k_int_direct + 1.0) <= 1e-4);
  }
  CHECK(kmax <= 1e-7);
  CHECK(gauss <= 1e-7);
}

TEST_CASE("orientation flip negates A and keeps det A and |kappa|") {
  const Immersion cyl = cylinder_r3(1.5);
  const double p[] = {0.2, 1.1};
  const SurfaceGeometry a = surface_geometry(cyl, p, 1), b = surface_geometry(cyl, p, -1);
  CHECK((a.normal + b.normal).norm() <= 1e-15);
  CHECK((a.shape + b.shape).norm() <= 1e-14);
  CHECK(a.shape.determinant() == doctest::Approx(b.shape.determinant()));
  CHECK(a.kappa.cwiseAbs().sum() == doctest::Approx(b.kappa.cwiseAbs().sum()));
  const SurfaceGeometry f = a.flipped();
  CHECK((f.shape - b.shape).norm() <= 1e-14);
  CHECK((f.kappa - b.kappa).norm() <= 1e-14);
  CHECK((f.normal - b.normal).norm() <= 1e-15);
}

TEST_CASE("classify_umbilicity") {
  const Immersion hemi = hemisphere_h3(1.0), sph = sphere(2.0), cyl = cylinder_r3(1.0);
  const auto g1 = grid(hemi, 6, 6);
  CHECK(classify_umbilicity(hemi, g1, 1, 1e-6).kind == Umbilicity::totally_geodesic);
  const auto g2 = grid(sph, 6, 6);
  const UmbilicityReport u = classify_umbilicity(sph, g2, -1, 1e-6);
  CHECK(u.kind == Umbilicity::totally_umbilical);
  for (double d : u.delta) CHECK(d == doctest::Approx(0.5).epsilon(1e-9));
  const auto g3 = grid(cyl, 6, 6);
  CHECK(classify_umbilicity(cyl, g3, 1, 1e-6).kind == Umbilicity::neither);
}

TEST_CASE("ruled_check") {
  const Immersion c = cone();
  const auto g = grid(c, 8, 8);
  CHECK(ruled_check(c, 0, g) <= 1e-9);
  const Immersion cyl = cylinder_h3();
  CHECK(ruled_check(cyl, 0, grid(cyl, 8, 8)) <= 1e-7);
  const Immersion sph = sphere(2.0);
  CHECK(ruled_check(sph, 0, grid(sph, 8, 8)) > 1e-3);
}

TEST_CASE("rank-deficient immersion is reported") {
  const Immersion bad{MetricChart::euclidean(3), uv_fields({"u", "u", "u^2"}),
                      ParamBox{{{0.0, 1.0}, {0.0, 1.0}}}};
  const double p[] = {0.5, 0.5};
  CHECK_THROWS_AS(surface_geometry(bad, p), DomainError);
  CHECK_THROWS_AS(Immersion(MetricChart::euclidean(3), uv_fields({"u", "v"}),
                            ParamBox{{{0.0, 1.0}, {0.0, 1.0}}}),
                  ValidationError);
}
