#include <cmath>
#include <random>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "pasurf/errors.hpp"

using namespace pasurf;
using namespace pasurf::testing;

TEST_CASE("torse_fit: -z dz along the half-space hemisphere is anti-torqued with f = 1") {
  const Immersion hemi = hemisphere_h3(1.0);
  const FieldAlongSurface v = field_xyz({"0", "0", "-z"}, hemi);
  CHECK(unit_defect(v, hemi, grid(hemi, 5, 5)) <= 1e-12);
  for (const auto& p : grid(hemi, 10, 10)) {
    const SurfaceGeometry s = surface_geometry(hemi, p);
    const TorseFit fit = torse_fit(v, s);
    CHECK(fit.cls == FieldClass::anti_torqued);
    CHECK(std::abs(fit.f - 1.0) <= 1e-7);
    CHECK(fit.residual <= 1e-7);
    CHECK(fit.anti_torqued_defect <= 1e-7);
  }
  const CheckReport lemma = unit_torse_implies_antitorqued_check(v, hemi, grid(hemi, 10, 10), 1);
  CHECK(lemma.applicable);
  CHECK(lemma.passed);
  CHECK(lemma.values.at("max_anti_torqued_defect") <= 1e-7);
}

TEST_CASE("torse_fit: position direction along the cone, f = 1/u") {
  const Immersion c = cone();
  const FieldAlongSurface v = position_direction(c);
  for (const auto& p : grid(c, 10, 10)) {
    const SurfaceGeometry s = surface_geometry(c, p);
    const TorseFit fit = torse_fit(v, s);
    CHECK(fit.cls == FieldClass::anti_torqued);
    CHECK(std::abs(fit.f - 1.0 / p[0]) <= 1e-8);
    CHECK(fit.anti_torqued_defect <= 1e-8);
    CHECK_FALSE(fit.torqued_partial);
  }
  const CheckReport lemma = unit_torse_implies_antitorqued_check(v, c, grid(c, 10, 10), 1);
  CHECK(lemma.passed);
  CHECK(lemma.values.at("max_anti_torqued_defect") <= 1e-8);
}

TEST_CASE("torse_fit: constant dz along a plane is parallel") {
  const Immersion plane = plane_polar();
  const FieldAlongSurface v = field_xyz({"0", "0", "1"}, plane);
  for (const auto& p : grid(plane, 4, 4)) {
    const TorseFit fit = torse_fit(v, surface_geometry(plane, p));
    CHECK(fit.cls == FieldClass::parallel);
    CHECK(fit.f == doctest::Approx(0.0));
    CHECK(fit.omega.norm() <= 1e-14);
  }
  const CheckReport lemma = unit_torse_implies_antitorqued_check(v, plane, grid(plane, 4, 4), 1);
  CHECK(lemma.passed);
  CHECK(lemma.values.at("max_anti_torqued_defect") == 0.0);
}

TEST_CASE("property: f and residual are basis independent, omega is a 1-form") {
  const Immersion hemi = hemisphere_h3(1.5);
  const FieldAlongSurface v = field_xyz({"0.1*z", "0", "-z"}, hemi, false);
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  for (const auto& p : grid(hemi, 4, 4)) {
    const SurfaceGeometry s = surface_geometry(hemi, p);
    const FieldAt fa = field_at(v, s);
    const Eigen::MatrixXd e = coordinate_frame(s.first_ff);
    const double t = ang(rng);
    Eigen::Matrix2d rot;
    rot << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
    const Eigen::MatrixXd e2 = e * rot;
    const TorseFit a = torse_fit(fa, s, e), b = torse_fit(fa, s, e2);
    CHECK(std::abs(a.f - b.f) <= 1e-9);
    CHECK(std::abs(a.residual - b.residual) <= 1e-9);
    // ω(X) for the same X = e2_0 through both bases
    const Eigen::Vector2d x_in_e = rot.col(0);
    CHECK(std::abs(a.omega.dot(x_in_e) - b.omega(0)) <= 1e-9);
  }
}

TEST_CASE("property: scaling a non-unit field scales f") {
  const Immersion hemi = hemisphere_h3(1.0);
  const FieldAlongSurface v1 = field_xyz({"0", "0", "-z"}, hemi, false);
  const FieldAlongSurface v2 = field_xyz({"0", "0", "-2.5*z"}, hemi, false);
  for (const auto& p : grid(hemi, 4, 4)) {
    const SurfaceGeometry s = surface_geometry(hemi, p);
    const TorseFit a = torse_fit(v1, s), b = torse_fit(v2, s);
    CHECK(b.f == doctest::Approx(2.5 * a.f).epsilon(1e-10));
    CHECK(b.cls == FieldClass::torse_forming);
  }
}

TEST_CASE("concircular_umbilical_check") {
  SUBCASE("sphere with the inward normal") {
    const Immersion sph = sphere(2.0);
    const CheckReport r =
        concircular_umbilical_check(FieldAlongSurface::unit_normal(), sph, grid(sph, 6, 6), -1);
    CHECK(r.applicable);
    CHECK(r.passed);
    CHECK(r.values.at("f_min") == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(r.values.at("f_max") == doctest::Approx(-0.5).epsilon(1e-9));
  }
  SUBCASE("hemisphere: f vanishes, inapplicable") {
    const Immersion hemi = hemisphere_h3(1.0);
    const CheckReport r =
        concircular_umbilical_check(FieldAlongSurface::unit_normal(), hemi, grid(hemi, 4, 4), 1);
    CHECK_FALSE(r.applicable);
  }
  SUBCASE("plane: inapplicable") {
    const Immersion plane = plane_polar();
    const CheckReport r =
        concircular_umbilical_check(FieldAlongSurface::unit_normal(), plane, grid(plane, 4, 4), 1);
    CHECK_FALSE(r.applicable);
  }
}

TEST_CASE("umbilical_normal_is_antitorqued_check") {
  const Immersion sph = sphere(2.0);
  const CheckReport r = umbilical_normal_is_antitorqued_check(sph, grid(sph, 6, 6), -1);
  CHECK(r.passed);
  CHECK(r.values.at("max_defect") <= 1e-8);
  CHECK(r.values.at("lambda_min") == doctest::Approx(-0.5).epsilon(1e-9));
  const CheckReport out = umbilical_normal_is_antitorqued_check(sph, grid(sph, 6, 6), 1);
  CHECK(out.values.at("lambda_max") == doctest::Approx(0.5).epsilon(1e-9));

  const Immersion hemi = hemisphere_h3(1.0);
  const CheckReport h = umbilical_normal_is_antitorqued_check(hemi, grid(hemi, 6, 6), 1);
  CHECK(h.passed);
  CHECK(std::abs(h.values.at("lambda_max")) <= 1e-7);
  CHECK(h.values.at("max_defect") <= 1e-7);

  const Immersion cyl = cylinder_r3(1.0);
  CHECK_FALSE(umbilical_normal_is_antitorqued_check(cyl, grid(cyl, 4, 4), 1).applicable);
}

TEST_CASE("vanishing field is an error") {
  const Immersion plane = plane_polar();
  const FieldAlongSurface zero = field_xyz({"0", "0", "0"}, plane, false);
  const double p[] = {1.0, 1.0};
  CHECK_THROWS_AS(torse_fit(zero, surface_geometry(plane, p)), DomainError);
}
