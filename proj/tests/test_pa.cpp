#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "pasurf/pa.hpp"

using namespace pasurf;
using namespace pasurf::testing;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

FieldAlongSurface minus_z_dz(const Immersion& imm) { return field_xyz({"0", "0", "-z"}, imm); }
FieldAlongSurface dz(const Immersion& imm) { return field_xyz({"0", "0", "1"}, imm); }

PAOptions fixed(int orientation) {
  PAOptions o;
  o.policy = OrientationPolicy::fixed;
  o.orientation = orientation;
  return o;
}

}  // namespace

TEST_CASE("angle_function") {
  SUBCASE("hemisphere: cos theta = sech u") {
    const Immersion hemi = hemisphere_h3(1.0);
    const FieldAlongSurface v = minus_z_dz(hemi);
    for (const auto& p : grid(hemi, 10, 5)) {
      const PADecomposition d = angle_function(v, hemi, p);
      CHECK(std::abs(d.cos_theta - 1.0 / std::cosh(p[0])) <= 1e-9);
      CHECK(d.reconstruction_residual <= 1e-9);
      CHECK(d.length_residual <= 1e-9);
      CHECK(d.frame);
    }
  }
  SUBCASE("cone: theta = pi/2") {
    const Immersion c = cone();
    const FieldAlongSurface v = position_direction(c);
    for (const auto& p : grid(c, 5, 5)) {
      const PADecomposition d = angle_function(v, c, p);
      CHECK(std::abs(d.theta - kHalfPi) <= 1e-12);
      CHECK(d.reconstruction_residual <= 1e-9);
    }
  }
  SUBCASE("V = N: theta = 0, T = 0") {
    const Immersion sph = sphere(2.0);
    const PADecomposition d =
        angle_function(FieldAlongSurface::unit_normal(), sph, std::vector<double>{1.0, 1.0});
    CHECK(d.theta == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(d.sin_theta <= 1e-12);
    CHECK_FALSE(d.frame);
  }
  SUBCASE("paper policy keeps cos theta >= 0, fixed spans [0, pi]") {
    const Immersion sph = sphere(2.0);
    const FieldAlongSurface v = dz(sph);
    bool flipped = false, negative = false;
    for (const auto& p : grid(sph, 8, 3)) {
      const PADecomposition a = angle_function(v, sph, p);
      CHECK(a.cos_theta >= 0.0);
      CHECK(a.theta <= kHalfPi + 1e-15);
      flipped = flipped || a.flipped;
      const PADecomposition b = angle_function(v, sph, p, fixed(-1));
      negative = negative || b.cos_theta < 0;
      // inward normal: cos theta = -cos(polar angle)
      CHECK(b.cos_theta == doctest::Approx(-std::cos(p[0])).epsilon(1e-12));
    }
    CHECK(flipped);
    CHECK(negative);
  }
}

TEST_CASE("dercomp_residuals") {
  const Immersion hemi = hemisphere_h3(1.0);
  const FieldAlongSurface vh = minus_z_dz(hemi);
  double r1 = 0.0, r2 = 0.0;
  for (const auto& p : grid(hemi, 10, 10)) {
    const DercompResiduals r = dercomp_residuals(pa_point(vh, hemi, p));
    r1 = std::max(r1, r.first);
    r2 = std::max(r2, r.second);
  }
  CHECK(r1 <= 1e-6);
  CHECK(r2 <= 1e-6);

  const Immersion c = cone();
  const FieldAlongSurface vc = position_direction(c);
  for (const auto& p : grid(c, 10, 10)) {
    const DercompResiduals r = dercomp_residuals(pa_point(vc, c, p));
    CHECK(r.first <= 1e-7);
    CHECK(r.second <= 1e-7);
  }

  const Immersion plane = plane_polar();
  for (const auto& p : grid(plane, 4, 4)) {
    const DercompResiduals r = dercomp_residuals(pa_point(FieldAlongSurface::unit_normal(), plane, p));
    CHECK(r.first <= 1e-12);
    CHECK(r.second <= 1e-12);
  }
}

TEST_CASE("principal_direction_test") {
  const Immersion c = cone();
  const CheckReport rc = principal_direction_test(position_direction(c), c, grid(c, 8, 8));
  CHECK(rc.passed);
  CHECK(rc.values.at("t_principal") == 1.0);
  CHECK(rc.values.at("theta_constant") == 1.0);
  CHECK(rc.values.at("max_kappa1_plus_f_cos") <= 1e-9);

  const Immersion hemi = hemisphere_h3(1.0);
  const CheckReport rh = principal_direction_test(minus_z_dz(hemi), hemi, grid(hemi, 8, 8));
  CHECK(rh.passed);
  CHECK(rh.values.at("t_principal") == 1.0);
  CHECK(rh.values.at("theta_constant") == 0.0);

  const Immersion sph = sphere(2.0);
  const CheckReport rs = principal_direction_test(dz(sph), sph, grid(sph, 8, 8), fixed(-1));
  CHECK(rs.passed);
  CHECK(rs.values.at("t_principal") == 1.0);
  CHECK(rs.values.at("theta_constant") == 0.0);

  const CheckReport rn =
      principal_direction_test(FieldAlongSurface::unit_normal(), sph, grid(sph, 3, 3), fixed(-1));
  CHECK_FALSE(rn.applicable);
}

TEST_CASE("plevi_frame_check") {
  SUBCASE("hemisphere: B = coth u") {
    const Immersion hemi = hemisphere_h3(1.0);
    const FieldAlongSurface v = minus_z_dz(hemi);
    for (const auto& p : grid(hemi, 10, 10)) {
      const FrameResiduals r = plevi_frame_check(pa_point(v, hemi, p));
      REQUIRE(r.defined);
      CHECK(r.B == doctest::Approx(1.0 / std::tanh(p[0])).epsilon(1e-9));
      CHECK(r.e1_theta <= 1e-6);
      CHECK(r.e2_theta <= 1e-6);
      for (double l : r.levi) CHECK(l <= 1e-6);
    }
  }
  SUBCASE("plane with position direction: e1(theta) = 1/(1+u^2) = f cos theta") {
    const Immersion plane = plane_polar();
    const FieldAlongSurface v = position_direction(plane);
    for (const auto& p : grid(plane, 10, 10)) {
      const PAPoint pt = pa_point(v, plane, p);
      const FrameResiduals r = plevi_frame_check(pt);
      REQUIRE(r.defined);
      CHECK(pt.dtheta.dot(pt.dec.e1) == doctest::Approx(1.0 / (1.0 + p[0] * p[0])).epsilon(1e-9));
      CHECK(r.e1_theta <= 1e-9);
      CHECK(r.e2_theta <= 1e-9);
      for (double l : r.levi) CHECK(l <= 1e-6);
    }
  }
  SUBCASE("sphere with parallel dz: e1(theta) = kappa") {
    const Immersion sph = sphere(2.0);
    const FieldAlongSurface v = dz(sph);
    for (const auto& p : grid(sph, 8, 8)) {
      const PAPoint pt = pa_point(v, sph, p, fixed(-1));
      CHECK(pt.dtheta.dot(pt.dec.e1) == doctest::Approx(0.5).epsilon(1e-9));
      const FrameResiduals r = plevi_frame_check(pt);
      CHECK(r.e1_theta <= 1e-9);
      for (double l : r.levi) CHECK(l <= 1e-6);
    }
  }
}

TEST_CASE("pa_curvatures") {
  const Immersion hemi = hemisphere_h3(1.0);
  for (const auto& p : grid(hemi, 6, 6)) {
    const PACurvatures c = pa_curvatures(minus_z_dz(hemi), hemi, p);
    REQUIRE(c.defined);
    CHECK(std::abs(c.k_int_b + 1.0) <= 1e-6);
    CHECK(c.k_int_mismatch <= 1e-5);
    CHECK(c.k_ext_mismatch <= 1e-6);
    CHECK(std::abs(c.k_ext_formula) <= 1e-6);
  }
  const Immersion c = cone();
  for (const auto& p : grid(c, 6, 6)) {
    const PACurvatures k = pa_curvatures(position_direction(c), c, p);
    CHECK(k.B == doctest::Approx(1.0 / p[0]).epsilon(1e-9));
    CHECK(std::abs(k.k_int_b) <= 1e-6);
    CHECK(k.k_ext_mismatch <= 1e-6);
  }
  const Immersion cyl = cylinder_h3();
  for (const auto& p : grid(cyl, 6, 6)) {
    const PACurvatures k = pa_curvatures(minus_z_dz(cyl), cyl, p);
    CHECK(k.B == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(k.k_int_b + 1.0) <= 1e-6);
    CHECK(k.k_int_mismatch <= 1e-5);
  }
}

TEST_CASE("adapted_chart") {
  SUBCASE("hemisphere: warp follows sinh u") {
    const Immersion hemi = hemisphere_h3(1.0);
    const double seed[] = {1.0, 1.0};
    const AdaptedChart a = adapted_chart(minus_z_dz(hemi), hemi, seed, 1.0, 11, 0.6, 5);
    CHECK(a.covered == a.requested);
    CHECK(a.max_metric_residual <= 1e-4);
    CHECK(a.max_warp_residual <= 1e-4);
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      const int idx = static_cast<int>(i * a.v.size());
      CHECK(a.params[idx][0] == doctest::Approx(1.0 + a.u[i]).epsilon(1e-6));
      CHECK(a.warp[idx] == doctest::Approx(std::sinh(1.0 + a.u[i]) / std::sinh(1.0)).epsilon(1e-4));
    }
  }
  SUBCASE("cone: warp proportional to u") {
    const Immersion c = cone();
    const double seed[] = {0.5, 1.0};
    const AdaptedChart a = adapted_chart(position_direction(c), c, seed, 2.0, 9, 0.4, 3);
    CHECK(a.covered == a.requested);
    CHECK(a.max_warp_residual <= 1e-4);
    for (std::size_t i = 0; i < a.u.size(); ++i)
      CHECK(a.warp[i * a.v.size()] == doctest::Approx((0.5 + a.u[i]) / 0.5).epsilon(1e-4));
  }
  SUBCASE("plane in polar parameters is already adapted") {
    const Immersion plane = plane_polar();
    const double seed[] = {1.0, 0.5};
    const AdaptedChart a = adapted_chart(position_direction(plane), plane, seed, 2.0, 5, 0.5, 3);
    CHECK(a.max_metric_residual <= 1e-4);
    CHECK(a.max_warp_residual <= 1e-4);
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      // u-lines are the polar rays: v stays fixed
      CHECK(a.params[i * a.v.size() + 1][1] == doctest::Approx(0.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("parallel_V_theorem_check") {
  const Immersion cyl = cylinder_r3(1.0);
  const CheckReport r = parallel_V_theorem_check(dz(cyl), cyl, grid(cyl, 8, 8));
  CHECK(r.applicable);
  CHECK(r.passed);
  CHECK(r.values.at("max_A_T") <= 1e-8);
  CHECK(r.values.at("max_nabla_T_T") <= 1e-8);
  CHECK(r.values.at("max_abs_det_A") <= 1e-8);

  const Immersion sph = sphere(2.0);
  CHECK_FALSE(parallel_V_theorem_check(dz(sph), sph, grid(sph, 5, 5), fixed(-1)).applicable);
  const Immersion plane = plane_polar();
  CHECK_FALSE(parallel_V_theorem_check(field_xyz({"1", "0", "0"}, plane), plane, grid(plane, 4, 4))
                  .applicable);
}

TEST_CASE("theta_extremes_check") {
  const Immersion c = cone();
  const CheckReport rc = theta_extremes_check(position_direction(c), c, grid(c, 8, 8));
  CHECK(rc.passed);
  CHECK(rc.values.at("case") == 1);
  const Immersion cyl = cylinder_h3();
  const CheckReport ry = theta_extremes_check(minus_z_dz(cyl), cyl, grid(cyl, 8, 8));
  CHECK(ry.passed);
  CHECK(ry.values.at("case") == 1);
  const Immersion sph = sphere(2.0);
  const CheckReport rs =
      theta_extremes_check(FieldAlongSurface::unit_normal(), sph, grid(sph, 8, 8), fixed(-1));
  CHECK(rs.passed);
  CHECK(rs.values.at("case") == 2);
  const Immersion hemi = hemisphere_h3(1.0);
  CHECK_FALSE(theta_extremes_check(minus_z_dz(hemi), hemi, grid(hemi, 4, 4)).applicable);
}

TEST_CASE("umbilic_parallel_relations") {
  const Immersion sph = sphere(2.0);
  const CheckReport r = umbilic_parallel_relations(dz(sph), sph, grid(sph, 8, 8), fixed(-1));
  CHECK(r.applicable);
  CHECK(r.passed);
  CHECK(r.values.at("theta_prime_min") == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.values.at("theta_prime_max") == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.values.at("k_ext_min") == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.values.at("max_abs_k_sec") <= 1e-7);
  CHECK(r.values.at("max_k_int_minus_k_ext") <= 1e-6);
  CHECK(r.values.at("max_k_sec_relation") <= 1e-7);

  const Immersion plane = plane_polar();
  CHECK_FALSE(umbilic_parallel_relations(field_xyz({"1", "0", "0"}, plane), plane, grid(plane, 3, 3))
                  .applicable);
}

TEST_CASE("pa_report carries finite values") {
  const Immersion hemi = hemisphere_h3(1.0);
  const PAReport r = pa_report(minus_z_dz(hemi), hemi, std::vector<double>{1.0, 0.3});
  CHECK(r.frame);
  CHECK(r.b_defined);
  CHECK(r.cls == FieldClass::anti_torqued);
  CHECK(std::abs(r.k_int + 1.0) <= 1e-6);
  CHECK(r.gauss <= 1e-4);
  CHECK(std::isfinite(r.B));
}
