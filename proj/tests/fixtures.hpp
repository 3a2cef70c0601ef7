#pragma once

// Immersions used across the test binaries, built straight from expression
// strings so the tests do not depend on the scene loader.

#include <numbers>
#include <string>
#include <vector>

#include "pasurf/expr.hpp"
#include "pasurf/field.hpp"
#include "pasurf/surface.hpp"

namespace pasurf::testing {

inline std::vector<ScalarField> uv_fields(const std::vector<std::string>& src,
                                          const std::map<std::string, double>& c = {}) {
  std::vector<ScalarField> out;
  for (const auto& s : src) out.push_back(expr::compile(s, {"u", "v"}, c));
  return out;
}

inline constexpr double kTwoPi = 2 * std::numbers::pi;

inline Immersion plane_polar() {
  return {MetricChart::euclidean(3), uv_fields({"u*cos(v)", "u*sin(v)", "1"}),
          ParamBox{{{0.1, 5.0}, {0.0, kTwoPi}}}};
}

// Outward under orientation +1.
inline Immersion sphere(double r) {
  return {MetricChart::euclidean(3),
          uv_fields({"r*sin(u)*cos(v)", "r*sin(u)*sin(v)", "r*cos(u)"}, {{"r", r}}),
          ParamBox{{{0.2, 2.9}, {0.0, kTwoPi}}}};
}

inline Immersion hemisphere_h3(double r) {
  return {MetricChart::half_space(3),
          uv_fields({"r*cos(asin(sech(u)))*cos(v)", "r*cos(asin(sech(u)))*sin(v)",
                     "r*sin(asin(sech(u)))"},
                    {{"r", r}}),
          ParamBox{{{0.2, 3.0}, {0.0, kTwoPi}}}};
}

inline Immersion cone() {
  return {MetricChart::euclidean(3),
          uv_fields({"u*cos(v)/sqrt(2)", "u*sin(v)/sqrt(2)", "u/sqrt(2)"}),
          ParamBox{{{0.2, 3.0}, {0.0, kTwoPi}}}};
}

inline Immersion cylinder_h3() {
  return {MetricChart::half_space(3), uv_fields({"cos(v)", "sin(v)", "exp(u)"}),
          ParamBox{{{-1.0, 1.0}, {0.0, kTwoPi}}}};
}

inline Immersion cylinder_r3(double r) {
  return {MetricChart::euclidean(3), uv_fields({"r*cos(v)", "r*sin(v)", "u"}, {{"r", r}}),
          ParamBox{{{-1.0, 1.0}, {0.0, kTwoPi}}}};
}

// Field components written over (u, v, x, y, z).
inline FieldAlongSurface field_xyz(const std::vector<std::string>& src, const Immersion& imm,
                                   bool unit = true) {
  std::vector<ScalarField> c;
  for (const auto& e : src) c.push_back(along_map(expr::compile(e, {"u", "v", "x", "y", "z"}), imm));
  return FieldAlongSurface::from_components(std::move(c), unit);
}

inline FieldAlongSurface position_direction(const Immersion& imm) {
  return field_xyz({"x/sqrt(x^2+y^2+z^2)", "y/sqrt(x^2+y^2+z^2)", "z/sqrt(x^2+y^2+z^2)"}, imm);
}

inline std::vector<std::vector<double>> grid(const Immersion& imm, int a, int b) {
  const int counts[] = {a, b};
  return parameter_grid(imm.domain, counts);
}

}  // namespace pasurf::testing
