#pragma once

// Vector fields along an immersion and the torse-forming fit
//   ∇_X V = f X + ω(X) V.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasurf/report.hpp"
#include "pasurf/surface.hpp"

namespace pasurf {

struct FieldAlongSurface {
  enum class Kind { expression, normal };
  Kind kind = Kind::expression;
  /// Chart components of V as functions of the surface parameters.
  std::vector<ScalarField> components;
  bool declared_unit = false;

  static FieldAlongSurface from_components(std::vector<ScalarField> c, bool unit);
  /// V = N for the orientation the geometry was built with.
  static FieldAlongSurface unit_normal();
};

/// Reads a field given over (parameters..., chart coordinates...) as a field
/// of the parameters alone by substituting the map.
ScalarField along_map(const ScalarField& over_params_and_coords, const Immersion& imm);

struct FieldAt {
  Eigen::VectorXd value;  // chart components
  Eigen::MatrixXd d;      // ∂_a V, m × n
  Eigen::MatrixXd nabla;  // ∇_{∂a} V, m × n
};

FieldAt field_at(const FieldAlongSurface& v, const SurfaceGeometry& s);

/// max | |V| − 1 | over the grid.
double unit_defect(const FieldAlongSurface& v, const Immersion& imm,
                   std::span<const std::vector<double>> grid, int orientation = 1);

enum class FieldClass { parallel, concircular, anti_torqued, torqued, torse_forming, none };
const char* to_string(FieldClass c);

struct TorseTolerances {
  double residual = 1e-6;
  double classes = 1e-6;
};

struct TorseFit {
  double f = 0.0;
  Eigen::VectorXd omega;            // ω(e_a)
  double residual = 0.0;
  double anti_torqued_defect = 0.0;  // max_a |ω(e_a) + f <e_a, V>|
  double omega_of_tangent = 0.0;     // ω(T), T the tangential part of V
  bool torqued_partial = false;      // ω(N) unknown and V has a normal part
  FieldClass cls = FieldClass::none;
};

/// Joint least squares of ∇_{e_a} V ≈ f e_a + ω_a V over all a, with the
/// ambient metric. `basis` columns are tangent coefficient vectors,
/// orthonormal in the induced metric.
TorseFit torse_fit(const FieldAt& v, const SurfaceGeometry& s, const Eigen::MatrixXd& basis,
                   const TorseTolerances& tol = {});
TorseFit torse_fit(const FieldAlongSurface& v, const SurfaceGeometry& s,
                   const TorseTolerances& tol = {});

CheckReport unit_torse_implies_antitorqued_check(const FieldAlongSurface& v, const Immersion& imm,
                                                 std::span<const std::vector<double>> grid,
                                                 int orientation, const TorseTolerances& tol = {});

CheckReport concircular_umbilical_check(const FieldAlongSurface& v, const Immersion& imm,
                                        std::span<const std::vector<double>> grid,
                                        int orientation, const TorseTolerances& tol = {});

CheckReport umbilical_normal_is_antitorqued_check(const Immersion& imm,
                                                  std::span<const std::vector<double>> grid,
                                                  int orientation,
                                                  const TorseTolerances& tol = {});

}  // namespace pasurf
