#pragma once

// Extrinsic geometry of a parametrized hypersurface in a chart.
//
// Tangent vectors are carried as coefficient vectors in the coordinate basis
// ∂_1..∂_n of the parameters; the ambient vector is J·c with J the Jacobian
// of the map. Shape operator convention: A(X) = −∇_X N.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pasurf/manifold.hpp"

namespace pasurf {

struct ParamBox {
  std::vector<std::pair<double, double>> ranges;
  int dim() const { return static_cast<int>(ranges.size()); }
};

struct Immersion {
  MetricChart chart;
  std::vector<ScalarField> map;  // one field per chart coordinate, arity n
  ParamBox domain;

  Immersion(MetricChart c, std::vector<ScalarField> m, ParamBox d);
  int params() const { return domain.dim(); }
  int ambient_dim() const { return chart.dim(); }
};

/// Row-major interior sample grid. Each axis keeps `margin` (fraction of the
/// range) away from both ends; a single sample sits at the midpoint.
std::vector<std::vector<double>> parameter_grid(const ParamBox& box, std::span<const int> counts,
                                                double margin = 1e-3);

struct SurfaceGeometry {
  std::vector<double> params;
  Eigen::VectorXd point;           // X(u) in chart coordinates
  Eigen::MatrixXd jacobian;        // m × n, columns ∂_a X
  std::vector<Eigen::VectorXd> hessian;  // [a * n + b] = ∂_a∂_b X
  MetricDerivatives metric;
  Christoffel gamma;               // ambient
  RiemannTensor riemann;           // ambient

  Eigen::MatrixXd first_ff;        // induced metric I
  Eigen::MatrixXd first_ff_inv;
  std::vector<Eigen::MatrixXd> first_ff_d;  // ∂_c I
  Christoffel induced_gamma;

  Eigen::VectorXd normal;          // unit, oriented
  Eigen::MatrixXd normal_d;        // m × n, ∂_a N (chart components)
  Eigen::MatrixXd normal_nabla;    // m × n, ∇_{∂a} N
  Eigen::MatrixXd shape;           // A^b_a: column a holds A(∂_a)
  Eigen::MatrixXd second_ff;       // h_ab = <∇_{∂a} ∂_b, N>
  Eigen::VectorXd kappa;           // ascending
  Eigen::MatrixXd directions;      // columns: principal directions, unit in I
  double min_singular = 0.0;       // of the first fundamental form
  int orientation = 1;

  int n() const { return static_cast<int>(jacobian.cols()); }
  int m() const { return static_cast<int>(jacobian.rows()); }

  double inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double norm(const Eigen::VectorXd& a) const;
  Eigen::VectorXd ambient(const Eigen::VectorXd& coeffs) const { return jacobian * coeffs; }
  /// Coefficients of the tangential projection of an ambient vector.
  Eigen::VectorXd tangential(const Eigen::VectorXd& w) const;
  /// Ambient ∇ of a field along the map with chart-component partials `d`.
  Eigen::VectorXd nabla(const Eigen::MatrixXd& d, const Eigen::VectorXd& field,
                        const Eigen::VectorXd& dir_coeffs) const;
  /// A applied to a tangent coefficient vector.
  Eigen::VectorXd apply_shape(const Eigen::VectorXd& c) const { return shape * c; }
  /// Induced metric inner product of coefficient vectors.
  double tinner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    return a.dot(first_ff * b);
  }

  double shape_symmetry_residual() const;
  double normal_unit_residual() const;
  double normal_orthogonality_residual() const;
  double principal_residual() const;
  /// Agreement of −∇N against the second fundamental form route.
  double shape_route_residual() const;

  /// Same point with the opposite normal.
  SurfaceGeometry flipped() const;
};

/// Coordinate-aligned orthonormal basis of the tangent space (Gram–Schmidt
/// of ∂_1..∂_n in the induced metric).
Eigen::MatrixXd coordinate_frame(const Eigen::MatrixXd& first_ff);

SurfaceGeometry surface_geometry(const Immersion& imm, std::span<const double> at,
                                 int orientation = 1);

/// Induced Christoffels only; cheaper, used by finite-difference routes.
Christoffel induced_christoffel(const Immersion& imm, std::span<const double> at);

/// ‖∇_X Y − J·P(∇_X Y) − <A X, Y> N‖ plus the mismatch of the tangential
/// projection against the induced Christoffels, for coordinate-constant
/// coefficient fields X, Y.
double gauss_formula_check(const SurfaceGeometry& s, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y);

struct ThreeCurvatures {
  double k_int = 0.0;         // K_sec + K_ext
  double k_ext = 0.0;         // det A
  double k_sec = 0.0;         // ambient sectional curvature of the tangent plane
  double k_int_direct = 0.0;  // from finite differences of induced Christoffels
};

ThreeCurvatures three_curvatures(const Immersion& imm, const SurfaceGeometry& s,
                                 double step = 1e-3);

/// Gaussian curvature of the induced metric from finite differences of its
/// Christoffel symbols.
double intrinsic_curvature_direct(const Immersion& imm, std::span<const double> at,
                                  double step = 1e-3);

enum class Umbilicity { totally_geodesic, totally_umbilical, neither };
const char* to_string(Umbilicity u);

struct UmbilicityReport {
  Umbilicity kind = Umbilicity::neither;
  double max_shape_norm = 0.0;       // max |κ_i|
  double max_umbilic_deviation = 0.0;  // max |κ_i − tr A / n|
  std::vector<double> delta;         // tr A / n per sample
};

UmbilicityReport classify_umbilicity(std::span<const SurfaceGeometry> samples, double tol);
UmbilicityReport classify_umbilicity(const Immersion& imm,
                                     std::span<const std::vector<double>> grid, int orientation,
                                     double tol);

/// ‖(∇_{c'} c')^⊥‖ / (1 + ‖c'‖²) for the parameter line along `axis`;
/// the component along c' is dropped so that non-unit-speed geodesics pass.
double ruling_residual(const SurfaceGeometry& s, int axis);
double ruled_check(const Immersion& imm, int axis, std::span<const std::vector<double>> grid);

}  // namespace pasurf
