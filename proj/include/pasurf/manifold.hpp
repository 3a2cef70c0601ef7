#pragma once

// Riemannian geometry on a single coordinate chart.
//
// Curvature convention: R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z, so that
// K(π) = <R(e1,e2)e2,e1> / |e1 ∧ e2|² is −1 on hyperbolic space.

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pasurf/jet.hpp"

namespace pasurf {

/// Region where a chart is valid: every predicate must evaluate > 0.
struct DomainPredicate {
  std::string description;
  ScalarField field;
};

class MetricChart {
 public:
  /// `upper` holds g_ij for i <= j in row-major order: g00, g01, ..., g11, ...
  MetricChart(int dim, std::vector<ScalarField> upper,
              std::vector<DomainPredicate> domain = {});

  static MetricChart euclidean(int dim);
  /// Upper half-space model of hyperbolic space: g = x_last^-2 · I.
  static MetricChart half_space(int dim);
  /// Round sphere of radius r through stereographic projection:
  /// g = 4 r^4 / (r^2 + |x|^2)^2 · I.
  static MetricChart stereographic_sphere(int dim, double radius);

  int dim() const { return dim_; }
  const ScalarField& component(int i, int j) const;

  /// Smallest predicate value at `point` (+inf when unconstrained).
  double clearance(std::span<const double> point) const;
  bool contains(std::span<const double> point, double margin = 0.0) const;
  /// Throws DomainError naming the violated predicate.
  void require_domain(std::span<const double> point) const;
  const std::vector<DomainPredicate>& domain() const { return domain_; }

 private:
  int dim_;
  std::vector<ScalarField> upper_;
  std::vector<DomainPredicate> domain_;
};

struct AmbientVector {
  Eigen::VectorXd base;
  Eigen::VectorXd components;
};

struct MetricAt {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inverse;
  Eigen::MatrixXd cholesky;  // lower factor L with L Lᵀ = g
};

/// Metric with chart derivatives: dg[k] = ∂_k g, ddg[k * dim + l] = ∂_k∂_l g.
struct MetricDerivatives {
  Eigen::MatrixXd g;
  Eigen::MatrixXd inverse;
  std::vector<Eigen::MatrixXd> dg;
  std::vector<Eigen::MatrixXd> ddg;
};

/// Γ^k_ij stored as data[(k * dim + i) * dim + j].
struct Christoffel {
  int dim = 0;
  std::vector<double> data;
  double operator()(int k, int i, int j) const { return data[(k * dim + i) * dim + j]; }
  double& operator()(int k, int i, int j) { return data[(k * dim + i) * dim + j]; }
  /// Γ(X, Y)^k = Γ^k_ij X^i Y^j.
  Eigen::VectorXd contract(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;
};

/// R^a_bcd with R(∂_c, ∂_d)∂_b = R^a_bcd ∂_a.
struct RiemannTensor {
  int dim = 0;
  std::vector<double> data;
  double operator()(int a, int b, int c, int d) const {
    return data[((a * dim + b) * dim + c) * dim + d];
  }
  double& operator()(int a, int b, int c, int d) {
    return data[((a * dim + b) * dim + c) * dim + d];
  }
};

MetricAt metric_at(const MetricChart& chart, std::span<const double> point);
MetricDerivatives metric_derivatives(const MetricChart& chart, std::span<const double> point);

Christoffel christoffel(const MetricChart& chart, std::span<const double> point);
Christoffel christoffel(const MetricDerivatives& m);

/// Max |∂_k g_ij − Γ^l_ki g_lj − Γ^l_kj g_il|.
double metric_compatibility_residual(const MetricDerivatives& m, const Christoffel& gamma);

RiemannTensor riemann_tensor(const MetricDerivatives& m);
RiemannTensor riemann_tensor(const MetricChart& chart, std::span<const double> point);

/// <R(X,Y)Z, W> given the metric at the point.
double riemann(const RiemannTensor& r, const Eigen::MatrixXd& g, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y, const Eigen::VectorXd& z, const Eigen::VectorXd& w);
double riemann(const MetricChart& chart, const AmbientVector& x, const AmbientVector& y,
               const AmbientVector& z, const AmbientVector& w);

double sectional_curvature(const RiemannTensor& r, const Eigen::MatrixXd& g,
                           const Eigen::VectorXd& e1, const Eigen::VectorXd& e2);
double sectional_curvature(const MetricChart& chart, const AmbientVector& e1,
                           const AmbientVector& e2);

/// ∇_direction W along a map: (∂W^k + Γ^k_ij ∂X^i W^j) ∂_k.
/// `jacobian` is ∂X^i/∂u^a (dim × n), `field_jacobian` is ∂W^k/∂u^a.
Eigen::VectorXd covariant_derivative_along(const Christoffel& gamma,
                                           const Eigen::MatrixXd& jacobian,
                                           const Eigen::VectorXd& field,
                                           const Eigen::MatrixXd& field_jacobian,
                                           const Eigen::VectorXd& direction);

/// Convenience form evaluating the map and field (both functions of the
/// map parameters) at `at`.
AmbientVector covariant_derivative_along(const MetricChart& chart,
                                         std::span<const ScalarField> map,
                                         std::span<const ScalarField> field,
                                         std::span<const double> direction,
                                         std::span<const double> at);

}  // namespace pasurf
