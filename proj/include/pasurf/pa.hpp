#pragma once

// Prescribed-angle analysis: V = T + cosθ N along a surface, the frame
// e1 = T/|T|, e2 completing an oriented frame, and the identities tying θ,
// f and the shape operator together.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pasurf/field.hpp"
#include "pasurf/report.hpp"
#include "pasurf/surface.hpp"

namespace pasurf {

enum class OrientationPolicy { paper, fixed };
const char* to_string(OrientationPolicy p);
OrientationPolicy parse_orientation_policy(const std::string& s);

struct PAOptions {
  OrientationPolicy policy = OrientationPolicy::paper;
  int orientation = 1;       // scene orientation, kept as is under `fixed`
  TorseTolerances torse;
  double frame_tol = 1e-7;   // guard on |T| and sinθ
  double theta_constant_spread = 1e-5;
  double fd_step = 1e-3;     // for derivatives of B and θ' along e1
};

struct PADecomposition {
  double theta = 0.0;
  double cos_theta = 1.0;
  double sin_theta = 0.0;  // |T|
  Eigen::VectorXd tangent;  // T as tangent coefficients
  bool frame = false;       // e1, e2 defined (|T| > frame_tol)
  Eigen::VectorXd e1, e2;   // tangent coefficients, orthonormal in I
  bool flipped = false;     // normal flipped to make <V,N> >= 0
  double reconstruction_residual = 0.0;  // ‖V − T − cosθ N‖
  double length_residual = 0.0;          // | |T| − sinθ |
};

struct PAPoint {
  SurfaceGeometry geo;  // with the normal actually used
  FieldAt v;
  TorseFit fit;
  PADecomposition dec;
  Eigen::VectorXd dcos;    // ∂_a cosθ
  Eigen::VectorXd dtheta;  // ∂_a θ, meaningful when sinθ > frame_tol
  bool theta_derivative = false;

  /// Ambient ∇_X T for a tangent coefficient vector X.
  Eigen::VectorXd nabla_tangent(const Eigen::VectorXd& x) const;
  /// ∇^Σ_X e1 as tangent coefficients (requires dec.frame).
  Eigen::VectorXd levi_e1(const Eigen::VectorXd& x) const;
  Eigen::VectorXd levi_e2(const Eigen::VectorXd& x) const;
  double kappa1() const;  // <A e1, e1>
  double kappa2() const;  // <A e2, e2>
  /// B = (f + κ2 cosθ)/sinθ; NaN-free: callers check sinθ first.
  double B() const;
};

PAPoint pa_point(const FieldAlongSurface& v, const Immersion& imm, std::span<const double> at,
                 const PAOptions& opt = {});

PADecomposition angle_function(const FieldAlongSurface& v, const Immersion& imm,
                               std::span<const double> at, const PAOptions& opt = {});

struct DercompResiduals {
  double first = 0.0;   // ‖f(X − <X,T>T) − (∇^Σ_X T − cosθ A X)‖
  double second = 0.0;  // |<A T, X> + X(cosθ) + f cosθ <X,T>|
};

DercompResiduals dercomp_residuals(const PAPoint& p);

CheckReport principal_direction_test(const FieldAlongSurface& v, const Immersion& imm,
                                     std::span<const std::vector<double>> grid,
                                     const PAOptions& opt = {});

struct FrameResiduals {
  bool defined = false;  // frame and B defined at the point
  double e1_theta = 0.0;  // |e1(θ) − κ1 − f cosθ|
  double e2_theta = 0.0;  // |e2(θ)|
  double levi[4] = {0, 0, 0, 0};
  double B = 0.0;
  double t_principal = 0.0;  // |<A e1, e2>|
};

FrameResiduals plevi_frame_check(const PAPoint& p, double frame_tol = 1e-7);

struct PACurvatures {
  bool defined = false;
  double B = 0.0;
  double dB = 0.0;              // e1(B)
  double k_int_b = 0.0;         // −(e1(B) + B²)
  double k_ext_formula = 0.0;   // (e1(θ) − f cosθ) κ2
  double k_int_gauss = 0.0;     // K_sec + det A
  double k_ext_det = 0.0;       // det A
  double k_sec = 0.0;
  double k_int_mismatch = 0.0;
  double k_ext_mismatch = 0.0;
};

PACurvatures pa_curvatures(const FieldAlongSurface& v, const Immersion& imm,
                           std::span<const double> at, const PAOptions& opt = {});

/// Directional derivative along e1 of a per-point quantity, by central
/// differences on the straight parameter line through `at` along e1.
double along_e1(const FieldAlongSurface& v, const Immersion& imm, std::span<const double> at,
                const PAOptions& opt, double (*quantity)(const PAPoint&));

struct AdaptedChart {
  std::vector<double> u, v;                  // coordinate samples
  std::vector<std::vector<double>> params;   // [i * v.size() + j] surface parameters
  std::vector<double> warp;                  // |∂_v| measured
  std::vector<double> warp_predicted;        // p(v) exp(∫B du), p from u = 0
  double max_metric_residual = 0.0;          // max(|<∂u,∂u> − 1|, |<∂u,∂v>|)
  double max_warp_residual = 0.0;            // relative
  int covered = 0;
  int requested = 0;
};

/// Fermi-type chart: u runs along e1 flow lines starting on the e2 curve
/// through `seed`, v is arclength along that curve.
AdaptedChart adapted_chart(const FieldAlongSurface& v, const Immersion& imm,
                           std::span<const double> seed, double u_extent, int u_steps,
                           double v_extent, int v_steps, const PAOptions& opt = {});

CheckReport parallel_V_theorem_check(const FieldAlongSurface& v, const Immersion& imm,
                                     std::span<const std::vector<double>> grid,
                                     const PAOptions& opt = {});

CheckReport theta_extremes_check(const FieldAlongSurface& v, const Immersion& imm,
                                 std::span<const std::vector<double>> grid,
                                 const PAOptions& opt = {});

CheckReport umbilic_parallel_relations(const FieldAlongSurface& v, const Immersion& imm,
                                       std::span<const std::vector<double>> grid,
                                       const PAOptions& opt = {});

/// Row for reports and CSV export.
struct PAReport {
  std::vector<double> params;
  double theta = 0.0, cos_theta = 0.0, f = 0.0;
  double kappa1 = 0.0, kappa2 = 0.0;
  double B = 0.0, k_int = 0.0, k_int_b = 0.0, k_ext = 0.0, k_ext_formula = 0.0, k_sec = 0.0;
  double k_int_direct = 0.0;
  bool frame = false, b_defined = false, flipped = false;
  bool torqued_partial = false;  // V has a normal part, so torqued is only a fit
  FieldClass cls = FieldClass::none;
  double torse_residual = 0.0, anti_torqued_defect = 0.0;
  double reconstruction = 0.0, length = 0.0, gauss = 0.0, gauss_formula = 0.0;
  double e12[2] = {0, 0};
  double levi[4] = {0, 0, 0, 0};
  double dercomp[2] = {0, 0};
};

PAReport pa_report(const FieldAlongSurface& v, const Immersion& imm, std::span<const double> at,
                   const PAOptions& opt = {});

}  // namespace pasurf
