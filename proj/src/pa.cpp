#include "pasurf/pa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pasurf/errors.hpp"

namespace pasurf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
  double lo = kInf, hi = -kInf;
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  double spread() const { return hi - lo; }
};

std::vector<PAPoint> sweep(const FieldAlongSurface& v, const Immersion& imm,
                           std::span<const std::vector<double>> grid, const PAOptions& opt) {
  std::vector<PAPoint> out;
  out.reserve(grid.size());
  for (const auto& p : grid) out.push_back(pa_point(v, imm, p, opt));
  return out;
}

double theta_prime(const PAPoint& p) { return p.dtheta.dot(p.dec.e1); }
double b_of(const PAPoint& p) { return p.B(); }

}  // namespace

const char* to_string(OrientationPolicy p) {
  return p == OrientationPolicy::paper ? "paper" : "fixed";
}

OrientationPolicy parse_orientation_policy(const std::string& s) {
  if (s == "paper") return OrientationPolicy::paper;
  if (s == "fixed") return OrientationPolicy::fixed;
  throw ValidationError("orientation policy must be 'paper' or 'fixed', got '" + s + "'");
}

PAPoint pa_point(const FieldAlongSurface& field, const Immersion& imm, std::span<const double> at,
                 const PAOptions& opt) {
  PAPoint p;
  const SurfaceGeometry geo0 = surface_geometry(imm, at, opt.orientation);
  p.v = field_at(field, geo0);
  const double c0 = geo0.inner(p.v.value, geo0.normal);
  if (opt.policy == OrientationPolicy::paper && c0 < 0) {
    p.geo = geo0.flipped();
    p.dec.flipped = true;
  } else {
    p.geo = geo0;
  }
  const SurfaceGeometry& s = p.geo;
  const int n = s.n(), m = s.m();
  p.fit = torse_fit(p.v, s, coordinate_frame(s.first_ff), opt.torse);

  PADecomposition& d = p.dec;
  d.cos_theta = std::clamp(s.inner(p.v.value, s.normal), -1.0, 1.0);
  d.theta = std::acos(d.cos_theta);
  const Eigen::VectorXd t_amb = p.v.value - d.cos_theta * s.normal;
  d.tangent = s.tangential(t_amb);
  d.sin_theta = std::sqrt(std::max(0.0, s.tinner(d.tangent, d.tangent)));
  d.reconstruction_residual =
      s.norm(p.v.value - s.ambient(d.tangent) - d.cos_theta * s.normal);
  d.length_residual = std::abs(d.sin_theta - std::sin(d.theta));
  if (d.sin_theta > opt.frame_tol) {
    d.frame = true;
    d.e1 = d.tangent / d.sin_theta;
    if (n == 2) {
      const Eigen::VectorXd w = s.first_ff * d.e1;
      Eigen::VectorXd c(2);
      c << -w(1), w(0);
      d.e2 = c / std::sqrt(s.tinner(c, c));
    }
  }

  // ∂_a <V, N> through the chain rule on exact first derivatives.
  p.dcos.resize(n);
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXd dga = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) dga += s.metric.dg[k] * s.jacobian(k, a);
    p.dcos(a) = p.v.value.dot(dga * s.normal) + p.v.d.col(a).dot(s.metric.g * s.normal) +
                p.v.value.dot(s.metric.g * s.normal_d.col(a));
  }
  p.theta_derivative = d.sin_theta > opt.frame_tol && std::abs(d.cos_theta) < 1.0 - 1e-12;
  p.dtheta = p.theta_derivative ? Eigen::VectorXd(-p.dcos / std::sin(d.theta))
                                : Eigen::VectorXd::Zero(n);
  return p;
}

PADecomposition angle_function(const FieldAlongSurface& v, const Immersion& imm,
                               std::span<const double> at, const PAOptions& opt) {
  return pa_point(v, imm, at, opt).dec;
}

Eigen::VectorXd PAPoint::nabla_tangent(const Eigen::VectorXd& x) const {
  return v.nabla * x - dcos.dot(x) * geo.normal - dec.cos_theta * (geo.normal_nabla * x);
}

Eigen::VectorXd PAPoint::levi_e1(const Eigen::VectorXd& x) const {
  if (!dec.frame) throw DomainError("frame undefined where T vanishes");
  const double len = dec.sin_theta;
  const Eigen::VectorXd t = geo.ambient(dec.tangent);
  const Eigen::VectorXd nt = nabla_tangent(x);
  const double dlen = geo.inner(nt, t) / len;
  return geo.tangential(nt / len - t * (dlen / (len * len)));
}

Eigen::VectorXd PAPoint::levi_e2(const Eigen::VectorXd& x) const {
  return -geo.tinner(levi_e1(x), dec.e2) * dec.e1;
}

double PAPoint::kappa1() const { return geo.tinner(geo.apply_shape(dec.e1), dec.e1); }
double PAPoint::kappa2() const { return geo.tinner(geo.apply_shape(dec.e2), dec.e2); }
double PAPoint::B() const { return (fit.f + kappa2() * dec.cos_theta) / dec.sin_theta; }

DercompResiduals dercomp_residuals(const PAPoint& p) {
  const SurfaceGeometry& s = p.geo;
  const Eigen::MatrixXd basis =
      p.dec.frame && s.n() == 2 ? Eigen::MatrixXd((Eigen::MatrixXd(2, 2) << p.dec.e1, p.dec.e2).finished())
                                : coordinate_frame(s.first_ff);
  const Eigen::VectorXd& t = p.dec.tangent;
  const double f = p.fit.f, c = p.dec.cos_theta;
  DercompResiduals r;
  for (int a = 0; a < basis.cols(); ++a) {
    const Eigen::VectorXd x = basis.col(a);
    const Eigen::VectorXd lhs = f * (x - s.tinner(x, t) * t);
    const Eigen::VectorXd rhs = s.tangential(p.nabla_tangent(x)) - c * s.apply_shape(x);
    const Eigen::VectorXd d = lhs - rhs;
    r.first = std::max(r.first, std::sqrt(std::max(0.0, s.tinner(d, d))));
    r.second = std::max(r.second, std::abs(s.tinner(s.apply_shape(t), x) + p.dcos.dot(x) +
                                           f * c * s.tinner(x, t)));
  }
  return r;
}

CheckReport principal_direction_test(const FieldAlongSurface& v, const Immersion& imm,
                                     std::span<const std::vector<double>> grid,
                                     const PAOptions& opt) {
  const double tol = opt.torse.classes;
  const auto pts = sweep(v, imm, grid, opt);
  double identity = 0.0, t_principal = 0.0, e2_theta = 0.0, k1 = 0.0;
  Range theta;
  for (const auto& p : pts) {
    if (!p.dec.frame || !p.theta_derivative)
      return CheckReport::inapplicable("theta = 0 (T vanishes) somewhere on the grid");
    const double at_e2 = p.geo.tinner(p.geo.apply_shape(p.dec.tangent), p.dec.e2);
    const double e2t = p.dtheta.dot(p.dec.e2);
    identity = std::max(identity, std::abs(at_e2 - p.dec.sin_theta * e2t));
    t_principal = std::max(t_principal, std::abs(at_e2));
    e2_theta = std::max(e2_theta, std::abs(e2t));
    k1 = std::max(k1, std::abs(p.kappa1() + p.fit.f * p.dec.cos_theta));
    theta.add(p.dec.theta);
  }
  CheckReport r;
  const bool principal = t_principal <= tol;
  const bool constant = theta.spread() <= opt.theta_constant_spread;
  r.values["max_identity_defect"] = identity;
  r.values["max_AT_e2"] = t_principal;
  r.values["max_e2_theta"] = e2_theta;
  r.values["theta_spread"] = theta.spread();
  r.values["t_principal"] = principal ? 1.0 : 0.0;
  r.values["theta_constant"] = constant ? 1.0 : 0.0;
  r.passed = identity <= tol && principal == (e2_theta <= tol);
  if (principal && constant) {
    r.values["max_kappa1_plus_f_cos"] = k1;
    r.passed = r.passed && k1 <= tol;
  }
  return r;
}

FrameResiduals plevi_frame_check(const PAPoint& p, double frame_tol) {
  FrameResiduals r;
  if (p.geo.n() != 2) throw ValidationError("frame equations need a 2-surface");
  if (!p.dec.frame || !p.theta_derivative || p.dec.sin_theta <= frame_tol) return r;
  r.defined = true;
  const SurfaceGeometry& s = p.geo;
  const Eigen::VectorXd& e1 = p.dec.e1;
  const Eigen::VectorXd& e2 = p.dec.e2;
  r.B = p.B();
  r.t_principal = std::abs(s.tinner(s.apply_shape(e1), e2));
  r.e1_theta = std::abs(p.dtheta.dot(e1) - p.kappa1() - p.fit.f * p.dec.cos_theta);
  r.e2_theta = std::abs(p.dtheta.dot(e2));
  auto norm = [&](const Eigen::VectorXd& c) { return std::sqrt(std::max(0.0, s.tinner(c, c))); };
  r.levi[0] = norm(p.levi_e1(e1));
  r.levi[1] = norm(p.levi_e2(e1));
  r.levi[2] = norm(p.levi_e1(e2) - r.B * e2);
  r.levi[3] = norm(p.levi_e2(e2) + r.B * e1);
  return r;
}

double along_e1(const FieldAlongSurface& v, const Immersion& imm, std::span<const double> at,
                const PAOptions& opt, double (*quantity)(const PAPoint&)) {
  const PAPoint p0 = pa_point(v, imm, at, opt);
  if (!p0.dec.frame) throw DomainError("e1 undefined where T vanishes");
  const Eigen::VectorXd e1 = p0.dec.e1;
  std::vector<double> q(at.begin(), at.end());
  auto g = [&](double t) {
    for (std::size_t a = 0; a < q.size(); ++a) q[a] = at[a] + t * e1(a);
    return quantity(pa_point(v, imm, q, opt));
  };
  return central_derivative(g, 0.0, opt.fd_step);
}

PACurvatures pa_curvatures(const FieldAlongSurface& v, const Immersion& imm,
                           std::span<const double> at, const PAOptions& opt) {
  const PAPoint p = pa_point(v, imm, at, opt);
  const SurfaceGeometry& s = p.geo;
  if (s.n() != 2 || s.m() != 3) throw ValidationError("curvature formulas need a surface in a 3-chart");
  PACurvatures c;
  c.k_ext_det = s.shape.determinant();
  c.k_sec = sectional_curvature(s.riemann, s.metric.g, s.jacobian.col(0), s.jacobian.col(1));
  c.k_int_gauss = c.k_sec + c.k_ext_det;
  if (!p.dec.frame || !p.theta_derivative || p.dec.sin_theta <= opt.frame_tol) return c;
  c.defined = true;
  c.B = p.B();
  c.dB = along_e1(v, imm, at, opt, b_of);
  c.k_int_b = -(c.dB + c.B * c.B);
  c.k_ext_formula = (p.dtheta.dot(p.dec.e1) - p.fit.f * p.dec.cos_theta) * p.kappa2();
  c.k_int_mismatch = std::abs(c.k_int_b - c.k_int_gauss);
  c.k_ext_mismatch = std::abs(c.k_ext_formula - c.k_ext_det);
  return c;
}

AdaptedChart adapted_chart(const FieldAlongSurface& v, const Immersion& imm,
                           std::span<const double> seed, double u_extent, int u_steps,
                           double v_extent, int v_steps, const PAOptions& opt) {
  if (imm.params() != 2) throw ValidationError("adapted chart needs a 2-surface");
  if (u_steps < 2 || v_steps < 1) throw ValidationError("adapted chart needs u_steps >= 2, v_steps >= 1");
  AdaptedChart chart;
  const double du = u_extent / (u_steps - 1);
  const double dv = v_steps > 1 ? v_extent / (v_steps - 1) : 0.0;
  for (int i = 0; i < u_steps; ++i) chart.u.push_back(i * du);
  for (int j = 0; j < v_steps; ++j) chart.v.push_back((j - 0.5 * (v_steps - 1)) * dv);
  chart.requested = u_steps * v_steps;
  constexpr int kSub = 4;
  const double h = std::max(1e-4, 1e-3 * std::max(u_extent, v_extent));

  auto frame_at = [&](const Eigen::Vector2d& p, bool first) {
    const double q[] = {p(0), p(1)};
    const PAPoint pt = pa_point(v, imm, q, opt);
    if (!pt.dec.frame) throw DomainError("frame degenerate on the patch");
    Eigen::Vector3d out;
    out.head<2>() = first ? pt.dec.e1 : pt.dec.e2;
    out(2) = first && pt.dec.sin_theta > opt.frame_tol ? pt.B() : 0.0;
    return out;
  };
  // RK4 on (p, ∫B) along e1 or e2.
  auto flow = [&](Eigen::Vector3d y, double length, int steps, bool first) {
    const double step = length / steps;
    for (int k = 0; k < steps; ++k) {
      const Eigen::Vector3d k1 = frame_at(y.head<2>(), first);
      const Eigen::Vector3d k2 = frame_at((y + 0.5 * step * k1).head<2>(), first);
      const Eigen::Vector3d k3 = frame_at((y + 0.5 * step * k2).head<2>(), first);
      const Eigen::Vector3d k4 = frame_at((y + step * k3).head<2>(), first);
      y += step / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return y;
  };
  auto start_at = [&](double vv) {
    Eigen::Vector3d y(seed[0], seed[1], 0.0);
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(vv) / (dv > 0 ? dv : 1.0) * kSub)));
    return vv == 0.0 ? y : flow(y, vv, steps, false);
  };
  // Flow line through the transversal point at v, sampled at every chart.u.
  auto line = [&](double vv) {
    std::vector<Eigen::Vector3d> out;
    Eigen::Vector3d y = start_at(vv);
    y(2) = 0.0;
    out.push_back(y);
    for (int i = 1; i < u_steps; ++i) {
      y = flow(y, du, kSub, true);
      out.push_back(y);
    }
    return out;
  };

  chart.params.assign(chart.requested, {});
  chart.warp.assign(chart.requested, 0.0);
  chart.warp_predicted.assign(chart.requested, 0.0);
  for (int j = 0; j < v_steps; ++j) {
    try {
      const auto l0 = line(chart.v[j]);
      const auto lp = line(chart.v[j] + h), lm = line(chart.v[j] - h);
      const auto lp2 = line(chart.v[j] + h / 2), lm2 = line(chart.v[j] - h / 2);
      for (int i = 0; i < u_steps; ++i) {
        const Eigen::Vector2d big = (lp[i] - lm[i]).head<2>() / (2 * h);
        const Eigen::Vector2d small = (lp2[i] - lm2[i]).head<2>() / h;
        const Eigen::Vector2d dpv = (4 * small - big) / 3;
        const double q[] = {l0[i](0), l0[i](1)};
        const PAPoint pt = pa_point(v, imm, q, opt);
        const double w = std::sqrt(pt.geo.tinner(dpv, dpv));
        const int idx = i * v_steps + j;
        chart.params[idx] = {q[0], q[1]};
        chart.warp[idx] = w;
        chart.warp_predicted[idx] = std::exp(l0[i](2));
        chart.max_metric_residual =
            std::max({chart.max_metric_residual, std::abs(pt.geo.tinner(pt.dec.e1, pt.dec.e1) - 1.0),
                      std::abs(pt.geo.tinner(pt.dec.e1, dpv))});
        chart.max_warp_residual = std::max(
            chart.max_warp_residual, std::abs(w - chart.warp_predicted[idx]) / chart.warp_predicted[idx]);
        ++chart.covered;
      }
    } catch (const DomainError&) {
      // partial chart: this flow line left the valid region
    }
  }
  return chart;
}

namespace {

struct ThetaPiOverTwoValues {
  double a_t = 0.0, nabla_tt = 0.0, det_a = 0.0;
};

ThetaPiOverTwoValues ruled_values(std::span<const PAPoint> pts) {
  ThetaPiOverTwoValues r;
  for (const auto& p : pts) {
    const SurfaceGeometry& s = p.geo;
    const Eigen::VectorXd at = s.apply_shape(p.dec.tangent);
    r.a_t = std::max(r.a_t, std::sqrt(std::max(0.0, s.tinner(at, at))));
    r.nabla_tt = std::max(r.nabla_tt, s.norm(p.nabla_tangent(p.dec.tangent)));
    r.det_a = std::max(r.det_a, std::abs(s.shape.determinant()));
  }
  return r;
}

}  // namespace

CheckReport parallel_V_theorem_check(const FieldAlongSurface& v, const Immersion& imm,
                                     std::span<const std::vector<double>> grid,
                                     const PAOptions& opt) {
  const double tol = opt.torse.classes;
  const auto pts = sweep(v, imm, grid, opt);
  std::vector<SurfaceGeometry> geos;
  Range theta;
  for (const auto& p : pts) {
    if (p.fit.cls != FieldClass::parallel)
      return CheckReport::inapplicable(std::string("field fits as ") + to_string(p.fit.cls) +
                                       ", not parallel");
    geos.push_back(p.geo);
    theta.add(p.dec.theta);
  }
  if (classify_umbilicity(geos, tol).kind == Umbilicity::totally_geodesic)
    return CheckReport::inapplicable("surface is totally geodesic");
  if (theta.spread() > opt.theta_constant_spread) {
    CheckReport r = CheckReport::inapplicable("theta is not constant on the grid");
    r.values["theta_spread"] = theta.spread();
    return r;
  }
  const auto vals = ruled_values(pts);
  CheckReport r;
  r.values["max_A_T"] = vals.a_t;
  r.values["max_nabla_T_T"] = vals.nabla_tt;
  r.values["max_abs_det_A"] = vals.det_a;
  r.values["theta_spread"] = theta.spread();
  r.passed = vals.a_t <= tol && vals.nabla_tt <= tol && vals.det_a <= tol;
  return r;
}

CheckReport theta_extremes_check(const FieldAlongSurface& v, const Immersion& imm,
                                 std::span<const std::vector<double>> grid,
                                 const PAOptions& opt) {
  const double tol = opt.torse.classes;
  const auto pts = sweep(v, imm, grid, opt);
  double max_cos = 0.0, max_sin = 0.0;
  for (const auto& p : pts) {
    max_cos = std::max(max_cos, std::abs(p.dec.cos_theta));
    max_sin = std::max(max_sin, p.dec.sin_theta);
  }
  CheckReport r;
  if (max_cos <= tol) {
    const auto vals = ruled_values(pts);
    r.values["case"] = 1;
    r.values["max_abs_cos_theta"] = max_cos;
    r.values["max_A_T"] = vals.a_t;
    r.values["max_nabla_T_T"] = vals.nabla_tt;
    r.values["max_abs_det_A"] = vals.det_a;
    r.passed = vals.a_t <= tol && vals.nabla_tt <= tol && vals.det_a <= tol;
    return r;
  }
  if (max_sin <= tol) {
    std::vector<SurfaceGeometry> geos;
    for (const auto& p : pts) geos.push_back(p.geo);
    const UmbilicityReport u = classify_umbilicity(geos, tol);
    r.values["case"] = 2;
    r.values["max_sin_theta"] = max_sin;
    r.values["max_umbilic_deviation"] = u.max_umbilic_deviation;
    r.passed = u.max_umbilic_deviation <= tol;
    return r;
  }
  r = CheckReport::inapplicable("theta is neither identically pi/2 nor identically 0");
  r.values["max_abs_cos_theta"] = max_cos;
  r.values["max_sin_theta"] = max_sin;
  return r;
}

CheckReport umbilic_parallel_relations(const FieldAlongSurface& v, const Immersion& imm,
                                       std::span<const std::vector<double>> grid,
                                       const PAOptions& opt) {
  const double tol = opt.torse.classes;
  const auto pts = sweep(v, imm, grid, opt);
  std::vector<SurfaceGeometry> geos;
  for (const auto& p : pts) {
    if (p.fit.cls != FieldClass::parallel)
      return CheckReport::inapplicable(std::string("field fits as ") + to_string(p.fit.cls) +
                                       ", not parallel");
    if (!p.dec.frame || !p.theta_derivative)
      return CheckReport::inapplicable("frame undefined somewhere on the grid");
    geos.push_back(p.geo);
  }
  const UmbilicityReport u = classify_umbilicity(geos, tol);
  if (u.kind != Umbilicity::totally_umbilical)
    return CheckReport::inapplicable("surface is not totally umbilical with kappa != 0");
  for (double k : u.delta)
    if (std::abs(k) <= tol) return CheckReport::inapplicable("umbilical factor vanishes (kappa = 0)");

  double d_kappa = 0.0, d_b = 0.0, d_int = 0.0, d_ext = 0.0, d_sec = 0.0, int_ext = 0.0, sec = 0.0;
  Range tp, kext, kap;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const PAPoint& p = pts[i];
    const SurfaceGeometry& s = p.geo;
    const double kappa = u.delta[i];
    const double th1 = theta_prime(p);
    const double th2 = along_e1(v, imm, grid[i], opt, theta_prime);
    const double cot = p.dec.cos_theta / p.dec.sin_theta;
    const double k_ext = s.shape.determinant();
    const double k_sec =
        sectional_curvature(s.riemann, s.metric.g, s.jacobian.col(0), s.jacobian.col(1));
    const double k_int = k_sec + k_ext;
    tp.add(th1);
    kext.add(k_ext);
    kap.add(kappa);
    d_kappa = std::max(d_kappa, std::abs(kappa - th1));
    d_b = std::max(d_b, std::abs(p.B() - th1 * cot));
    d_int = std::max(d_int, std::abs(k_int - (th2 * cot + th1 * th1)));
    d_ext = std::max(d_ext, std::abs(k_ext - th1 * th1));
    d_sec = std::max(d_sec, std::abs(k_sec - th2 * cot));
    int_ext = std::max(int_ext, std::abs(k_int - k_ext));
    sec = std::max(sec, std::abs(k_sec));
  }
  CheckReport r;
  r.values["theta_prime_min"] = tp.lo;
  r.values["theta_prime_max"] = tp.hi;
  r.values["kappa_min"] = kap.lo;
  r.values["kappa_max"] = kap.hi;
  r.values["k_ext_min"] = kext.lo;
  r.values["k_ext_max"] = kext.hi;
  r.values["max_kappa_minus_theta_prime"] = d_kappa;
  r.values["max_B_relation"] = d_b;
  r.values["max_k_int_relation"] = d_int;
  r.values["max_k_ext_relation"] = d_ext;
  r.values["max_k_sec_relation"] = d_sec;
  r.passed = d_kappa <= tol && d_b <= tol && d_int <= 10 * tol && d_ext <= tol && d_sec <= 10 * tol;
  if (kext.spread() <= tol) {
    r.values["max_abs_k_sec"] = sec;
    r.values["max_k_int_minus_k_ext"] = int_ext;
    r.passed = r.passed && sec <= tol && int_ext <= tol;
  }
  return r;
}

PAReport pa_report(const FieldAlongSurface& v, const Immersion& imm, std::span<const double> at,
                   const PAOptions& opt) {
  const PAPoint p = pa_point(v, imm, at, opt);
  const SurfaceGeometry& s = p.geo;
  PAReport r;
  r.params.assign(at.begin(), at.end());
  r.theta = p.dec.theta;
  r.cos_theta = p.dec.cos_theta;
  r.f = p.fit.f;
  r.cls = p.fit.cls;
  r.torqued_partial = p.fit.torqued_partial;
  r.torse_residual = p.fit.residual;
  r.anti_torqued_defect = p.fit.anti_torqued_defect;
  r.frame = p.dec.frame;
  r.flipped = p.dec.flipped;
  r.reconstruction = p.dec.reconstruction_residual;
  r.length = p.dec.length_residual;
  if (p.dec.frame && s.n() == 2) {
    r.kappa1 = p.kappa1();
    r.kappa2 = p.kappa2();
  } else {
    r.kappa1 = s.kappa(0);
    r.kappa2 = s.kappa(s.n() - 1);
  }
  const DercompResiduals dc = dercomp_residuals(p);
  r.dercomp[0] = dc.first;
  r.dercomp[1] = dc.second;
  if (s.n() == 2 && s.m() == 3) {
    const PACurvatures c = pa_curvatures(v, imm, at, opt);
    r.k_ext = c.k_ext_det;
    r.k_sec = c.k_sec;
    r.k_int = c.k_int_gauss;
    r.k_int_direct = intrinsic_curvature_direct(imm, at, opt.fd_step);
    r.gauss = std::abs(r.k_int_direct - r.k_int);
    r.gauss_formula = std::max(gauss_formula_check(s, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)),
                               gauss_formula_check(s, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0)));
    r.gauss_formula = std::max(r.gauss_formula,
                               gauss_formula_check(s, Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1)));
    r.b_defined = c.defined;
    if (c.defined) {
      r.B = c.B;
      r.k_int_b = c.k_int_b;
      r.k_ext_formula = c.k_ext_formula;
    }
    const FrameResiduals fr = plevi_frame_check(p, opt.frame_tol);
    if (fr.defined) {
      r.e12[0] = fr.e1_theta;
      r.e12[1] = fr.e2_theta;
      std::copy(std::begin(fr.levi), std::end(fr.levi), std::begin(r.levi));
    }
  }
  return r;
}

}  // namespace pasurf
