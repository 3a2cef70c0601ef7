#include "pasurf/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pasurf/errors.hpp"

namespace pasurf {

FieldAlongSurface FieldAlongSurface::from_components(std::vector<ScalarField> c, bool unit) {
  FieldAlongSurface v;
  v.kind = Kind::expression;
  v.components = std::move(c);
  v.declared_unit = unit;
  return v;
}

FieldAlongSurface FieldAlongSurface::unit_normal() {
  FieldAlongSurface v;
  v.kind = Kind::normal;
  v.declared_unit = true;
  return v;
}

ScalarField along_map(const ScalarField& outer, const Immersion& imm) {
  const int n = imm.params();
  if (outer.arity != n + imm.ambient_dim())
    throw ValidationError("field must take parameters followed by chart coordinates");
  std::vector<ScalarField> inner;
  for (int a = 0; a < n; ++a)
    inner.push_back({n, [a](std::span<const Jet2> x) { return x[a]; }});
  for (const auto& f : imm.map) inner.push_back(f);
  return compose(outer, std::move(inner));
}

FieldAt field_at(const FieldAlongSurface& v, const SurfaceGeometry& s) {
  const int m = s.m(), n = s.n();
  FieldAt out;
  if (v.kind == FieldAlongSurface::Kind::normal) {
    out.value = s.normal;
    out.d = s.normal_d;
    out.nabla = s.normal_nabla;
    return out;
  }
  if (static_cast<int>(v.components.size()) != m)
    throw ValidationError("field needs one component per chart coordinate");
  out.value.resize(m);
  out.d.resize(m, n);
  for (int k = 0; k < m; ++k) {
    const Jet2 j = jet_eval(v.components[k], s.params);
    out.value(k) = j.value();
    for (int a = 0; a < n; ++a) out.d(k, a) = j.grad(a);
  }
  out.nabla.resize(m, n);
  for (int a = 0; a < n; ++a)
    out.nabla.col(a) = out.d.col(a) + s.gamma.contract(s.jacobian.col(a), out.value);
  return out;
}

double unit_defect(const FieldAlongSurface& v, const Immersion& imm,
                   std::span<const std::vector<double>> grid, int orientation) {
  double r = 0.0;
  for (const auto& p : grid) {
    const SurfaceGeometry s = surface_geometry(imm, p, orientation);
    const FieldAt f = field_at(v, s);
    r = std::max(r, std::abs(s.norm(f.value) - 1.0));
  }
  return r;
}

const char* to_string(FieldClass c) {
  switch (c) {
    case FieldClass::parallel: return "parallel";
    case FieldClass::concircular: return "concircular";
    case FieldClass::anti_torqued: return "antiTorqued";
    case FieldClass::torqued: return "torqued";
    case FieldClass::torse_forming: return "torseForming";
    default: return "none";
  }
}

TorseFit torse_fit(const FieldAt& v, const SurfaceGeometry& s, const Eigen::MatrixXd& basis,
                   const TorseTolerances& tol) {
  const int m = s.m(), n = s.n();
  const double vlen = s.norm(v.value);
  if (!(vlen > 1e-12)) throw DomainError("field vanishes on the surface");

  // ‖w‖_g = ‖Lᵀ w‖ with g = L Lᵀ
  const Eigen::LLT<Eigen::MatrixXd> llt(s.metric.g);
  const Eigen::MatrixXd Lt = llt.matrixU();
  const Eigen::VectorXd lv = Lt * v.value;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n * m, n + 1);
  Eigen::VectorXd rhs(n * m);
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXd ea = s.ambient(basis.col(a));
    M.block(a * m, 0, m, 1) = Lt * ea;
    M.block(a * m, 1 + a, m, 1) = lv;
    rhs.segment(a * m, m) = Lt * (v.nabla * basis.col(a));
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(M);
  const Eigen::VectorXd p = qr.solve(rhs);

  TorseFit fit;
  fit.f = p(0);
  fit.omega = p.tail(n);
  fit.residual = (M * p - rhs).norm();

  Eigen::VectorXd vt(n);
  for (int a = 0; a < n; ++a) {
    vt(a) = s.inner(s.ambient(basis.col(a)), v.value);
    fit.anti_torqued_defect =
        std::max(fit.anti_torqued_defect, std::abs(fit.omega(a) + fit.f * vt(a)));
  }
  fit.omega_of_tangent = std::abs(fit.omega.dot(vt));
  const double normal_part = std::abs(s.inner(v.value, s.normal));
  fit.torqued_partial = normal_part > tol.classes;

  const double c = tol.classes;
  if (fit.residual > tol.residual)
    fit.cls = FieldClass::none;
  else if (std::abs(fit.f) <= c && fit.omega.norm() <= c)
    fit.cls = FieldClass::parallel;
  else if (fit.omega.norm() <= c)
    fit.cls = FieldClass::concircular;
  else if (fit.anti_torqued_defect <= c)
    fit.cls = FieldClass::anti_torqued;
  else if (fit.omega_of_tangent <= c)
    fit.cls = FieldClass::torqued;
  else
    fit.cls = FieldClass::torse_forming;
  return fit;
}

TorseFit torse_fit(const FieldAlongSurface& v, const SurfaceGeometry& s, const TorseTolerances& tol) {
  return torse_fit(field_at(v, s), s, coordinate_frame(s.first_ff), tol);
}

CheckReport unit_torse_implies_antitorqued_check(const FieldAlongSurface& v, const Immersion& imm,
                                                 std::span<const std::vector<double>> grid,
                                                 int orientation, const TorseTolerances& tol) {
  if (!v.declared_unit) return CheckReport::inapplicable("field not declared unit");
  double defect = 0.0, residual = 0.0;
  for (const auto& p : grid) {
    const SurfaceGeometry s = surface_geometry(imm, p, orientation);
    const TorseFit fit = torse_fit(v, s, tol);
    defect = std::max(defect, fit.anti_torqued_defect);
    residual = std::max(residual, fit.residual);
  }
  CheckReport r;
  r.values["max_anti_torqued_defect"] = defect;
  r.values["max_torse_residual"] = residual;
  if (residual > tol.residual) {
    r.applicable = false;
    r.reason = "field is not torse-forming on the grid";
    return r;
  }
  r.passed = defect <= 10 * tol.residual;
  return r;
}

CheckReport concircular_umbilical_check(const FieldAlongSurface& v, const Immersion& imm,
                                        std::span<const std::vector<double>> grid,
                                        int orientation, const TorseTolerances& tol) {
  if (!v.declared_unit) return CheckReport::inapplicable("field not declared unit");
  std::vector<SurfaceGeometry> samples;
  double tangential = 0.0, umbilic = 0.0, converse = 0.0;
  double fmin = std::numeric_limits<double>::infinity(), fmax = -fmin;
  for (const auto& p : grid) {
    samples.push_back(surface_geometry(imm, p, orientation));
    const SurfaceGeometry& s = samples.back();
    const FieldAt fa = field_at(v, s);
    const TorseFit fit = torse_fit(fa, s, coordinate_frame(s.first_ff), tol);
    if (fit.cls != FieldClass::concircular) {
      CheckReport r = CheckReport::inapplicable(
          std::string("field fits as ") + to_string(fit.cls) + ", not concircular with f != 0");
      r.values["f_at_failure"] = fit.f;
      return r;
    }
    fmin = std::min(fmin, fit.f);
    fmax = std::max(fmax, fit.f);
    const double sigma = s.inner(fa.value, s.normal) >= 0 ? 1.0 : -1.0;
    tangential = std::max(tangential, s.norm(fa.value - s.inner(fa.value, s.normal) * s.normal));
    umbilic = std::max(umbilic, (s.kappa.array() + sigma * fit.f).abs().maxCoeff());
  }
  const UmbilicityReport u = classify_umbilicity(samples, tol.classes);
  if (u.kind != Umbilicity::neither) {
    // converse: the unit normal is concircular with f = −δ
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const TorseFit n = torse_fit(FieldAlongSurface::unit_normal(), samples[i], tol);
      converse = std::max({converse, std::abs(n.f + u.delta[i]), n.omega.norm(), n.residual});
    }
  }
  CheckReport r;
  r.values["f_min"] = fmin;
  r.values["f_max"] = fmax;
  r.values["max_tangential_part"] = tangential;
  r.values["max_umbilic_defect"] = umbilic;
  r.values["converse_defect"] = converse;
  r.values["max_umbilic_deviation"] = u.max_umbilic_deviation;
  r.passed = tangential <= tol.classes && umbilic <= tol.classes &&
             u.kind == Umbilicity::totally_umbilical && converse <= tol.classes;
  return r;
}

CheckReport umbilical_normal_is_antitorqued_check(const Immersion& imm,
                                                  std::span<const std::vector<double>> grid,
                                                  int orientation, const TorseTolerances& tol) {
  std::vector<SurfaceGeometry> samples;
  for (const auto& p : grid) samples.push_back(surface_geometry(imm, p, orientation));
  const UmbilicityReport u = classify_umbilicity(samples, tol.classes);
  if (u.kind == Umbilicity::neither) return CheckReport::inapplicable("surface is not totally umbilical");
  double defect = 0.0, lmin = std::numeric_limits<double>::infinity(), lmax = -lmin, match = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const TorseFit n = torse_fit(FieldAlongSurface::unit_normal(), samples[i], tol);
    defect = std::max({defect, n.residual, n.anti_torqued_defect});
    lmin = std::min(lmin, n.f);
    lmax = std::max(lmax, n.f);
    match = std::max(match, std::abs(n.f + u.delta[i]));
  }
  CheckReport r;
  r.values["max_defect"] = defect;
  r.values["lambda_min"] = lmin;
  r.values["lambda_max"] = lmax;
  r.values["max_lambda_plus_delta"] = match;
  r.passed = defect <= tol.residual && match <= tol.classes;
  return r;
}

}  // namespace pasurf
