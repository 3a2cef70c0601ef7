#include "pasurf/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pasurf/errors.hpp"

namespace pasurf {

namespace {

using DualMatrix = std::vector<std::vector<Dual>>;

// Determinant by elimination with partial pivoting on the values.
Dual determinant(DualMatrix a) {
  const int n = static_cast<int>(a.size());
  Dual det(1.0);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c].value()) > std::abs(a[piv][c].value())) piv = r;
    if (a[piv][c].value() == 0.0) return Dual(0.0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      const Dual f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

std::vector<Dual> solve(DualMatrix a, std::vector<Dual> b) {
  const int n = static_cast<int>(a.size());
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c].value()) > std::abs(a[piv][c].value())) piv = r;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    for (int r = c + 1; r < n; ++r) {
      const Dual f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<Dual> x(n);
  for (int r = n - 1; r >= 0; --r) {
    Dual s = b[r];
    for (int k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

std::string params_str(std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

Christoffel christoffel_from(const Eigen::MatrixXd& inv, const std::vector<Eigen::MatrixXd>& d) {
  const int n = static_cast<int>(inv.rows());
  Christoffel gam{n, std::vector<double>(n * n * n, 0.0)};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += inv(k, l) * (d[i](j, l) + d[j](i, l) - d[l](i, j));
        gam(k, i, j) = gam(k, j, i) = 0.5 * s;
      }
  return gam;
}

struct MapJets {
  Eigen::VectorXd point;
  Eigen::MatrixXd jacobian;
  std::vector<Eigen::VectorXd> hessian;
};

MapJets eval_map(const Immersion& imm, std::span<const double> at) {
  const int m = imm.ambient_dim(), n = imm.params();
  if (static_cast<int>(at.size()) != n) throw ValidationError("parameter point has wrong arity");
  MapJets out{Eigen::VectorXd(m), Eigen::MatrixXd(m, n),
              std::vector<Eigen::VectorXd>(n * n, Eigen::VectorXd(m))};
  for (int k = 0; k < m; ++k) {
    const Jet2 x = jet_eval(imm.map[k], at);
    out.point(k) = x.value();
    for (int a = 0; a < n; ++a) {
      out.jacobian(k, a) = x.grad(a);
      for (int b = 0; b < n; ++b) out.hessian[a * n + b](k) = x.hess(a, b);
    }
  }
  return out;
}

struct Induced {
  Eigen::MatrixXd I, inv;
  std::vector<Eigen::MatrixXd> d;
  double min_singular;
};

Induced induced_metric(const MapJets& x, const MetricDerivatives& md, std::span<const double> at) {
  const int m = static_cast<int>(x.jacobian.rows()), n = static_cast<int>(x.jacobian.cols());
  const Eigen::MatrixXd& J = x.jacobian;
  Induced r;
  r.I = J.transpose() * md.g * J;
  r.I = 0.5 * (r.I + r.I.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.I);
  r.min_singular = es.eigenvalues().minCoeff();
  if (!(r.min_singular >= 1e-10)) {
    std::ostringstream os;
    os << "immersion not full rank at " << params_str(at) << ": first fundamental form singular"
       << " values " << es.eigenvalues().transpose();
    throw DomainError(os.str());
  }
  r.inv = r.I.inverse();
  r.d.assign(n, Eigen::MatrixXd::Zero(n, n));
  for (int c = 0; c < n; ++c) {
    Eigen::MatrixXd dgc = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) dgc += md.dg[k] * J(k, c);
    Eigen::MatrixXd hc(m, n);
    for (int a = 0; a < n; ++a) hc.col(a) = x.hessian[a * n + c];
    const Eigen::MatrixXd t = hc.transpose() * md.g * J;
    r.d[c] = t + t.transpose() + J.transpose() * dgc * J;
  }
  return r;
}

}  // namespace

Immersion::Immersion(MetricChart c, std::vector<ScalarField> m, ParamBox d)
    : chart(std::move(c)), map(std::move(m)), domain(std::move(d)) {
  if (static_cast<int>(map.size()) != chart.dim())
    throw ValidationError("immersion needs one map component per chart coordinate");
  if (domain.dim() != chart.dim() - 1)
    throw ValidationError("immersion must have one parameter fewer than the chart dimension");
  for (const auto& f : map)
    if (f.arity != domain.dim()) throw ValidationError("map component arity must equal parameter count");
  for (const auto& [lo, hi] : domain.ranges)
    if (!(lo < hi)) throw ValidationError("parameter range must have lo < hi");
}

std::vector<std::vector<double>> parameter_grid(const ParamBox& box, std::span<const int> counts,
                                                double margin) {
  const int n = box.dim();
  if (static_cast<int>(counts.size()) != n) throw ValidationError("grid needs one count per parameter");
  std::vector<std::vector<double>> axes(n);
  for (int a = 0; a < n; ++a) {
    if (counts[a] < 1) throw ValidationError("grid counts must be positive");
    const auto [lo, hi] = box.ranges[a];
    const double w = hi - lo, l = lo + margin * w, h = hi - margin * w;
    if (counts[a] == 1) {
      axes[a].push_back(0.5 * (lo + hi));
      continue;
    }
    for (int i = 0; i < counts[a]; ++i) axes[a].push_back(l + (h - l) * i / (counts[a] - 1));
  }
  std::vector<std::vector<double>> out;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<double> p(n);
    for (int a = 0; a < n; ++a) p[a] = axes[a][idx[a]];
    out.push_back(std::move(p));
    int a = n - 1;
    while (a >= 0 && ++idx[a] == counts[a]) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

double SurfaceGeometry::inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
  return a.dot(metric.g * b);
}

double SurfaceGeometry::norm(const Eigen::VectorXd& a) const { return std::sqrt(inner(a, a)); }

Eigen::VectorXd SurfaceGeometry::tangential(const Eigen::VectorXd& w) const {
  return first_ff_inv * (jacobian.transpose() * (metric.g * w));
}

Eigen::VectorXd SurfaceGeometry::nabla(const Eigen::MatrixXd& d, const Eigen::VectorXd& field,
                                       const Eigen::VectorXd& dir_coeffs) const {
  return covariant_derivative_along(gamma, jacobian, field, d, dir_coeffs);
}

double SurfaceGeometry::shape_symmetry_residual() const {
  const Eigen::MatrixXd s = first_ff * shape;
  return (s - s.transpose()).cwiseAbs().maxCoeff();
}

double SurfaceGeometry::normal_unit_residual() const { return std::abs(inner(normal, normal) - 1.0); }

double SurfaceGeometry::normal_orthogonality_residual() const {
  return (jacobian.transpose() * (metric.g * normal)).cwiseAbs().maxCoeff();
}

double SurfaceGeometry::principal_residual() const {
  double r = 0.0;
  for (int i = 0; i < n(); ++i) {
    const Eigen::VectorXd d = shape * directions.col(i) - kappa(i) * directions.col(i);
    r = std::max(r, std::sqrt(std::max(0.0, tinner(d, d))));
  }
  return r;
}

double SurfaceGeometry::shape_route_residual() const {
  return (first_ff_inv * second_ff - shape).cwiseAbs().maxCoeff();
}

SurfaceGeometry SurfaceGeometry::flipped() const {
  SurfaceGeometry s = *this;
  s.orientation = -orientation;
  s.normal = -normal;
  s.normal_d = -normal_d;
  s.normal_nabla = -normal_nabla;
  s.shape = -shape;
  s.second_ff = -second_ff;
  const int k = n();
  for (int i = 0; i < k; ++i) {
    s.kappa(i) = -kappa(k - 1 - i);
    s.directions.col(i) = directions.col(k - 1 - i);
  }
  return s;
}

Eigen::MatrixXd coordinate_frame(const Eigen::MatrixXd& I) {
  const int n = static_cast<int>(I.rows());
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) e.col(i) -= e.col(j).dot(I * e.col(i)) * e.col(j);
    e.col(i) /= std::sqrt(e.col(i).dot(I * e.col(i)));
  }
  return e;
}

SurfaceGeometry surface_geometry(const Immersion& imm, std::span<const double> at, int orientation) {
  if (orientation != 1 && orientation != -1) throw ValidationError("orientation must be +1 or -1");
  const int m = imm.ambient_dim(), n = imm.params();
  const MapJets x = eval_map(imm, at);
  const std::vector<double> p(x.point.data(), x.point.data() + m);

  SurfaceGeometry s;
  s.params.assign(at.begin(), at.end());
  s.point = x.point;
  s.jacobian = x.jacobian;
  s.hessian = x.hessian;
  s.metric = metric_derivatives(imm.chart, p);
  s.gamma = christoffel(s.metric);
  s.riemann = riemann_tensor(s.metric);
  s.orientation = orientation;

  Induced ind = induced_metric(x, s.metric, at);
  s.first_ff = ind.I;
  s.first_ff_inv = ind.inv;
  s.first_ff_d = ind.d;
  s.min_singular = ind.min_singular;
  s.induced_gamma = christoffel_from(ind.inv, ind.d);

  // Normal through the metric volume form: the cofactor covector of the
  // tangent columns, raised and normalized. Duals carry ∂_a.
  DualMatrix jd(m, std::vector<Dual>(n));
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < n; ++a) {
      std::vector<double> g(n);
      for (int b = 0; b < n; ++b) g[b] = x.hessian[a * n + b](k);
      jd[k][a] = Dual(x.jacobian(k, a), g);
    }
  std::vector<Dual> cov(m);
  for (int k = 0; k < m; ++k) {
    DualMatrix minor;
    for (int r = 0; r < m; ++r)
      if (r != k) minor.push_back(jd[r]);
    cov[k] = (k % 2 == 0) ? determinant(minor) : -determinant(minor);
  }
  DualMatrix gd(m, std::vector<Dual>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      std::vector<double> g(n, 0.0);
      for (int b = 0; b < n; ++b)
        for (int k = 0; k < m; ++k) g[b] += s.metric.dg[k](i, j) * x.jacobian(k, b);
      gd[i][j] = Dual(s.metric.g(i, j), g);
    }
  const std::vector<Dual> w = solve(gd, cov);
  Dual len2(0.0);
  for (int k = 0; k < m; ++k) len2 += cov[k] * w[k];
  const Dual len = sqrt(len2);
  s.normal.resize(m);
  s.normal_d.resize(m, n);
  for (int k = 0; k < m; ++k) {
    const Dual nk = w[k] / len * static_cast<double>(orientation);
    s.normal(k) = nk.value();
    for (int a = 0; a < n; ++a) s.normal_d(k, a) = nk.d(a);
  }
  s.normal_nabla.resize(m, n);
  for (int a = 0; a < n; ++a)
    s.normal_nabla.col(a) = s.normal_d.col(a) + s.gamma.contract(s.jacobian.col(a), s.normal);

  const Eigen::MatrixXd M = s.jacobian.transpose() * s.metric.g * s.normal_nabla;  // M(c,a)
  s.shape = -s.first_ff_inv * M;
  s.second_ff.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Eigen::VectorXd acc =
          x.hessian[a * n + b] + s.gamma.contract(s.jacobian.col(a), s.jacobian.col(b));
      s.second_ff(a, b) = s.inner(acc, s.normal);
    }

  const Eigen::MatrixXd hs = -0.5 * (M + M.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(hs, s.first_ff);
  s.kappa = es.eigenvalues();
  const double scale = 1.0 + s.kappa.cwiseAbs().maxCoeff();
  if (s.kappa.maxCoeff() - s.kappa.minCoeff() <= 1e-9 * scale) {
    s.directions = coordinate_frame(s.first_ff);
  } else {
    s.directions = es.eigenvectors();
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd c = s.directions.col(i);
      c /= std::sqrt(c.dot(s.first_ff * c));
      for (int k = 0; k < n; ++k)
        if (std::abs(c(k)) > 1e-12) {
          if (c(k) < 0) c = -c;
          break;
        }
      s.directions.col(i) = c;
    }
  }
  return s;
}

Christoffel induced_christoffel(const Immersion& imm, std::span<const double> at) {
  const MapJets x = eval_map(imm, at);
  const std::vector<double> p(x.point.data(), x.point.data() + x.point.size());
  const MetricDerivatives md = metric_derivatives(imm.chart, p);
  const Induced ind = induced_metric(x, md, at);
  return christoffel_from(ind.inv, ind.d);
}

double gauss_formula_check(const SurfaceGeometry& s, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& y) {
  const int n = s.n();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(s.m());
  Eigen::VectorXd intrinsic = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      w += x(a) * y(b) *
           (s.hessian[a * n + b] + s.gamma.contract(s.jacobian.col(a), s.jacobian.col(b)));
      for (int c = 0; c < n; ++c) intrinsic(c) += s.induced_gamma(c, a, b) * x(a) * y(b);
    }
  const Eigen::VectorXd tang = s.tangential(w);
  const double h = s.tinner(s.apply_shape(x), y);
  const Eigen::VectorXd mismatch = w - s.ambient(tang) - h * s.normal;
  const Eigen::VectorXd d = tang - intrinsic;
  return s.norm(mismatch) + std::sqrt(std::max(0.0, s.tinner(d, d)));
}

double intrinsic_curvature_direct(const Immersion& imm, std::span<const double> at, double step) {
  if (imm.params() != 2) throw ValidationError("intrinsic curvature route needs a 2-surface");
  const int n = 2;
  std::vector<double> p(at.begin(), at.end());
  const Christoffel g0 = induced_christoffel(imm, p);
  std::vector<Christoffel> dg;
  for (int c = 0; c < n; ++c) {
    auto at_shift = [&](double h) {
      auto q = p;
      q[c] += h;
      return induced_christoffel(imm, q);
    };
    const Christoffel gp = at_shift(step), gm = at_shift(-step);
    const Christoffel gp2 = at_shift(step / 2), gm2 = at_shift(-step / 2);
    Christoffel d{n, std::vector<double>(n * n * n)};
    for (std::size_t i = 0; i < d.data.size(); ++i) {
      const double big = (gp.data[i] - gm.data[i]) / (2 * step);
      const double small = (gp2.data[i] - gm2.data[i]) / step;
      d.data[i] = (4 * small - big) / 3;
    }
    dg.push_back(d);
  }
  // R^a_{1 0 1}: R(∂0,∂1)∂1 = R^a_101 ∂a
  Eigen::Vector2d r;
  for (int a = 0; a < n; ++a) {
    double v = dg[0](a, 1, 1) - dg[1](a, 0, 1);
    for (int e = 0; e < n; ++e) v += g0(a, 0, e) * g0(e, 1, 1) - g0(a, 1, e) * g0(e, 0, 1);
    r(a) = v;
  }
  const MapJets x = eval_map(imm, at);
  const std::vector<double> xp(x.point.data(), x.point.data() + x.point.size());
  const MetricAt g = metric_at(imm.chart, xp);
  const Eigen::MatrixXd I = x.jacobian.transpose() * g.g * x.jacobian;
  return I.row(0).dot(r) / I.determinant();
}

ThreeCurvatures three_curvatures(const Immersion& imm, const SurfaceGeometry& s, double step) {
  if (s.n() != 2 || s.m() != 3) throw ValidationError("three curvatures need a surface in a 3-chart");
  ThreeCurvatures k;
  k.k_ext = s.shape.determinant();
  k.k_sec = sectional_curvature(s.riemann, s.metric.g, s.jacobian.col(0), s.jacobian.col(1));
  k.k_int = k.k_sec + k.k_ext;
  k.k_int_direct = intrinsic_curvature_direct(imm, s.params, step);
  return k;
}

const char* to_string(Umbilicity u) {
  switch (u) {
    case Umbilicity::totally_geodesic: return "totally_geodesic";
    case Umbilicity::totally_umbilical: return "totally_umbilical";
    default: return "neither";
  }
}

UmbilicityReport classify_umbilicity(std::span<const SurfaceGeometry> samples, double tol) {
  UmbilicityReport r;
  for (const auto& s : samples) {
    const double mean = s.shape.trace() / s.n();
    r.delta.push_back(mean);
    r.max_shape_norm = std::max(r.max_shape_norm, s.kappa.cwiseAbs().maxCoeff());
    r.max_umbilic_deviation =
        std::max(r.max_umbilic_deviation, (s.kappa.array() - mean).abs().maxCoeff());
  }
  if (r.max_shape_norm <= tol)
    r.kind = Umbilicity::totally_geodesic;
  else if (r.max_umbilic_deviation <= tol)
    r.kind = Umbilicity::totally_umbilical;
  return r;
}

UmbilicityReport classify_umbilicity(const Immersion& imm, std::span<const std::vector<double>> grid,
                                     int orientation, double tol) {
  std::vector<SurfaceGeometry> samples;
  samples.reserve(grid.size());
  for (const auto& p : grid) samples.push_back(surface_geometry(imm, p, orientation));
  return classify_umbilicity(samples, tol);
}

double ruling_residual(const SurfaceGeometry& s, int axis) {
  if (axis < 0 || axis >= s.n()) throw ValidationError("ruling axis out of range");
  const Eigen::VectorXd c = s.jacobian.col(axis);
  const Eigen::VectorXd acc = s.hessian[axis * s.n() + axis] + s.gamma.contract(c, c);
  const double cc = s.inner(c, c);
  const Eigen::VectorXd perp = acc - (s.inner(acc, c) / cc) * c;
  return s.norm(perp) / (1.0 + cc);
}

double ruled_check(const Immersion& imm, int axis, std::span<const std::vector<double>> grid) {
  double r = 0.0;
  for (const auto& p : grid) r = std::max(r, ruling_residual(surface_geometry(imm, p), axis));
  return r;
}

}  // namespace pasurf
