#include "pasurf/manifold.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pasurf/errors.hpp"

namespace pasurf {

namespace {

std::string point_str(std::span<const double> p) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

int upper_index(int dim, int i, int j) {
  if (i > j) std::swap(i, j);
  return i * dim - i * (i - 1) / 2 + (j - i);
}

ScalarField constant_field(int arity, double c) {
  return {arity, [c](std::span<const Jet2>) { return Jet2(c); }};
}

}  // namespace

MetricChart::MetricChart(int dim, std::vector<ScalarField> upper,
                         std::vector<DomainPredicate> domain)
    : dim_(dim), upper_(std::move(upper)), domain_(std::move(domain)) {
  if (dim < 1 || dim > kMaxVars) throw ValidationError("chart dimension out of range");
  if (static_cast<int>(upper_.size()) != dim * (dim + 1) / 2)
    throw ValidationError("metric needs dim*(dim+1)/2 upper-triangle components");
  for (const auto& f : upper_)
    if (f.arity != dim) throw ValidationError("metric component arity must equal chart dimension");
}

MetricChart MetricChart::euclidean(int dim) {
  std::vector<ScalarField> up;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) up.push_back(constant_field(dim, i == j ? 1.0 : 0.0));
  return MetricChart(dim, std::move(up));
}

MetricChart MetricChart::half_space(int dim) {
  std::vector<ScalarField> up;
  const int last = dim - 1;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      if (i == j)
        up.push_back({dim, [last](std::span<const Jet2> x) { return pow(x[last], -2.0); }});
      else
        up.push_back(constant_field(dim, 0.0));
    }
  DomainPredicate half{"last coordinate > 0",
                       {dim, [last](std::span<const Jet2> x) { return x[last]; }}};
  return MetricChart(dim, std::move(up), {half});
}

MetricChart MetricChart::stereographic_sphere(int dim, double radius) {
  std::vector<ScalarField> up;
  const double r2 = radius * radius;
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      if (i == j)
        up.push_back({dim, [r2, dim](std::span<const Jet2> x) {
                        Jet2 s(r2);
                        for (int k = 0; k < dim; ++k) s += x[k] * x[k];
                        return (4.0 * r2 * r2) / (s * s);
                      }});
      else
        up.push_back(constant_field(dim, 0.0));
    }
  return MetricChart(dim, std::move(up));
}

const ScalarField& MetricChart::component(int i, int j) const {
  return upper_[upper_index(dim_, i, j)];
}

double MetricChart::clearance(std::span<const double> point) const {
  double c = std::numeric_limits<double>::infinity();
  std::vector<Jet2> in(point.begin(), point.end());
  for (const auto& d : domain_) c = std::min(c, d.field.eval(in).value());
  return c;
}

bool MetricChart::contains(std::span<const double> point, double margin) const {
  return clearance(point) > margin;
}

void MetricChart::require_domain(std::span<const double> point) const {
  std::vector<Jet2> in(point.begin(), point.end());
  for (const auto& d : domain_)
    if (!(d.field.eval(in).value() > 0.0))
      throw DomainError("point " + point_str(point) + " outside chart domain (" + d.description +
                        ")");
}

MetricAt metric_at(const MetricChart& chart, std::span<const double> point) {
  chart.require_domain(point);
  const int m = chart.dim();
  std::vector<Jet2> in(point.begin(), point.end());
  MetricAt out;
  out.g.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) out.g(i, j) = out.g(j, i) = chart.component(i, j).eval(in).value();
  if (!out.g.allFinite()) throw DomainError("non-finite metric at " + point_str(point));
  Eigen::LLT<Eigen::MatrixXd> llt(out.g);
  if (llt.info() != Eigen::Success)
    throw DomainError("metric not positive definite at " + point_str(point));
  out.cholesky = llt.matrixL();
  out.inverse = llt.solve(Eigen::MatrixXd::Identity(m, m));
  return out;
}

MetricDerivatives metric_derivatives(const MetricChart& chart, std::span<const double> point) {
  chart.require_domain(point);
  const int m = chart.dim();
  std::vector<Jet2> seeds;
  for (int i = 0; i < m; ++i) seeds.push_back(Jet2::variable(point[i], i, m));

  MetricDerivatives out;
  out.g = Eigen::MatrixXd::Zero(m, m);
  out.dg.assign(m, Eigen::MatrixXd::Zero(m, m));
  out.ddg.assign(m * m, Eigen::MatrixXd::Zero(m, m));
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      const Jet2 c = chart.component(i, j).eval(seeds);
      if (!c.finite())
        throw DomainError("non-finite metric component at " + point_str(point));
      out.g(i, j) = out.g(j, i) = c.value();
      for (int k = 0; k < m; ++k) {
        out.dg[k](i, j) = out.dg[k](j, i) = c.grad(k);
        for (int l = 0; l < m; ++l) out.ddg[k * m + l](i, j) = out.ddg[k * m + l](j, i) = c.hess(k, l);
      }
    }
  Eigen::LLT<Eigen::MatrixXd> llt(out.g);
  if (llt.info() != Eigen::Success)
    throw DomainError("metric not positive definite at " + point_str(point));
  out.inverse = llt.solve(Eigen::MatrixXd::Identity(m, m));
  return out;
}

Eigen::VectorXd Christoffel::contract(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) r(k) += (*this)(k, i, j) * x(i) * y(j);
  return r;
}

Christoffel christoffel(const MetricDerivatives& m) {
  const int n = static_cast<int>(m.g.rows());
  Christoffel gam{n, std::vector<double>(n * n * n, 0.0)};
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += m.inverse(k, l) * (m.dg[i](j, l) + m.dg[j](i, l) - m.dg[l](i, j));
        gam(k, i, j) = gam(k, j, i) = 0.5 * s;
      }
  return gam;
}

Christoffel christoffel(const MetricChart& chart, std::span<const double> point) {
  return christoffel(metric_derivatives(chart, point));
}

double metric_compatibility_residual(const MetricDerivatives& m, const Christoffel& gam) {
  const int n = gam.dim;
  double worst = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double r = m.dg[k](i, j);
        for (int l = 0; l < n; ++l) r -= gam(l, k, i) * m.g(l, j) + gam(l, k, j) * m.g(i, l);
        worst = std::max(worst, std::abs(r));
      }
  return worst;
}

RiemannTensor riemann_tensor(const MetricDerivatives& m) {
  const int n = static_cast<int>(m.g.rows());
  const Christoffel gam = christoffel(m);

  // ∂_c Γ^a_ij = ½ ∂_c g^{al} S_ijl + ½ g^{al} ∂_c S_ijl,
  // S_ijl = ∂_i g_jl + ∂_j g_il − ∂_l g_ij, ∂_c g^{-1} = −g^{-1} ∂_c g g^{-1}.
  std::vector<double> dgam(n * n * n * n, 0.0);
  auto dG = [&](int c, int a, int i, int j) -> double& {
    return dgam[((c * n + a) * n + i) * n + j];
  };
  for (int c = 0; c < n; ++c) {
    const Eigen::MatrixXd dinv = -m.inverse * m.dg[c] * m.inverse;
    for (int a = 0; a < n; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            const double S = m.dg[i](j, l) + m.dg[j](i, l) - m.dg[l](i, j);
            const double dS = m.ddg[c * n + i](j, l) + m.ddg[c * n + j](i, l) -
                              m.ddg[c * n + l](i, j);
            s += dinv(a, l) * S + m.inverse(a, l) * dS;
          }
          dG(c, a, i, j) = 0.5 * s;
        }
  }

  RiemannTensor r{n, std::vector<double>(n * n * n * n, 0.0)};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = dG(c, a, d, b) - dG(d, a, c, b);
          for (int e = 0; e < n; ++e) v += gam(a, c, e) * gam(e, d, b) - gam(a, d, e) * gam(e, c, b);
          r(a, b, c, d) = v;
        }
  return r;
}

RiemannTensor riemann_tensor(const MetricChart& chart, std::span<const double> point) {
  return riemann_tensor(metric_derivatives(chart, point));
}

double riemann(const RiemannTensor& r, const Eigen::MatrixXd& g, const Eigen::VectorXd& x,
               const Eigen::VectorXd& y, const Eigen::VectorXd& z, const Eigen::VectorXd& w) {
  const int n = r.dim;
  Eigen::VectorXd rz = Eigen::VectorXd::Zero(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) rz(a) += r(a, b, c, d) * z(b) * x(c) * y(d);
  return w.dot(g * rz);
}

namespace {

void require_same_base(std::initializer_list<const AmbientVector*> vs) {
  const AmbientVector* first = *vs.begin();
  for (const AmbientVector* v : vs)
    if (v->base.size() != first->base.size() || (v->base - first->base).norm() != 0.0)
      throw ValidationError("vectors are based at different points");
}

}  // namespace

double riemann(const MetricChart& chart, const AmbientVector& x, const AmbientVector& y,
               const AmbientVector& z, const AmbientVector& w) {
  require_same_base({&x, &y, &z, &w});
  const std::vector<double> p(x.base.data(), x.base.data() + x.base.size());
  const MetricDerivatives m = metric_derivatives(chart, p);
  return riemann(riemann_tensor(m), m.g, x.components, y.components, z.components, w.components);
}

double sectional_curvature(const RiemannTensor& r, const Eigen::MatrixXd& g,
                           const Eigen::VectorXd& e1, const Eigen::VectorXd& e2) {
  const double g11 = e1.dot(g * e1), g22 = e2.dot(g * e2), g12 = e1.dot(g * e2);
  const double gram = g11 * g22 - g12 * g12;
  if (!(gram > 1e-12 * std::max(1.0, g11 * g22)))
    throw DomainError("degenerate plane section (Gram determinant " + std::to_string(gram) + ")");
  return riemann(r, g, e1, e2, e2, e1) / gram;
}

double sectional_curvature(const MetricChart& chart, const AmbientVector& e1,
                           const AmbientVector& e2) {
  require_same_base({&e1, &e2});
  const std::vector<double> p(e1.base.data(), e1.base.data() + e1.base.size());
  const MetricDerivatives m = metric_derivatives(chart, p);
  return sectional_curvature(riemann_tensor(m), m.g, e1.components, e2.components);
}

Eigen::VectorXd covariant_derivative_along(const Christoffel& gamma,
                                           const Eigen::MatrixXd& jacobian,
                                           const Eigen::VectorXd& field,
                                           const Eigen::MatrixXd& field_jacobian,
                                           const Eigen::VectorXd& direction) {
  const Eigen::VectorXd dx = jacobian * direction;
  return field_jacobian * direction + gamma.contract(dx, field);
}

AmbientVector covariant_derivative_along(const MetricChart& chart,
                                         std::span<const ScalarField> map,
                                         std::span<const ScalarField> field,
                                         std::span<const double> direction,
                                         std::span<const double> at) {
  const int m = chart.dim();
  const int n = static_cast<int>(at.size());
  if (static_cast<int>(map.size()) != m || static_cast<int>(field.size()) != m)
    throw ValidationError("map and field need one component per chart coordinate");
  if (static_cast<int>(direction.size()) != n)
    throw ValidationError("direction must live in parameter space");
  Eigen::VectorXd x(m), w(m);
  Eigen::MatrixXd jx(m, n), jw(m, n);
  for (int k = 0; k < m; ++k) {
    const Jet2 xk = jet_eval(map[k], at);
    const Jet2 wk = jet_eval(field[k], at);
    x(k) = xk.value();
    w(k) = wk.value();
    for (int a = 0; a < n; ++a) {
      jx(k, a) = xk.grad(a);
      jw(k, a) = wk.grad(a);
    }
  }
  const std::vector<double> p(x.data(), x.data() + m);
  const Christoffel gam = christoffel(chart, p);
  const Eigen::VectorXd dir = Eigen::Map<const Eigen::VectorXd>(direction.data(), n);
  return {x, covariant_derivative_along(gam, jx, w, jw, dir)};
}

}  // namespace pasurf
