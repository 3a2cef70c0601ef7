#include "pasurf/jet.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pasurf/errors.hpp"

namespace pasurf {

namespace {

[[noreturn]] void domain(const std::string& fn, double x) {
  throw DomainError(fn + " evaluated outside its domain at " + std::to_string(x));
}

}  // namespace

Jet2 Jet2::variable(double value, int index, int nvars) {
  Jet2 j(value);
  j.n_ = nvars;
  j.grad_[index] = 1.0;
  return j;
}

void Jet2::set_grad(int i, double g) {
  grad_[i] = g;
  n_ = std::max(n_, i + 1);
}

void Jet2::set_hess(int i, int j, double h) {
  hess_[tri(i, j)] = h;
  n_ = std::max(n_, std::max(i, j) + 1);
}

Eigen::VectorXd Jet2::gradient() const {
  Eigen::VectorXd g(n_);
  for (int i = 0; i < n_; ++i) g(i) = grad_[i];
  return g;
}

Eigen::MatrixXd Jet2::hessian() const {
  Eigen::MatrixXd h(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) h(i, j) = hess(i, j);
  return h;
}

bool Jet2::finite() const {
  if (!std::isfinite(value_)) return false;
  for (int i = 0; i < n_; ++i) {
    if (!std::isfinite(grad_[i])) return false;
    for (int j = i; j < n_; ++j)
      if (!std::isfinite(hess_[tri(i, j)])) return false;
  }
  return true;
}

Jet2 Jet2::compose(double f0, double f1, double f2) const {
  Jet2 r(f0);
  r.n_ = n_;
  for (int i = 0; i < n_; ++i) {
    r.grad_[i] = f1 * grad_[i];
    for (int j = i; j < n_; ++j)
      r.hess_[tri(i, j)] = f1 * hess_[tri(i, j)] + f2 * grad_[i] * grad_[j];
  }
  return r;
}

Jet2 Jet2::operator-() const {
  Jet2 r = *this;
  r.value_ = -value_;
  for (auto& g : r.grad_) g = -g;
  for (auto& h : r.hess_) h = -h;
  return r;
}

Jet2& Jet2::operator+=(const Jet2& o) {
  value_ += o.value_;
  n_ = std::max(n_, o.n_);
  for (int i = 0; i < kMaxVars; ++i) grad_[i] += o.grad_[i];
  for (int i = 0; i < kTri; ++i) hess_[i] += o.hess_[i];
  return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
  value_ -= o.value_;
  n_ = std::max(n_, o.n_);
  for (int i = 0; i < kMaxVars; ++i) grad_[i] -= o.grad_[i];
  for (int i = 0; i < kTri; ++i) hess_[i] -= o.hess_[i];
  return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
  const int n = std::max(n_, o.n_);
  Jet2 r(value_ * o.value_);
  r.n_ = n;
  for (int i = 0; i < n; ++i) {
    r.grad_[i] = value_ * o.grad_[i] + o.value_ * grad_[i];
    for (int j = i; j < n; ++j) {
      const int k = tri(i, j);
      r.hess_[k] = value_ * o.hess_[k] + o.value_ * hess_[k] +
                   grad_[i] * o.grad_[j] + grad_[j] * o.grad_[i];
    }
  }
  *this = r;
  return *this;
}

Jet2& Jet2::operator/=(const Jet2& o) {
  if (o.value_ == 0.0) throw DomainError("division by zero");
  return *this *= (1.0 / o);
}

Jet2 operator*(Jet2 a, double b) {
  a.value_ *= b;
  for (auto& g : a.grad_) g *= b;
  for (auto& h : a.hess_) h *= b;
  return a;
}

Jet2 operator/(double a, const Jet2& b) {
  const double x = b.value();
  if (x == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / x;
  return b.compose(a * inv, -a * inv * inv, 2.0 * a * inv * inv * inv);
}

Jet2 sin(const Jet2& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.compose(s, c, -s);
}

Jet2 cos(const Jet2& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.compose(c, -s, -c);
}

Jet2 tan(const Jet2& x) {
  const double c = std::cos(x.value());
  if (std::abs(c) < 1e-12) domain("tan", x.value());
  const double t = std::tan(x.value());
  const double sec2 = 1.0 / (c * c);
  return x.compose(t, sec2, 2.0 * sec2 * t);
}

Jet2 sinh(const Jet2& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.compose(s, c, s);
}

Jet2 cosh(const Jet2& x) {
  const double s = std::sinh(x.value()), c = std::cosh(x.value());
  return x.compose(c, s, c);
}

Jet2 tanh(const Jet2& x) {
  const double t = std::tanh(x.value());
  const double sech2 = 1.0 - t * t;
  return x.compose(t, sech2, -2.0 * t * sech2);
}

Jet2 sech(const Jet2& x) {
  const double s = 1.0 / std::cosh(x.value());
  const double t = std::tanh(x.value());
  return x.compose(s, -s * t, s * t * t - s * s * s);
}

Jet2 csch(const Jet2& x) {
  if (std::abs(x.value()) < 1e-12) domain("csch", x.value());
  const double s = 1.0 / std::sinh(x.value());
  const double ct = 1.0 / std::tanh(x.value());
  return x.compose(s, -s * ct, s * ct * ct + s * s * s);
}

Jet2 coth(const Jet2& x) {
  if (std::abs(x.value()) < 1e-12) domain("coth", x.value());
  const double ct = 1.0 / std::tanh(x.value());
  const double s = 1.0 / std::sinh(x.value());
  return x.compose(ct, -s * s, 2.0 * s * s * ct);
}

Jet2 asin(const Jet2& x) {
  const double v = x.value();
  if (!(std::abs(v) < 1.0)) domain("asin", v);
  const double w = 1.0 - v * v;
  return x.compose(std::asin(v), 1.0 / std::sqrt(w), v / (w * std::sqrt(w)));
}

Jet2 acos(const Jet2& x) {
  const double v = x.value();
  if (!(std::abs(v) < 1.0)) domain("acos", v);
  const double w = 1.0 - v * v;
  return x.compose(std::acos(v), -1.0 / std::sqrt(w), -v / (w * std::sqrt(w)));
}

Jet2 atan(const Jet2& x) {
  const double v = x.value();
  const double w = 1.0 + v * v;
  return x.compose(std::atan(v), 1.0 / w, -2.0 * v / (w * w));
}

Jet2 asinh(const Jet2& x) {
  const double v = x.value();
  const double w = 1.0 + v * v;
  return x.compose(std::asinh(v), 1.0 / std::sqrt(w), -v / (w * std::sqrt(w)));
}

Jet2 exp(const Jet2& x) {
  const double e = std::exp(x.value());
  if (!std::isfinite(e)) domain("exp", x.value());
  return x.compose(e, e, e);
}

Jet2 log(const Jet2& x) {
  const double v = x.value();
  if (!(v > 0.0)) domain("log", v);
  return x.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sqrt(const Jet2& x) {
  const double v = x.value();
  if (!(v > 0.0)) domain("sqrt", v);
  const double s = std::sqrt(v);
  return x.compose(s, 0.5 / s, -0.25 / (v * s));
}

Jet2 abs(const Jet2& x) {
  const double v = x.value();
  if (v == 0.0) domain("abs", v);
  const double sg = v > 0.0 ? 1.0 : -1.0;
  return x.compose(std::abs(v), sg, 0.0);
}

Jet2 pow(const Jet2& x, double c) {
  const double v = x.value();
  const bool integral = std::floor(c) == c;
  if (c == 0.0) return Jet2(1.0);
  if (c == 1.0) return x;
  if (v < 0.0 && !integral) domain("pow", v);
  if (v == 0.0 && !(integral && c >= 2.0)) domain("pow", v);
  const double f0 = std::pow(v, c);
  const double f1 = c * std::pow(v, c - 1.0);
  const double f2 = c * (c - 1.0) * std::pow(v, c - 2.0);
  return x.compose(f0, f1, f2);
}

Jet2 pow(const Jet2& a, const Jet2& b) {
  if (!(a.value() > 0.0)) domain("pow", a.value());
  return exp(b * log(a));
}

// ---------------------------------------------------------------------------

Dual::Dual(double value, std::span<const double> grad) : value_(value) {
  n_ = static_cast<int>(grad.size());
  for (int i = 0; i < n_; ++i) grad_[i] = grad[i];
}

Dual Dual::variable(double value, int index, int nvars) {
  Dual d(value);
  d.n_ = nvars;
  d.grad_[index] = 1.0;
  return d;
}

Dual Dual::from(const Jet2& j) {
  Dual d(j.value());
  d.n_ = j.vars();
  for (int i = 0; i < d.n_; ++i) d.grad_[i] = j.grad(i);
  return d;
}

void Dual::set_d(int i, double g) {
  grad_[i] = g;
  n_ = std::max(n_, i + 1);
}

bool Dual::finite() const {
  if (!std::isfinite(value_)) return false;
  for (int i = 0; i < n_; ++i)
    if (!std::isfinite(grad_[i])) return false;
  return true;
}

Dual Dual::compose(double f0, double f1) const {
  Dual r(f0);
  r.n_ = n_;
  for (int i = 0; i < n_; ++i) r.grad_[i] = f1 * grad_[i];
  return r;
}

Dual Dual::operator-() const {
  Dual r = *this;
  r.value_ = -value_;
  for (auto& g : r.grad_) g = -g;
  return r;
}

Dual& Dual::operator+=(const Dual& o) {
  value_ += o.value_;
  n_ = std::max(n_, o.n_);
  for (int i = 0; i < kMaxVars; ++i) grad_[i] += o.grad_[i];
  return *this;
}

Dual& Dual::operator-=(const Dual& o) {
  value_ -= o.value_;
  n_ = std::max(n_, o.n_);
  for (int i = 0; i < kMaxVars; ++i) grad_[i] -= o.grad_[i];
  return *this;
}

Dual& Dual::operator*=(const Dual& o) {
  n_ = std::max(n_, o.n_);
  for (int i = 0; i < kMaxVars; ++i) grad_[i] = value_ * o.grad_[i] + o.value_ * grad_[i];
  value_ *= o.value_;
  return *this;
}

Dual& Dual::operator/=(const Dual& o) {
  if (o.value_ == 0.0) throw DomainError("division by zero");
  const double inv = 1.0 / o.value_;
  n_ = std::max(n_, o.n_);
  const double q = value_ * inv;
  for (int i = 0; i < kMaxVars; ++i) grad_[i] = (grad_[i] - q * o.grad_[i]) * inv;
  value_ = q;
  return *this;
}

Dual& Dual::operator*=(double s) {
  value_ *= s;
  for (auto& g : grad_) g *= s;
  return *this;
}

Dual sqrt(const Dual& x) {
  if (!(x.value() > 0.0)) domain("sqrt", x.value());
  const double s = std::sqrt(x.value());
  return x.compose(s, 0.5 / s);
}

Dual acos(const Dual& x) {
  const double v = x.value();
  if (!(std::abs(v) < 1.0)) domain("acos", v);
  return x.compose(std::acos(v), -1.0 / std::sqrt(1.0 - v * v));
}

Dual atan2(const Dual& y, const Dual& x) {
  const double r2 = x.value() * x.value() + y.value() * y.value();
  if (r2 == 0.0) domain("atan2", 0.0);
  Dual r(std::atan2(y.value(), x.value()));
  const int n = std::max(x.vars(), y.vars());
  for (int i = 0; i < n; ++i) r.set_d(i, (x.value() * y.d(i) - y.value() * x.d(i)) / r2);
  return r;
}

// ---------------------------------------------------------------------------

Jet2 jet_eval(const ScalarField& field, std::span<const double> point) {
  if (static_cast<int>(point.size()) != field.arity)
    throw ValidationError("arity mismatch: field takes " + std::to_string(field.arity) +
                          " inputs, got " + std::to_string(point.size()));
  if (field.arity > kMaxVars) throw ValidationError("too many variables for a jet");
  std::vector<Jet2> seeds;
  seeds.reserve(point.size());
  for (int i = 0; i < field.arity; ++i) seeds.push_back(Jet2::variable(point[i], i, field.arity));
  Jet2 r = field.eval(seeds);
  if (!r.finite()) throw DomainError("non-finite jet component");
  return r;
}

namespace {

double eval_value(const ScalarField& field, std::vector<double> x) {
  std::vector<Jet2> in;
  in.reserve(x.size());
  for (double v : x) in.emplace_back(v);
  return field.eval(in).value();
}

}  // namespace

FdEstimate fd_oracle(const ScalarField& field, std::span<const double> point, int order,
                     double step) {
  if (!(step > 0.0)) throw ValidationError("finite-difference step must be positive");
  if (order != 1 && order != 2) throw ValidationError("finite-difference order must be 1 or 2");
  const int n = field.arity;
  const std::vector<double> x0(point.begin(), point.end());
  const double f0 = eval_value(field, x0);

  auto shifted = [&](int i, double di, int j, double dj) {
    std::vector<double> x = x0;
    x[i] += di;
    if (j >= 0) x[j] += dj;
    return eval_value(field, x);
  };

  FdEstimate est;
  est.gradient.resize(n);
  for (int i = 0; i < n; ++i) {
    auto d = [&](double h) { return (shifted(i, h, -1, 0) - shifted(i, -h, -1, 0)) / (2 * h); };
    est.gradient(i) = (4.0 * d(step / 2) - d(step)) / 3.0;
  }

  if (order == 2) {
    est.hessian.resize(n, n);
    for (int i = 0; i < n; ++i) {
      auto dii = [&](double h) {
        return (shifted(i, h, -1, 0) - 2.0 * f0 + shifted(i, -h, -1, 0)) / (h * h);
      };
      est.hessian(i, i) = (4.0 * dii(step / 2) - dii(step)) / 3.0;
      for (int j = i + 1; j < n; ++j) {
        auto dij = [&](double h) {
          return (shifted(i, h, j, h) - shifted(i, h, j, -h) - shifted(i, -h, j, h) +
                  shifted(i, -h, j, -h)) /
                 (4 * h * h);
        };
        est.hessian(i, j) = est.hessian(j, i) = (4.0 * dij(step / 2) - dij(step)) / 3.0;
      }
    }
  }

  const double eps = std::numeric_limits<double>::epsilon();
  const double roundoff = eps * (1.0 + std::abs(f0)) / std::pow(step, order);
  est.roundoff_warning = roundoff > 1e-6;
  return est;
}

double central_derivative(const std::function<double(double)>& f, double x, double step) {
  auto d = [&](double h) { return (f(x + h) - f(x - h)) / (2 * h); };
  return (4.0 * d(step / 2) - d(step)) / 3.0;
}

ScalarField compose(ScalarField outer, std::vector<ScalarField> inner) {
  if (static_cast<int>(inner.size()) != outer.arity)
    throw ValidationError("composition needs one inner field per outer input");
  if (inner.empty()) return outer;
  const int arity = inner.front().arity;
  for (const auto& f : inner)
    if (f.arity != arity) throw ValidationError("inner fields must share an arity");
  ScalarField out;
  out.arity = arity;
  out.eval = [outer = std::move(outer), inner = std::move(inner)](std::span<const Jet2> x) {
    std::vector<Jet2> mid;
    mid.reserve(inner.size());
    for (const auto& f : inner) mid.push_back(f.eval(x));
    return outer.eval(mid);
  };
  return out;
}

}  // namespace pasurf
