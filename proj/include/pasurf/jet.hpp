#pragma once

// Truncated Taylor arithmetic. Jet2 carries value, gradient and Hessian of a
// scalar with respect to up to kMaxVars independent variables; Dual carries
// value and gradient only.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pasurf {

inline constexpr int kMaxVars = 6;

class Jet2 {
 public:
  Jet2() = default;
  explicit Jet2(double value) : value_(value) {}

  static Jet2 constant(double value) { return Jet2(value); }
  /// Independent variable `index` of `nvars`, seeded with unit gradient.
  static Jet2 variable(double value, int index, int nvars);

  double value() const { return value_; }
  double grad(int i) const { return grad_[i]; }
  /// Symmetric by storage: only the upper triangle exists.
  double hess(int i, int j) const { return hess_[tri(i, j)]; }
  int vars() const { return n_; }

  void set_value(double v) { value_ = v; }
  void set_grad(int i, double g);
  void set_hess(int i, int j, double h);

  Eigen::VectorXd gradient() const;
  Eigen::MatrixXd hessian() const;

  bool finite() const;

  /// Composition with a scalar function phi given phi(x), phi'(x), phi''(x).
  Jet2 compose(double f0, double f1, double f2) const;

  Jet2 operator-() const;
  Jet2& operator+=(const Jet2& o);
  Jet2& operator-=(const Jet2& o);
  Jet2& operator*=(const Jet2& o);
  Jet2& operator/=(const Jet2& o);

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
  friend Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }
  friend Jet2 operator+(Jet2 a, double b) { a.value_ += b; return a; }
  friend Jet2 operator+(double a, Jet2 b) { b.value_ += a; return b; }
  friend Jet2 operator-(Jet2 a, double b) { a.value_ -= b; return a; }
  friend Jet2 operator-(double a, const Jet2& b) { return (-b) + a; }
  friend Jet2 operator*(Jet2 a, double b);
  friend Jet2 operator*(double a, Jet2 b) { return std::move(b) * a; }
  friend Jet2 operator/(Jet2 a, double b) { return std::move(a) * (1.0 / b); }
  friend Jet2 operator/(double a, const Jet2& b);

 private:
  static constexpr int kTri = kMaxVars * (kMaxVars + 1) / 2;
  static constexpr int tri(int i, int j) {
    if (i > j) std::swap(i, j);
    return i * kMaxVars - i * (i - 1) / 2 + (j - i);
  }

  double value_ = 0.0;
  std::array<double, kMaxVars> grad_{};
  std::array<double, kTri> hess_{};
  int n_ = 0;
};

// Elementary functions. Domain violations throw DomainError naming the
// function; callers that know the source location rethrow with context.
Jet2 sin(const Jet2& x);
Jet2 cos(const Jet2& x);
Jet2 tan(const Jet2& x);
Jet2 sinh(const Jet2& x);
Jet2 cosh(const Jet2& x);
Jet2 tanh(const Jet2& x);
Jet2 sech(const Jet2& x);
Jet2 csch(const Jet2& x);
Jet2 coth(const Jet2& x);
Jet2 asin(const Jet2& x);
Jet2 acos(const Jet2& x);
Jet2 atan(const Jet2& x);
Jet2 asinh(const Jet2& x);
Jet2 exp(const Jet2& x);
Jet2 log(const Jet2& x);
Jet2 sqrt(const Jet2& x);
Jet2 abs(const Jet2& x);
/// x^c for a constant exponent. Negative bases need an integer exponent.
Jet2 pow(const Jet2& x, double c);
/// a^b = exp(b log a); requires a > 0.
Jet2 pow(const Jet2& a, const Jet2& b);

/// First-order forward-mode dual number.
class Dual {
 public:
  Dual() = default;
  explicit Dual(double value) : value_(value) {}
  Dual(double value, std::span<const double> grad);

  static Dual variable(double value, int index, int nvars);
  /// Drops the second-order part of a jet.
  static Dual from(const Jet2& j);

  double value() const { return value_; }
  double d(int i) const { return grad_[i]; }
  int vars() const { return n_; }
  void set_d(int i, double g);

  bool finite() const;
  Dual compose(double f0, double f1) const;

  Dual operator-() const;
  Dual& operator+=(const Dual& o);
  Dual& operator-=(const Dual& o);
  Dual& operator*=(const Dual& o);
  Dual& operator/=(const Dual& o);
  Dual& operator*=(double s);

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator*(Dual a, double s) { return a *= s; }
  friend Dual operator*(double s, Dual a) { return a *= s; }
  friend Dual operator/(Dual a, double s) { return a *= (1.0 / s); }
  friend Dual operator+(Dual a, double b) { a.value_ += b; return a; }
  friend Dual operator-(Dual a, double b) { a.value_ -= b; return a; }

 private:
  double value_ = 0.0;
  std::array<double, kMaxVars> grad_{};
  int n_ = 0;
};

Dual sqrt(const Dual& x);
Dual acos(const Dual& x);
/// atan2(y, x) with the usual branch, differentiable away from the origin.
Dual atan2(const Dual& y, const Dual& x);

/// A scalar map of `arity` inputs. Inputs are jets so that fields compose
/// through the chain rule; jet_eval seeds them as independent variables.
struct ScalarField {
  int arity = 0;
  std::function<Jet2(std::span<const Jet2>)> eval;
};

/// outer ∘ (inner_0, ..., inner_k); all inner fields share one arity.
ScalarField compose(ScalarField outer, std::vector<ScalarField> inner);

/// Value, gradient and Hessian of `field` at `point`.
Jet2 jet_eval(const ScalarField& field, std::span<const double> point);

struct FdEstimate {
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;  // empty unless order == 2
  /// Set when the step is so small that round-off likely dominates.
  bool roundoff_warning = false;
};

/// Central-difference derivatives with one Richardson extrapolation level.
/// Truncation error is O(step^4) after extrapolation (O(step^2) before).
FdEstimate fd_oracle(const ScalarField& field, std::span<const double> point,
                     int order, double step = 1e-4);

/// Richardson-extrapolated central difference of a scalar function of one
/// variable: (4 D(h/2) - D(h)) / 3.
double central_derivative(const std::function<double(double)>& f, double x,
                          double step = 1e-4);

}  // namespace pasurf
