#include "pasurf/families.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>

#include <Eigen/Dense>
#include <unsupported/Eigen/NonLinearOptimization>

#include "pasurf/errors.hpp"
#include "pasurf/jet.hpp"

namespace pasurf {

namespace {

Jet2 var(double u) { return Jet2::variable(u, 0, 1); }

double sgn(double x) { return x < 0 ? -1.0 : 1.0; }

[[noreturn]] void pole(const char* what, double u) {
  throw DomainError(std::string("family evaluated within the pole guard of ") + what +
                    " at u = " + std::to_string(u));
}

// S = sinh F and S' in closed form; F and f follow from it.
std::pair<Jet2, Jet2> s_pair(const SolutionFamily& fam, const Jet2& u) {
  const double K0 = fam.K0, s = fam.sign;
  if (K0 < 0) {
    const double a = std::sqrt(-K0), A = std::sqrt((fam.c1 - K0) / -K0);
    const Jet2 w = s * a * (u + fam.c2);
    return {A * sinh(w), A * s * a * cosh(w)};
  }
  if (K0 == 0) {
    const double m = s * std::sqrt(fam.c1);
    return {m * u + fam.c2, u * 0.0 + m};
  }
  const double b = std::sqrt(K0), A = std::sqrt((fam.c1 - K0) / K0);
  const Jet2 w = s * b * (u + fam.c2);
  return {A * sin(w), A * s * b * cos(w)};
}

Jet2 F_jet(const SolutionFamily& fam, const Jet2& u) { return asinh(s_pair(fam, u).first); }

Jet2 f_jet(const SolutionFamily& fam, const Jet2& u) {
  const auto [S, Sp] = s_pair(fam, u);
  return Sp / sqrt(1.0 + S * S);
}

Jet2 B_jet(const SolutionFamily& fam, const Jet2& u, double qv) {
  const double K0 = fam.K0;
  if (K0 > 0) {
    const double b = std::sqrt(K0);
    const Jet2 w = qv - b * u;
    if (std::abs(std::cos(w.value())) < kPoleGuard) pole("tan", u.value());
    return b * tan(w);
  }
  if (K0 == 0) {
    const Jet2 w = u + qv;
    if (std::abs(w.value()) < kPoleGuard) pole("1/(u+q)", u.value());
    return 1.0 / w;
  }
  const double a = std::sqrt(-K0);
  if (fam.constant) return u * 0.0 + fam.sign * a;
  switch (fam.variant) {
    case BVariant::tanh_plus: return a * tanh(qv + a * u);
    case BVariant::tanh_minus: return a * tanh(qv - a * u);
    case BVariant::coth_plus: {
      const Jet2 w = qv + a * u;
      if (std::abs(w.value()) < kPoleGuard) pole("coth", u.value());
      return a * coth(w);
    }
  }
  return Jet2();
}

Jet2 family_jet(const SolutionFamily& fam, double u, double v) {
  switch (fam.kind) {
    case FamilyKind::F_of_u: return F_jet(fam, var(u));
    case FamilyKind::f_of_u: return f_jet(fam, var(u));
    case FamilyKind::B_of_u: return B_jet(fam, var(u), fam.q ? fam.q(v) : fam.c2);
  }
  return Jet2();
}

}  // namespace

const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::F_of_u: return "F";
    case FamilyKind::f_of_u: return "f";
    default: return "B";
  }
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::hyperbolic: return "hyperbolic";
    case Branch::linear: return "linear";
    case Branch::trigonometric: return "trigonometric";
    default: return "constant";
  }
}

const char* to_string(BVariant v) {
  switch (v) {
    case BVariant::tanh_plus: return "tanh(q+au)";
    case BVariant::tanh_minus: return "tanh(q-au)";
    default: return "coth(q+au)";
  }
}

FamilyKind parse_family_kind(const std::string& s) {
  if (s == "F") return FamilyKind::F_of_u;
  if (s == "f") return FamilyKind::f_of_u;
  if (s == "B") return FamilyKind::B_of_u;
  throw ValidationError("family kind must be F, f or B, got '" + s + "'");
}

Branch SolutionFamily::branch() const {
  if (K0 > 0) return Branch::trigonometric;
  if (K0 == 0) return Branch::linear;
  if (kind == FamilyKind::B_of_u) return constant ? Branch::constant : Branch::hyperbolic;
  return c1 == 0 ? Branch::constant : Branch::hyperbolic;
}

void SolutionFamily::validate() const {
  if (!std::isfinite(K0) || !std::isfinite(c1) || !std::isfinite(c2))
    throw ValidationError("family parameters must be finite");
  if (sign != 1 && sign != -1) throw ValidationError("family sign must be +1 or -1");
  if (kind == FamilyKind::B_of_u) return;
  if (K0 < 0 && c1 < 0) throw ValidationError("K0 < 0 needs c1 >= 0");
  if (K0 == 0 && !(c1 > 0)) throw ValidationError("K0 = 0 needs c1 > 0");
  if (K0 > 0 && !(c1 > K0)) throw ValidationError("K0 > 0 needs c1 > K0");
}

FamilyValue family_eval(const SolutionFamily& fam, double u, double v) {
  fam.validate();
  const Jet2 j = family_jet(fam, u, v);
  if (!j.finite()) throw DomainError("family value not finite at u = " + std::to_string(u));
  return {j.value(), j.grad(0), j.hess(0, 0)};
}

std::vector<double> sample_grid(const SolutionFamily& fam, double a, double b, int n, double v) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const double u = n == 1 ? 0.5 * (a + b) : a + (b - a) * i / (n - 1);
    try {
      family_eval(fam, u, v);
      out.push_back(u);
    } catch (const DomainError&) {
    }
  }
  return out;
}

OdeResidualReport ode_residual(const SolutionFamily& fam, const std::vector<double>& u,
                               const double* k0_claim) {
  if (fam.kind != FamilyKind::F_of_u) throw ValidationError("ode_residual needs an F family");
  fam.validate();
  const double K0 = k0_claim ? *k0_claim : fam.K0;
  OdeResidualReport r;
  for (double x : u) {
    const Jet2 F = F_jet(fam, var(x));
    if (std::abs(F.value()) < kPoleGuard) {
      ++r.skipped;
      continue;
    }
    const double res =
        F.hess(0, 0) / std::tanh(F.value()) + F.grad(0) * F.grad(0) + K0;
    r.samples.emplace_back(x, res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
  }
  return r;
}

SFormReport s_form_check(const SolutionFamily& fam, const std::vector<double>& u) {
  if (fam.kind != FamilyKind::F_of_u) throw ValidationError("s_form_check needs an F family");
  fam.validate();
  SFormReport r;
  for (double x : u) {
    const Jet2 S = sinh(F_jet(fam, var(x)));
    const double s = S.value(), sp = S.grad(0), spp = S.hess(0, 0);
    r.max_second = std::max(r.max_second, std::abs(spp + fam.K0 * s));
    r.max_first_integral =
        std::max(r.max_first_integral, std::abs(sp * sp + fam.K0 * s * s - (fam.c1 - fam.K0)));
  }
  return r;
}

OdeResidualReport b_family_residual(const SolutionFamily& fam, const std::vector<double>& u,
                                    double v) {
  if (fam.kind != FamilyKind::B_of_u) throw ValidationError("b_family_residual needs a B family");
  OdeResidualReport r;
  for (double x : u) {
    const FamilyValue b = family_eval(fam, x, v);
    const double res = b.d1 + b.value * b.value + fam.K0;
    r.samples.emplace_back(x, res);
    r.max_abs = std::max(r.max_abs, std::abs(res));
  }
  return r;
}

OracleTrace ode_oracle_s(double K0, double u0, double s0, double sp0, double u1, double step) {
  if (!(step > 0)) throw ValidationError("oracle step must be positive");
  if (!std::isfinite(u0) || !std::isfinite(u1) || !std::isfinite(s0) || !std::isfinite(sp0))
    throw ValidationError("oracle range and initial values must be finite");
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(u1 - u0) / step - 1e-9)));
  const double h = (u1 - u0) / n;
  OracleTrace t;
  auto push = [&](double u, double s, double sp) {
    if (!std::isfinite(s) || !std::isfinite(sp) || std::abs(s) > 1e150)
      throw DomainError("oracle overflow at u = " + std::to_string(u));
    t.u.push_back(u);
    t.S.push_back(s);
    t.Sp.push_back(sp);
    t.F.push_back(std::asinh(s));
    t.Fp.push_back(sp / std::sqrt(1.0 + s * s));
  };
  double s = s0, sp = sp0;
  push(u0, s, sp);
  for (int i = 0; i < n; ++i) {
    // y = (S, S'), y' = (S', -K0 S)
    const double k1s = sp, k1p = -K0 * s;
    const double k2s = sp + 0.5 * h * k1p, k2p = -K0 * (s + 0.5 * h * k1s);
    const double k3s = sp + 0.5 * h * k2p, k3p = -K0 * (s + 0.5 * h * k2s);
    const double k4s = sp + h * k3p, k4p = -K0 * (s + h * k3s);
    s += h / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s);
    sp += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    push(u0 + (i + 1) * h, s, sp);
  }
  return t;
}

OracleTrace ode_oracle(double K0, double u0, double F0, double Fp0, double u1, double step) {
  return ode_oracle_s(K0, u0, std::sinh(F0), Fp0 * std::cosh(F0), u1, step);
}

double oracle_deviation(const SolutionFamily& fam, const OracleTrace& trace) {
  SolutionFamily F = fam;
  F.kind = FamilyKind::F_of_u;
  double d = 0.0;
  for (std::size_t i = 0; i < trace.u.size(); ++i)
    d = std::max(d, std::abs(trace.F[i] - family_eval(F, trace.u[i]).value));
  return d;
}

double canonical_c2(double K0, double c2_proof, int sign) {
  if (!(K0 < 0)) return c2_proof;
  return c2_proof / (sign * std::sqrt(-K0));
}

SolutionFamily FamilyFit::family() const {
  SolutionFamily f;
  f.kind = kind;
  f.K0 = K0;
  f.c1 = c1;
  f.c2 = c2;
  f.sign = sign;
  f.constant = kind == FamilyKind::B_of_u && branch == Branch::constant;
  if (variant == to_string(BVariant::tanh_minus)) f.variant = BVariant::tanh_minus;
  else if (variant == to_string(BVariant::coth_plus)) f.variant = BVariant::coth_plus;
  return f;
}

namespace {

using Model = std::function<Jet2(std::span<const Jet2>, double)>;

struct Candidate {
  std::string name;
  Branch branch;
  std::string variant;
  int np;
  Model model;
  std::vector<std::vector<double>> seeds;
};

struct LmFunctor {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Model* model;
  const std::vector<double>* u;
  const std::vector<double>* y;
  int np;

  int inputs() const { return np; }
  int values() const { return static_cast<int>(u->size()); }

  bool eval(const Eigen::VectorXd& x, Eigen::VectorXd* f, Eigen::MatrixXd* J) const {
    std::vector<Jet2> p;
    for (int k = 0; k < np; ++k) p.push_back(Jet2::variable(x(k), k, np));
    try {
      for (int i = 0; i < values(); ++i) {
        const Jet2 m = (*model)(p, (*u)[i]);
        if (!m.finite()) return false;
        if (f) (*f)(i) = m.value() - (*y)[i];
        if (J)
          for (int k = 0; k < np; ++k) (*J)(i, k) = m.grad(k);
      }
    } catch (const DomainError&) {
      return false;
    }
    return true;
  }
  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    return eval(x, &f, nullptr) ? 0 : -1;
  }
  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& J) const {
    return eval(x, nullptr, &J) ? 0 : -1;
  }
};

// Best rms over the seeds and the parameters reaching it.
std::pair<double, Eigen::VectorXd> fit_candidate(const Candidate& c, const std::vector<double>& u,
                                                 const std::vector<double>& y) {
  LmFunctor fn{&c.model, &u, &y, c.np};
  double scale = 1.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  auto run = [&](Eigen::VectorXd& x, int maxfev) {
    Eigen::VectorXd f(fn.values());
    if (!fn.eval(x, &f, nullptr)) return std::numeric_limits<double>::infinity();
    Eigen::LevenbergMarquardt<LmFunctor> lm(fn);
    lm.parameters.ftol = 1e-14;
    lm.parameters.xtol = 1e-13;
    lm.parameters.maxfev = maxfev;
    lm.minimize(x);
    if (!fn.eval(x, &f, nullptr)) return std::numeric_limits<double>::infinity();
    return std::sqrt(f.squaredNorm() / f.size());
  };
  // short runs from every seed, then polish the three best
  std::vector<std::pair<double, Eigen::VectorXd>> starts;
  for (const auto& seed : c.seeds) {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(seed.data(), c.np);
    const double rms = run(x, 30);
    if (std::isfinite(rms)) starts.emplace_back(rms, x);
    if (rms <= 1e-13 * scale) break;
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, starts.size()); ++i) {
    Eigen::VectorXd x = starts[i].second;
    const double rms = std::min(run(x, 400), starts[i].first);
    if (rms < best) {
      best = rms;
      best_x = rms == starts[i].first ? starts[i].second : x;
    }
    if (best <= 1e-13 * scale) break;
  }
  return {best, best_x};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

std::vector<Candidate> f_candidates(const std::vector<double>& u, const std::vector<double>& y) {
  double mean = 0.0;
  for (double x : y) mean += x;
  mean /= y.size();
  const double sy = sgn(mean);

  // 1/f² − u² = β u + γ on the K0 = 0 branch
  Eigen::MatrixXd M(u.size(), 2);
  Eigen::VectorXd r(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    M(i, 0) = u[i];
    M(i, 1) = 1.0;
    r(i) = 1.0 / (y[i] * y[i]) - u[i] * u[i];
  }
  const Eigen::Vector2d bg = M.colPivHouseholderQr().solve(r);
  const double disc = bg(1) - 0.25 * bg(0) * bg(0);
  const double m0 = disc > 0 ? sy / std::sqrt(disc) : sy;

  std::vector<std::vector<double>> grid3;
  for (double a : {0.5, 1.0, 2.0})
    for (double A : {1.2, 2.0})
      for (double c : {-1.0, 0.0, 1.0}) grid3.push_back({a, sy * A, c});

  std::vector<Candidate> c;
  c.push_back({"constant", Branch::constant, "", 1,
               [](std::span<const Jet2> p, double) { return p[0]; }, {{mean}}});
  c.push_back({"linear", Branch::linear, "", 2,
               [](std::span<const Jet2> p, double x) {
                 const Jet2 w = p[0] * x + p[1];
                 return p[0] / sqrt(1.0 + w * w);
               },
               {{m0, m0 * 0.5 * bg(0)}, {sy, 0.0}}});
  c.push_back({"hyperbolic", Branch::hyperbolic, "", 3,
               [](std::span<const Jet2> p, double x) {
                 const Jet2 w = p[0] * (x + p[2]);
                 const Jet2 s = p[1] * sinh(w);
                 return p[1] * p[0] * cosh(w) / sqrt(1.0 + s * s);
               },
               grid3});
  c.push_back({"trigonometric", Branch::trigonometric, "", 3,
               [](std::span<const Jet2> p, double x) {
                 const Jet2 w = p[0] * (x + p[2]);
                 const Jet2 s = p[1] * sin(w);
                 return p[1] * p[0] * cos(w) / sqrt(1.0 + s * s);
               },
               grid3});
  return c;
}

std::vector<Candidate> b_candidates(const std::vector<double>& u, const std::vector<double>& y) {
  const std::size_t n = u.size();
  double mean = 0.0;
  for (double x : y) mean += x;
  mean /= n;

  // Riccati estimate of K0 from divided differences
  std::vector<double> k0s, qs;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double d = (y[i + 1] - y[i - 1]) / (u[i + 1] - u[i - 1]);
    k0s.push_back(-(d + y[i] * y[i]));
  }
  for (std::size_t i = 0; i < n; ++i) qs.push_back(1.0 / y[i] - u[i]);
  const double k0 = median(k0s);
  const std::size_t mid = n / 2;
  const double um = u[mid], ym = y[mid];

  std::vector<std::vector<double>> grid2;
  for (double a : {0.5, 1.0, 2.0})
    for (double q : {-1.0, 0.0, 1.0}) grid2.push_back({a, q});

  auto seeded = [&](bool hyperbolic, auto q_of) {
    std::vector<std::vector<double>> s;
    if ((hyperbolic && k0 < 0) || (!hyperbolic && k0 > 0)) {
      const double a = std::sqrt(std::abs(k0));
      const double q = q_of(a);
      if (std::isfinite(q)) s.push_back({a, q});
    }
    s.insert(s.end(), grid2.begin(), grid2.end());
    return s;
  };

  std::vector<Candidate> c;
  c.push_back({"constant", Branch::constant, "", 1,
               [](std::span<const Jet2> p, double) { return p[0]; }, {{mean}}});
  c.push_back({"linear", Branch::linear, "", 1,
               [](std::span<const Jet2> p, double x) {
                 const Jet2 w = p[0] + x;
                 if (std::abs(w.value()) < kPoleGuard) pole("1/(u+q)", x);
                 return 1.0 / w;
               },
               {{median(qs)}}});
  c.push_back({"tanh_plus", Branch::hyperbolic, to_string(BVariant::tanh_plus), 2,
               [](std::span<const Jet2> p, double x) { return p[0] * tanh(p[1] + p[0] * x); },
               seeded(true, [&](double a) { return std::atanh(ym / a) - a * um; })});
  c.push_back({"coth_plus", Branch::hyperbolic, to_string(BVariant::coth_plus), 2,
               [](std::span<const Jet2> p, double x) {
                 const Jet2 w = p[1] + p[0] * x;
                 if (std::abs(w.value()) < kPoleGuard) pole("coth", x);
                 return p[0] * coth(w);
               },
               seeded(true, [&](double a) { return std::atanh(a / ym) - a * um; })});
  c.push_back({"tanh_minus", Branch::hyperbolic, to_string(BVariant::tanh_minus), 2,
               [](std::span<const Jet2> p, double x) { return p[0] * tanh(p[1] - p[0] * x); },
               seeded(true, [&](double a) { return std::atanh(ym / a) + a * um; })});
  c.push_back({"trigonometric", Branch::trigonometric, "", 2,
               [](std::span<const Jet2> p, double x) {
                 const Jet2 w = p[1] - p[0] * x;
                 if (std::abs(std::cos(w.value())) < kPoleGuard) pole("tan", x);
                 return p[0] * tan(w);
               },
               seeded(false, [&](double b) { return std::atan(ym / b) + b * um; })});
  return c;
}

// Canonical parameters of a fitted candidate.
void canonicalize(FamilyFit& fit, const Candidate& c, const Eigen::VectorXd& x) {
  constexpr double pi = std::numbers::pi;
  fit.branch = c.branch;
  fit.variant = c.variant;
  fit.sign = 1;
  fit.c1 = 0.0;
  if (fit.kind == FamilyKind::f_of_u) {
    if (c.name == "constant") {
      fit.K0 = -x(0) * x(0);
      fit.sign = static_cast<int>(sgn(x(0)));
      fit.c2 = 0.0;
    } else if (c.name == "linear") {
      fit.K0 = 0.0;
      fit.c1 = x(0) * x(0);
      fit.sign = static_cast<int>(sgn(x(0)));
      fit.c2 = x(1);
    } else if (c.name == "hyperbolic") {
      const double a = std::abs(x(0)), A = std::abs(x(1));
      fit.sign = static_cast<int>(sgn(x(0)) * sgn(x(1)));
      fit.K0 = -a * a;
      fit.c1 = a * a * (A * A - 1.0);
      fit.c2 = x(2);
      fit.admissible = fit.c1 >= -1e-9;
      fit.c1 = std::max(fit.c1, 0.0);
    } else {
      const double b = std::abs(x(0));
      double A = x(1) * sgn(x(0)), c2 = x(2);
      if (A < 0) {
        A = -A;
        c2 += pi / b;
      }
      c2 = std::remainder(c2, 2 * pi / b);
      fit.K0 = b * b;
      fit.c1 = b * b * (1.0 + A * A);
      fit.c2 = c2;
    }
    return;
  }
  if (c.name == "constant") {
    fit.K0 = -x(0) * x(0);
    fit.sign = static_cast<int>(sgn(x(0)));
    fit.c2 = 0.0;
  } else if (c.name == "linear") {
    fit.K0 = 0.0;
    fit.c2 = x(0);
  } else {
    const double a = std::abs(x(0));
    double q = x(0) < 0 ? -x(1) : x(1);
    if (c.branch == Branch::trigonometric) {
      q = std::remainder(q, pi);
      fit.K0 = a * a;
    } else {
      fit.K0 = -a * a;
    }
    fit.c2 = q;
  }
}

}  // namespace

FamilyFit family_fit(const std::vector<double>& u, const std::vector<double>& y, FamilyKind kind) {
  if (kind == FamilyKind::F_of_u) throw ValidationError("family_fit takes f or B samples");
  if (u.size() != y.size()) throw ValidationError("u and sample counts differ");
  if (u.size() < 8) throw ValidationError("family_fit needs at least 8 samples");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!std::isfinite(u[i]) || !std::isfinite(y[i]))
      throw ValidationError("samples must be finite");
    if (i > 0 && !(u[i] > u[i - 1])) throw ValidationError("u grid must be increasing");
  }
  if (kind == FamilyKind::f_of_u)
    for (double v : y)
      if (v == 0.0) throw ValidationError("potential samples must be nonzero");

  const std::vector<Candidate> cands = kind == FamilyKind::f_of_u ? f_candidates(u, y)
                                                                   : b_candidates(u, y);
  std::vector<std::pair<double, Eigen::VectorXd>> results;
  double best = std::numeric_limits<double>::infinity(), ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  FamilyFit fit;
  fit.kind = kind;
  for (const auto& c : cands) {
    results.push_back(fit_candidate(c, u, y));
    fit.candidates[c.name] = results.back().first;
    best = std::min(best, results.back().first);
  }
  fit.rms = best;
  if (!(best <= 1e-3)) {
    fit.classified = false;
    return fit;
  }
  // candidates are listed simplest first
  const double reach = std::max(1e-9 * (1.0 + ymax), 4.0 * best);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!(results[i].first <= reach)) continue;
    fit.classified = true;
    fit.rms = results[i].first;
    canonicalize(fit, cands[i], results[i].second);
    break;
  }

  const SolutionFamily fam = fit.family();
  try {
    if (kind == FamilyKind::f_of_u) {
      SolutionFamily F = fam;
      F.kind = FamilyKind::F_of_u;
      if (fit.admissible) fit.ode_residual = ode_residual(F, u).max_abs;
    } else {
      double r = 0.0;
      for (double x : u) {
        const FamilyValue b = family_eval(fam, x);
        // the minus variant solves the Riccati equation in −u
        const double d = fam.variant == BVariant::tanh_minus && fit.branch == Branch::hyperbolic
                             ? -b.d1
                             : b.d1;
        r = std::max(r, std::abs(d + b.value * b.value + fam.K0));
      }
      fit.ode_residual = r;
    }
  } catch (const Error&) {
    fit.ode_residual = std::numeric_limits<double>::infinity();
  }
  return fit;
}

TotallyGeodesicTheta totally_geodesic_theta(const SolutionFamily& fam, const std::vector<double>& u) {
  if (fam.kind != FamilyKind::F_of_u) throw ValidationError("totally_geodesic_theta needs an F family");
  fam.validate();
  TotallyGeodesicTheta out;
  for (double x : u) {
    const Jet2 F = F_jet(fam, var(x));
    if (std::abs(F.value()) < kPoleGuard) {
      ++out.skipped;
      continue;
    }
    const Jet2 theta = acos(sech(F));
    const double k_int = -(F.hess(0, 0) / std::tanh(F.value()) + F.grad(0) * F.grad(0));
    const double f = F.grad(0);
    const Jet2 L = log(tan(theta));
    out.u.push_back(x);
    out.theta.push_back(theta.value());
    out.k_int.push_back(k_int);
    out.f.push_back(f);
    out.max_k_int_deviation = std::max(out.max_k_int_deviation, std::abs(k_int - fam.K0));
    out.max_f_relation = std::max(
        out.max_f_relation,
        std::abs(f - sgn(F.value()) * theta.grad(0) / std::cos(theta.value())));
    out.max_k_relation = std::max(
        out.max_k_relation, std::abs(k_int + L.hess(0, 0) + L.grad(0) * L.grad(0)));
  }
  return out;
}

}  // namespace pasurf
