#pragma once

// Closed-form constant-curvature families: F(u) for totally geodesic PA
// surfaces, its potential f = F', and the Riccati family B_u + B² + K0 = 0.

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace pasurf {

enum class FamilyKind { F_of_u, f_of_u, B_of_u };
enum class Branch { hyperbolic, linear, trigonometric, constant };
// K0 < 0 Riccati variants. tanh_minus is the sign printed for f when θ = π/2;
// it solves the Riccati equation only after u ↦ −u.
enum class BVariant { tanh_plus, tanh_minus, coth_plus };

const char* to_string(FamilyKind k);
const char* to_string(Branch b);
const char* to_string(BVariant v);
FamilyKind parse_family_kind(const std::string& s);  // "F", "f", "B"

inline constexpr double kPoleGuard = 1e-6;

struct SolutionFamily {
  FamilyKind kind = FamilyKind::F_of_u;
  double K0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;  // for B families: the constant q when `q` is empty
  int sign = 1;
  BVariant variant = BVariant::tanh_plus;
  bool constant = false;  // B with K0 < 0: B = sign·√(−K0)
  std::function<double(double)> q;  // B families: q(v)

  Branch branch() const;
  /// Throws ValidationError for inadmissible parameters.
  void validate() const;
};

struct FamilyValue {
  double value = 0.0, d1 = 0.0, d2 = 0.0;
};

/// Value and u-derivatives; DomainError within kPoleGuard of a pole.
FamilyValue family_eval(const SolutionFamily& fam, double u, double v = 0.0);

/// n evenly spaced samples on [a, b], dropping any within the pole guard.
std::vector<double> sample_grid(const SolutionFamily& fam, double a, double b, int n,
                                double v = 0.0);

struct OdeResidualReport {
  std::vector<std::pair<double, double>> samples;  // (u, residual)
  double max_abs = 0.0;
  int skipped = 0;  // samples too close to F = 0
};

/// F″ coth F + F′² + K0 for an F family. `k0_claim` replaces the family's own
/// K0 in the residual (used to probe sensitivity).
OdeResidualReport ode_residual(const SolutionFamily& fam, const std::vector<double>& u,
                               const double* k0_claim = nullptr);

struct SFormReport {
  double max_second = 0.0;          // |S″ + K0 S|
  double max_first_integral = 0.0;  // |S′² + K0 S² − (c1 − K0)|
};

SFormReport s_form_check(const SolutionFamily& fam, const std::vector<double>& u);

/// ∂B/∂u + B² + K0 for a B family at fixed v.
OdeResidualReport b_family_residual(const SolutionFamily& fam, const std::vector<double>& u,
                                    double v = 0.0);

struct OracleTrace {
  std::vector<double> u, S, Sp, F, Fp;
};

/// Classic RK4 on S″ = −K0 S from (S, S′) at u0 to u1; the step is shrunk so
/// that it divides the range. Global error O(step⁴).
OracleTrace ode_oracle_s(double K0, double u0, double s0, double sp0, double u1, double step);
/// Same with initial F, F′ converted through S = sinh F.
OracleTrace ode_oracle(double K0, double u0, double F0, double Fp0, double u1, double step);
/// max |F_oracle − F_family| over the trace.
double oracle_deviation(const SolutionFamily& fam, const OracleTrace& trace);

/// c2 of the proof's normalization ±√(−K0)u + c2 mapped to (u + c2) form.
double canonical_c2(double K0, double c2_proof, int sign);

struct FamilyFit {
  FamilyKind kind = FamilyKind::F_of_u;
  bool classified = false;
  Branch branch = Branch::constant;
  std::string variant;  // B families with K0 < 0, else empty
  double K0 = 0.0, c1 = 0.0, c2 = 0.0;
  int sign = 1;
  bool admissible = true;
  double rms = 0.0;
  double ode_residual = 0.0;  // of the fitted family on the samples
  std::map<std::string, double> candidates;  // candidate name -> rms

  SolutionFamily family() const;
};

/// Least-squares fit of f or B samples against every branch; the simplest
/// branch within reach of the best rms wins. Unclassified above rms 1e-3.
FamilyFit family_fit(const std::vector<double>& u, const std::vector<double>& y, FamilyKind kind);

struct TotallyGeodesicTheta {
  std::vector<double> u, theta, k_int, f;
  double max_k_int_deviation = 0.0;  // |K_int − K0|
  double max_f_relation = 0.0;       // |f − sgn F · θ′ sec θ|
  double max_k_relation = 0.0;       // |K_int + (log tan θ)″ + ((log tan θ)′)²|
  int skipped = 0;
};

TotallyGeodesicTheta totally_geodesic_theta(const SolutionFamily& fam, const std::vector<double>& u);

}  // namespace pasurf
