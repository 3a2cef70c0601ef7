// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "pasurf/expr.hpp"
#include "pasurf/families.hpp"
#include "pasurf/jet.hpp"
#include "pasurf/manifold.hpp"
#include "pasurf/scene.hpp"
#include "pasurf/surface.hpp"

using namespace pasurf;
using nlohmann::json;

namespace {

struct Case {
  Scene scene;
  std::vector<std::vector<double>> grid;
  std::vector<PAReport> reports;
  json report;
};

const Case& gallery_case(const std::string& id) {
  static std::map<std::string, Case> cache;
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  Case c;
  c.scene = resolve_scene(id);
  c.grid = parameter_grid(c.scene.immersion->domain, c.scene.grid, c.scene.margin);
  c.reports = sweep_reports(c.scene, c.grid, 0);
  c.report = run_verify(c.scene).report;
  return cache.emplace(id, std::move(c)).first->second;
}

// max over grid points of |quantity - target(params)|; undefined points count as failures
double worst(const Case& c, const std::string& q, const std::function<double(const std::vector<double>&)>& target) {
  double w = 0.0;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    const double v = quantity_of(c.reports[i], q);
    if (!std::isfinite(v)) return INFINITY;
    w = std::max(w, std::abs(v - target(c.grid[i])));
  }
  return w;
}

double zero(const std::vector<double>&) { return 0.0; }

double check_value(const Case& c, const std::string& check, const std::string& value) {
  const json& j = c.report.at("checks").at(check);
  if (!j.at("applicable").get<bool>() || !j.at("values").contains(value)) return NAN;
  return j.at("values").at(value).get<double>();
}

std::string check_label(const Case& c, const std::string& check, const std::string& label) {
  const json& l = c.report.at("checks").at(check).at("labels");
  return l.contains(label) ? l.at(label).get<std::string>() : "";
}

bool check_passed(const Case& c, const std::string& check) {
  return c.report.at("checks").at(check).at("passed").get<bool>();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / (n - 1));
  return out;
}

std::vector<SolutionFamily> random_families(Branch branch, int count, unsigned seed) {
  std::mt19937 rng(seed + static_cast<unsigned>(branch));
  std::uniform_real_distribution<double> k(0.05, 3.0), c(0.0, 4.0), shift(-1.5, 1.5);
  std::vector<SolutionFamily> out;
  for (int i = 0; i < count; ++i) {
    SolutionFamily f;
    f.kind = FamilyKind::F_of_u;
    f.sign = i % 2 ? -1 : 1;
    f.c2 = shift(rng);
    switch (branch) {
      case Branch::hyperbolic:
        f.K0 = -k(rng);
        f.c1 = c(rng) + 0.01;
        break;
      case Branch::linear:
        f.c1 = c(rng) + 0.01;
        break;
      default:
        f.K0 = k(rng);
        f.c1 = f.K0 + c(rng) + 0.01;
    }
    out.push_back(f);
  }
  return out;
}

struct Line {
  bool ok;
  std::string detail;
};

__attribute__((format(printf, 2, 3))) Line line(bool ok, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return {ok, buf};
}

// ---- criteria ----

Line c1_totally_geodesic() {
  const Case& c = gallery_case("hemisphere-H3");
  const double m = check_value(c, "umbilicity", "max_shape_norm");
  double k = 0.0;
  for (const auto& r : c.reports) k = std::max({k, std::abs(r.kappa1), std::abs(r.kappa2)});
  const bool ok = c.grid.size() == 400 && m <= 1e-7 && k <= 1e-7 &&
                  check_label(c, "umbilicity", "kind") == "totally_geodesic";
  return line(ok, "hemisphere 20x20: max |kappa| = %.2e, max |A| = %.2e", k, m);
}

Line c2_h3_curvature() {
  std::mt19937 rng(90210);
  std::uniform_real_distribution<double> xy(-5.0, 5.0), z(0.1, 10.0), d(-1.0, 1.0);
  const MetricChart h3 = MetricChart::half_space(3);
  double w = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector3d p(xy(rng), xy(rng), z(rng));
    Eigen::Vector3d x(d(rng), d(rng), d(rng)), y(d(rng), d(rng), d(rng));
    w = std::max(w, std::abs(sectional_curvature(h3, {p, x}, {p, y}) + 1.0));
  }
  return line(w <= 1e-7, "100 random points/planes, z in [0.1, 10]: max |K + 1| = %.2e", w);
}

Line c3_anti_torqued() {
  const Case& c = gallery_case("hemisphere-H3");
  const double f = worst(c, "f", [](auto&) { return 1.0; });
  const double t = worst(c, "residual_torse", zero);
  const double l = check_value(c, "antitorqued_lemma", "max_anti_torqued_defect");
  const std::string cls = check_label(c, "field", "class");
  const bool ok = cls == "antiTorqued" && f <= 1e-7 && t <= 1e-7 && l <= 1e-7;
  return line(ok, "class %s, max |f - 1| = %.2e, torse residual %.2e, lemma defect %.2e", cls.c_str(), f, t, l);
}

Line c4_angle_law() {
  const Scene s = resolve_scene("hemisphere-H3");
  const std::string csv = run_export(s, "theta");
  double w = 0.0, umin = INFINITY, umax = -INFINITY;
  int rows = 0;
  std::size_t pos = csv.find('\n') + 1;
  while (pos < csv.size()) {
    double u, v, th;
    if (std::sscanf(csv.c_str() + pos, "%lf,%lf,%lf", &u, &v, &th) != 3) return line(false, "bad CSV row");
    w = std::max(w, std::abs(th - std::acos(1.0 / std::cosh(u))));
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    ++rows;
    pos = csv.find('\n', pos) + 1;
  }
  const bool ok = rows == 400 && umin >= 0.2 && umax <= 3.0 && w <= 1e-9;
  return line(ok, "exported theta, %d rows, u in [%.3f, %.3f]: max |theta - arccos(sech u)| = %.2e", rows, umin, umax, w);
}

Line c5_curvature_formulas() {
  const Case& h = gallery_case("hemisphere-H3");
  const double kb = worst(h, "K_int_B", [](auto&) { return -1.0; });
  const double routes = worst(h, "residual_k_int", zero);
  double kext = 0.0;
  int cases = 0;
  for (const auto& id : gallery_ids()) {
    const Case& c = gallery_case(id);
    for (std::size_t i = 0; i < c.grid.size(); ++i) {
      if (!c.reports[i].b_defined) continue;  // B needs sin(theta) != 0
      kext = std::max(kext, quantity_of(c.reports[i], "residual_k_ext"));
    }
    cases += std::any_of(c.reports.begin(), c.reports.end(), [](const PAReport& r) { return r.b_defined; });
  }
  const bool ok = kb <= 1e-6 && routes <= 1e-5 && kext <= 1e-6;
  return line(ok, "hemisphere max |K_int_B + 1| = %.2e, |K_int_B - K_int| = %.2e; K_ext formula vs det A over %d cases: %.2e",
              kb, routes, cases, kext);
}

Line c6_frame_equations() {
  double e1 = 0.0, e2 = 0.0, levi = 0.0;
  for (const char* id : {"hemisphere-H3", "cone-R3", "plane-z1-R3"}) {
    const Case& c = gallery_case(id);
    e1 = std::max(e1, worst(c, "residual_e1_theta", zero));
    e2 = std::max(e2, worst(c, "residual_e2_theta", zero));
    for (const char* q : {"residual_levi_1", "residual_levi_2", "residual_levi_3", "residual_levi_4"})
      levi = std::max(levi, worst(c, q, zero));
  }
  const bool ok = e1 <= 1e-6 && e2 <= 1e-6 && levi <= 1e-6;
  return line(ok, "hemisphere, cone, plane: e1(theta) %.2e, e2(theta) %.2e, connection %.2e", e1, e2, levi);
}

Line c7_families() {
  const std::vector<double> u = linspace(0.1, 2.0, 1000);
  double ode = 0.0, second = 0.0, first = 0.0, oracle = 0.0;
  int n = 0;
  for (Branch b : {Branch::hyperbolic, Branch::linear, Branch::trigonometric}) {
    for (const SolutionFamily& fam : random_families(b, 20, 4242)) {
      ode = std::max(ode, ode_residual(fam, u).max_abs);
      const SFormReport s = s_form_check(fam, u);
      second = std::max(second, s.max_second);
      first = std::max(first, s.max_first_integral);
      const FamilyValue v0 = family_eval(fam, 0.1);
      oracle = std::max(oracle, oracle_deviation(fam, ode_oracle(fam.K0, 0.1, v0.value, v0.d1, 2.0, 1e-3)));
      ++n;
    }
  }
  const bool ok = n == 60 && ode <= 1e-8 && second <= 1e-9 && first <= 1e-9 && oracle <= 1e-6;
  return line(ok, "%d families x 1000 samples: ODE %.2e, S'' + K0 S %.2e, first integral %.2e, RK4 %.2e",
              n, ode, second, first, oracle);
}

Line c8_right_angle() {
  const Case& cone = gallery_case("cone-R3");
  const double kext = worst(cone, "K_ext", zero);
  const double ruled = check_value(cone, "ruled_u", "max_residual");
  const double f = worst(cone, "f", [](const std::vector<double>& p) { return 1.0 / p[0]; });
  const bool cone_fit = check_label(cone, "family", "branch") == "linear" &&
                        std::abs(check_value(cone, "family", "K0")) <= 1e-9 &&
                        std::abs(check_value(cone, "family", "c2")) <= 1e-6;
  const Case& cyl = gallery_case("cylinder-H3");
  const double f1 = worst(cyl, "f", [](auto&) { return 1.0; });
  const bool cyl_fit = check_label(cyl, "family", "branch") == "constant" &&
                       std::abs(check_value(cyl, "family", "K0") + 1.0) <= 1e-7;
  const bool ok = kext <= 1e-8 && ruled <= 1e-8 && f <= 1e-8 && cone_fit && f1 <= 1e-7 && cyl_fit;
  return line(ok, "cone: |K_ext| %.2e, ruling %.2e, |f - 1/u| %.2e, fit %s (K0 %.1e, q %.1e); cylinder-H3: |f - 1| %.2e, fit %s (K0 %.6f)",
              kext, ruled, f, check_label(cone, "family", "branch").c_str(), check_value(cone, "family", "K0"),
              check_value(cone, "family", "c2"), f1, check_label(cyl, "family", "branch").c_str(),
              check_value(cyl, "family", "K0"));
}

Line c9_plane() {
  const Case& c = gallery_case("plane-z1-R3");
  double umin = INFINITY, umax = -INFINITY;
  for (const auto& p : c.grid) {
    umin = std::min(umin, p[0]);
    umax = std::max(umax, p[0]);
  }
  const double f = worst(c, "f", [](const std::vector<double>& p) { return 1.0 / std::sqrt(1.0 + p[0] * p[0]); });
  const double k = worst(c, "K_int", zero);
  const double K0 = check_value(c, "family", "K0"), c1 = check_value(c, "family", "c1"), c2 = check_value(c, "family", "c2");
  const bool ok = umin >= 0.1 && umax <= 5.0 && f <= 1e-7 && k <= 1e-7 && std::abs(K0) <= 1e-5 &&
                  std::abs(c1 - 1.0) <= 1e-5 && std::abs(c2) <= 1e-5;
  return line(ok, "u in [%.3f, %.3f]: |f - 1/sqrt(1+u^2)| %.2e, |K_int| %.2e, fit K0 %.1e c1 %.8f c2 %.1e",
              umin, umax, f, k, K0, c1, c2);
}

Line c10_umbilic() {
  const Case& p = gallery_case("sphere-R3-parallel");
  auto v = [&](const char* key) { return check_value(p, "umbilic_parallel", key); };
  const double dk = std::max({std::abs(v("kappa_min") - 0.5), std::abs(v("kappa_max") - 0.5),
                              std::abs(v("theta_prime_min") - 0.5), std::abs(v("theta_prime_max") - 0.5)});
  const double de = std::max(std::abs(v("k_ext_min") - 0.25), std::abs(v("k_ext_max") - 0.25));
  const double ks = v("max_abs_k_sec"), ki = v("max_k_int_minus_k_ext");
  const Case& n = gallery_case("sphere-R3-normal");
  const double dd = std::max(std::abs(check_value(n, "umbilicity", "delta_min") - 0.5),
                             std::abs(check_value(n, "umbilicity", "delta_max") - 0.5));
  const bool umb = check_label(n, "umbilicity", "kind") == "totally_umbilical";
  const bool conc = check_passed(n, "concircular_umbilical");
  const bool ok = dk <= 1e-6 && de <= 1e-6 && ks <= 1e-7 && ki <= 1e-6 && umb && dd <= 1e-7 && conc;
  return line(ok, "V = d/dz: |kappa, theta' - 0.5| %.2e, |K_ext - 0.25| %.2e, |K_sec| %.2e, |K_int - K_ext| %.2e; V = N: umbilical %s, |delta - 1/r| %.2e, concircular %s",
              dk, de, ks, ki, umb ? "yes" : "no", dd, conc ? "pass" : "fail");
}

Line c11_parallel_v() {
  const Case& c = gallery_case("cylinder-R3-parallel");
  const double at = check_value(c, "parallel_V", "max_A_T");
  const double det = check_value(c, "parallel_V", "max_abs_det_A");
  const double ruled = check_value(c, "ruled_u", "max_residual");
  const bool ok = check_passed(c, "parallel_V") && at <= 1e-8 && det <= 1e-8 && ruled <= 1e-8;
  return line(ok, "cylinder: |A(T)| %.2e, ruling %.2e, |det A| %.2e", at, ruled, det);
}

Line c12_properties() {
  double gauss = 0.0;
  for (const auto& id : gallery_ids()) gauss = std::max(gauss, worst(gallery_case(id), "residual_gauss", zero));

  std::mt19937 rng(31337);
  std::uniform_real_distribution<double> xy(-1.0, 1.0), z(0.5, 2.0);
  const std::vector<std::string> names = {"x", "y", "z"};
  double fd = 0.0;
  for (auto src : testing::kCorpus) {
    const ScalarField f = expr::compile(std::string(src), names);
    for (int k = 0; k < 5; ++k) {
      const double p[] = {xy(rng), xy(rng), z(rng)};
      const Jet2 j = jet_eval(f, p);
      const FdEstimate e = fd_oracle(f, p, 2, 1e-3);
      const double scale = 1.0 + std::abs(j.value());
      for (int a = 0; a < 3; ++a) {
        fd = std::max(fd, std::abs(j.grad(a) - e.gradient(a)) / scale);
        for (int b = 0; b < 3; ++b) fd = std::max(fd, std::abs(j.hess(a, b) - e.hessian(a, b)) / scale);
      }
    }
  }

  const std::vector<double> u = linspace(0.1, 2.0, 80);
  double rms = 0.0;
  int fits = 0;
  bool classified = true;
  for (Branch b : {Branch::hyperbolic, Branch::linear, Branch::trigonometric})
    for (SolutionFamily fam : random_families(b, 4, 777)) {
      fam.kind = FamilyKind::f_of_u;
      std::vector<double> y;
      for (double x : u) y.push_back(family_eval(fam, x).value);
      const FamilyFit fit = family_fit(u, y, fam.kind);
      classified = classified && fit.classified;
      rms = std::max(rms, fit.rms);
      ++fits;
    }

  bool det = true;
  for (const auto& id : gallery_ids()) {
    const Scene s = resolve_scene(id);
    RunOptions one, many;
    one.threads = 1;
    many.threads = 8;
    const std::string a = report_text(run_verify(s, one).report);
    det = det && a == report_text(run_verify(s, many).report) && a == report_text(run_verify(s, one).report);
  }

  const bool ok = gauss <= 1e-6 && fd <= 1e-6 && classified && rms <= 1e-5 && det;
  return line(ok, "Gauss residual %.2e; corpus jet vs FD %.2e (50 expr x 5 pts); round trip %d fits, max rms %.2e; reports %s",
              gauss, fd, fits, rms, det ? "byte-identical across runs and 1/8 threads" : "DIFFER");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Line (*)()>> criteria = {
      {"hemisphere totally geodesic", c1_totally_geodesic},
      {"H3 constant curvature", c2_h3_curvature},
      {"anti-torqued fit", c3_anti_torqued},
      {"angle law", c4_angle_law},
      {"curvature formulas", c5_curvature_formulas},
      {"frame equations", c6_frame_equations},
      {"classification families", c7_families},
      {"right-angle theorem", c8_right_angle},
      {"plane with position field", c9_plane},
      {"umbilical and parallel relations", c10_umbilic},
      {"parallel-V theorem", c11_parallel_v},
      {"property suites", c12_properties},
  };
  int failed = 0, k = 0;
  for (const auto& [name, run] : criteria) {
    ++k;
    const auto t0 = std::chrono::steady_clock::now();
    Line l;
    try {
      l = run();
    } catch (const std::exception& e) {
      l = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !l.ok;
    std::printf("%s %2d %s: %s (%.2fs)\n", l.ok ? "PASS" : "FAIL", k, name, l.detail.c_str(), secs);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
