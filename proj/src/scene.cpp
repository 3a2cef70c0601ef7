#include "pasurf/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "pasurf/expr.hpp"

namespace pasurf {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) invalid(where, std::string("missing '") + key + "'");
  return j.at(key);
}

std::vector<std::string> names_of(const json& j, const std::string& where) {
  if (!j.is_array()) invalid(where, "expected an array of names");
  std::vector<std::string> out;
  for (const auto& n : j) {
    if (!n.is_string()) invalid(where, "names must be strings");
    out.push_back(n.get<std::string>());
  }
  return out;
}

std::string expr_text(const json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
    return buf;
  }
  invalid(where, "expected an expression string or a number");
}

double constant_value(const json& j, const std::map<std::string, double>& constants,
                      const std::string& where) {
  if (j.is_number()) return j.get<double>();
  const std::string src = expr_text(j, where);
  try {
    const ScalarField f = expr::compile(src, {}, constants);
    return jet_eval(f, {}).value();
  } catch (const ValidationError& e) {
    invalid(where, e.what());
  } catch (const DomainError& e) {
    invalid(where, e.what());
  }
}

ScalarField field_from(const json& j, const std::vector<std::string>& inputs,
                       const std::map<std::string, double>& constants, const std::string& where) {
  const std::string src = expr_text(j, where);
  try {
    return expr::compile(src, inputs, constants);
  } catch (const ValidationError& e) {
    invalid(where, e.what());
  }
}

MetricChart load_metric(const json& m, const std::vector<std::string>& coords,
                        const std::map<std::string, double>& constants) {
  const int dim = static_cast<int>(coords.size());
  if (m.contains("preset")) {
    if (m.contains("components")) invalid("metric", "give either 'preset' or 'components'");
    const std::string p = m.at("preset").get<std::string>();
    if (p == "euclidean") return MetricChart::euclidean(dim);
    if (p == "halfSpace") return MetricChart::half_space(dim);
    if (p == "stereographicSphere")
      return MetricChart::stereographic_sphere(
          dim, constant_value(need(m, "radius", "metric"), constants, "metric.radius"));
    invalid("metric.preset", "unknown preset '" + p + "' (euclidean, halfSpace, stereographicSphere)");
  }
  const json& comp = need(m, "components", "metric");
  if (!comp.is_array() || static_cast<int>(comp.size()) != dim)
    invalid("metric.components", "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  std::vector<ScalarField> upper;
  for (int i = 0; i < dim; ++i) {
    if (!comp[i].is_array() || static_cast<int>(comp[i].size()) != dim)
      invalid("metric.components", "row " + std::to_string(i) + " has the wrong length");
    for (int j = i; j < dim; ++j) {
      const std::string where = "metric.components[" + std::to_string(i) + "][" + std::to_string(j) + "]";
      if (expr_text(comp[i][j], where) != expr_text(comp[j][i], where))
        invalid(where, "metric components must be written symmetrically");
      upper.push_back(field_from(comp[i][j], coords, constants, where));
    }
  }
  std::vector<DomainPredicate> domain;
  if (m.contains("domain")) {
    for (std::size_t k = 0; k < m.at("domain").size(); ++k) {
      const std::string where = "metric.domain[" + std::to_string(k) + "]";
      const std::string src = expr_text(m.at("domain")[k], where);
      domain.push_back({src + " > 0", field_from(m.at("domain")[k], coords, constants, where)});
    }
  }
  return MetricChart(dim, std::move(upper), std::move(domain));
}

Expectation load_expectation(const json& e, std::size_t k) {
  const std::string where = "expectations[" + std::to_string(k) + "]";
  if (!e.is_object()) invalid(where, "expected an object");
  static const std::set<std::string> known = {"id", "anchor", "quantity", "target", "targetExpr",
                                              "tol", "check", "value", "label", "equals",
                                              "passed", "applicable"};
  for (const auto& [key, _] : e.items())
    if (!known.count(key)) invalid(where, "unknown key '" + key + "'");
  Expectation x;
  x.id = e.value("id", "expectation-" + std::to_string(k));
  x.anchor = e.value("anchor", "");
  x.quantity = e.value("quantity", "");
  x.target_expr = e.value("targetExpr", "");
  x.check = e.value("check", "");
  x.value = e.value("value", "");
  x.label = e.value("label", "");
  x.equals = e.value("equals", "");
  if (e.contains("target")) x.target = e.at("target").get<double>();
  if (e.contains("tol")) x.tol = e.at("tol").get<double>();
  if (e.contains("passed")) x.passed = e.at("passed").get<bool>();
  if (e.contains("applicable")) x.applicable = e.at("applicable").get<bool>();
  if (x.quantity.empty() == x.check.empty()) invalid(where, "give exactly one of 'quantity' or 'check'");
  if (!x.quantity.empty()) {
    const auto& q = export_quantities();
    if (std::find(q.begin(), q.end(), x.quantity) == q.end())
      invalid(where, "unknown quantity '" + x.quantity + "'");
    if (x.target.has_value() == !x.target_expr.empty())
      invalid(where, "give exactly one of 'target' or 'targetExpr'");
  } else {
    const int forms = (x.passed.has_value() || x.applicable.has_value()) + !x.value.empty() +
                      !x.label.empty();
    if (forms != 1) invalid(where, "check expectations need one of passed/applicable, value or label");
    if (!x.value.empty() && !x.target) invalid(where, "'value' needs a 'target'");
    if (!x.label.empty() && x.equals.empty()) invalid(where, "'label' needs 'equals'");
  }
  return x;
}

}  // namespace

UnitFieldError::UnitFieldError(double defect)
    : ValidationError([defect] {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "field is declared unit but max |‖V‖ − 1| = %.3e over the grid", defect);
        return std::string(buf);
      }()),
      defect_(defect) {}

Scene load_scene(const json& j) {
  if (!j.is_object()) invalid("scene", "expected a JSON object");
  if (!j.contains("schemaVersion") || !j.at("schemaVersion").is_number_integer() ||
      j.at("schemaVersion").get<int>() != kSchemaVersion)
    invalid("scene", "schemaVersion must be " + std::to_string(kSchemaVersion));

  Scene s;
  s.source = j;
  s.id = j.value("id", "scene");
  s.description = j.value("description", "");
  if (j.contains("constants")) {
    for (const auto& [k, v] : j.at("constants").items()) {
      if (!v.is_number()) invalid("constants." + k, "constants must be numbers");
      s.constants[k] = v.get<double>();
    }
  }

  const json& metric = need(j, "metric", "scene");
  s.coordinates = names_of(need(metric, "coordinates", "metric"), "metric.coordinates");
  const json& surf = need(j, "surface", "scene");
  s.parameters = names_of(need(surf, "parameters", "surface"), "surface.parameters");

  std::set<std::string> seen;
  for (const auto* list : {&s.coordinates, &s.parameters})
    for (const auto& n : *list) {
      if (n == "pi" || n == "e") invalid("scene", "'" + n + "' is a built-in constant");
      if (s.constants.count(n)) invalid("scene", "'" + n + "' is both a constant and a variable");
      if (!seen.insert(n).second) invalid("scene", "name '" + n + "' declared twice");
    }
  const int dim = static_cast<int>(s.coordinates.size());
  const int n = static_cast<int>(s.parameters.size());
  if (dim < 2) invalid("metric.coordinates", "need at least two coordinates");
  if (n != dim - 1) invalid("surface.parameters", "need exactly one parameter fewer than coordinates");

  MetricChart chart = load_metric(metric, s.coordinates, s.constants);

  const json& map = need(surf, "map", "surface");
  if (!map.is_array() || static_cast<int>(map.size()) != dim)
    invalid("surface.map", "need one expression per coordinate");
  std::vector<ScalarField> comps;
  for (int k = 0; k < dim; ++k)
    comps.push_back(field_from(map[k], s.parameters, s.constants, "surface.map[" + std::to_string(k) + "]"));

  const json& ranges = need(surf, "ranges", "surface");
  if (!ranges.is_array() || static_cast<int>(ranges.size()) != n)
    invalid("surface.ranges", "need one [lo, hi] per parameter");
  ParamBox box;
  for (int a = 0; a < n; ++a) {
    const std::string where = "surface.ranges[" + std::to_string(a) + "]";
    if (!ranges[a].is_array() || ranges[a].size() != 2) invalid(where, "expected [lo, hi]");
    const double lo = constant_value(ranges[a][0], s.constants, where);
    const double hi = constant_value(ranges[a][1], s.constants, where);
    if (!(lo < hi)) invalid(where, "need lo < hi");
    box.ranges.emplace_back(lo, hi);
  }
  s.immersion.emplace(std::move(chart), std::move(comps), std::move(box));

  s.grid.assign(n, 20);
  if (surf.contains("grid")) {
    s.grid = surf.at("grid").get<std::vector<int>>();
    if (static_cast<int>(s.grid.size()) != n) invalid("surface.grid", "need one count per parameter");
    for (int c : s.grid)
      if (c < 1) invalid("surface.grid", "counts must be positive");
  }
  s.margin = surf.value("margin", 1e-3);
  if (!(s.margin >= 0 && s.margin < 0.5)) invalid("surface.margin", "must lie in [0, 0.5)");

  const json& field = need(j, "field", "scene");
  if (field.value("normal", false)) {
    if (field.contains("components")) invalid("field", "give either 'normal' or 'components'");
    s.field = FieldAlongSurface::unit_normal();
  } else {
    const json& fc = need(field, "components", "field");
    if (!fc.is_array() || static_cast<int>(fc.size()) != dim)
      invalid("field.components", "need one expression per coordinate");
    std::vector<std::string> inputs = s.parameters;
    inputs.insert(inputs.end(), s.coordinates.begin(), s.coordinates.end());
    std::vector<ScalarField> c;
    for (int k = 0; k < dim; ++k)
      c.push_back(along_map(
          field_from(fc[k], inputs, s.constants, "field.components[" + std::to_string(k) + "]"),
          *s.immersion));
    s.field = FieldAlongSurface::from_components(std::move(c), field.value("declaredUnit", true));
  }

  const json opts = j.value("options", json::object());
  s.pa.policy = parse_orientation_policy(opts.value("orientation", "paper"));
  s.pa.orientation = opts.value("normal", 1);
  if (s.pa.orientation != 1 && s.pa.orientation != -1) invalid("options.normal", "must be 1 or -1");
  s.tolerance = opts.value("tolerance", 1e-6);
  if (!(s.tolerance > 0)) invalid("options.tolerance", "must be positive");
  s.pa.torse = {s.tolerance, s.tolerance};
  if (opts.contains("family")) {
    const json& f = opts.at("family");
    FamilyRequest r;
    r.kind = parse_family_kind(f.value("kind", "B"));
    if (r.kind == FamilyKind::F_of_u) invalid("options.family.kind", "fit kind must be f or B");
    r.quantity = f.value("quantity", "f");
    const auto& q = export_quantities();
    if (std::find(q.begin(), q.end(), r.quantity) == q.end())
      invalid("options.family.quantity", "unknown quantity '" + r.quantity + "'");
    s.family = r;
  }
  if (opts.contains("adaptedChart")) {
    const json& a = opts.at("adaptedChart");
    AdaptedChartRequest r;
    r.seed = need(a, "seed", "options.adaptedChart").get<std::vector<double>>();
    if (static_cast<int>(r.seed.size()) != n) invalid("options.adaptedChart.seed", "need one value per parameter");
    r.u_extent = a.value("uExtent", r.u_extent);
    r.v_extent = a.value("vExtent", r.v_extent);
    r.u_steps = a.value("uSteps", r.u_steps);
    r.v_steps = a.value("vSteps", r.v_steps);
    if (r.u_steps < 2 || r.v_steps < 1) invalid("options.adaptedChart", "need uSteps >= 2 and vSteps >= 1");
    s.adapted = r;
  }

  if (j.contains("expectations")) {
    const json& ex = j.at("expectations");
    if (!ex.is_array()) invalid("expectations", "expected an array");
    for (std::size_t k = 0; k < ex.size(); ++k) s.expectations.push_back(load_expectation(ex[k], k));
  }
  return s;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scene file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("scene file '" + path + "' is not valid JSON: " + e.what());
  }
  return load_scene(j);
}

Scene resolve_scene(const std::string& id_or_path) {
  const auto ids = gallery_ids();
  if (std::find(ids.begin(), ids.end(), id_or_path) != ids.end())
    return load_scene(gallery_scene(id_or_path));
  return load_scene_file(id_or_path);
}

std::vector<int> parse_grid(const std::string& s) {
  std::vector<int> out;
  if (s.empty() || s.back() == 'x') throw ValidationError("grid must look like AxB with positive integers, got '" + s + "'");
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, 'x')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw ValidationError("grid must look like AxB with positive integers, got '" + s + "'");
    const int c = std::stoi(part);
    if (c < 1) throw ValidationError("grid counts must be positive");
    out.push_back(c);
  }
  if (out.empty()) throw ValidationError("empty grid");
  return out;
}

Scene with_overrides(const Scene& s, const RunOptions& opt) {
  Scene o = s;
  if (opt.grid) {
    if (opt.grid->size() != o.grid.size())
      throw ValidationError("grid override needs " + std::to_string(o.grid.size()) + " counts");
    o.grid = *opt.grid;
  }
  if (opt.tol) {
    if (!(*opt.tol > 0)) throw ValidationError("tolerance must be positive");
    o.tolerance = *opt.tol;
    o.pa.torse = {*opt.tol, *opt.tol};
  }
  if (opt.policy) o.pa.policy = *opt.policy;
  return o;
}

const std::vector<std::string>& export_quantities() {
  static const std::vector<std::string> q = {
      "theta", "cos_theta", "f", "B", "K_int", "K_int_B", "K_int_direct", "K_ext",
      "K_ext_formula", "K_sec", "kappa1", "kappa2",
      "residual_reconstruction", "residual_length", "residual_torse", "residual_antitorqued",
      "residual_gauss", "residual_gauss_formula", "residual_k_int", "residual_k_ext",
      "residual_e1_theta", "residual_e2_theta", "residual_levi", "residual_levi_1",
      "residual_levi_2", "residual_levi_3", "residual_levi_4", "residual_dercomp",
      "residual_dercomp_1", "residual_dercomp_2"};
  return q;
}

double quantity_of(const PAReport& r, const std::string& q) {
  const bool b = r.b_defined;
  if (q == "theta") return r.theta;
  if (q == "cos_theta") return r.cos_theta;
  if (q == "f") return r.f;
  if (q == "B") return b ? r.B : kNaN;
  if (q == "K_int") return r.k_int;
  if (q == "K_int_B") return b ? r.k_int_b : kNaN;
  if (q == "K_int_direct") return r.k_int_direct;
  if (q == "K_ext") return r.k_ext;
  if (q == "K_ext_formula") return b ? r.k_ext_formula : kNaN;
  if (q == "K_sec") return r.k_sec;
  if (q == "kappa1") return r.kappa1;
  if (q == "kappa2") return r.kappa2;
  if (q == "residual_reconstruction") return r.reconstruction;
  if (q == "residual_length") return r.length;
  if (q == "residual_torse") return r.torse_residual;
  if (q == "residual_antitorqued") return r.anti_torqued_defect;
  if (q == "residual_gauss") return r.gauss;
  if (q == "residual_gauss_formula") return r.gauss_formula;
  if (q == "residual_k_int") return b ? std::abs(r.k_int_b - r.k_int) : kNaN;
  if (q == "residual_k_ext") return b ? std::abs(r.k_ext_formula - r.k_ext) : kNaN;
  if (q == "residual_e1_theta") return b ? r.e12[0] : kNaN;
  if (q == "residual_e2_theta") return b ? r.e12[1] : kNaN;
  if (q == "residual_levi") return b ? *std::max_element(r.levi, r.levi + 4) : kNaN;
  if (q.rfind("residual_levi_", 0) == 0) {
    const int k = q.back() - '1';
    if (k >= 0 && k < 4) return b ? r.levi[k] : kNaN;
  }
  if (q == "residual_dercomp") return std::max(r.dercomp[0], r.dercomp[1]);
  if (q == "residual_dercomp_1") return r.dercomp[0];
  if (q == "residual_dercomp_2") return r.dercomp[1];
  std::string names;
  for (const auto& n : export_quantities()) names += (names.empty() ? "" : ", ") + n;
  throw ValidationError("unknown quantity '" + q + "'; valid: " + names);
}

namespace {

std::string params_text(const std::vector<double>& p) {
  std::string s = "(";
  char buf[40];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g", i ? ", " : "", p[i]);
    s += buf;
  }
  return s + ")";
}

int thread_count(int requested, std::size_t work) {
  int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, std::min<int>(t, static_cast<int>(work)));
}

}  // namespace

std::vector<PAReport> sweep_reports(const Scene& s, const std::vector<std::vector<double>>& grid,
                                    int threads) {
  const std::size_t n = grid.size();
  std::vector<PAReport> out(n);
  std::vector<std::string> errors(n);
  std::vector<char> kinds(n, 0);  // 1 domain, 2 validation
  auto work = [&](int id, int stride) {
    for (std::size_t i = id; i < n; i += stride) {
      try {
        out[i] = pa_report(s.field, *s.immersion, grid[i], s.pa);
      } catch (const DomainError& e) {
        errors[i] = e.what();
        kinds[i] = 1;
      } catch (const ValidationError& e) {
        errors[i] = e.what();
        kinds[i] = 2;
      }
    }
  };
  const int t = thread_count(threads, n);
  if (t == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(work, k, t);
    for (auto& th : pool) th.join();
  }
  // lowest failing index wins so the message does not depend on scheduling
  for (std::size_t i = 0; i < n; ++i) {
    if (kinds[i] == 1) throw DomainError("at parameters " + params_text(grid[i]) + ": " + errors[i]);
    if (kinds[i] == 2) throw ValidationError("at parameters " + params_text(grid[i]) + ": " + errors[i]);
  }
  return out;
}

namespace {

json check_json(const CheckReport& r, json labels = json::object()) {
  json j;
  j["applicable"] = r.applicable;
  j["passed"] = r.applicable && r.passed;
  j["reason"] = r.reason;
  j["values"] = json::object();
  for (const auto& [k, v] : r.values) j["values"][k] = v;
  j["labels"] = std::move(labels);
  return j;
}

struct MinMax {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  void add(double x) {
    if (!std::isfinite(x)) return;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
};

void validate_unit(const Scene& s, const std::vector<std::vector<double>>& grid) {
  if (s.field.kind != FieldAlongSurface::Kind::expression || !s.field.declared_unit) return;
  const double d = unit_defect(s.field, *s.immersion, grid, s.pa.orientation);
  if (d > std::max(s.tolerance, 1e-12)) throw UnitFieldError(d);
}

json metric_stage(const Scene& s, const std::vector<std::vector<double>>& grid) {
  double min_eig = std::numeric_limits<double>::infinity(), max_cond = 0.0, clearance = min_eig;
  double asym = 0.0;
  for (const auto& p : grid) try {
    Eigen::VectorXd x(s.immersion->ambient_dim());
    for (int k = 0; k < x.size(); ++k) x(k) = jet_eval(s.immersion->map[k], p).value();
    s.immersion->chart.require_domain({x.data(), static_cast<std::size_t>(x.size())});
    clearance = std::min(clearance, s.immersion->chart.clearance({x.data(), static_cast<std::size_t>(x.size())}));
    const MetricAt m = metric_at(s.immersion->chart, {x.data(), static_cast<std::size_t>(x.size())});
    asym = std::max(asym, (m.g - m.g.transpose()).cwiseAbs().maxCoeff());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.g);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    min_eig = std::min(min_eig, lo);
    max_cond = std::max(max_cond, hi / lo);
  } catch (const DomainError& e) {
    throw DomainError("at parameters " + params_text(p) + ": " + e.what());
  }
  CheckReport r;
  r.values["min_eigenvalue"] = min_eig;
  r.values["max_condition"] = max_cond;
  r.values["max_asymmetry"] = asym;
  if (std::isfinite(clearance)) r.values["min_domain_clearance"] = clearance;
  r.passed = min_eig > 0 && asym == 0.0;
  if (!(min_eig > 0)) throw DomainError("metric is not positive definite on the surface");
  return check_json(r);
}

json family_stage(const Scene& s, const std::vector<std::vector<double>>& grid,
                  const std::vector<PAReport>& reports) {
  if (!s.family) return check_json(CheckReport::inapplicable("no family fit requested"));
  if (s.grid.size() != 2) return check_json(CheckReport::inapplicable("family fit needs two parameters"));
  const int nu = s.grid[0], nv = s.grid[1], col = nv / 2;
  std::vector<double> u, y;
  for (int i = 0; i < nu; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) * nv + col;
    u.push_back(grid[k][0]);
    y.push_back(quantity_of(reports[k], s.family->quantity));
  }
  if (u.size() < 8) return check_json(CheckReport::inapplicable("family fit needs at least 8 samples along u"));
  for (double v : y)
    if (!std::isfinite(v)) return check_json(CheckReport::inapplicable(s.family->quantity + " undefined along the sample line"));
  const FamilyFit fit = family_fit(u, y, s.family->kind);
  CheckReport r;
  r.passed = fit.classified && fit.admissible;
  r.values["v"] = grid[col][1];
  r.values["samples"] = static_cast<double>(u.size());
  r.values["rms"] = fit.rms;
  for (const auto& [name, rms] : fit.candidates) r.values["rms_" + name] = rms;
  json labels;
  labels["kind"] = to_string(s.family->kind);
  labels["quantity"] = s.family->quantity;
  if (!fit.classified) {
    r.reason = "unclassified: no branch under rms 1e-3";
    labels["branch"] = "unclassified";
    return check_json(r, labels);
  }
  r.values["K0"] = fit.K0;
  r.values["c1"] = fit.c1;
  r.values["c2"] = fit.c2;
  r.values["sign"] = fit.sign;
  r.values["ode_residual"] = fit.ode_residual;
  labels["branch"] = to_string(fit.branch);
  labels["variant"] = fit.variant;
  labels["admissible"] = fit.admissible ? "yes" : "no";
  return check_json(r, labels);
}

json evaluate(const Expectation& e, const Scene& s, const json& checks,
              const std::vector<std::vector<double>>& grid, const std::vector<PAReport>& reports) {
  json out;
  out["id"] = e.id;
  out["anchor"] = e.anchor;
  const double tol = e.tol.value_or(s.tolerance);
  if (!e.quantity.empty()) {
    out["quantity"] = e.quantity;
    out["tol"] = tol;
    std::optional<ScalarField> target;
    if (e.target) out["target"] = *e.target;
    else {
      out["targetExpr"] = e.target_expr;
      target = expr::compile(e.target_expr, s.parameters, s.constants);
    }
    double worst = 0.0;
    int undefined = 0;
    std::vector<double> at;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double q = quantity_of(reports[i], e.quantity);
      if (!std::isfinite(q)) {
        ++undefined;
        continue;
      }
      const double t = e.target ? *e.target : jet_eval(*target, grid[i]).value();
      const double d = std::abs(q - t);
      if (d > worst || at.empty()) {
        worst = std::max(worst, d);
        if (d >= worst) at = grid[i];
      }
    }
    out["observed"] = worst;
    out["at"] = at;
    out["undefinedPoints"] = undefined;
    out["passed"] = undefined == 0 && worst <= tol;
    return out;
  }
  out["check"] = e.check;
  if (!checks.contains(e.check)) {
    out["passed"] = false;
    out["observed"] = "no such check";
    return out;
  }
  const json& c = checks.at(e.check);
  const bool applicable = c.at("applicable").get<bool>();
  if (e.applicable) {
    out["applicable"] = *e.applicable;
    out["observed"] = applicable;
    out["passed"] = applicable == *e.applicable;
    return out;
  }
  if (!applicable) {
    out["observed"] = "inapplicable: " + c.at("reason").get<std::string>();
    out["passed"] = false;
    return out;
  }
  if (e.passed) {
    out["expected"] = *e.passed;
    out["observed"] = c.at("passed").get<bool>();
    out["passed"] = c.at("passed").get<bool>() == *e.passed;
  } else if (!e.value.empty()) {
    out["value"] = e.value;
    out["target"] = *e.target;
    out["tol"] = tol;
    if (!c.at("values").contains(e.value)) {
      out["observed"] = nullptr;
      out["passed"] = false;
    } else {
      const double v = c.at("values").at(e.value).get<double>();
      out["observed"] = v;
      out["passed"] = std::abs(v - *e.target) <= tol;
    }
  } else {
    out["label"] = e.label;
    out["equals"] = e.equals;
    const json& labels = c.at("labels");
    const std::string v = labels.contains(e.label) ? labels.at(e.label).get<std::string>() : "";
    out["observed"] = v;
    out["passed"] = v == e.equals;
  }
  return out;
}

}  // namespace

VerifyResult run_verify(const Scene& scene, const RunOptions& opt) {
  const Scene s = with_overrides(scene, opt);
  const Immersion& imm = *s.immersion;
  const std::vector<std::vector<double>> grid = parameter_grid(imm.domain, s.grid, s.margin);

  json checks;
  checks["metric"] = metric_stage(s, grid);
  validate_unit(s, grid);
  const std::vector<PAReport> reports = sweep_reports(s, grid, opt.threads);

  // surface geometry
  {
    std::vector<SurfaceGeometry> samples;
    for (const auto& p : grid) samples.push_back(surface_geometry(imm, p, s.pa.orientation));
    const UmbilicityReport u = classify_umbilicity(samples, s.tolerance);
    CheckReport r;
    r.passed = true;
    r.values["max_shape_norm"] = u.max_shape_norm;
    r.values["max_umbilic_deviation"] = u.max_umbilic_deviation;
    MinMax d;
    for (double x : u.delta) d.add(x);
    r.values["delta_min"] = d.lo;
    r.values["delta_max"] = d.hi;
    double shape_sym = 0.0, principal = 0.0, routes = 0.0;
    for (const auto& g : samples) {
      shape_sym = std::max(shape_sym, g.shape_symmetry_residual());
      principal = std::max(principal, g.principal_residual());
      routes = std::max(routes, g.shape_route_residual());
    }
    r.values["max_shape_symmetry"] = shape_sym;
    r.values["max_principal_residual"] = principal;
    r.values["max_shape_route_residual"] = routes;
    checks["umbilicity"] = check_json(r, {{"kind", to_string(u.kind)}});
  }

  // field classification
  {
    CheckReport r;
    MinMax f;
    double res = 0.0, anti = 0.0;
    std::set<std::string> classes;
    bool partial = false;
    for (const auto& p : reports) {
      f.add(p.f);
      res = std::max(res, p.torse_residual);
      anti = std::max(anti, p.anti_torqued_defect);
      classes.insert(to_string(p.cls));
      partial = partial || (p.cls == FieldClass::torqued && p.torqued_partial);
    }
    r.values["f_min"] = f.lo;
    r.values["f_max"] = f.hi;
    r.values["max_torse_residual"] = res;
    r.values["max_anti_torqued_defect"] = anti;
    if (s.field.kind == FieldAlongSurface::Kind::expression)
      r.values["max_unit_defect"] = unit_defect(s.field, imm, grid, s.pa.orientation);
    r.passed = res <= s.tolerance;
    json labels;
    labels["class"] = classes.size() == 1 ? *classes.begin() : "mixed";
    if (partial) labels["torqued"] = "partial: V has a normal component, only the fit is torqued";
    checks["field"] = check_json(r, labels);
  }

  // PA decomposition and curvature identities
  json flags = json::array();
  {
    CheckReport r;
    MinMax th, cs, kint, kext, ksec;
    double recon = 0.0, len = 0.0, derc = 0.0, gauss = 0.0, gform = 0.0;
    int flipped = 0, frames = 0, bdef = 0;
    for (const auto& p : reports) {
      th.add(p.theta);
      cs.add(p.cos_theta);
      kint.add(p.k_int);
      kext.add(p.k_ext);
      ksec.add(p.k_sec);
      recon = std::max(recon, p.reconstruction);
      len = std::max(len, p.length);
      derc = std::max({derc, p.dercomp[0], p.dercomp[1]});
      gauss = std::max(gauss, p.gauss);
      gform = std::max(gform, p.gauss_formula);
      flipped += p.flipped;
      frames += p.frame;
      bdef += p.b_defined;
    }
    r.values["theta_min"] = th.lo;
    r.values["theta_max"] = th.hi;
    r.values["cos_theta_min"] = cs.lo;
    r.values["cos_theta_max"] = cs.hi;
    r.values["k_int_min"] = kint.lo;
    r.values["k_int_max"] = kint.hi;
    r.values["k_ext_min"] = kext.lo;
    r.values["k_ext_max"] = kext.hi;
    r.values["k_sec_min"] = ksec.lo;
    r.values["k_sec_max"] = ksec.hi;
    r.values["max_reconstruction"] = recon;
    r.values["max_length"] = len;
    r.values["max_dercomp"] = derc;
    r.values["max_gauss"] = gauss;
    r.values["max_gauss_formula"] = gform;
    r.values["flipped_points"] = flipped;
    r.values["frame_points"] = frames;
    r.values["b_defined_points"] = bdef;
    r.passed = recon <= s.tolerance && len <= s.tolerance && derc <= s.tolerance;
    const bool sign_change = s.pa.policy == OrientationPolicy::paper
                                 ? flipped > 0 && flipped < static_cast<int>(reports.size())
                                 : cs.lo < 0 && cs.hi > 0;
    json labels;
    labels["policy"] = to_string(s.pa.policy);
    labels["signChange"] = sign_change ? "yes" : "no";
    if (sign_change)
      flags.push_back(s.pa.policy == OrientationPolicy::paper
                          ? "<V,N> changes sign on the grid; orientation 'paper' flips N pointwise there"
                          : "<V,N> changes sign on the grid; theta crosses pi/2 under the fixed normal");
    checks["pa"] = check_json(r, labels);
  }

  const TorseTolerances tol{s.tolerance, s.tolerance};
  checks["antitorqued_lemma"] = check_json(unit_torse_implies_antitorqued_check(s.field, imm, grid, s.pa.orientation, tol));
  checks["concircular_umbilical"] = check_json(concircular_umbilical_check(s.field, imm, grid, s.pa.orientation, tol));
  checks["umbilical_normal"] = check_json(umbilical_normal_is_antitorqued_check(imm, grid, s.pa.orientation, tol));
  if (imm.params() == 2 && imm.ambient_dim() == 3) {
    checks["principal_direction"] = check_json(principal_direction_test(s.field, imm, grid, s.pa));
    checks["parallel_V"] = check_json(parallel_V_theorem_check(s.field, imm, grid, s.pa));
    checks["theta_extremes"] = check_json(theta_extremes_check(s.field, imm, grid, s.pa));
    checks["umbilic_parallel"] = check_json(umbilic_parallel_relations(s.field, imm, grid, s.pa));
  }
  for (int a = 0; a < imm.params(); ++a) {
    CheckReport r;
    r.values["max_residual"] = ruled_check(imm, a, grid);
    r.passed = r.values["max_residual"] <= s.tolerance;
    checks["ruled_" + s.parameters[a]] = check_json(r);
  }
  if (s.adapted && imm.params() == 2) {
    const AdaptedChart a = adapted_chart(s.field, imm, s.adapted->seed, s.adapted->u_extent,
                                         s.adapted->u_steps, s.adapted->v_extent,
                                         s.adapted->v_steps, s.pa);
    CheckReport r;
    r.values["max_metric_residual"] = a.max_metric_residual;
    r.values["max_warp_residual"] = a.max_warp_residual;
    r.values["covered"] = a.covered;
    r.values["requested"] = a.requested;
    r.passed = a.covered == a.requested && a.max_metric_residual <= 1e-4 && a.max_warp_residual <= 1e-4;
    checks["adapted_chart"] = check_json(r);
  } else {
    checks["adapted_chart"] = check_json(CheckReport::inapplicable("no adapted chart requested"));
  }
  checks["family"] = family_stage(s, grid, reports);

  json report;
  report["case"] = s.id;
  report["description"] = s.description;
  report["version"] = kVersion;
  report["schemaVersion"] = kSchemaVersion;
  report["grid"] = s.grid;
  report["margin"] = s.margin;
  report["points"] = grid.size();
  report["tolerance"] = s.tolerance;
  report["orientation"] = {{"policy", to_string(s.pa.policy)}, {"normal", s.pa.orientation}};
  report["checks"] = checks;
  report["flags"] = flags;
  json ex = json::array();
  int failed = 0;
  for (const auto& e : s.expectations) {
    ex.push_back(evaluate(e, s, checks, grid, reports));
    failed += !ex.back().at("passed").get<bool>();
  }
  report["expectations"] = ex;
  report["summary"] = {{"expectations", s.expectations.size()}, {"failed", failed}};
  report["passed"] = failed == 0;
  return {report, failed == 0};
}

std::string report_text(const json& report) { return report.dump(2) + "\n"; }

std::string run_export(const Scene& scene, const std::string& quantity, const RunOptions& opt) {
  const auto& q = export_quantities();
  if (std::find(q.begin(), q.end(), quantity) == q.end()) quantity_of(PAReport{}, quantity);
  const Scene s = with_overrides(scene, opt);
  const std::vector<std::vector<double>> grid = parameter_grid(s.immersion->domain, s.grid, s.margin);
  metric_stage(s, grid);
  validate_unit(s, grid);
  const std::vector<PAReport> reports = sweep_reports(s, grid, opt.threads);
  std::string out;
  for (const auto& p : s.parameters) out += p + ",";
  out += quantity + "\n";
  char buf[64];
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (double x : grid[i]) {
      std::snprintf(buf, sizeof buf, "%.17g,", x);
      out += buf;
    }
    const double v = quantity_of(reports[i], quantity);
    if (std::isfinite(v)) std::snprintf(buf, sizeof buf, "%.17g\n", v);
    else std::snprintf(buf, sizeof buf, "nan\n");
    out += buf;
  }
  return out;
}

}  // namespace pasurf
