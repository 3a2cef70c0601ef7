#include <utility>

#include "pasurf/scene.hpp"

namespace pasurf {

namespace {

// Expectation blocks shared by several cases.
constexpr const char* kFrame = R"J(
    {"id": "frame-e1-theta", "anchor": "tangential component of V satisfies", "quantity": "residual_e1_theta", "target": 0, "tol": 1e-6},
    {"id": "frame-e2-theta", "anchor": "tangential component of V satisfies", "quantity": "residual_e2_theta", "target": 0, "tol": 1e-6},
    {"id": "frame-connection", "anchor": "tangential component of V satisfies", "quantity": "residual_levi", "target": 0, "tol": 1e-6},
    {"id": "k-ext-formula", "anchor": "curvatures of Σ with respect to", "quantity": "residual_k_ext", "target": 0, "tol": 1e-6},)J";

constexpr const char* kGauss = R"J(
    {"id": "gauss-equation", "anchor": "the Gauss equation reduces to", "quantity": "residual_gauss", "target": 0, "tol": 1e-6},
    {"id": "gauss-formula", "anchor": "obtained from the Gauss formula", "quantity": "residual_gauss_formula", "target": 0, "tol": 1e-6},
    {"id": "decomposition", "anchor": "tangential and normal components along", "quantity": "residual_dercomp", "target": 0, "tol": 1e-6})J";

const std::vector<std::pair<std::string, std::string>>& cases() {
  static const std::vector<std::pair<std::string, std::string>> all = {
      {"hemisphere-H3", std::string(R"J({
  "schemaVersion": 1,
  "id": "hemisphere-H3",
  "description": "upper unit hemisphere in the half-space model of H3, V = -z d/dz",
  "constants": {"r": 1},
  "metric": {"coordinates": ["x", "y", "z"], "preset": "halfSpace"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["r*cos(asin(sech(u)))*cos(v)", "r*cos(asin(sech(u)))*sin(v)", "r*sin(asin(sech(u)))"],
    "ranges": [[0.2, 3], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"components": ["0", "0", "-z"], "declaredUnit": true},
  "options": {
    "orientation": "paper",
    "family": {"kind": "B", "quantity": "B"},
    "adaptedChart": {"seed": [1, 1], "uExtent": 1, "uSteps": 11, "vExtent": 0.6, "vSteps": 5}
  },
  "expectations": [
    {"id": "totally-geodesic", "anchor": "is totally geodesic in", "check": "umbilicity", "label": "kind", "equals": "totally_geodesic"},
    {"id": "kappa-vanish", "anchor": "is totally geodesic in", "check": "umbilicity", "value": "max_shape_norm", "target": 0, "tol": 1e-7},
    {"id": "anti-torqued", "anchor": "whose potential function satisfies", "check": "field", "label": "class", "equals": "antiTorqued"},
    {"id": "potential-one", "anchor": "whose potential function satisfies", "quantity": "f", "target": 1, "tol": 1e-7},
    {"id": "torse-residual", "anchor": "whose potential function satisfies", "quantity": "residual_torse", "target": 0, "tol": 1e-7},
    {"id": "lemma", "anchor": "is anti-torqued along Σ", "check": "antitorqued_lemma", "value": "max_anti_torqued_defect", "target": 0, "tol": 1e-7},
    {"id": "angle-law", "anchor": "the angle function satisfies", "quantity": "theta", "targetExpr": "acos(sech(u))", "tol": 1e-9},
    {"id": "B-coth", "anchor": "curvatures of Σ with respect to", "quantity": "B", "targetExpr": "coth(u)", "tol": 1e-6},
    {"id": "k-int-B", "anchor": "the intrinsic curvature of", "quantity": "K_int_B", "target": -1, "tol": 1e-6},
    {"id": "k-int-routes", "anchor": "the intrinsic curvature of", "quantity": "residual_k_int", "target": 0, "tol": 1e-5},
    {"id": "k-ext-zero", "anchor": "is totally geodesic in", "quantity": "K_ext", "target": 0, "tol": 1e-7},
    {"id": "principal-T", "anchor": "principal direction with principal curvature", "check": "principal_direction", "passed": true},
    {"id": "adapted-chart", "anchor": "choose a local coordinate system", "check": "adapted_chart", "passed": true},
    {"id": "family-branch", "anchor": "its solutions are given by", "check": "family", "label": "variant", "equals": "coth(q+au)"},
    {"id": "family-K0", "anchor": "the intrinsic curvature of", "check": "family", "value": "K0", "target": -1, "tol": 1e-5},)J") +
                            kFrame + kGauss + "\n  ]\n}"},

      {"cone-R3", std::string(R"J({
  "schemaVersion": 1,
  "id": "cone-R3",
  "description": "cone over a unit-speed circle of the unit sphere, V = position / |position|",
  "metric": {"coordinates": ["x", "y", "z"], "preset": "euclidean"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["u*cos(v)/sqrt(2)", "u*sin(v)/sqrt(2)", "u/sqrt(2)"],
    "ranges": [[0.2, 3], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"components": ["x/sqrt(x^2+y^2+z^2)", "y/sqrt(x^2+y^2+z^2)", "z/sqrt(x^2+y^2+z^2)"], "declaredUnit": true},
  "options": {
    "orientation": "paper",
    "family": {"kind": "B", "quantity": "f"},
    "adaptedChart": {"seed": [0.5, 1], "uExtent": 2, "uSteps": 9, "vExtent": 0.4, "vSteps": 3}
  },
  "expectations": [
    {"id": "right-angle", "anchor": "extrinsically flat ruled surface", "quantity": "theta", "targetExpr": "pi/2", "tol": 1e-9},
    {"id": "flat", "anchor": "extrinsically flat ruled surface", "quantity": "K_ext", "target": 0, "tol": 1e-8},
    {"id": "ruled", "anchor": "extrinsically flat ruled surface", "check": "ruled_u", "value": "max_residual", "target": 0, "tol": 1e-8},
    {"id": "potential", "anchor": "its restriction to Σ satisfies", "quantity": "f", "targetExpr": "1/u", "tol": 1e-8},
    {"id": "anti-torqued", "anchor": "its restriction to Σ satisfies", "check": "field", "label": "class", "equals": "antiTorqued"},
    {"id": "extremes", "anchor": "then Σ is totally umbilical", "check": "theta_extremes", "value": "case", "target": 1, "tol": 0},
    {"id": "k-int", "anchor": "This is consistent with", "quantity": "K_int_B", "target": 0, "tol": 1e-6},
    {"id": "family-branch", "anchor": "This is consistent with", "check": "family", "label": "branch", "equals": "linear"},
    {"id": "family-K0", "anchor": "This is consistent with", "check": "family", "value": "K0", "target": 0, "tol": 1e-9},
    {"id": "family-q", "anchor": "This is consistent with", "check": "family", "value": "c2", "target": 0, "tol": 1e-6},
    {"id": "adapted-chart", "anchor": "choose a local coordinate system", "check": "adapted_chart", "passed": true},)J") +
                      kFrame + kGauss + "\n  ]\n}"},

      {"cylinder-H3", std::string(R"J({
  "schemaVersion": 1,
  "id": "cylinder-H3",
  "description": "vertical cylinder over the unit circle in the half-space model of H3, V = -z d/dz",
  "metric": {"coordinates": ["x", "y", "z"], "preset": "halfSpace"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["cos(v)", "sin(v)", "exp(u)"],
    "ranges": [[-1, 1], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"components": ["0", "0", "-z"], "declaredUnit": true},
  "options": {"orientation": "paper", "family": {"kind": "B", "quantity": "f"}},
  "expectations": [
    {"id": "right-angle", "anchor": "corresponds to the case", "quantity": "theta", "targetExpr": "pi/2", "tol": 1e-9},
    {"id": "potential-one", "anchor": "corresponds to the case", "quantity": "f", "target": 1, "tol": 1e-7},
    {"id": "flat", "anchor": "extrinsically flat ruled surface", "quantity": "K_ext", "target": 0, "tol": 1e-8},
    {"id": "ruled", "anchor": "extrinsically flat ruled surface", "check": "ruled_u", "value": "max_residual", "target": 0, "tol": 1e-8},
    {"id": "k-int", "anchor": "corresponds to the case", "quantity": "K_int_B", "target": -1, "tol": 1e-6},
    {"id": "k-int-routes", "anchor": "corresponds to the case", "quantity": "residual_k_int", "target": 0, "tol": 1e-5},
    {"id": "family-branch", "anchor": "corresponds to the case", "check": "family", "label": "branch", "equals": "constant"},
    {"id": "family-K0", "anchor": "corresponds to the case", "check": "family", "value": "K0", "target": -1, "tol": 1e-7},)J") +
                          kFrame + kGauss + "\n  ]\n}"},

      {"plane-z1-R3", std::string(R"J({
  "schemaVersion": 1,
  "id": "plane-z1-R3",
  "description": "plane z = 1 in polar parameters, V = position / |position|",
  "metric": {"coordinates": ["x", "y", "z"], "preset": "euclidean"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["u*cos(v)", "u*sin(v)", "1"],
    "ranges": [[0.1, 5], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"components": ["x/sqrt(x^2+y^2+z^2)", "y/sqrt(x^2+y^2+z^2)", "z/sqrt(x^2+y^2+z^2)"], "declaredUnit": true},
  "options": {"orientation": "paper", "family": {"kind": "f", "quantity": "f"}},
  "expectations": [
    {"id": "totally-geodesic", "anchor": "which is a totally geodesic surface", "check": "umbilicity", "label": "kind", "equals": "totally_geodesic"},
    {"id": "potential", "anchor": "with potential function f", "quantity": "f", "targetExpr": "1/sqrt(1+u^2)", "tol": 1e-7},
    {"id": "angle", "anchor": "the angle function satisfies", "quantity": "theta", "targetExpr": "atan(u)", "tol": 1e-9},
    {"id": "k-int", "anchor": "where c₁=1 and c₂=0", "quantity": "K_int", "target": 0, "tol": 1e-7},
    {"id": "k-int-B", "anchor": "where c₁=1 and c₂=0", "quantity": "K_int_B", "target": 0, "tol": 1e-6},
    {"id": "family-branch", "anchor": "where c₁=1 and c₂=0", "check": "family", "label": "branch", "equals": "linear"},
    {"id": "family-K0", "anchor": "where c₁=1 and c₂=0", "check": "family", "value": "K0", "target": 0, "tol": 1e-5},
    {"id": "family-c1", "anchor": "where c₁=1 and c₂=0", "check": "family", "value": "c1", "target": 1, "tol": 1e-5},
    {"id": "family-c2", "anchor": "where c₁=1 and c₂=0", "check": "family", "value": "c2", "target": 0, "tol": 1e-5},)J") +
                          kFrame + kGauss + "\n  ]\n}"},

      {"sphere-R3-normal", std::string(R"J({
  "schemaVersion": 1,
  "id": "sphere-R3-normal",
  "description": "round sphere of radius 2 with V the inward unit normal",
  "constants": {"r": 2},
  "metric": {"coordinates": ["x", "y", "z"], "preset": "euclidean"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["r*sin(u)*cos(v)", "r*sin(u)*sin(v)", "r*cos(u)"],
    "ranges": [[0.2, 2.9], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"normal": true},
  "options": {"orientation": "fixed", "normal": -1},
  "expectations": [
    {"id": "umbilical", "anchor": "totally umbilical with normal vector field", "check": "umbilicity", "label": "kind", "equals": "totally_umbilical"},
    {"id": "delta", "anchor": "constant and equal to 1/r", "check": "umbilicity", "value": "delta_min", "target": 0.5, "tol": 1e-7},
    {"id": "delta-max", "anchor": "constant and equal to 1/r", "check": "umbilicity", "value": "delta_max", "target": 0.5, "tol": 1e-7},
    {"id": "concircular", "anchor": "totally umbilical with normal vector field", "check": "concircular_umbilical", "passed": true},
    {"id": "normal-anti-torqued", "anchor": "is anti-torqued along Σ", "check": "umbilical_normal", "passed": true},
    {"id": "theta-zero", "anchor": "then Σ is totally umbilical", "quantity": "theta", "target": 0, "tol": 1e-7},
    {"id": "extremes", "anchor": "then Σ is totally umbilical", "check": "theta_extremes", "value": "case", "target": 2, "tol": 0},)J") +
                               kGauss + "\n  ]\n}"},

      {"sphere-R3-parallel", std::string(R"J({
  "schemaVersion": 1,
  "id": "sphere-R3-parallel",
  "description": "round sphere of radius 2 with the parallel field V = d/dz, inward normal",
  "constants": {"r": 2},
  "metric": {"coordinates": ["x", "y", "z"], "preset": "euclidean"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["r*sin(u)*cos(v)", "r*sin(u)*sin(v)", "r*cos(u)"],
    "ranges": [[0.2, 2.9], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"components": ["0", "0", "1"], "declaredUnit": true},
  "options": {"orientation": "fixed", "normal": -1},
  "expectations": [
    {"id": "parallel", "anchor": "the standard sphere in", "check": "field", "label": "class", "equals": "parallel"},
    {"id": "theta-prime-min", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "theta_prime_min", "target": 0.5, "tol": 1e-6},
    {"id": "theta-prime-max", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "theta_prime_max", "target": 0.5, "tol": 1e-6},
    {"id": "kappa-min", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "kappa_min", "target": 0.5, "tol": 1e-6},
    {"id": "kappa-max", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "kappa_max", "target": 0.5, "tol": 1e-6},
    {"id": "k-ext-min", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "k_ext_min", "target": 0.25, "tol": 1e-6},
    {"id": "k-ext-max", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "k_ext_max", "target": 0.25, "tol": 1e-6},
    {"id": "k-sec", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "max_abs_k_sec", "target": 0, "tol": 1e-7},
    {"id": "k-int-k-ext", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "value": "max_k_int_minus_k_ext", "target": 0, "tol": 1e-6},
    {"id": "relations", "anchor": "θ' is constant and hence", "check": "umbilic_parallel", "passed": true},
    {"id": "principal-T", "anchor": "principal direction with principal curvature", "check": "principal_direction", "passed": true},
    {"id": "not-ruled-theorem", "anchor": "integral curves of the tangential component", "check": "parallel_V", "applicable": false},)J") +
                                 kFrame + kGauss + "\n  ]\n}"},

      {"cylinder-R3-parallel", std::string(R"J({
  "schemaVersion": 1,
  "id": "cylinder-R3-parallel",
  "description": "circular cylinder of radius 1 with the parallel field V = d/dz",
  "constants": {"r": 1},
  "metric": {"coordinates": ["x", "y", "z"], "preset": "euclidean"},
  "surface": {
    "parameters": ["u", "v"],
    "map": ["r*cos(v)", "r*sin(v)", "u"],
    "ranges": [[-1, 1], [0, "2*pi"]],
    "grid": [20, 20]
  },
  "field": {"components": ["0", "0", "1"], "declaredUnit": true},
  "options": {"orientation": "paper"},
  "expectations": [
    {"id": "parallel", "anchor": "integral curves of the tangential component", "check": "field", "label": "class", "equals": "parallel"},
    {"id": "theorem", "anchor": "integral curves of the tangential component", "check": "parallel_V", "passed": true},
    {"id": "A-T", "anchor": "integral curves of the tangential component", "check": "parallel_V", "value": "max_A_T", "target": 0, "tol": 1e-8},
    {"id": "det-A", "anchor": "integral curves of the tangential component", "check": "parallel_V", "value": "max_abs_det_A", "target": 0, "tol": 1e-8},
    {"id": "ruled", "anchor": "integral curves of the tangential component", "check": "ruled_u", "value": "max_residual", "target": 0, "tol": 1e-8},)J") +
                                   kGauss + "\n  ]\n}"},
  };
  return all;
}

}  // namespace

std::vector<std::string> gallery_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : cases()) ids.push_back(id);
  return ids;
}

nlohmann::json gallery_scene(const std::string& id) {
  for (const auto& [cid, text] : cases())
    if (cid == id) return nlohmann::json::parse(text);
  throw ValidationError("unknown gallery case '" + id + "'");
}

}  // namespace pasurf
