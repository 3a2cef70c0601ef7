#pragma once

// Scene files, the built-in gallery, verification reports and CSV export.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pasurf/errors.hpp"
#include "pasurf/families.hpp"
#include "pasurf/field.hpp"
#include "pasurf/pa.hpp"
#include "pasurf/surface.hpp"

namespace pasurf {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kVersion = "0.1.0";

struct Expectation {
  std::string id;
  std::string anchor;  // descriptive label of the claim being checked
  // grid form: a per-point quantity against `target` or `target_expr`
  std::string quantity;
  std::string target_expr;
  // check form: a stage/check entry of the report
  std::string check;
  std::string value;  // key in the check's values
  std::string label;  // key in the check's labels, compared with `equals`
  std::string equals;
  std::optional<bool> passed;
  std::optional<bool> applicable;  // expected applicability, default true
  std::optional<double> target;
  std::optional<double> tol;
};

/// A field declared unit that is not unit on the grid.
class UnitFieldError : public ValidationError {
 public:
  explicit UnitFieldError(double defect);
  double defect() const { return defect_; }

 private:
  double defect_;
};

struct FamilyRequest {
  FamilyKind kind = FamilyKind::B_of_u;
  std::string quantity = "f";  // per-point quantity sampled along u
};

struct AdaptedChartRequest {
  std::vector<double> seed;
  double u_extent = 1.0, v_extent = 0.5;
  int u_steps = 11, v_steps = 5;
};

struct Scene {
  std::string id;
  std::string description;
  nlohmann::json source;
  std::map<std::string, double> constants;
  std::vector<std::string> coordinates, parameters;
  std::optional<Immersion> immersion;
  FieldAlongSurface field;
  std::vector<int> grid;
  double margin = 1e-3;
  double tolerance = 1e-6;
  PAOptions pa;
  std::optional<FamilyRequest> family;
  std::optional<AdaptedChartRequest> adapted;
  std::vector<Expectation> expectations;
};

/// Throws ValidationError (expr::ParseError included) on any schema problem.
Scene load_scene(const nlohmann::json& j);
Scene load_scene_file(const std::string& path);

std::vector<std::string> gallery_ids();
nlohmann::json gallery_scene(const std::string& id);
/// Gallery id or path to a scene file.
Scene resolve_scene(const std::string& id_or_path);

struct RunOptions {
  std::optional<std::vector<int>> grid;
  std::optional<double> tol;
  std::optional<OrientationPolicy> policy;
  int threads = 0;  // 0: hardware concurrency
};

/// Applies overrides to a copy of the scene.
Scene with_overrides(const Scene& s, const RunOptions& opt);

/// Per-point reports in row-major grid order, computed on worker threads.
/// Domain errors are rethrown with the offending parameters.
std::vector<PAReport> sweep_reports(const Scene& s, const std::vector<std::vector<double>>& grid,
                                    int threads);

struct VerifyResult {
  nlohmann::json report;
  bool passed = false;
};

VerifyResult run_verify(const Scene& scene, const RunOptions& opt = {});
/// Report text: sorted keys, two-space indent, trailing newline.
std::string report_text(const nlohmann::json& report);

const std::vector<std::string>& export_quantities();
/// NaN when the quantity is undefined at the point.
double quantity_of(const PAReport& r, const std::string& name);
/// CSV with header `u,v,<quantity>` (one column per parameter), %.17g, LF.
std::string run_export(const Scene& scene, const std::string& quantity, const RunOptions& opt = {});

/// Parses "AxB" (or "A" for one parameter).
std::vector<int> parse_grid(const std::string& s);

}  // namespace pasurf
