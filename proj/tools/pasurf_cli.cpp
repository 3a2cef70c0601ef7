// pasurf: verify prescribed-angle surface scenes, export per-point quantities,
// evaluate/fit/integrate the constant-curvature families.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pasurf/errors.hpp"
#include "pasurf/families.hpp"
#include "pasurf/scene.hpp"

using namespace pasurf;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kInvalid = 2, kDomain = 3 };

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

std::string fmt(double x) {
  if (!std::isfinite(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// "a:b:h" inclusive of b up to rounding
std::vector<double> parse_range(const std::string& s) {
  double a, b, h;
  char c1, c2;
  std::istringstream in(s);
  if (!(in >> a >> c1 >> b >> c2 >> h) || c1 != ':' || c2 != ':' || !in.eof())
    throw ValidationError("range must look like start:stop:step, got '" + s + "'");
  if (!(h > 0) || !(b >= a)) throw ValidationError("range needs step > 0 and stop >= start");
  const long n = std::lround(std::floor((b - a) / h + 1e-9));
  if (n > 10000000) throw ValidationError("range has too many samples");
  std::vector<double> u;
  for (long i = 0; i <= n; ++i) u.push_back(a + static_cast<double>(i) * h);
  return u;
}

int parse_sign(const std::string& s) {
  if (s == "+" || s == "1" || s == "+1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw ValidationError("sign must be + or -, got '" + s + "'");
}

BVariant parse_variant(const std::string& s) {
  for (BVariant v : {BVariant::tanh_plus, BVariant::tanh_minus, BVariant::coth_plus})
    if (s == to_string(v)) return v;
  if (s == "tanh_plus") return BVariant::tanh_plus;
  if (s == "tanh_minus") return BVariant::tanh_minus;
  if (s == "coth_plus") return BVariant::coth_plus;
  throw ValidationError("variant must be tanh_plus, tanh_minus or coth_plus, got '" + s + "'");
}

// u in the first column, samples in the last; a header line is skipped. Rows
// sharing a u (grid exports) keep the first occurrence.
void read_samples(const std::string& path, std::vector<double>& u, std::vector<double>& y) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') numeric = false;
      cols.push_back(v);
    }
    if (!numeric) {
      if (lineno == 1) continue;
      throw ValidationError(path + ":" + std::to_string(lineno) + ": not a numeric row");
    }
    if (cols.size() < 2) throw ValidationError(path + ":" + std::to_string(lineno) + ": need at least two columns");
    if (!u.empty() && cols.front() == u.back()) continue;
    u.push_back(cols.front());
    y.push_back(cols.back());
  }
}

RunOptions run_options(const std::string& grid, double tol, const std::string& orientation, int threads) {
  RunOptions o;
  if (!grid.empty()) o.grid = parse_grid(grid);
  if (tol > 0) o.tol = tol;
  else if (tol != 0) throw ValidationError("--tol must be positive");
  if (!orientation.empty()) o.policy = parse_orientation_policy(orientation);
  o.threads = threads;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of prescribed-angle surfaces"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* gallery = app.add_subcommand("gallery", "Built-in example scenes");
  gallery->require_subcommand(1);
  gallery->add_subcommand("list", "List gallery case ids");
  auto* g_show = gallery->add_subcommand("show", "Print a gallery case as a scene file");
  std::string show_id, show_out;
  g_show->add_option("id", show_id, "Gallery case id")->required();
  g_show->add_option("--out", show_out, "Write to this file instead of stdout");

  auto* verify = app.add_subcommand("verify", "Run every check on a scene and compare expectations");
  std::string v_scene, v_grid, v_orientation, v_json;
  double v_tol = 0;
  int v_threads = 0;
  verify->add_option("scene", v_scene, "Gallery id or scene file")->required();
  verify->add_option("--grid", v_grid, "Grid override, e.g. 40x40");
  verify->add_option("--tol", v_tol, "Tolerance override");
  verify->add_option("--orientation", v_orientation, "paper or fixed");
  verify->add_option("--json", v_json, "Write the report here (default stdout)");
  verify->add_option("--threads", v_threads, "Worker threads (0: all cores)");

  auto* exp = app.add_subcommand("export", "Write one per-point quantity as CSV");
  std::string e_scene, e_quantity, e_out, e_grid, e_orientation;
  int e_threads = 0;
  exp->add_option("scene", e_scene, "Gallery id or scene file")->required();
  exp->add_option("--quantity", e_quantity, "Quantity name")->required();
  exp->add_option("--out", e_out, "CSV path (default stdout)");
  exp->add_option("--grid", e_grid, "Grid override, e.g. 40x40");
  exp->add_option("--orientation", e_orientation, "paper or fixed");
  exp->add_option("--threads", e_threads, "Worker threads (0: all cores)");

  auto* family = app.add_subcommand("family", "Constant-curvature solution families");
  family->require_subcommand(1);
  auto* f_eval = family->add_subcommand("eval", "Sample a family");
  std::string fe_kind = "F", fe_sign = "+", fe_u, fe_variant = "tanh_plus", fe_out;
  double fe_K0 = 0, fe_c1 = 0, fe_c2 = 0;
  bool fe_constant = false;
  f_eval->add_option("--kind", fe_kind, "F, f or B")->required();
  f_eval->add_option("--K0", fe_K0, "Curvature constant")->required();
  f_eval->add_option("--c1", fe_c1, "First constant (F, f)");
  f_eval->add_option("--c2", fe_c2, "Second constant (F, f) or q (B)");
  f_eval->add_option("--sign", fe_sign, "+ or -");
  f_eval->add_option("--variant", fe_variant, "B with K0 < 0: tanh_plus, tanh_minus, coth_plus");
  f_eval->add_flag("--constant", fe_constant, "B with K0 < 0: the constant solution");
  f_eval->add_option("--u", fe_u, "start:stop:step")->required();
  f_eval->add_option("--out", fe_out, "CSV path (default stdout)");

  auto* f_fit = family->add_subcommand("fit", "Fit f or B samples against every branch");
  std::string ff_kind = "f", ff_path, ff_out;
  f_fit->add_option("--kind", ff_kind, "f or B")->required();
  f_fit->add_option("samples", ff_path, "CSV with u first and samples last")->required();
  f_fit->add_option("--json", ff_out, "Write the result here (default stdout)");

  auto* f_oracle = family->add_subcommand("oracle", "RK4 integration of S'' = -K0 S, F = asinh S");
  double fo_K0 = 0, fo_u0 = 0, fo_s0 = 0, fo_sp0 = 0, fo_u1 = 2, fo_step = 1e-3;
  std::string fo_out, fo_sign = "+";
  double fo_c1 = 0, fo_c2 = 0;
  f_oracle->add_option("--K0", fo_K0, "Curvature constant")->required();
  f_oracle->add_option("--u0", fo_u0, "Start")->required();
  auto* o_s0 = f_oracle->add_option("--s0", fo_s0, "S(u0)");
  auto* o_sp0 = f_oracle->add_option("--sp0", fo_sp0, "S'(u0)");
  f_oracle->add_option("--u1", fo_u1, "End");
  f_oracle->add_option("--step", fo_step, "RK4 step");
  f_oracle->add_option("--out", fo_out, "CSV path (default stdout)");
  auto* o_c1 = f_oracle->add_option(
      "--compare-c1", fo_c1,
      "Start from the F family with this c1 at u0 and report max |F_oracle - F| on stderr");
  f_oracle->add_option("--compare-c2", fo_c2, "c2 of the comparison family");
  f_oracle->add_option("--compare-sign", fo_sign, "sign of the comparison family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (gallery->parsed()) {
      if (g_show->parsed()) {
        const auto ids = gallery_ids();
        if (std::find(ids.begin(), ids.end(), show_id) == ids.end())
          throw ValidationError("unknown gallery case '" + show_id + "'");
        write_out(show_out, gallery_scene(show_id).dump(2) + "\n");
      } else {
        for (const auto& id : gallery_ids()) {
          const json j = gallery_scene(id);
          std::cout << id << "\t" << j.value("description", "") << "\n";
        }
      }
      return kPass;
    }

    if (verify->parsed()) {
      const Scene s = resolve_scene(v_scene);
      const VerifyResult r = run_verify(s, run_options(v_grid, v_tol, v_orientation, v_threads));
      write_out(v_json, report_text(r.report));
      if (!r.passed) {
        for (const auto& e : r.report.at("expectations"))
          if (!e.at("passed").get<bool>())
            std::cerr << "FAIL " << e.at("id").get<std::string>() << ": observed " << e.at("observed").dump() << "\n";
      }
      return r.passed ? kPass : kFail;
    }

    if (exp->parsed()) {
      const Scene s = resolve_scene(e_scene);
      write_out(e_out, run_export(s, e_quantity, run_options(e_grid, 0, e_orientation, e_threads)));
      return kPass;
    }

    if (f_eval->parsed()) {
      SolutionFamily fam;
      fam.kind = parse_family_kind(fe_kind);
      fam.K0 = fe_K0;
      fam.c1 = fe_c1;
      fam.c2 = fe_c2;
      fam.sign = parse_sign(fe_sign);
      fam.variant = parse_variant(fe_variant);
      fam.constant = fe_constant;
      fam.validate();
      std::string out = "u,value,d1,d2\n";
      for (double u : parse_range(fe_u)) {
        FamilyValue v;
        try {
          v = family_eval(fam, u);
        } catch (const DomainError&) {
          continue;  // pole
        }
        out += fmt(u) + "," + fmt(v.value) + "," + fmt(v.d1) + "," + fmt(v.d2) + "\n";
      }
      write_out(fe_out, out);
      return kPass;
    }

    if (f_fit->parsed()) {
      std::vector<double> u, y;
      read_samples(ff_path, u, y);
      const FamilyFit fit = family_fit(u, y, parse_family_kind(ff_kind));
      json j;
      j["kind"] = to_string(fit.kind);
      j["samples"] = u.size();
      j["classified"] = fit.classified;
      j["rms"] = fit.rms;
      j["candidates"] = fit.candidates;
      if (fit.classified) {
        j["branch"] = to_string(fit.branch);
        j["variant"] = fit.variant;
        j["K0"] = fit.K0;
        j["c1"] = fit.c1;
        j["c2"] = fit.c2;
        if (fit.kind == FamilyKind::B_of_u) j["q"] = fit.c2;
        j["sign"] = fit.sign;
        j["admissible"] = fit.admissible;
        j["odeResidual"] = fit.ode_residual;
      } else {
        j["branch"] = "unclassified";
      }
      write_out(ff_out, j.dump(2) + "\n");
      return fit.classified ? kPass : kFail;
    }

    if (f_oracle->parsed()) {
      SolutionFamily fam;
      const bool compare = o_c1->count() > 0;
      if (compare) {
        fam.K0 = fo_K0;
        fam.c1 = fo_c1;
        fam.c2 = fo_c2;
        fam.sign = parse_sign(fo_sign);
        fam.validate();
        if (o_s0->count() || o_sp0->count())
          throw ValidationError("--s0/--sp0 come from the comparison family when --compare-c1 is given");
        const FamilyValue v = family_eval(fam, fo_u0);
        fo_s0 = std::sinh(v.value);
        fo_sp0 = std::cosh(v.value) * v.d1;
      } else if (!o_s0->count() || !o_sp0->count()) {
        throw ValidationError("--s0 and --sp0 are required");
      }
      const OracleTrace t = ode_oracle_s(fo_K0, fo_u0, fo_s0, fo_sp0, fo_u1, fo_step);
      std::string out = "u,S,Sp,F,Fp\n";
      for (std::size_t i = 0; i < t.u.size(); ++i)
        out += fmt(t.u[i]) + "," + fmt(t.S[i]) + "," + fmt(t.Sp[i]) + "," + fmt(t.F[i]) + "," + fmt(t.Fp[i]) + "\n";
      write_out(fo_out, out);
      if (compare) {
        std::cerr << "max deviation " << fmt(oracle_deviation(fam, t)) << "\n";
      }
      return kPass;
    }
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kPass;
}
