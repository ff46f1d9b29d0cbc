// carnot: command-line front end.
//
// Verbs:
//   algebra validate <spec>
//   group law <spec>
//   group calibrate-norm <spec>
//   rumin build <spec> [--degree h]
//   rumin verify <spec>
//   primitive run <config>
//   primitive report <dir>
//
// Every verb accepts --out (file or directory), --format json|latex|csv,
// --threads and --seed.  The machine-readable report is always JSON; latex
// and csv are written alongside it.  Reports carry no timestamps, so two
// runs with the same inputs produce byte-identical files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/errors.hpp"
#include "carnot/group.hpp"
#include "carnot/opcalc.hpp"
#include "carnot/presets.hpp"
#include "carnot/rumin.hpp"

namespace fs = std::filesystem;
using carnot::Rational;
using nlohmann::json;

namespace {

struct Options {
  std::string out;
  std::string format = "json";
  int threads = 1;
  std::uint64_t seed = 1;
};

// The subcommand currently executing, for failure reports written from main.
Options* g_active = nullptr;
std::string g_verb;
int g_exit = 0;

void add_common_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--out", opt.out, "report destination: a directory or a single file");
  cmd->add_option("--format", opt.format, "extra rendering next to the JSON report")
      ->check(CLI::IsMember({"json", "latex", "csv"}));
  cmd->add_option("--threads", opt.threads, "worker threads for numeric verbs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opt.seed, "seed for randomized verbs");
}

// --out is a file when it has an extension, a directory otherwise.
fs::path resolve_out(const std::string& out, const std::string& stem, const std::string& ext) {
  fs::path p(out);
  if (p.has_extension()) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
  }
  fs::create_directories(p);
  return p / (stem + ext);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw carnot::MalformedSpec("cannot write " + path.string());
  os << text;
  std::cerr << "wrote " << path.string() << "\n";
}

// Emits the JSON report (to --out or stdout) plus the optional latex/csv
// rendering.  Renderers may be empty when a verb has no such view.
void emit(const Options& opt, const std::string& stem, const json& report,
          const std::string& latex, const std::string& csv) {
  std::string dump = report.dump(2) + "\n";
  if (opt.out.empty()) {
    if (opt.format == "latex" && !latex.empty())
      std::cout << latex;
    else if (opt.format == "csv" && !csv.empty())
      std::cout << csv;
    else
      std::cout << dump;
    return;
  }
  write_file(resolve_out(opt.out, stem, ".json"), dump);
  if (opt.format == "latex" && !latex.empty())
    write_file(resolve_out(opt.out, stem, ".tex"), latex);
  if (opt.format == "csv" && !csv.empty())
    write_file(resolve_out(opt.out, stem, ".csv"), csv);
}

json algebra_summary(const carnot::StratifiedLieAlgebra& g) {
  return json{{"name", g.name()},
              {"dim", g.dim()},
              {"step", g.step()},
              {"layers", g.layers()},
              {"homogeneous_dimension", g.homogeneous_dimension()}};
}

// Renames variables x_{n+k} to y_k in Polynomial::str output, so group law
// coordinates read as functions of (x, y).
std::string xy_names(const std::string& s, int n) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == 'x' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      int idx = std::stoi(s.substr(i + 1, j - i - 1));
      out += idx > n ? "y" + std::to_string(idx - n) : "x" + std::to_string(idx);
      i = j;
    } else {
      out += s[i++];
    }
  }
  return out;
}

// Minimal math-mode conversion: subscripted variables, braced exponents.
std::string latexify(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    char c = s[i];
    if ((c == 'x' || c == 'y') && i + 1 < s.size() &&
        std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out += c;
      out += "_{" + s.substr(i + 1, j - i - 1) + "}";
      i = j;
    } else if (c == '^' && i + 1 < s.size()) {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out += "^{" + s.substr(i + 1, j - i - 1) + "}";
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

std::string tex_document(const std::string& body) {
  return "\\documentclass{article}\n\\usepackage{amsmath}\n\\begin{document}\n" + body +
         "\\end{document}\n";
}

carnot::StratifiedLieAlgebra load_algebra(const std::string& spec) {
  carnot::StratifiedLieAlgebra g = carnot::resolve_algebra(spec);
  g.validate();
  return g;
}

void cmd_algebra_validate(const Options& opt, const std::string& spec) {
  carnot::StratifiedLieAlgebra g = load_algebra(spec);
  json report{{"verb", "algebra validate"},
              {"input", spec},
              {"valid", true},
              {"algebra", algebra_summary(g)},
              {"spec", g.to_json()}};
  std::ostringstream csv;
  csv << "key,value\nname," << g.name() << "\ndim," << g.dim() << "\nstep," << g.step()
      << "\nhomogeneous_dimension," << g.homogeneous_dimension() << "\nvalid,true\n";
  std::ostringstream tex;
  tex << "Algebra \\texttt{" << g.name() << "}: dimension " << g.dim() << ", step " << g.step()
      << ", homogeneous dimension " << g.homogeneous_dimension() << ".\n";
  std::cerr << "algebra " << g.name() << ": dim=" << g.dim() << " step=" << g.step()
            << " Q=" << g.homogeneous_dimension() << " valid\n";
  emit(opt, "algebra_validate", report, tex_document(tex.str()), csv.str());
}

void cmd_group_law(const Options& opt, const std::string& spec) {
  carnot::StratifiedLieAlgebra g = load_algebra(spec);
  int n = g.dim();
  std::vector<carnot::Polynomial> law = carnot::group_law_polynomials(g);
  std::vector<std::vector<carnot::Polynomial>> frame = carnot::frame_fields(g);

  json jlaw = json::array();
  for (int k = 0; k < n; ++k) jlaw.push_back(xy_names(law[k].str(), n));
  json jframe = json::array();
  for (int j = 0; j < n; ++j) {
    json row = json::array();
    for (int k = 0; k < n; ++k) row.push_back(frame[j][k].str());
    jframe.push_back(row);
  }
  json report{{"verb", "group law"},
              {"algebra", algebra_summary(g)},
              {"law", jlaw},
              {"frame", jframe}};

  std::ostringstream tex;
  tex << "\\begin{align*}\n";
  for (int k = 0; k < n; ++k)
    tex << "(x \\cdot y)_{" << k + 1 << "} &= " << latexify(xy_names(law[k].str(), n))
        << " \\\\\n";
  for (int j = 0; j < n; ++j) {
    tex << "X_{" << j + 1 << "} &= ";
    bool any = false;
    for (int k = 0; k < n; ++k) {
      if (frame[j][k].is_zero()) continue;
      if (any) tex << " + ";
      tex << "\\left(" << latexify(frame[j][k].str()) << "\\right) \\partial_{" << k + 1 << "}";
      any = true;
    }
    tex << " \\\\\n";
  }
  tex << "\\end{align*}\n";

  std::ostringstream csv;
  csv << "coordinate,law\n";
  for (int k = 0; k < n; ++k) csv << k + 1 << ",\"" << xy_names(law[k].str(), n) << "\"\n";

  std::cerr << "group law for " << g.name() << ": " << n << " coordinates\n";
  emit(opt, "group_law", report, tex_document(tex.str()), csv.str());
}

void cmd_group_calibrate(const Options& opt, const std::string& spec) {
  carnot::StratifiedLieAlgebra g = load_algebra(spec);
  const long samples_per_layer = 10000;
  carnot::NormCalibration cal = carnot::calibrate_norm(g, samples_per_layer, opt.seed);
  carnot::NormCheck chk = carnot::verify_norm(g, cal.config, 10000, opt.seed + 1);
  if (chk.triangle_violations != 0)
    throw carnot::CalibrationFailure("calibrated norm fails the triangle inequality on " +
                                    std::to_string(chk.triangle_violations) + " samples");
  json report{{"verb", "group calibrate-norm"},
              {"algebra", algebra_summary(g)},
              {"calibration", cal.to_json()},
              {"check",
               {{"samples", chk.samples},
                {"triangle_violations", chk.triangle_violations},
                {"max_ratio", chk.max_ratio},
                {"max_homogeneity_err", chk.max_homogeneity_err},
                {"max_symmetry_err", chk.max_symmetry_err}}}};

  std::ostringstream csv;
  csv << "layer,eps\n";
  for (std::size_t i = 0; i < cal.config.eps.size(); ++i)
    csv << i + 1 << "," << cal.config.eps[i] << "\n";
  std::ostringstream tex;
  tex << "Calibrated quasinorm for \\texttt{" << g.name() << "}: $\\varepsilon = (";
  for (std::size_t i = 0; i < cal.config.eps.size(); ++i)
    tex << (i ? ", " : "") << cal.config.eps[i];
  tex << ")$, worst ratio " << chk.max_ratio << ".\n";

  std::cerr << "calibrated " << g.name() << ": max |uv|/(|u|+|v|) = " << chk.max_ratio << " on "
            << chk.samples << " samples\n";
  emit(opt, "group_calibrate_norm", report, tex_document(tex.str()), csv.str());
  if (!opt.out.empty())
    write_file(resolve_out(opt.out, "norm_config", ".json"), cal.config.to_json().dump(2) + "\n");
}

void cmd_rumin_build(const Options& opt, const std::string& spec, int degree) {
  carnot::StratifiedLieAlgebra g = load_algebra(spec);
  carnot::RuminComplex cx = carnot::RuminComplex::build(g);
  int n = cx.top_degree();
  if (degree >= 0 && degree > n)
    throw CLI::ValidationError("--degree", "degree exceeds top degree " + std::to_string(n));

  json report = cx.to_json();
  report["verb"] = "rumin build";
  if (degree >= 0) {
    json kept = json::array();
    for (const auto& d : report["degrees"])
      if (d["h"].get<int>() == degree) kept.push_back(d);
    report["degrees"] = kept;
  }

  std::ostringstream tex;
  int lo = degree >= 0 ? degree : 0;
  int hi = degree >= 0 ? degree : n;
  for (int h = lo; h <= hi; ++h) {
    std::vector<std::string> dst =
        h < n ? cx.xi_labels(h + 1, true) : std::vector<std::string>{};
    tex << "\\section*{$d_c$ in degree " << h << "}\n\\[\n"
        << carnot::form_operator_to_latex(cx.degree(h).dc, dst, cx.xi_labels(h, true))
        << "\n\\]\n";
  }
  std::ostringstream csv;
  csv << "degree,dim,weights\n";
  for (int h = lo; h <= hi; ++h) {
    csv << h << "," << cx.degree(h).e0.dim() << ",\"";
    for (std::size_t i = 0; i < cx.degree(h).e0.weights.size(); ++i)
      csv << (i ? " " : "") << cx.degree(h).e0.weights[i];
    csv << "\"\n";
  }

  std::cerr << "rumin complex for " << g.name() << ": dims (";
  for (std::size_t i = 0; i < cx.e0_dims().size(); ++i)
    std::cerr << (i ? "," : "") << cx.e0_dims()[i];
  std::cerr << ")\n";
  emit(opt, "complex", report, tex_document(tex.str()), csv.str());
}

void cmd_rumin_verify(const Options& opt, const std::string& spec) {
  carnot::StratifiedLieAlgebra g = load_algebra(spec);
  carnot::ComplexReport rep = carnot::verify_complex(g);
  for (const auto& c : rep.checks) {
    std::cerr << (c.pass ? "[ ok ] " : "[FAIL] ") << c.name;
    if (!c.pass && !c.detail.empty()) std::cerr << ": " << c.detail;
    std::cerr << "\n";
  }
  std::cerr << (rep.all_pass() ? "all checks passed" : "checks FAILED") << " for " << g.name()
            << "\n";

  json report = rep.to_json();
  report["verb"] = "rumin verify";

  std::ostringstream csv;
  csv << "check,pass,detail\n";
  for (const auto& c : rep.checks)
    csv << c.name << "," << (c.pass ? "true" : "false") << ",\"" << c.detail << "\"\n";
  std::ostringstream tex;
  tex << "\\begin{tabular}{ll}\n";
  for (const auto& c : rep.checks)
    tex << c.name << " & " << (c.pass ? "pass" : "fail") << " \\\\\n";
  tex << "\\end{tabular}\n";

  emit(opt, "rumin_verify", report, tex_document(tex.str()), csv.str());
  if (!rep.all_pass()) g_exit = 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"carnot: stratified Lie group calculus and hypoelliptic form experiments"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* algebra = app.add_subcommand("algebra", "inspect and validate algebra specs");
  algebra->require_subcommand(1);
  std::string alg_spec;
  CLI::App* validate = algebra->add_subcommand("validate", "check grading and Jacobi identity");
  validate->add_option("spec", alg_spec, "algebra file, preset name, or $CARNOT_PRESET_DIR entry")
      ->required();
  add_common_flags(validate, opt);
  validate->callback([&] {
    g_active = &opt;
    g_verb = "algebra validate";
    cmd_algebra_validate(opt, alg_spec);
  });

  CLI::App* group = app.add_subcommand("group", "group law and quasinorm tools");
  group->require_subcommand(1);
  std::string grp_spec;
  CLI::App* law = group->add_subcommand("law", "print the BCH group law and frame fields");
  law->add_option("spec", grp_spec, "algebra")->required();
  add_common_flags(law, opt);
  law->callback([&] {
    g_active = &opt;
    g_verb = "group law";
    cmd_group_law(opt, grp_spec);
  });
  CLI::App* calib = group->add_subcommand("calibrate-norm", "fit quasinorm layer weights");
  calib->add_option("spec", grp_spec, "algebra")->required();
  add_common_flags(calib, opt);
  calib->callback([&] {
    g_active = &opt;
    g_verb = "group calibrate-norm";
    cmd_group_calibrate(opt, grp_spec);
  });

  CLI::App* rumin = app.add_subcommand("rumin", "build and verify the intrinsic complex");
  rumin->require_subcommand(1);
  std::string rum_spec;
  int degree = -1;
  CLI::App* build = rumin->add_subcommand("build", "export bases and differentials");
  build->add_option("spec", rum_spec, "algebra")->required();
  build->add_option("--degree", degree, "restrict the report to one degree")
      ->check(CLI::NonNegativeNumber);
  add_common_flags(build, opt);
  build->callback([&] {
    g_active = &opt;
    g_verb = "rumin build";
    cmd_rumin_build(opt, rum_spec, degree);
  });
  CLI::App* verify = rumin->add_subcommand("verify", "run the full identity suite");
  verify->add_option("spec", rum_spec, "algebra")->required();
  add_common_flags(verify, opt);
  verify->callback([&] {
    g_active = &opt;
    g_verb = "rumin verify";
    cmd_rumin_verify(opt, rum_spec);
  });

  auto fail_report = [&](const char* type, const std::string& what, int code) {
    std::cerr << "error: " << what << "\n";
    if (g_active && !g_active->out.empty()) {
      json j{{"verb", g_verb}, {"error", {{"type", type}, {"message", what}, {"exit", code}}}};
      try {
        write_file(resolve_out(g_active->out, "failure", ".json"), j.dump(2) + "\n");
      } catch (...) {
      }
    }
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 4;
  } catch (const carnot::ValidationError& e) {
    return fail_report("validation", e.what(), 1);
  } catch (const carnot::IdentityError& e) {
    return fail_report("identity", e.what(), 2);
  } catch (const carnot::NumericError& e) {
    return fail_report("numeric", e.what(), 3);
  } catch (const carnot::Error& e) {
    return fail_report("usage", e.what(), 4);
  }
  return g_exit;
}
