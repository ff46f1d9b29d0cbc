// End-to-end tests for the carnot binary.  The test runner passes the binary
// path in CARNOT_BIN and the repo root in CARNOT_SRC (for the shipped
// presets); everything else goes through a scratch directory.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch_dir() {
  static int counter = 0;
  fs::path d = fs::temp_directory_path() / ("carnot_cli_" + std::to_string(getpid()) + "_" +
                                            std::to_string(counter++));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

const char* required_env(const char* name) {
  const char* v = std::getenv(name);
  REQUIRE_MESSAGE(v != nullptr, "missing env var ", name);
  return v;
}

// Runs the CLI with sh, capturing exit code, stdout and stderr.  `env` is a
// prefix like "CARNOT_PRESET_DIR=/x " (may be empty).
RunResult run_cli(const std::string& args, const std::string& env = "") {
  fs::path d = scratch_dir();
  fs::path of = d / "out.txt";
  fs::path ef = d / "err.txt";
  std::string cmd = env + std::string("\"") + required_env("CARNOT_BIN") + "\" " + args + " > \"" +
                    of.string() + "\" 2> \"" + ef.string() + "\"";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  r.out = slurp(of);
  r.err = slurp(ef);
  return r;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  REQUIRE_MESSAGE(!j.is_discarded(), "expected JSON, got: ", text.substr(0, 200));
  return j;
}

}  // namespace

TEST_CASE("rumin verify passes on the shipped heisenberg preset file") {
  fs::path preset = fs::path(required_env("CARNOT_SRC")) / "presets" / "heisenberg1.json";
  RunResult r = run_cli("rumin verify \"" + preset.string() + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("dc_squared_zero") != std::string::npos);
  CHECK(r.err.find("all checks passed") != std::string::npos);
  CHECK(r.err.find("[FAIL]") == std::string::npos);
  json rep = parse_json(r.out);
  CHECK(rep["all_pass"] == true);
  CHECK(rep["verb"] == "rumin verify");
  bool saw_dc2 = false;
  for (const auto& c : rep["checks"])
    if (c["name"] == "dc_squared_zero") saw_dc2 = c["pass"].get<bool>();
  CHECK(saw_dc2);
}

TEST_CASE("builtin names resolve without preset files") {
  RunResult r = run_cli("algebra validate engel");
  CHECK(r.exit_code == 0);
  json rep = parse_json(r.out);
  CHECK(rep["valid"] == true);
  CHECK(rep["algebra"]["dim"] == 4);
  CHECK(rep["algebra"]["homogeneous_dimension"] == 7);
}

TEST_CASE("CARNOT_PRESET_DIR supplies named algebras") {
  fs::path d = scratch_dir();
  {
    std::ofstream f(d / "quat.json");
    f << R"({"name":"quat","layers":[4,1],"brackets":[)"
      << R"({"i":1,"j":2,"coeffs":{"5":1}},{"i":3,"j":4,"coeffs":{"5":1}}]})";
  }
  RunResult miss = run_cli("algebra validate quat");
  CHECK(miss.exit_code == 1);
  RunResult hit = run_cli("algebra validate quat", "CARNOT_PRESET_DIR=\"" + d.string() + "\" ");
  CHECK(hit.exit_code == 0);
  CHECK(parse_json(hit.out)["algebra"]["name"] == "quat");
}

TEST_CASE("jacobi violation exits 1 and leaves a failure report") {
  fs::path d = scratch_dir();
  {
    std::ofstream f(d / "bad.json");
    f << R"({"name":"bad","layers":[3,1,1],"brackets":[)"
      << R"({"i":1,"j":2,"coeffs":{"4":1}},{"i":1,"j":3,"coeffs":{"4":1}},)"
      << R"({"i":1,"j":4,"coeffs":{"5":1}},{"i":2,"j":4,"coeffs":{"5":1}}]})";
  }
  fs::path out = d / "report";
  RunResult r =
      run_cli("algebra validate \"" + (d / "bad.json").string() + "\" --out \"" + out.string() + "\"");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("Jacobi") != std::string::npos);
  json rep = parse_json(slurp(out / "failure.json"));
  CHECK(rep["error"]["type"] == "validation");
  CHECK(rep["error"]["exit"] == 1);
  CHECK(!fs::exists(out / "algebra_validate.json"));
}

TEST_CASE("usage errors exit 4") {
  CHECK(run_cli("bogus verb").exit_code == 4);
  CHECK(run_cli("rumin build").exit_code == 4);
  CHECK(run_cli("rumin build heisenberg1 --degree 9").exit_code == 4);
  CHECK(run_cli("rumin verify heisenberg1 --format yaml").exit_code == 4);
}

TEST_CASE("rumin build reports are byte-identical across runs") {
  fs::path d1 = scratch_dir(), d2 = scratch_dir();
  CHECK(run_cli("rumin build engel --out \"" + d1.string() + "\"").exit_code == 0);
  CHECK(run_cli("rumin build engel --out \"" + d2.string() + "\"").exit_code == 0);
  std::string a = slurp(d1 / "complex.json"), b = slurp(d2 / "complex.json");
  CHECK(!a.empty());
  CHECK(a == b);
  json rep = parse_json(a);
  CHECK(rep["e0_dims"] == json::array({1, 2, 2, 2, 1}));
}

TEST_CASE("rumin build --degree filters and --out file paths are honored") {
  fs::path d = scratch_dir();
  fs::path file = d / "deg1.json";
  RunResult r = run_cli("rumin build heisenberg1 --degree 1 --out \"" + file.string() + "\"");
  CHECK(r.exit_code == 0);
  json rep = parse_json(slurp(file));
  REQUIRE(rep["degrees"].size() == 1);
  CHECK(rep["degrees"][0]["h"] == 1);
  CHECK(rep["degrees"][0]["e0_dim"] == 2);
}

TEST_CASE("rumin build latex rendering names the intrinsic basis") {
  fs::path d = scratch_dir();
  RunResult r = run_cli("rumin build heisenberg1 --format latex --out \"" + d.string() + "\"");
  CHECK(r.exit_code == 0);
  std::string tex = slurp(d / "complex.tex");
  CHECK(tex.find("\\xi^{1}_{1}") != std::string::npos);
  CHECK(tex.find("\\begin{document}") != std::string::npos);
}

TEST_CASE("group law emits the abelian addition law") {
  RunResult r = run_cli("group law abelian3");
  CHECK(r.exit_code == 0);
  json rep = parse_json(r.out);
  CHECK(rep["law"][0] == "y1 + x1");
  CHECK(rep["frame"][0][0] == "1");
  CHECK(rep["frame"][0][1] == "0");
}

TEST_CASE("group calibrate-norm persists a usable config") {
  fs::path d = scratch_dir();
  RunResult r = run_cli("group calibrate-norm heisenberg1 --seed 42 --out \"" + d.string() + "\"");
  CHECK(r.exit_code == 0);
  json rep = parse_json(slurp(d / "group_calibrate_norm.json"));
  CHECK(rep["check"]["triangle_violations"] == 0);
  CHECK(rep["check"]["samples"].get<long>() > 0);
  json cfg = parse_json(slurp(d / "norm_config.json"));
  CHECK(cfg["eps"].size() == 2);
  CHECK(cfg["eps"][0] == 1.0);
}

TEST_CASE("calibrate-norm runs are reproducible for a fixed seed") {
  fs::path d1 = scratch_dir(), d2 = scratch_dir();
  CHECK(run_cli("group calibrate-norm engel --seed 7 --out \"" + d1.string() + "\"").exit_code == 0);
  CHECK(run_cli("group calibrate-norm engel --seed 7 --out \"" + d2.string() + "\"").exit_code == 0);
  CHECK(slurp(d1 / "group_calibrate_norm.json") == slurp(d2 / "group_calibrate_norm.json"));
}
