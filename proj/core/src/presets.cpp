#include "carnot/presets.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "carnot/errors.hpp"

namespace carnot {

StratifiedLieAlgebra make_abelian(int n) {
  if (n < 1) throw MalformedSpec("abelian preset needs n >= 1");
  return StratifiedLieAlgebra("abelian" + std::to_string(n), {n}, {});
}

StratifiedLieAlgebra make_heisenberg(int n) {
  if (n < 1) throw MalformedSpec("heisenberg preset needs n >= 1");
  std::vector<StratifiedLieAlgebra::BracketEntry> entries;
  for (int i = 0; i < n; ++i) entries.push_back({2 * i, 2 * i + 1, 2 * n, Rational(1)});
  return StratifiedLieAlgebra("heisenberg" + std::to_string(n), {2 * n, 1}, entries);
}

StratifiedLieAlgebra make_engel() {
  std::vector<StratifiedLieAlgebra::BracketEntry> entries = {
      {0, 1, 2, Rational(1)},
      {0, 2, 3, Rational(1)},
  };
  return StratifiedLieAlgebra("engel", {2, 1, 1}, entries);
}

namespace {

StratifiedLieAlgebra load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedSpec("cannot open algebra file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw MalformedSpec("invalid JSON in " + path + ": " + e.what());
  }
  return StratifiedLieAlgebra::from_json(j);
}

StratifiedLieAlgebra builtin(const std::string& name) {
  if (name == "engel") return make_engel();
  auto numbered = [&](const std::string& prefix) -> int {
    if (name.rfind(prefix, 0) != 0) return -1;
    std::string tail = name.substr(prefix.size());
    if (tail.empty()) return -1;
    for (char c : tail)
      if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
    return std::stoi(tail);
  };
  if (int n = numbered("abelian"); n > 0) return make_abelian(n);
  if (int n = numbered("heisenberg"); n > 0) return make_heisenberg(n);
  throw MalformedSpec("unknown algebra '" + name + "' (not a file, preset dir entry, or builtin)");
}

}  // namespace

StratifiedLieAlgebra resolve_algebra(const std::string& spec) {
  namespace fs = std::filesystem;
  if (fs::exists(spec) && fs::is_regular_file(spec)) return load_file(spec);
  if (const char* dir = std::getenv("CARNOT_PRESET_DIR")) {
    fs::path p = fs::path(dir) / spec;
    if (fs::exists(p)) return load_file(p.string());
    p = fs::path(dir) / (spec + ".json");
    if (fs::exists(p)) return load_file(p.string());
  }
  return builtin(spec);
}

}  // namespace carnot
