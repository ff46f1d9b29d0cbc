#include "carnot/algebra.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "carnot/errors.hpp"
#include "carnot/ratmat.hpp"

namespace carnot {

namespace {
constexpr int kMaxDim = 16;
}

StratifiedLieAlgebra::StratifiedLieAlgebra(std::string name, std::vector<int> layers,
                                           std::vector<BracketEntry> entries)
    : name_(std::move(name)), layers_(std::move(layers)), table_(std::move(entries)) {
  index_layers();
}

void StratifiedLieAlgebra::index_layers() {
  if (layers_.empty()) throw MalformedSpec("algebra needs at least one layer");
  kappa_ = static_cast<int>(layers_.size());
  n_ = 0;
  offsets_.assign(1, 0);
  for (int m : layers_) {
    if (m <= 0) throw MalformedSpec("layer dimensions must be positive");
    n_ += m;
    offsets_.push_back(n_);
  }
  if (n_ > kMaxDim) throw MalformedSpec("total dimension exceeds supported maximum of 16");
  layer_of_.assign(n_, 0);
  for (int l = 1; l <= kappa_; ++l)
    for (int j = offsets_[l - 1]; j < offsets_[l]; ++j) layer_of_[j] = l;

  std::set<std::tuple<int, int, int>> seen;
  for (const auto& e : table_) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= n_ || e.j >= n_ || e.k >= n_)
      throw MalformedSpec("bracket entry index out of range");
    if (e.i >= e.j) throw MalformedSpec("bracket entries must have i < j");
    if (!seen.insert({e.i, e.j, e.k}).second)
      throw MalformedSpec("duplicate bracket entry for (i,j,k)");
  }
}

int StratifiedLieAlgebra::homogeneous_dimension() const {
  int q = 0;
  for (int l = 1; l <= kappa_; ++l) q += l * layers_[l - 1];
  return q;
}

std::vector<std::pair<int, Rational>> StratifiedLieAlgebra::bracket_basis(int i, int j) const {
  std::vector<std::pair<int, Rational>> out;
  if (i == j) return out;
  bool flip = i > j;
  if (flip) std::swap(i, j);
  for (const auto& e : table_) {
    if (e.i == i && e.j == j) out.emplace_back(e.k, flip ? -e.c : e.c);
  }
  return out;
}

void StratifiedLieAlgebra::validate() const {
  // grading
  for (const auto& e : table_) {
    if (!rat_is_zero(e.c) && layer_of_[e.k] != layer_of_[e.i] + layer_of_[e.j])
      throw GradingViolation(e.i, e.j, e.k);
  }

  // Jacobi on basis triples, exact
  const Rational zero(0);
  auto basis_vec = [&](int i) {
    std::vector<Rational> v(n_, zero);
    v[i] = 1;
    return v;
  };
  for (int i = 0; i < n_; ++i) {
    auto ei = basis_vec(i);
    for (int j = i + 1; j < n_; ++j) {
      auto ej = basis_vec(j);
      auto bij = bracket(ei, ej, zero);
      for (int k = j + 1; k < n_; ++k) {
        auto ek = basis_vec(k);
        auto t1 = bracket(bij, ek, zero);
        auto t2 = bracket(bracket(ej, ek, zero), ei, zero);
        auto t3 = bracket(bracket(ek, ei, zero), ej, zero);
        for (int m = 0; m < n_; ++m) {
          Rational s = t1[m] + t2[m] + t3[m];
          if (!rat_is_zero(s))
            throw JacobiViolation(i, j, k, "component e" + std::to_string(m + 1) +
                                               " sums to " + rat_str(s));
        }
      }
    }
  }

  // generation: [V_1, V_l] must span V_{l+1}
  for (int l = 1; l < kappa_; ++l) {
    int rows = layers_[l];
    int lo = offsets_[l], hi = offsets_[l + 1];
    std::vector<std::vector<Rational>> cols;
    for (int a = offsets_[0]; a < offsets_[1]; ++a) {
      for (int b = offsets_[l - 1]; b < offsets_[l]; ++b) {
        if (l == 1 && a >= b) continue;
        std::vector<Rational> col(rows, Rational(0));
        for (const auto& [k, c] : bracket_basis(a, b)) {
          if (k >= lo && k < hi) col[k - lo] = c;
        }
        cols.push_back(std::move(col));
      }
    }
    RatMat m(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (int r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
    if (m.rank() != static_cast<std::size_t>(rows))
      throw GenerationFailure(l + 1, "[V_1, V_" + std::to_string(l) + "] has rank " +
                                         std::to_string(m.rank()) + ", expected " +
                                         std::to_string(rows));
  }
}

StratifiedLieAlgebra StratifiedLieAlgebra::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw MalformedSpec("algebra spec must be a JSON object");
  if (!j.contains("layers") || !j["layers"].is_array())
    throw MalformedSpec("algebra spec needs a 'layers' array");
  std::vector<int> layers;
  for (const auto& v : j["layers"]) {
    if (!v.is_number_integer()) throw MalformedSpec("'layers' entries must be integers");
    layers.push_back(v.get<int>());
  }
  std::vector<BracketEntry> entries;
  if (j.contains("brackets")) {
    if (!j["brackets"].is_array()) throw MalformedSpec("'brackets' must be an array");
    for (const auto& b : j["brackets"]) {
      if (!b.contains("i") || !b.contains("j") || !b.contains("coeffs"))
        throw MalformedSpec("bracket entry needs 'i', 'j', 'coeffs'");
      int i = b["i"].get<int>() - 1;
      int jj = b["j"].get<int>() - 1;
      for (const auto& [key, val] : b["coeffs"].items()) {
        int k = 0;
        try {
          k = std::stoi(key) - 1;
        } catch (...) {
          throw MalformedSpec("bad coefficient index '" + key + "'");
        }
        Rational c;
        if (val.is_string())
          c = rat_parse(val.get<std::string>());
        else if (val.is_number_integer())
          c = Rational(val.get<long>());
        else
          throw MalformedSpec("bracket coefficients must be integers or 'p/q' strings");
        if (!rat_is_zero(c)) entries.push_back({i, jj, k, c});
      }
    }
  }
  std::string name = j.value("name", std::string("algebra"));
  return StratifiedLieAlgebra(name, layers, entries);
}

nlohmann::json StratifiedLieAlgebra::to_json() const {
  nlohmann::json j;
  j["name"] = name_;
  j["layers"] = layers_;
  auto brackets = nlohmann::json::array();
  // group entries by (i, j) pair
  std::map<std::pair<int, int>, nlohmann::json> grouped;
  for (const auto& e : table_) {
    auto& obj = grouped[{e.i, e.j}];
    if (obj.is_null()) {
      obj["i"] = e.i + 1;
      obj["j"] = e.j + 1;
      obj["coeffs"] = nlohmann::json::object();
    }
    obj["coeffs"][std::to_string(e.k + 1)] = rat_str(e.c);
  }
  for (auto& [key, obj] : grouped) brackets.push_back(obj);
  j["brackets"] = brackets;
  return j;
}

}  // namespace carnot
