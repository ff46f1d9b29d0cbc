#pragma once

#include <string>
#include <utility>
#include <vector>

#include "carnot/polynomial.hpp"
#include "carnot/rational.hpp"

#include <json.hpp>

namespace carnot {

inline double scale_by(const double& s, const Rational& c) { return s * rat_double(c); }
inline Rational scale_by(const Rational& s, const Rational& c) { return s * c; }
inline Polynomial scale_by(const Polynomial& s, const Rational& c) { return s.scaled(c); }

/// Stratified (Carnot) Lie algebra in an adapted basis e_1..e_n.
/// Structure constants are stored sparsely for i < j; [e_j, e_i] follows by
/// antisymmetry and all unlisted brackets vanish.
class StratifiedLieAlgebra {
 public:
  struct BracketEntry {
    int i, j, k;  // 0-based, i < j
    Rational c;
  };

  StratifiedLieAlgebra() = default;
  StratifiedLieAlgebra(std::string name, std::vector<int> layers, std::vector<BracketEntry> entries);

  const std::string& name() const { return name_; }
  const std::vector<int>& layers() const { return layers_; }
  int dim() const { return n_; }
  int step() const { return kappa_; }

  /// Homogeneity d_j of the basis direction j (0-based), values in 1..step().
  int layer_of(int j) const { return layer_of_[j]; }
  const std::vector<int>& homogeneities() const { return layer_of_; }

  /// First index of layer l (1-based layer), i.e. h_{l-1} in 0-based indexing.
  int layer_begin(int l) const { return offsets_[l - 1]; }
  int layer_end(int l) const { return offsets_[l]; }

  int homogeneous_dimension() const;

  const std::vector<BracketEntry>& bracket_table() const { return table_; }

  /// [e_i, e_j] for arbitrary i, j as a sparse list of (k, coefficient).
  std::vector<std::pair<int, Rational>> bracket_basis(int i, int j) const;

  /// Bilinear bracket of coefficient vectors over any scalar ring
  /// (Rational, double, Polynomial). `zero` supplies the ring's zero.
  template <class S>
  std::vector<S> bracket(const std::vector<S>& u, const std::vector<S>& v, const S& zero) const {
    std::vector<S> out(static_cast<std::size_t>(n_), zero);
    for (const auto& e : table_) {
      S term = u[e.i] * v[e.j] - u[e.j] * v[e.i];
      out[e.k] += scale_by(term, e.c);
    }
    return out;
  }

  /// Structural validation: grading, Jacobi, generation of each layer by
  /// [V_1, V_i]. Throws the matching typed error.
  void validate() const;

  static StratifiedLieAlgebra from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  void index_layers();

  std::string name_;
  std::vector<int> layers_;
  std::vector<BracketEntry> table_;
  std::vector<int> layer_of_;
  std::vector<int> offsets_;
  int n_ = 0;
  int kappa_ = 0;
};

}  // namespace carnot
