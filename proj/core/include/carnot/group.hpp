#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/algebra.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// Dynkin expansion of log(exp(x) exp(y)) as rational coefficients on words
/// over {x, y}, each word standing for its right-nested bracket
/// [w_1, [w_2, [... w_m]]].  Words with coefficient zero are dropped and the
/// list is ordered by word length.
struct BchExpansion {
  struct Term {
    std::string word;
    Rational coeff;
  };
  std::vector<Term> terms;

  static const BchExpansion& up_to(int max_len);
};

/// Coefficient of `word` in the Dynkin series (sum over block decompositions
/// x^{r_1} y^{s_1} ... x^{r_n} y^{s_n} of (-1)^{n-1} / (n m prod r_i! s_i!)).
Rational dynkin_coefficient(const std::string& word);

template <class S>
std::vector<S> nested_bracket(const StratifiedLieAlgebra& g, const std::string& word,
                              const std::vector<S>& u, const std::vector<S>& v, const S& zero) {
  std::vector<S> acc = word.back() == 'x' ? u : v;
  for (int i = static_cast<int>(word.size()) - 2; i >= 0; --i)
    acc = g.bracket(word[i] == 'x' ? u : v, acc, zero);
  return acc;
}

/// log(exp(u) exp(v)) in exponential coordinates.  Exact: the series
/// truncates at the step of the algebra.
template <class S>
std::vector<S> bch_product(const StratifiedLieAlgebra& g, const std::vector<S>& u,
                           const std::vector<S>& v, const S& zero) {
  const BchExpansion& ex = BchExpansion::up_to(g.step());
  std::vector<S> out(static_cast<std::size_t>(g.dim()), zero);
  for (const auto& t : ex.terms) {
    if (static_cast<int>(t.word.size()) > g.step()) break;
    std::vector<S> b = nested_bracket(g, t.word, u, v, zero);
    for (int k = 0; k < g.dim(); ++k) out[k] += scale_by(b[k], t.coeff);
  }
  return out;
}

inline std::vector<double> group_mul(const StratifiedLieAlgebra& g, const std::vector<double>& p,
                                     const std::vector<double>& q) {
  return bch_product(g, p, q, 0.0);
}

inline std::vector<Rational> group_mul_exact(const StratifiedLieAlgebra& g,
                                             const std::vector<Rational>& p,
                                             const std::vector<Rational>& q) {
  return bch_product(g, p, q, Rational(0));
}

template <class S>
std::vector<S> group_inverse(const std::vector<S>& p) {
  std::vector<S> out = p;
  for (auto& c : out) c = -c;
  return out;
}

/// Anisotropic dilation: coordinate j scales by s^{d_j}.
std::vector<double> dilate(const StratifiedLieAlgebra& g, double s, const std::vector<double>& p);
std::vector<Rational> dilate(const StratifiedLieAlgebra& g, const Rational& s,
                             const std::vector<Rational>& p);

/// Coordinate k of p * q as a polynomial in x_1..x_n (p) and x_{n+1}..x_{2n} (q).
std::vector<Polynomial> group_law_polynomials(const StratifiedLieAlgebra& g);

/// Left-invariant frame: X_j = sum_k a[j][k](x) d/dx_k with
/// a[j][k](x) = d/dy_j (x . y)_k at y = 0.  Polynomials in x_1..x_n.
std::vector<std::vector<Polynomial>> frame_fields(const StratifiedLieAlgebra& g);

/// Numeric frame matrix A[j][k] = a_{jk}(p).
std::vector<std::vector<double>> frame_matrix_at(const std::vector<std::vector<Polynomial>>& frame,
                                                 const std::vector<double>& p);

/// Homogeneous quasinorm |x| = max_j eps_j |x^{(j)}|_2^{1/j} with eps_1 = 1.
struct NormConfig {
  std::vector<double> eps;

  nlohmann::json to_json() const;
  static NormConfig from_json(const nlohmann::json& j);
};

double norm_inf(const StratifiedLieAlgebra& g, const NormConfig& cfg, const std::vector<double>& p);

/// Norm of the projection to the quotient by layers > top_layer.
double norm_inf_partial(const StratifiedLieAlgebra& g, const NormConfig& cfg,
                        const std::vector<double>& p, int top_layer);

inline double group_dist(const StratifiedLieAlgebra& g, const NormConfig& cfg,
                         const std::vector<double>& p, const std::vector<double>& q) {
  return norm_inf(g, cfg, group_mul(g, group_inverse(p), q));
}

struct NormCalibration {
  std::string algebra;
  NormConfig config;
  long samples_per_layer = 0;
  std::uint64_t seed = 0;
  double max_ratio = 0.0;  // worst |uv| / (|u| + |v|) seen at the accepted eps

  nlohmann::json to_json() const;
};

struct NormCheck {
  long samples = 0;
  long triangle_violations = 0;
  double max_ratio = 0.0;
  double max_homogeneity_err = 0.0;  // relative
  double max_symmetry_err = 0.0;     // relative
};

/// Per-layer descending grid search for the largest eps making the triangle
/// inequality hold on randomized samples.  Layers are calibrated bottom-up;
/// the partial norms tested at layer L are the quotient-group norms, so the
/// accepted prefix stays valid.  Throws CalibrationFailure when a layer has
/// no admissible candidate.
NormCalibration calibrate_norm(const StratifiedLieAlgebra& g, long samples_per_layer,
                               std::uint64_t seed);

NormCheck verify_norm(const StratifiedLieAlgebra& g, const NormConfig& cfg, long samples,
                      std::uint64_t seed);

}  // namespace carnot
