#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/algebra.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/ratmat.hpp"

namespace carnot {

/// Element of the universal enveloping algebra in PBW normal form: a rational
/// combination of ordered monomials X^I = X_1^{i_1} ... X_n^{i_n}.
class OperatorPoly {
 public:
  using Mono = std::vector<unsigned>;

  OperatorPoly() = default;
  explicit OperatorPoly(int n) : n_(n) {}
  static OperatorPoly constant(const Rational& c, int n);
  static OperatorPoly generator(int j, int n);

  int generators() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Mono, Rational>& terms() const { return terms_; }

  void add_term(const Mono& m, const Rational& c);

  OperatorPoly operator+(const OperatorPoly& o) const;
  OperatorPoly operator-(const OperatorPoly& o) const;
  OperatorPoly scaled(const Rational& s) const;
  OperatorPoly& operator+=(const OperatorPoly& o);
  bool operator==(const OperatorPoly& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  /// Largest |I| over terms; -1 when zero.
  int max_iso_degree() const;

  std::string str() const;

 private:
  int n_ = 0;
  std::map<Mono, Rational> terms_;
};

inline int mono_iso_degree(const OperatorPoly::Mono& m) {
  int d = 0;
  for (unsigned e : m) d += static_cast<int>(e);
  return d;
}

int mono_hom_degree(const StratifiedLieAlgebra& g, const OperatorPoly::Mono& m);

enum class RewriteStrategy { LeftmostInnermost, Rightmost };

/// Normal-ordering engine with a per-instance memo of word reductions.
class NormalOrderContext {
 public:
  explicit NormalOrderContext(const StratifiedLieAlgebra& g,
                              RewriteStrategy strategy = RewriteStrategy::LeftmostInnermost)
      : g_(&g), strategy_(strategy) {}

  const StratifiedLieAlgebra& algebra() const { return *g_; }

  /// Canonical PBW form of coeff * X_{w_1} X_{w_2} ... (0-based indices).
  /// Rewrites X_a X_b -> X_b X_a + [X_a, X_b] on adjacent inversions until
  /// sorted; terminates since each step reduces (length, inversions)
  /// lexicographically.
  OperatorPoly normal_order(const std::vector<int>& word, const Rational& coeff) const;

  OperatorPoly mul(const OperatorPoly& a, const OperatorPoly& b) const;

 private:
  const OperatorPoly& reduce_word(const std::vector<int>& word) const;

  const StratifiedLieAlgebra* g_;
  RewriteStrategy strategy_;
  mutable std::map<std::vector<int>, OperatorPoly> memo_;
  mutable std::mutex mu_;
};

/// (X_j f)(x) = sum_k a_jk(x) d_k f with a the frame matrix.
Polynomial apply_generator(const std::vector<std::vector<Polynomial>>& frame, int j,
                           const Polynomial& f);

/// Applies a PBW element to a polynomial; within a monomial the rightmost
/// generator acts first.
Polynomial apply_operator(const std::vector<std::vector<Polynomial>>& frame,
                          const OperatorPoly& op, const Polynomial& f);

/// Matrix of operators between weight-graded form bundles.  Row r maps into
/// the target basis element of weight dst_weights[r]; column c reads the
/// source element of weight src_weights[c].
struct FormOperator {
  std::vector<int> dst_weights, src_weights;
  std::vector<std::vector<OperatorPoly>> m;  // rows x cols

  static FormOperator zero(int n, std::vector<int> dst_w, std::vector<int> src_w);
  static FormOperator identity(int n, std::vector<int> w);
  /// Order-0 operator from a constant matrix.
  static FormOperator from_matrix(const RatMat& a, int n, std::vector<int> dst_w,
                                  std::vector<int> src_w);

  std::size_t rows() const { return m.size(); }
  std::size_t cols() const { return m.empty() ? 0 : m[0].size(); }

  FormOperator operator+(const FormOperator& o) const;
  FormOperator operator-(const FormOperator& o) const;
  FormOperator scaled(const Rational& s) const;
  bool is_zero() const;
  bool operator==(const FormOperator& o) const;

  /// Largest iso degree over entries (order of the operator).
  int max_iso_degree() const;
};

/// a after b; throws on shape mismatch.
FormOperator compose(const NormalOrderContext& ctx, const FormOperator& a, const FormOperator& b);

/// Splits entries by dst_weight - src_weight; parts sum back to a.
std::map<int, FormOperator> homogeneous_parts(const FormOperator& a);

/// Every term must raise weight by its monomial's homogeneous degree:
/// d(I) == dst_weight(row) - src_weight(col).  On failure, fills detail.
bool check_graded(const StratifiedLieAlgebra& g, const FormOperator& a,
                  std::string* detail = nullptr);

nlohmann::json form_operator_to_json(const FormOperator& a);
std::string operator_poly_latex(const OperatorPoly& p);
std::string form_operator_to_latex(const FormOperator& a, const std::vector<std::string>& dst_labels,
                                   const std::vector<std::string>& src_labels);

}  // namespace carnot
