#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "carnot/algebra.hpp"
#include "carnot/exterior.hpp"
#include "carnot/opcalc.hpp"
#include "carnot/ratmat.hpp"

namespace carnot {

/// Orthogonal (deliberately non-normalized, to stay rational) basis of a
/// weight-graded subspace of Lambda^h, stored as columns in mask order.
struct WeightedBasis {
  RatMat columns;                // ambient x dim
  std::vector<int> weights;      // pure weight per column, ascending blocks
  std::vector<Rational> norms2;  // squared lengths of the columns

  std::size_t dim() const { return weights.size(); }
};

/// d0 on Lambda^h in the mask bases, from dtheta_k = -sum_{i<j} c^k_ij theta_i^theta_j
/// extended as a degree-1 derivation. Order-0 and weight-preserving.
RatMat maurer_cartan_d0(const StratifiedLieAlgebra& g, int h);

/// The de Rham differential on Lambda^h in the left-invariant coframe:
/// d(f theta_I) = sum_j (X_j f) theta_j ^ theta_I + f d0(theta_I).
FormOperator full_d(const StratifiedLieAlgebra& g, int h);

/// E0^h = ker d0 cap ker d0^*, computed weight block by weight block.
WeightedBasis e0_basis(const StratifiedLieAlgebra& g, int h);

/// Moore-Penrose pseudoinverse of d0 at degree h, Lambda^{h+1} -> Lambda^h.
/// Exact: solves the normal equation on (ker d0)^perp.
RatMat d0_pinv(const StratifiedLieAlgebra& g, int h);

/// P = sum_k (-1)^k D^k with D = d0^{-1} d - Id on R(d0^{-1}), and Q = P d0^{-1}.
/// Throws NilpotencyNotReached if D fails to vanish by step * dim powers.
std::pair<FormOperator, FormOperator> build_P_Q(const StratifiedLieAlgebra& g, int h);

/// Pi_E = Id - Q d - d Q at degree h. Verifies Pi_E^2 = Pi_E and the
/// Pi_E0 sandwich identities; throws IdentityFailure naming the first
/// violated one.
FormOperator projection_E(const StratifiedLieAlgebra& g, int h);

/// Pointwise orthogonal projection matrix onto E0^h.
RatMat projection_E0(const StratifiedLieAlgebra& g, int h);

struct DegreeData {
  int h = 0;
  RatMat d0;              // Lambda^h -> Lambda^{h+1}
  RatMat d0_pinv;         // Lambda^{h+1} -> Lambda^h
  RatMat proj_r;          // projector onto (ker d0_h)^perp
  WeightedBasis e0;       // basis Xi_0^h
  RatMat pi_e0;           // Lambda^h -> Lambda^h
  FormOperator d;         // Lambda^h -> Lambda^{h+1}; empty at h = n
  FormOperator p_op;      // Lambda^h -> Lambda^h
  FormOperator q_op;      // Lambda^{h+1} -> Lambda^h
  FormOperator pi_e;      // Lambda^h -> Lambda^h
  FormOperator dc;        // Xi_0^h -> Xi_0^{h+1}; empty at h = n
  FormOperator dc_star;   // Xi_0^h -> Xi_0^{h-1}; empty at h = 0
  RatMat hodge_xi;        // coordinates of * : Xi_0^h -> Xi_0^{n-h}
  int nilpotency = 0;     // largest k with D^k != 0
  int pi_e_order = 0;     // horizontal order s(h)
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ComplexReport {
  std::string algebra;
  std::vector<CheckResult> checks;
  std::vector<int> e0_dims;
  std::vector<int> pi_e_orders;
  std::vector<int> nilpotency;

  bool all_pass() const;
  const CheckResult* find(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// The full tower for one group, built once and immutable afterwards.
class RuminComplex {
 public:
  static RuminComplex build(const StratifiedLieAlgebra& g);

  const StratifiedLieAlgebra& algebra() const { return *g_; }
  const NormalOrderContext& ctx() const { return *ctx_; }
  int top_degree() const { return static_cast<int>(degrees_.size()) - 1; }
  const DegreeData& degree(int h) const { return degrees_.at(static_cast<std::size_t>(h)); }

  std::vector<int> e0_dims() const;

  /// Delta_{G,0} = d_c* d_c on Xi_0^0 and Delta_{G,n} = d_c d_c* on Xi_0^n.
  FormOperator laplacian0() const;
  FormOperator laplacian_top() const;

  /// Labels xi^h_1 .. xi^h_k for the Xi_0^h basis (1-based, latex-friendly).
  std::vector<std::string> xi_labels(int h, bool latex) const;

  ComplexReport verify() const;
  nlohmann::json to_json() const;

 private:
  RuminComplex() = default;

  std::shared_ptr<const StratifiedLieAlgebra> g_;
  std::shared_ptr<NormalOrderContext> ctx_;
  std::vector<DegreeData> degrees_;
};

/// Builds the complex and runs the whole identity suite.
ComplexReport verify_complex(const StratifiedLieAlgebra& g);

}  // namespace carnot
