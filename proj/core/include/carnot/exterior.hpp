#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "carnot/algebra.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/ratmat.hpp"

namespace carnot {

/// Basis elements of Lambda^h(g*) are bitmasks over the covectors
/// theta_1..theta_n (bit i-1 for theta_i).

int mask_degree(std::uint32_t mask);
std::vector<int> mask_indices(std::uint32_t mask);  // ascending, 0-based
std::uint32_t full_mask(int n);

/// "t1^t3" style label; "1" for the empty mask.
std::string mask_label(std::uint32_t mask);

/// All degree-h masks in ascending numeric order.
std::vector<std::uint32_t> basis_masks(int n, int h);

/// Position of mask within basis_masks(n, mask_degree(mask)).
int mask_position(int n, std::uint32_t mask);

/// Sign of theta_A ^ theta_B against the sorted element theta_{A u B}:
/// (-1)^{#{(i,j) in A x B with i > j}}. A, B must be disjoint.
int wedge_sign(std::uint32_t a, std::uint32_t b);

/// *theta_I = sign theta_{I^c}, sign counting couples between I and I^c.
struct HodgeDual {
  std::uint32_t mask;
  int sign;
};
HodgeDual hodge_dual(int n, std::uint32_t mask);

/// w(theta_I) = sum of the homogeneities of the indices in I.
int mask_weight(const StratifiedLieAlgebra& g, std::uint32_t mask);

/// Distinct weights occurring in degree h, ascending.
std::vector<int> weights_in_degree(const StratifiedLieAlgebra& g, int h);

/// Sparse exterior element with rational coefficients.
class Covector {
 public:
  Covector() = default;
  Covector(int n, int degree) : n_(n), degree_(degree) {}
  static Covector basis(int n, std::uint32_t mask);

  int n() const { return n_; }
  int degree() const { return degree_; }
  bool is_zero() const { return c_.empty(); }
  const std::map<std::uint32_t, Rational>& coeffs() const { return c_; }
  Rational coeff(std::uint32_t mask) const;

  void add(std::uint32_t mask, const Rational& c);

  Covector operator+(const Covector& o) const;
  Covector operator-(const Covector& o) const;
  Covector scaled(const Rational& s) const;
  bool operator==(const Covector& o) const { return n_ == o.n_ && degree_ == o.degree_ && c_ == o.c_; }

  Covector wedge(const Covector& o) const;
  Covector hodge() const;

  /// Components of pure weight; zero components omitted.
  std::map<int, Covector> weight_decompose(const StratifiedLieAlgebra& g) const;

  /// Scalar product making the theta_I orthonormal.
  Rational inner(const Covector& o) const;

  std::string str() const;

 private:
  int n_ = 0;
  int degree_ = 0;
  std::map<std::uint32_t, Rational> c_;
};

/// Musical isomorphisms in the adapted orthonormal bases are the
/// coordinate-identity maps between vectors and 1-forms.
Covector musical_flat(int n, const std::vector<Rational>& v);
std::vector<Rational> musical_sharp(const Covector& alpha);

/// Degree-h minors of a square polynomial matrix a: entry [q][p] is
/// det(a[j][k]) over rows j in basis_masks(n,h)[q], columns k in
/// basis_masks(n,h)[p].  With a the frame matrix (rows X_j = sum_k a_jk d_k)
/// this gives the coframe change dx_I = sum_J minors[J][I] theta_J.
std::vector<std::vector<Polynomial>> wedge_minors(const std::vector<std::vector<Polynomial>>& a,
                                                  int h);

}  // namespace carnot
