#pragma once

#include <cstddef>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Dense matrix over the rationals. Everything here is exact; sizes stay tiny
/// (exterior algebra dimensions), so no attempt at sparsity is made.
class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

  static RatMat identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Rational& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  RatMat transpose() const;
  RatMat operator*(const RatMat& o) const;
  RatMat operator+(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  RatMat scaled(const Rational& s) const;
  bool operator==(const RatMat& o) const;
  bool is_zero() const;

  std::vector<Rational> apply(const std::vector<Rational>& v) const;

  /// In-place reduced row echelon form; returns pivot column indices.
  std::vector<std::size_t> rref();

  std::size_t rank() const;

  /// Columns form a basis of the nullspace \{v : A v = 0\}.
  RatMat kernel() const;

  /// Columns form a basis of the row space (orthogonal complement of the kernel).
  RatMat row_space_basis() const;

  /// Exact inverse; throws IdentityError if singular.
  RatMat inverse() const;

  /// Orthogonal projector onto the column span: B (B^T B)^{-1} B^T.
  /// Columns must be linearly independent. Empty B yields the zero projector.
  static RatMat column_space_projector(const RatMat& b, std::size_t ambient_dim);

  /// Gram-Schmidt on columns without normalization (stays rational).
  /// Returns the orthogonalized matrix; squared lengths land in norms2.
  RatMat gram_schmidt_columns(std::vector<Rational>& norms2) const;

  /// Horizontal concatenation of columns [this | o].
  RatMat hcat(const RatMat& o) const;

  /// Vertical stack [this; o].
  RatMat vcat(const RatMat& o) const;

  std::size_t col_count_nonzero(std::size_t c) const;

 private:
  std::size_t rows_, cols_;
  std::vector<Rational> a_;
};

/// Solve A x = b exactly; throws IdentityError when inconsistent.
std::vector<Rational> rat_solve(const RatMat& a, const std::vector<Rational>& b);

}  // namespace carnot
