#include "carnot/ratmat.hpp"

#include "carnot/errors.hpp"

namespace carnot {

RatMat RatMat::identity(std::size_t n) {
  RatMat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::transpose() const {
  RatMat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

RatMat RatMat::operator*(const RatMat& o) const {
  if (cols_ != o.rows_) throw Error("RatMat multiply: shape mismatch");
  RatMat m(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& x = at(r, k);
      if (rat_is_zero(x)) continue;
      for (std::size_t c = 0; c < o.cols_; ++c) m.at(r, c) += x * o.at(k, c);
    }
  return m;
}

RatMat RatMat::operator+(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("RatMat add: shape mismatch");
  RatMat m(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
  return m;
}

RatMat RatMat::operator-(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("RatMat sub: shape mismatch");
  RatMat m(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
  return m;
}

RatMat RatMat::scaled(const Rational& s) const {
  RatMat m(rows_, cols_);
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] * s;
  return m;
}

bool RatMat::operator==(const RatMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (a_[i] != o.a_[i]) return false;
  return true;
}

bool RatMat::is_zero() const {
  for (const auto& x : a_)
    if (!rat_is_zero(x)) return false;
  return true;
}

std::vector<Rational> RatMat::apply(const std::vector<Rational>& v) const {
  if (v.size() != cols_) throw Error("RatMat apply: size mismatch");
  std::vector<Rational> out(rows_, Rational(0));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (!rat_is_zero(at(r, c))) out[r] += at(r, c) * v[c];
  return out;
}

std::vector<std::size_t> RatMat::rref() {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
    std::size_t sel = row;
    while (sel < rows_ && rat_is_zero(at(sel, col))) ++sel;
    if (sel == rows_) continue;
    if (sel != row)
      for (std::size_t c = 0; c < cols_; ++c) std::swap(at(sel, c), at(row, c));
    Rational inv = 1 / at(row, col);
    for (std::size_t c = col; c < cols_; ++c) at(row, c) *= inv;
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == row || rat_is_zero(at(r, col))) continue;
      Rational f = at(r, col);
      for (std::size_t c = col; c < cols_; ++c) at(r, c) -= f * at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t RatMat::rank() const {
  RatMat m = *this;
  return m.rref().size();
}

RatMat RatMat::kernel() const {
  RatMat m = *this;
  std::vector<std::size_t> pivots = m.rref();
  std::vector<bool> is_pivot(cols_, false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!is_pivot[c]) free_cols.push_back(c);

  RatMat k(cols_, free_cols.size());
  for (std::size_t fi = 0; fi < free_cols.size(); ++fi) {
    std::size_t fc = free_cols[fi];
    k.at(fc, fi) = 1;
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) k.at(pivots[pi], fi) = -m.at(pi, fc);
  }
  return k;
}

RatMat RatMat::row_space_basis() const {
  RatMat m = *this;
  std::size_t r = m.rref().size();
  RatMat b(cols_, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < cols_; ++c) b.at(c, i) = m.at(i, c);
  return b;
}

RatMat RatMat::inverse() const {
  if (rows_ != cols_) throw Error("RatMat inverse: not square");
  RatMat aug = hcat(identity(rows_));
  std::vector<std::size_t> pivots = aug.rref();
  if (pivots.size() != rows_ || (rows_ > 0 && pivots.back() >= cols_))
    throw IdentityError("RatMat inverse: singular matrix");
  RatMat inv(rows_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < rows_; ++c) inv.at(r, c) = aug.at(r, cols_ + c);
  return inv;
}

RatMat RatMat::column_space_projector(const RatMat& b, std::size_t ambient_dim) {
  if (b.cols() == 0) return RatMat(ambient_dim, ambient_dim);
  if (b.rows() != ambient_dim) throw Error("column_space_projector: ambient mismatch");
  RatMat bt = b.transpose();
  RatMat g = bt * b;
  return b * g.inverse() * bt;
}

RatMat RatMat::gram_schmidt_columns(std::vector<Rational>& norms2) const {
  RatMat q = *this;
  norms2.assign(cols_, Rational(0));
  for (std::size_t c = 0; c < cols_; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      if (rat_is_zero(norms2[prev])) continue;
      Rational dot(0);
      for (std::size_t r = 0; r < rows_; ++r) dot += q.at(r, c) * q.at(r, prev);
      if (rat_is_zero(dot)) continue;
      Rational f = dot / norms2[prev];
      for (std::size_t r = 0; r < rows_; ++r) q.at(r, c) -= f * q.at(r, prev);
    }
    Rational n2(0);
    for (std::size_t r = 0; r < rows_; ++r) n2 += q.at(r, c) * q.at(r, c);
    norms2[c] = n2;
  }
  return q;
}

RatMat RatMat::hcat(const RatMat& o) const {
  if (rows_ != o.rows_) throw Error("hcat: row mismatch");
  RatMat m(rows_, cols_ + o.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m.at(r, c) = at(r, c);
    for (std::size_t c = 0; c < o.cols_; ++c) m.at(r, cols_ + c) = o.at(r, c);
  }
  return m;
}

RatMat RatMat::vcat(const RatMat& o) const {
  if (cols_ != o.cols_) throw Error("vcat: col mismatch");
  RatMat m(rows_ + o.rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m.at(r, c) = at(r, c);
  for (std::size_t r = 0; r < o.rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m.at(rows_ + r, c) = o.at(r, c);
  return m;
}

std::size_t RatMat::col_count_nonzero(std::size_t c) const {
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows_; ++r)
    if (!rat_is_zero(at(r, c))) ++k;
  return k;
}

std::vector<Rational> rat_solve(const RatMat& a, const std::vector<Rational>& b) {
  if (b.size() != a.rows()) throw Error("rat_solve: size mismatch");
  RatMat rhs(a.rows(), 1);
  for (std::size_t r = 0; r < a.rows(); ++r) rhs.at(r, 0) = b[r];
  RatMat aug = a.hcat(rhs);
  std::vector<std::size_t> pivots = aug.rref();
  for (std::size_t p : pivots)
    if (p == a.cols()) throw IdentityError("rat_solve: inconsistent system");
  std::vector<Rational> x(a.cols(), Rational(0));
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = aug.at(i, a.cols());
  return x;
}

}  // namespace carnot
