#include "carnot/exterior.hpp"

#include <bit>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

int mask_degree(std::uint32_t mask) { return std::popcount(mask); }

std::vector<int> mask_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

std::uint32_t full_mask(int n) { return (n == 32) ? ~0u : ((1u << n) - 1u); }

std::string mask_label(std::uint32_t mask) {
  if (!mask) return "1";
  std::ostringstream os;
  bool first = true;
  for (int i : mask_indices(mask)) {
    if (!first) os << "^";
    os << "t" << (i + 1);
    first = false;
  }
  return os.str();
}

std::vector<std::uint32_t> basis_masks(int n, int h) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 0; m <= full_mask(n); ++m) {
    if (std::popcount(m) == h) out.push_back(m);
    if (m == full_mask(n)) break;
  }
  return out;
}

int mask_position(int n, std::uint32_t mask) {
  int h = mask_degree(mask);
  int pos = 0;
  for (std::uint32_t m = 0; m < mask; ++m)
    if (std::popcount(m) == h) ++pos;
  (void)n;
  return pos;
}

int wedge_sign(std::uint32_t a, std::uint32_t b) {
  int inv = 0;
  for (int i : mask_indices(a)) inv += std::popcount(b & (full_mask(i)));
  return inv % 2 ? -1 : 1;
}

HodgeDual hodge_dual(int n, std::uint32_t mask) {
  std::uint32_t co = full_mask(n) & ~mask;
  return {co, wedge_sign(mask, co)};
}

int mask_weight(const StratifiedLieAlgebra& g, std::uint32_t mask) {
  int w = 0;
  for (int i : mask_indices(mask)) w += g.layer_of(i);
  return w;
}

std::vector<int> weights_in_degree(const StratifiedLieAlgebra& g, int h) {
  std::vector<int> out;
  for (std::uint32_t m : basis_masks(g.dim(), h)) {
    int w = mask_weight(g, m);
    bool seen = false;
    for (int x : out) seen = seen || (x == w);
    if (!seen) out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Covector Covector::basis(int n, std::uint32_t mask) {
  Covector v(n, mask_degree(mask));
  v.c_.emplace(mask, Rational(1));
  return v;
}

Rational Covector::coeff(std::uint32_t mask) const {
  auto it = c_.find(mask);
  return it == c_.end() ? Rational(0) : it->second;
}

void Covector::add(std::uint32_t mask, const Rational& c) {
  if (mask_degree(mask) != degree_) throw Error("Covector::add: degree mismatch");
  if (rat_is_zero(c)) return;
  auto it = c_.find(mask);
  if (it == c_.end()) {
    c_.emplace(mask, c);
  } else {
    it->second += c;
    if (rat_is_zero(it->second)) c_.erase(it);
  }
}

Covector Covector::operator+(const Covector& o) const {
  Covector r = *this;
  for (const auto& [m, c] : o.c_) r.add(m, c);
  return r;
}

Covector Covector::operator-(const Covector& o) const {
  Covector r = *this;
  for (const auto& [m, c] : o.c_) r.add(m, -c);
  return r;
}

Covector Covector::scaled(const Rational& s) const {
  Covector r(n_, degree_);
  if (rat_is_zero(s)) return r;
  for (const auto& [m, c] : c_) r.c_.emplace(m, c * s);
  return r;
}

Covector Covector::wedge(const Covector& o) const {
  if (degree_ + o.degree_ > n_) throw Error("wedge: degree overflow");
  Covector r(n_, degree_ + o.degree_);
  for (const auto& [ma, ca] : c_)
    for (const auto& [mb, cb] : o.c_) {
      if (ma & mb) continue;
      Rational term = ca * cb;
      if (wedge_sign(ma, mb) < 0) term = -term;
      r.add(ma | mb, term);
    }
  return r;
}

Covector Covector::hodge() const {
  Covector r(n_, n_ - degree_);
  for (const auto& [m, c] : c_) {
    HodgeDual d = hodge_dual(n_, m);
    r.add(d.mask, d.sign < 0 ? -c : c);
  }
  return r;
}

std::map<int, Covector> Covector::weight_decompose(const StratifiedLieAlgebra& g) const {
  std::map<int, Covector> out;
  for (const auto& [m, c] : c_) {
    int w = mask_weight(g, m);
    auto it = out.find(w);
    if (it == out.end()) it = out.emplace(w, Covector(n_, degree_)).first;
    it->second.add(m, c);
  }
  return out;
}

Rational Covector::inner(const Covector& o) const {
  Rational s(0);
  for (const auto& [m, c] : c_) {
    auto it = o.c_.find(m);
    if (it != o.c_.end()) s += c * it->second;
  }
  return s;
}

std::string Covector::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : c_) {
    Rational a = c;
    if (sgn(a) < 0) {
      os << (first ? "-" : " - ");
      a = -a;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    if (a != Rational(1) || !m) os << rat_str(a);
    if (m) {
      if (a != Rational(1)) os << " ";
      os << mask_label(m);
    }
  }
  return os.str();
}

Covector musical_flat(int n, const std::vector<Rational>& v) {
  Covector r(n, 1);
  for (int i = 0; i < n; ++i) r.add(1u << i, v[i]);
  return r;
}

std::vector<Rational> musical_sharp(const Covector& alpha) {
  if (alpha.degree() != 1) throw Error("musical_sharp: expects a 1-form");
  std::vector<Rational> v(alpha.n(), Rational(0));
  for (const auto& [m, c] : alpha.coeffs()) v[mask_indices(m)[0]] = c;
  return v;
}

namespace {

Polynomial poly_det(const std::vector<std::vector<Polynomial>>& a, const std::vector<int>& rows,
                    const std::vector<int>& cols, std::size_t depth, std::vector<bool>& used,
                    int nvars) {
  if (depth == rows.size()) return Polynomial::constant(Rational(1), nvars);
  Polynomial acc(nvars);
  int parity = 0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (used[c]) continue;
    used[c] = true;
    Polynomial sub = poly_det(a, rows, cols, depth + 1, used, nvars);
    used[c] = false;
    Polynomial term = a[rows[depth]][cols[c]] * sub;
    if (parity % 2) term = -term;
    acc += term;
    ++parity;
  }
  return acc;
}

}  // namespace

std::vector<std::vector<Polynomial>> wedge_minors(const std::vector<std::vector<Polynomial>>& a,
                                                  int h) {
  const int n = static_cast<int>(a.size());
  const int nvars = n == 0 ? 0 : a[0][0].nvars();
  std::vector<std::uint32_t> masks = basis_masks(n, h);
  std::vector<std::vector<Polynomial>> out(
      masks.size(), std::vector<Polynomial>(masks.size(), Polynomial(nvars)));
  for (std::size_t q = 0; q < masks.size(); ++q) {
    std::vector<int> rows = mask_indices(masks[q]);
    for (std::size_t p = 0; p < masks.size(); ++p) {
      std::vector<int> cols = mask_indices(masks[p]);
      std::vector<bool> used(cols.size(), false);
      out[q][p] = poly_det(a, rows, cols, 0, used, nvars);
    }
  }
  return out;
}

}  // namespace carnot
