#include "carnot/opcalc.hpp"

#include <algorithm>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

OperatorPoly OperatorPoly::constant(const Rational& c, int n) {
  OperatorPoly p(n);
  p.add_term(Mono(n, 0), c);
  return p;
}

OperatorPoly OperatorPoly::generator(int j, int n) {
  OperatorPoly p(n);
  Mono m(n, 0);
  m[j] = 1;
  p.add_term(m, Rational(1));
  return p;
}

void OperatorPoly::add_term(const Mono& m, const Rational& c) {
  if (rat_is_zero(c)) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (rat_is_zero(it->second)) terms_.erase(it);
  }
}

OperatorPoly OperatorPoly::operator+(const OperatorPoly& o) const {
  OperatorPoly p = *this;
  for (const auto& [m, c] : o.terms_) p.add_term(m, c);
  return p;
}

OperatorPoly OperatorPoly::operator-(const OperatorPoly& o) const {
  OperatorPoly p = *this;
  for (const auto& [m, c] : o.terms_) p.add_term(m, -c);
  return p;
}

OperatorPoly OperatorPoly::scaled(const Rational& s) const {
  OperatorPoly p(n_);
  if (rat_is_zero(s)) return p;
  for (const auto& [m, c] : terms_) p.terms_.emplace(m, c * s);
  return p;
}

OperatorPoly& OperatorPoly::operator+=(const OperatorPoly& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

int OperatorPoly::max_iso_degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    (void)c;
    d = std::max(d, mono_iso_degree(m));
  }
  return d;
}

std::string OperatorPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational a = c;
    if (sgn(a) < 0) {
      os << (first ? "-" : " - ");
      a = -a;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    bool has_gen = mono_iso_degree(m) > 0;
    bool printed = false;
    if (!has_gen || a != Rational(1)) {
      os << rat_str(a);
      printed = true;
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!m[j]) continue;
      if (printed) os << " ";
      os << "X" << (j + 1);
      if (m[j] > 1) os << "^" << m[j];
      printed = true;
    }
  }
  return os.str();
}

int mono_hom_degree(const StratifiedLieAlgebra& g, const OperatorPoly::Mono& m) {
  int d = 0;
  for (std::size_t j = 0; j < m.size(); ++j) d += g.layer_of(static_cast<int>(j)) * static_cast<int>(m[j]);
  return d;
}

const OperatorPoly& NormalOrderContext::reduce_word(const std::vector<int>& word) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
  }

  const int n = g_->dim();
  int redex = -1;
  if (strategy_ == RewriteStrategy::LeftmostInnermost) {
    for (std::size_t p = 0; p + 1 < word.size(); ++p)
      if (word[p] > word[p + 1]) {
        redex = static_cast<int>(p);
        break;
      }
  } else {
    for (std::size_t p = word.size(); p-- > 1;)
      if (word[p - 1] > word[p]) {
        redex = static_cast<int>(p - 1);
        break;
      }
  }

  OperatorPoly out(n);
  if (redex < 0) {
    OperatorPoly::Mono mono(n, 0);
    for (int j : word) mono[j] += 1;
    out.add_term(mono, Rational(1));
  } else {
    // X_a X_b -> X_b X_a + [X_a, X_b]
    std::vector<int> swapped = word;
    std::swap(swapped[redex], swapped[redex + 1]);
    out += reduce_word(swapped);
    std::vector<int> shorter;
    shorter.reserve(word.size() - 1);
    shorter.insert(shorter.end(), word.begin(), word.begin() + redex);
    shorter.push_back(0);  // placeholder
    shorter.insert(shorter.end(), word.begin() + redex + 2, word.end());
    for (const auto& [k, c] : g_->bracket_basis(word[redex], word[redex + 1])) {
      shorter[redex] = k;
      out += reduce_word(shorter).scaled(c);
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  return memo_.emplace(word, std::move(out)).first->second;
}

OperatorPoly NormalOrderContext::normal_order(const std::vector<int>& word,
                                              const Rational& coeff) const {
  for (int j : word)
    if (j < 0 || j >= g_->dim()) throw Error("normal_order: generator index out of range");
  return reduce_word(word).scaled(coeff);
}

OperatorPoly NormalOrderContext::mul(const OperatorPoly& a, const OperatorPoly& b) const {
  OperatorPoly out(g_->dim());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      std::vector<int> word;
      for (std::size_t j = 0; j < ma.size(); ++j)
        word.insert(word.end(), ma[j], static_cast<int>(j));
      for (std::size_t j = 0; j < mb.size(); ++j)
        word.insert(word.end(), mb[j], static_cast<int>(j));
      out += reduce_word(word).scaled(ca * cb);
    }
  }
  return out;
}

Polynomial apply_generator(const std::vector<std::vector<Polynomial>>& frame, int j,
                           const Polynomial& f) {
  Polynomial out(f.nvars());
  for (std::size_t k = 0; k < frame.size(); ++k)
    out += frame[j][k] * f.derivative(static_cast<int>(k));
  return out;
}

Polynomial apply_operator(const std::vector<std::vector<Polynomial>>& frame,
                          const OperatorPoly& op, const Polynomial& f) {
  Polynomial out(f.nvars());
  for (const auto& [m, c] : op.terms()) {
    Polynomial acc = f;
    for (int j = static_cast<int>(m.size()); j-- > 0;)
      for (unsigned rep = 0; rep < m[j]; ++rep) acc = apply_generator(frame, j, acc);
    out += acc.scaled(c);
  }
  return out;
}

FormOperator FormOperator::zero(int n, std::vector<int> dst_w, std::vector<int> src_w) {
  FormOperator a;
  a.dst_weights = std::move(dst_w);
  a.src_weights = std::move(src_w);
  a.m.assign(a.dst_weights.size(),
             std::vector<OperatorPoly>(a.src_weights.size(), OperatorPoly(n)));
  return a;
}

FormOperator FormOperator::identity(int n, std::vector<int> w) {
  FormOperator a = zero(n, w, w);
  for (std::size_t i = 0; i < a.rows(); ++i) a.m[i][i] = OperatorPoly::constant(Rational(1), n);
  return a;
}

FormOperator FormOperator::from_matrix(const RatMat& mat, int n, std::vector<int> dst_w,
                                       std::vector<int> src_w) {
  if (mat.rows() != dst_w.size() || mat.cols() != src_w.size())
    throw Error("FormOperator::from_matrix: shape mismatch");
  FormOperator a = zero(n, std::move(dst_w), std::move(src_w));
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!rat_is_zero(mat.at(r, c))) a.m[r][c] = OperatorPoly::constant(mat.at(r, c), n);
  return a;
}

FormOperator FormOperator::operator+(const FormOperator& o) const {
  if (rows() != o.rows() || cols() != o.cols()) throw Error("FormOperator +: shape mismatch");
  FormOperator a = *this;
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) a.m[r][c] += o.m[r][c];
  return a;
}

FormOperator FormOperator::operator-(const FormOperator& o) const {
  return *this + o.scaled(Rational(-1));
}

FormOperator FormOperator::scaled(const Rational& s) const {
  FormOperator a = *this;
  for (auto& row : a.m)
    for (auto& e : row) e = e.scaled(s);
  return a;
}

bool FormOperator::is_zero() const {
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) return false;
  return true;
}

bool FormOperator::operator==(const FormOperator& o) const {
  if (rows() != o.rows() || cols() != o.cols()) return false;
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c)
      if (!(m[r][c] == o.m[r][c])) return false;
  return true;
}

int FormOperator::max_iso_degree() const {
  int d = -1;
  for (const auto& row : m)
    for (const auto& e : row) d = std::max(d, e.max_iso_degree());
  return d;
}

FormOperator compose(const NormalOrderContext& ctx, const FormOperator& a, const FormOperator& b) {
  if (a.cols() != b.rows()) throw Error("compose: shape mismatch");
  FormOperator out = FormOperator::zero(ctx.algebra().dim(), a.dst_weights, b.src_weights);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c)
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a.m[r][k].is_zero() || b.m[k][c].is_zero()) continue;
        out.m[r][c] += ctx.mul(a.m[r][k], b.m[k][c]);
      }
  return out;
}

std::map<int, FormOperator> homogeneous_parts(const FormOperator& a) {
  std::map<int, FormOperator> parts;
  int n = 0;
  for (const auto& row : a.m)
    for (const auto& e : row) n = std::max(n, e.generators());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a.m[r][c].is_zero()) continue;
      int key = a.dst_weights[r] - a.src_weights[c];
      auto it = parts.find(key);
      if (it == parts.end())
        it = parts.emplace(key, FormOperator::zero(n, a.dst_weights, a.src_weights)).first;
      it->second.m[r][c] = a.m[r][c];
    }
  return parts;
}

bool check_graded(const StratifiedLieAlgebra& g, const FormOperator& a, std::string* detail) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      for (const auto& [mono, coeff] : a.m[r][c].terms()) {
        (void)coeff;
        int expect = a.dst_weights[r] - a.src_weights[c];
        if (mono_hom_degree(g, mono) != expect) {
          if (detail) {
            std::ostringstream os;
            os << "entry (" << r << "," << c << ") term " << a.m[r][c].str()
               << " has d(I) != " << expect;
            *detail = os.str();
          }
          return false;
        }
      }
  return true;
}

nlohmann::json form_operator_to_json(const FormOperator& a) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a.m[r][c].is_zero()) continue;
      nlohmann::json terms = nlohmann::json::array();
      for (const auto& [mono, coeff] : a.m[r][c].terms())
        terms.push_back({{"coeff", rat_str(coeff)}, {"monomial", mono}});
      entries.push_back({{"row", r}, {"col", c}, {"terms", terms}});
    }
  return {{"rows", a.rows()},
          {"cols", a.cols()},
          {"dst_weights", a.dst_weights},
          {"src_weights", a.src_weights},
          {"entries", entries}};
}

std::string operator_poly_latex(const OperatorPoly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Rational a = c;
    if (sgn(a) < 0) {
      os << (first ? "-" : " - ");
      a = -a;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    bool has_gen = mono_iso_degree(m) > 0;
    if (!has_gen || a != Rational(1)) {
      if (a.get_den() == 1) {
        os << a.get_num().get_str();
      } else {
        os << "\\tfrac{" << a.get_num().get_str() << "}{" << a.get_den().get_str() << "}";
      }
      if (has_gen) os << " ";
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (!m[j]) continue;
      os << "X_{" << (j + 1) << "}";
      if (m[j] > 1) os << "^{" << m[j] << "}";
    }
  }
  return os.str();
}

std::string form_operator_to_latex(const FormOperator& a, const std::vector<std::string>& dst_labels,
                                   const std::vector<std::string>& src_labels) {
  std::ostringstream os;
  os << "\\begin{array}{l}\n";
  for (std::size_t c = 0; c < a.cols(); ++c) {
    os << src_labels[c] << " \\mapsto ";
    bool any = false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (a.m[r][c].is_zero()) continue;
      if (any) os << " + ";
      os << "\\left(" << operator_poly_latex(a.m[r][c]) << "\\right) " << dst_labels[r];
      any = true;
    }
    if (!any) os << "0";
    os << " \\\\\n";
  }
  os << "\\end{array}";
  return os.str();
}

}  // namespace carnot
