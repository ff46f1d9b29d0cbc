#include "carnot/polynomial.hpp"

#include <cmath>
#include <sstream>

#include "carnot/errors.hpp"

namespace carnot {

Polynomial Polynomial::constant(const Rational& c, int nvars) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int i, int nvars) {
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e[i] = 1;
  p.add_term(e, Rational(1));
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first == Exponents(nvars_, 0);
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (rat_is_zero(c)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (rat_is_zero(it->second)) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial p = *this;
  for (const auto& [e, c] : o.terms_) p.add_term(e, c);
  return p;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial p = *this;
  for (const auto& [e, c] : o.terms_) p.add_term(e, -c);
  return p;
}

Polynomial Polynomial::operator-() const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_) p.terms_.emplace(e, -c);
  return p;
}

Polynomial Polynomial::scaled(const Rational& s) const {
  Polynomial p(nvars_);
  if (rat_is_zero(s)) return p;
  for (const auto& [e, c] : terms_) p.terms_.emplace(e, c * s);
  return p;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial p(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = ea[i] + eb[i];
      p.add_term(e, ca * cb);
    }
  }
  return p;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    d[i] -= 1;
    p.add_term(d, c * Rational(static_cast<long>(e[i])));
  }
  return p;
}

Rational Polynomial::eval(const std::vector<Rational>& x) const {
  Rational out(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t *= rat_pow(x[i], e[i]);
    out += t;
  }
  return out;
}

double Polynomial::eval_double(const std::vector<double>& x) const {
  double out = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = rat_double(c);
    for (int i = 0; i < nvars_; ++i)
      for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
    out += t;
  }
  return out;
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Exponents(nvars_, 0));
  return it == terms_.end() ? Rational(0) : it->second;
}

bool Polynomial::is_weighted_homogeneous(const std::vector<int>& w, int target) const {
  for (const auto& [e, c] : terms_) {
    (void)c;
    int deg = 0;
    for (int i = 0; i < nvars_; ++i) deg += w[i] * static_cast<int>(e[i]);
    if (deg != target) return false;
  }
  return true;
}

int Polynomial::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    (void)c;
    int d = 0;
    for (unsigned k : e) d += static_cast<int>(k);
    if (d > deg) deg = d;
  }
  return deg;
}

std::string Polynomial::str(const std::string& varname) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = c;
    if (sgn(a) < 0) {
      os << (first ? "-" : " - ");
      a = -a;
    } else if (!first) {
      os << " + ";
    }
    first = false;
    bool has_var = false;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) has_var = true;
    if (!has_var || a != Rational(1)) os << rat_str(a);
    bool printed = !has_var || a != Rational(1);
    for (int i = 0; i < nvars_; ++i) {
      if (!e[i]) continue;
      if (printed) os << " ";
      os << varname << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      printed = true;
    }
  }
  return os.str();
}

}  // namespace carnot
