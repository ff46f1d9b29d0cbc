#pragma once

#include <map>
#include <string>
#include <vector>

#include "carnot/rational.hpp"

namespace carnot {

/// Sparse multivariate polynomial with rational coefficients.
/// Monomial keys are exponent vectors of fixed length nvars.
class Polynomial {
 public:
  using Exponents = std::vector<unsigned>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(const Rational& c, int nvars);
  static Polynomial variable(int i, int nvars);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  const std::map<Exponents, Rational>& terms() const { return terms_; }

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial scaled(const Rational& s) const;
  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  Polynomial& operator+=(const Polynomial& o) { *this = *this + o; return *this; }

  /// Partial derivative with respect to variable i.
  Polynomial derivative(int i) const;

  Rational eval(const std::vector<Rational>& x) const;
  double eval_double(const std::vector<double>& x) const;

  /// Constant term (coefficient of the zero monomial).
  Rational constant_term() const;

  /// True when every monomial has the same weighted degree `target`
  /// with variable i carrying weight w[i]. Zero polynomial passes.
  bool is_weighted_homogeneous(const std::vector<int>& w, int target) const;

  int total_degree() const;

  /// Plain text like "1/2 x1^2 x3 - x2".
  std::string str(const std::string& varname = "x") const;

  void add_term(const Exponents& e, const Rational& c);

 private:
  int nvars_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace carnot
