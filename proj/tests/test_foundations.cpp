#include <doctest.h>

#include "carnot/errors.hpp"
#include "carnot/polynomial.hpp"
#include "carnot/ratmat.hpp"
#include "carnot/rational.hpp"

using namespace carnot;

TEST_CASE("rational parse and canonical form") {
  CHECK(rat_str(rat_parse("2/4")) == "1/2");
  CHECK(rat_str(rat_parse("-6/3")) == "-2");
  CHECK(rat_str(rat_parse("0/7")) == "0");
  CHECK(rat_parse("7") == Rational(7));
  CHECK_THROWS_AS(rat_parse("1/0"), MalformedSpec);
  CHECK_THROWS_AS(rat_parse("a/b"), MalformedSpec);
  CHECK_THROWS_AS(rat_parse(""), MalformedSpec);
  CHECK_THROWS_AS(rat_parse("1.5"), MalformedSpec);
}

TEST_CASE("rational pow") {
  CHECK(rat_pow(Rational(2, 3), 0) == Rational(1));
  CHECK(rat_pow(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(rat_pow(Rational(-1, 2), 5) == Rational(-1, 32));
}

namespace {

RatMat mat(int r, int c, std::initializer_list<long> vals) {
  RatMat m(r, c);
  auto it = vals.begin();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m.at(i, j) = Rational(*it++);
  return m;
}

}  // namespace

TEST_CASE("rref, rank and kernel agree with hand examples") {
  RatMat a = mat(3, 4, {1, 2, 0, 1,  //
                        2, 4, 1, 0,  //
                        3, 6, 1, 1});
  CHECK(a.rank() == 2);
  RatMat ker = a.kernel();
  CHECK(ker.cols() == 2);
  // every kernel column is annihilated
  for (int c = 0; c < ker.cols(); ++c) {
    std::vector<Rational> v(4, Rational(0));
    for (int i = 0; i < 4; ++i) v[i] = ker.at(i, c);
    for (const Rational& x : a.apply(v)) CHECK(rat_is_zero(x));
  }
}

TEST_CASE("inverse and solve") {
  RatMat a = mat(3, 3, {2, 1, 0,  //
                        1, 3, 1,  //
                        0, 1, 1});
  RatMat inv = a.inverse();
  CHECK(a * inv == RatMat::identity(3));
  CHECK(inv * a == RatMat::identity(3));

  std::vector<Rational> b = {Rational(1), Rational(0), Rational(2)};
  std::vector<Rational> x = rat_solve(a, b);
  std::vector<Rational> ax = a.apply(x);
  for (int i = 0; i < 3; ++i) CHECK(ax[i] == b[i]);

  RatMat sing = mat(2, 2, {1, 2, 2, 4});
  CHECK_THROWS_AS(sing.inverse(), IdentityError);
  std::vector<Rational> bad = {Rational(1), Rational(3)};
  CHECK_THROWS_AS(rat_solve(sing, bad), IdentityError);
}

TEST_CASE("column space projector is an exact orthogonal projector") {
  RatMat b = mat(4, 2, {1, 1,  //
                        0, 1,  //
                        1, 0,  //
                        0, 2});
  RatMat p = RatMat::column_space_projector(b, 4);
  CHECK(p * p == p);
  CHECK(p.transpose() == p);
  // fixes the columns of b
  CHECK(p * b == b);
  RatMat p0 = RatMat::column_space_projector(RatMat(4, 0), 4);
  CHECK(p0.is_zero());
}

TEST_CASE("gram schmidt keeps span and gives orthogonal columns") {
  RatMat b = mat(3, 3, {1, 1, 0,  //
                        1, 0, 1,  //
                        0, 1, 1});
  std::vector<Rational> norms2;
  RatMat q = b.gram_schmidt_columns(norms2);
  for (int i = 0; i < q.cols(); ++i)
    for (int j = i + 1; j < q.cols(); ++j) {
      Rational dot(0);
      for (int r = 0; r < q.rows(); ++r) dot += q.at(r, i) * q.at(r, j);
      CHECK(rat_is_zero(dot));
    }
  for (int i = 0; i < q.cols(); ++i) {
    Rational dot(0);
    for (int r = 0; r < q.rows(); ++r) dot += q.at(r, i) * q.at(r, i);
    CHECK(dot == norms2[i]);
  }
}

TEST_CASE("polynomial arithmetic, derivative, eval") {
  int n = 2;
  Polynomial x = Polynomial::variable(0, n);
  Polynomial y = Polynomial::variable(1, n);
  Polynomial p = x * x + y.scaled(Rational(-3)) + Polynomial::constant(Rational(1, 2), n);

  CHECK(p.eval({Rational(2), Rational(1)}) == Rational(3, 2));
  CHECK(p.eval_double({2.0, 1.0}) == doctest::Approx(1.5));
  CHECK(p.derivative(0) == x.scaled(Rational(2)));
  CHECK(p.derivative(1) == Polynomial::constant(Rational(-3), n));
  CHECK((p - p).is_zero());
  CHECK(p.total_degree() == 2);
}

TEST_CASE("weighted homogeneity detection") {
  int n = 3;
  Polynomial x = Polynomial::variable(0, n);
  Polynomial y = Polynomial::variable(1, n);
  Polynomial t = Polynomial::variable(2, n);
  std::vector<int> w = {1, 1, 2};
  CHECK((x * y).is_weighted_homogeneous(w, 2));
  CHECK(t.is_weighted_homogeneous(w, 2));
  CHECK((t + x * y).is_weighted_homogeneous(w, 2));
  CHECK_FALSE((t + x).is_weighted_homogeneous(w, 2));
  CHECK(Polynomial::constant(Rational(0), n).is_weighted_homogeneous(w, 5));
}

TEST_CASE("polynomial printing") {
  int n = 2;
  Polynomial x = Polynomial::variable(0, n);
  Polynomial y = Polynomial::variable(1, n);
  Polynomial p = x * x * y.scaled(Rational(1, 2)) - y;
  CHECK(p.str() == "-x2 + 1/2 x1^2 x2");
  CHECK(Polynomial::constant(Rational(0), n).str() == "0");
}
