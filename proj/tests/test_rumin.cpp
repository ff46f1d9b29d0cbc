#include <doctest.h>

#include <vector>

#include "carnot/errors.hpp"
#include "carnot/presets.hpp"
#include "carnot/rumin.hpp"

using namespace carnot;

namespace {

OperatorPoly op_of(int n, std::vector<std::pair<std::vector<unsigned>, long>> terms) {
  OperatorPoly p(n);
  for (const auto& [mono, c] : terms) p.add_term(mono, Rational(c));
  return p;
}

}  // namespace

TEST_CASE("maurer-cartan d0 matrices") {
  StratifiedLieAlgebra ab = make_abelian(3);
  for (int h = 0; h <= 3; ++h) CHECK(maurer_cartan_d0(ab, h).is_zero());

  StratifiedLieAlgebra h1 = make_heisenberg(1);
  RatMat d01 = maurer_cartan_d0(h1, 1);
  // d0 theta3 = -theta1^theta2, the only nonzero entry
  CHECK(d01.at(0, 2) == Rational(-1));
  CHECK(d01.col_count_nonzero(0) == 0);
  CHECK(d01.col_count_nonzero(1) == 0);
  CHECK(d01.col_count_nonzero(2) == 1);
  // d0 on Lambda^2 kills everything for H1 (theta1^theta1 terms drop out)
  CHECK(maurer_cartan_d0(h1, 2).is_zero());

  for (const auto& g : {make_heisenberg(1), make_engel(), make_heisenberg(2)}) {
    for (int h = 0; h + 1 < g.dim(); ++h)
      CHECK((maurer_cartan_d0(g, h + 1) * maurer_cartan_d0(g, h)).is_zero());
  }
}

TEST_CASE("full d on functions is the frame gradient") {
  for (const auto& g : {make_heisenberg(1), make_engel()}) {
    FormOperator d0f = full_d(g, 0);
    REQUIRE(d0f.rows() == static_cast<std::size_t>(g.dim()));
    for (int j = 0; j < g.dim(); ++j)
      CHECK(d0f.m[j][0] == OperatorPoly::generator(j, g.dim()));
    CHECK(check_graded(g, d0f));
  }
}

TEST_CASE("d composes to zero symbolically") {
  for (const auto& g : {make_abelian(3), make_heisenberg(1), make_engel()}) {
    NormalOrderContext ctx(g);
    for (int h = 0; h + 1 < g.dim(); ++h)
      CHECK(compose(ctx, full_d(g, h + 1), full_d(g, h)).is_zero());
  }
}

TEST_CASE("e0 bases for the presets") {
  StratifiedLieAlgebra ab = make_abelian(3);
  for (int h = 0; h <= 3; ++h) {
    WeightedBasis b = e0_basis(ab, h);
    CHECK(b.columns == RatMat::identity(b.columns.rows()));
  }

  StratifiedLieAlgebra h1 = make_heisenberg(1);
  WeightedBasis b1 = e0_basis(h1, 1);
  REQUIRE(b1.dim() == 2);  // span{theta1, theta2}
  CHECK(b1.columns.at(0, 0) == Rational(1));
  CHECK(b1.columns.at(1, 1) == Rational(1));
  CHECK(b1.columns.at(2, 0) == Rational(0));
  CHECK(b1.columns.at(2, 1) == Rational(0));
  CHECK(b1.weights == std::vector<int>{1, 1});
  WeightedBasis b2 = e0_basis(h1, 2);
  REQUIRE(b2.dim() == 2);  // span{theta1^theta3, theta2^theta3}
  CHECK(b2.columns.at(1, 0) == Rational(1));
  CHECK(b2.columns.at(2, 1) == Rational(1));
  CHECK(b2.columns.at(0, 0) == Rational(0));
  CHECK(b2.columns.at(0, 1) == Rational(0));
  CHECK(b2.weights == std::vector<int>{3, 3});

  StratifiedLieAlgebra en = make_engel();
  std::vector<int> dims;
  for (int h = 0; h <= 4; ++h) dims.push_back(static_cast<int>(e0_basis(en, h).dim()));
  CHECK(dims == std::vector<int>{1, 2, 2, 2, 1});
  WeightedBasis eb2 = e0_basis(en, 2);
  // ascending weight: theta2^theta3 (weight 3) then theta1^theta4 (weight 4);
  // Lambda^2 masks in order: 12, 13, 23, 14, 24, 34
  CHECK(eb2.weights == std::vector<int>{3, 4});
  CHECK(eb2.columns.at(2, 0) == Rational(1));
  CHECK(eb2.columns.at(3, 1) == Rational(1));
}

TEST_CASE("d0 pseudoinverse") {
  StratifiedLieAlgebra h1 = make_heisenberg(1);
  RatMat pinv = d0_pinv(h1, 1);  // Lambda^2 -> Lambda^1
  // d0_pinv(theta1^theta2) = -theta3
  CHECK(pinv.at(2, 0) == Rational(-1));
  // beta orthogonal to Im d0 maps to zero
  CHECK(pinv.col_count_nonzero(1) == 0);
  CHECK(pinv.col_count_nonzero(2) == 0);

  for (const auto& g : {make_abelian(3), make_heisenberg(1), make_engel()}) {
    for (int h = 0; h < g.dim(); ++h) {
      RatMat m = maurer_cartan_d0(g, h);
      RatMat p = d0_pinv(g, h);
      CHECK(m * p * m == m);
      CHECK(p * m * p == p);
    }
  }
}

TEST_CASE("P and Q for the presets") {
  StratifiedLieAlgebra ab = make_abelian(3);
  for (int h = 0; h < 3; ++h) {
    auto [p, q] = build_P_Q(ab, h);
    CHECK(p == FormOperator::identity(3, p.dst_weights));
    CHECK(q.is_zero());
  }

  StratifiedLieAlgebra h1 = make_heisenberg(1);
  auto [p1, q1] = build_P_Q(h1, 1);
  CHECK(p1 == FormOperator::identity(3, p1.dst_weights));  // D = 0 at degree 1
  CHECK(q1.m[2][0] == op_of(3, {{{0, 0, 0}, -1}}));        // Q = d0^{-1} on theta1^theta2
}

TEST_CASE("heisenberg tower matches the hand computation") {
  StratifiedLieAlgebra h1 = make_heisenberg(1);
  RuminComplex rc = RuminComplex::build(h1);

  CHECK(rc.e0_dims() == std::vector<int>{1, 2, 2, 1});

  // Pi_E at degree 1: f theta1 |-> f theta1 - (X2 f) theta3
  const FormOperator& pie1 = rc.degree(1).pi_e;
  CHECK(pie1.m[2][0] == op_of(3, {{{0, 1, 0}, -1}}));
  CHECK(pie1.m[2][1] == op_of(3, {{{1, 0, 0}, 1}}));
  CHECK(pie1.m[2][2].is_zero());
  CHECK(rc.degree(1).pi_e_order == 1);
  CHECK(rc.degree(1).nilpotency == 0);

  // d_c on functions: the horizontal gradient
  const FormOperator& dc0 = rc.degree(0).dc;
  REQUIRE(dc0.rows() == 2);
  CHECK(dc0.m[0][0] == OperatorPoly::generator(0, 3));
  CHECK(dc0.m[1][0] == OperatorPoly::generator(1, 3));

  // d_c on E0^1, second order: rows theta1^theta3, theta2^theta3
  const FormOperator& dc1 = rc.degree(1).dc;
  CHECK(dc1.m[0][0] == op_of(3, {{{1, 1, 0}, -1}, {{0, 0, 1}, -1}}));  // -(X1X2 + X3)
  CHECK(dc1.m[0][1] == op_of(3, {{{2, 0, 0}, 1}}));                    // X1^2
  CHECK(dc1.m[1][0] == op_of(3, {{{0, 2, 0}, -1}}));                   // -X2^2
  CHECK(dc1.m[1][1] == op_of(3, {{{1, 1, 0}, 1}, {{0, 0, 1}, -2}}));   // X1X2 - 2X3
  CHECK(dc1.max_iso_degree() == 2);

  // d_c on E0^2, first order again
  const FormOperator& dc2 = rc.degree(2).dc;
  CHECK(dc2.m[0][0] == op_of(3, {{{0, 1, 0}, -1}}));
  CHECK(dc2.m[0][1] == op_of(3, {{{1, 0, 0}, 1}}));

  // codifferential on E0^1 is minus the horizontal divergence
  const FormOperator& dcs1 = rc.degree(1).dc_star;
  CHECK(dcs1.m[0][0] == op_of(3, {{{1, 0, 0}, -1}}));
  CHECK(dcs1.m[0][1] == op_of(3, {{{0, 1, 0}, -1}}));

  // hodge coordinates on E0^1: *theta1 = theta1^theta3-basis second vector
  CHECK(rc.degree(1).hodge_xi.at(1, 0) == Rational(1));
  CHECK(rc.degree(1).hodge_xi.at(0, 1) == Rational(-1));

  FormOperator lap0 = rc.laplacian0();
  CHECK(lap0.m[0][0] == op_of(3, {{{2, 0, 0}, -1}, {{0, 2, 0}, -1}}));  // -(X1^2 + X2^2)
}

TEST_CASE("engel pi_e picks up a second order correction") {
  StratifiedLieAlgebra en = make_engel();
  RuminComplex rc = RuminComplex::build(en);
  const FormOperator& pie1 = rc.degree(1).pi_e;
  // f theta1 |-> f theta1 - (X2 f) theta3 - ((X1X2 + X3) f) theta4
  CHECK(pie1.m[2][0] == op_of(4, {{{0, 1, 0, 0}, -1}}));
  CHECK(pie1.m[3][0] == op_of(4, {{{1, 1, 0, 0}, -1}, {{0, 0, 1, 0}, -1}}));
  CHECK(rc.degree(1).pi_e_order == 2);
  CHECK(rc.degree(1).nilpotency == 1);
  CHECK(rc.e0_dims() == std::vector<int>{1, 2, 2, 2, 1});
}

TEST_CASE("projection_E agrees with the built tower and checks identities") {
  StratifiedLieAlgebra h1 = make_heisenberg(1);
  RuminComplex rc = RuminComplex::build(h1);
  for (int h = 0; h <= 3; ++h) CHECK(projection_E(h1, h) == rc.degree(h).pi_e);
}

TEST_CASE("abelian tower collapses to de rham") {
  StratifiedLieAlgebra ab = make_abelian(3);
  RuminComplex rc = RuminComplex::build(ab);
  for (int h = 0; h <= 3; ++h) {
    CHECK(rc.degree(h).pi_e == FormOperator::identity(3, rc.degree(h).pi_e.dst_weights));
    if (h < 3) CHECK(rc.degree(h).dc == rc.degree(h).d);
  }
  ComplexReport rep = rc.verify();
  const CheckResult* collapse = rep.find("step1_collapse_to_de_rham");
  REQUIRE(collapse != nullptr);
  CHECK(collapse->pass);
}

TEST_CASE("verify_complex passes for the presets") {
  for (const auto& g : {make_abelian(3), make_heisenberg(1), make_engel()}) {
    ComplexReport rep = verify_complex(g);
    for (const auto& c : rep.checks) {
      INFO(g.name(), ": ", c.name, " ", c.detail);
      CHECK(c.pass);
    }
    CHECK(rep.all_pass());
    auto j = rep.to_json();
    CHECK(j["all_pass"] == true);
    CHECK(j["checks"].size() == rep.checks.size());
  }
}

TEST_CASE("complex json export") {
  StratifiedLieAlgebra h1 = make_heisenberg(1);
  RuminComplex rc = RuminComplex::build(h1);
  auto j = rc.to_json();
  CHECK(j["degrees"].size() == 4);
  CHECK(j["e0_dims"] == std::vector<int>({1, 2, 2, 1}));
  CHECK(j["degrees"][1]["dc"]["rows"] == 2);
  CHECK(rc.xi_labels(1, false).size() == 2);
  CHECK(rc.xi_labels(1, true)[0] == "\\xi^{1}_{1}");
}
