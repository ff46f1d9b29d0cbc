#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include <json.hpp>

#include "carnot/algebra.hpp"
#include "carnot/errors.hpp"
#include "carnot/presets.hpp"

using namespace carnot;

TEST_CASE("preset algebras validate") {
  for (const auto& g : {make_abelian(3), make_heisenberg(1), make_heisenberg(2), make_engel()})
    CHECK_NOTHROW(g.validate());
}

TEST_CASE("layer bookkeeping") {
  StratifiedLieAlgebra g = make_engel();
  CHECK(g.dim() == 4);
  CHECK(g.step() == 3);
  CHECK(g.layers() == std::vector<int>{2, 1, 1});
  CHECK(g.layer_of(0) == 1);
  CHECK(g.layer_of(1) == 1);
  CHECK(g.layer_of(2) == 2);
  CHECK(g.layer_of(3) == 3);
  CHECK(g.layer_begin(2) == 2);
  CHECK(g.layer_end(2) == 3);
  CHECK(g.homogeneous_dimension() == 7);
  CHECK(make_heisenberg(1).homogeneous_dimension() == 4);
}

TEST_CASE("bracket antisymmetry and bilinearity") {
  StratifiedLieAlgebra g = make_heisenberg(2);
  const Rational zero(0);
  std::vector<Rational> u = {Rational(1), Rational(2), Rational(0), Rational(-1), Rational(0)};
  std::vector<Rational> v = {Rational(3), Rational(0), Rational(1, 2), Rational(1), Rational(0)};
  auto uv = g.bracket(u, v, zero);
  auto vu = g.bracket(v, u, zero);
  for (int k = 0; k < g.dim(); ++k) CHECK(uv[k] == -vu[k]);
  // [e1, e2] = e5, [e3, e4] = e5
  auto b = g.bracket_basis(0, 1);
  REQUIRE(b.size() == 1);
  CHECK(b[0].first == 4);
  CHECK(b[0].second == Rational(1));
  auto bf = g.bracket_basis(1, 0);
  CHECK(bf[0].second == Rational(-1));
}

TEST_CASE("grading violations are caught") {
  // [e1, e2] = e1 lands in layer 1, not layer 2
  std::vector<StratifiedLieAlgebra::BracketEntry> bad = {{0, 1, 0, Rational(1)}};
  StratifiedLieAlgebra g("bad", {2, 1}, bad);
  CHECK_THROWS_AS(g.validate(), GradingViolation);
}

TEST_CASE("jacobi violations are caught and name the triple") {
  // [e1,e2] = e4, [e1,e4] = e5, [e3,e4] = e5 respects the grading but
  // [[e1,e2],e3] + [[e2,e3],e1] + [[e3,e1],e2] = [e4,e3] = -e5.
  std::vector<StratifiedLieAlgebra::BracketEntry> bad = {
      {0, 1, 3, Rational(1)},
      {0, 3, 4, Rational(1)},
      {2, 3, 4, Rational(1)},
  };
  StratifiedLieAlgebra g("bad", {3, 1, 1}, bad);
  CHECK_THROWS_AS(g.validate(), JacobiViolation);
  try {
    g.validate();
  } catch (const JacobiViolation& e) {
    CHECK(e.i == 0);
    CHECK(e.j == 1);
    CHECK(e.k == 2);
  }
}

TEST_CASE("generation failures are caught") {
  // second layer not reached by any bracket
  StratifiedLieAlgebra g("bad", {2, 1}, {});
  CHECK_THROWS_AS(g.validate(), GenerationFailure);
}

TEST_CASE("malformed specs are rejected") {
  CHECK_THROWS_AS(StratifiedLieAlgebra("x", {}, {}), MalformedSpec);
  CHECK_THROWS_AS(StratifiedLieAlgebra("x", {0}, {}), MalformedSpec);
  CHECK_THROWS_AS(StratifiedLieAlgebra("x", {17}, {}), MalformedSpec);
  std::vector<StratifiedLieAlgebra::BracketEntry> dup = {{0, 1, 2, Rational(1)},
                                                         {0, 1, 2, Rational(2)}};
  CHECK_THROWS_AS(StratifiedLieAlgebra("x", {2, 1}, dup), MalformedSpec);
  std::vector<StratifiedLieAlgebra::BracketEntry> flip = {{1, 0, 2, Rational(1)}};
  CHECK_THROWS_AS(StratifiedLieAlgebra("x", {2, 1}, flip), MalformedSpec);
}

TEST_CASE("json round trip") {
  StratifiedLieAlgebra g = make_engel();
  nlohmann::json j = g.to_json();
  StratifiedLieAlgebra h = StratifiedLieAlgebra::from_json(j);
  CHECK(h.name() == g.name());
  CHECK(h.layers() == g.layers());
  CHECK(h.bracket_table().size() == g.bracket_table().size());
  CHECK_NOTHROW(h.validate());
  CHECK(h.to_json() == j);
}

TEST_CASE("from_json rejects malformed input") {
  CHECK_THROWS_AS(StratifiedLieAlgebra::from_json(nlohmann::json::array()), MalformedSpec);
  CHECK_THROWS_AS(StratifiedLieAlgebra::from_json(nlohmann::json{{"name", "x"}}), MalformedSpec);
  nlohmann::json j = {{"layers", {2, 1}},
                      {"brackets", {{{"i", 1}, {"j", 2}, {"coeffs", {{"3", "1/0"}}}}}}};
  CHECK_THROWS_AS(StratifiedLieAlgebra::from_json(j), MalformedSpec);
}

TEST_CASE("resolve_algebra finds builtins, files and preset dir entries") {
  CHECK(resolve_algebra("heisenberg1").dim() == 3);
  CHECK(resolve_algebra("engel").dim() == 4);
  CHECK(resolve_algebra("abelian4").dim() == 4);
  CHECK_THROWS_AS(resolve_algebra("no_such_algebra"), MalformedSpec);

  std::string path = "tmp_algebra_test.json";
  {
    std::ofstream out(path);
    out << make_heisenberg(2).to_json().dump();
  }
  CHECK(resolve_algebra(path).dim() == 5);
  std::remove(path.c_str());
}
