#include <benchmark/benchmark.h>

#include <random>

#include "carnot/group.hpp"
#include "carnot/presets.hpp"
#include "carnot/rng.hpp"

namespace {

void BM_BchDouble(benchmark::State& state) {
  carnot::StratifiedLieAlgebra g =
      state.range(0) == 0 ? carnot::make_heisenberg(1) : carnot::make_engel();
  std::mt19937_64 gen(1);
  std::vector<double> p(g.dim()), q(g.dim());
  for (int i = 0; i < g.dim(); ++i) {
    p[i] = carnot::rng_symmetric(gen);
    q[i] = carnot::rng_symmetric(gen);
  }
  for (auto _ : state) benchmark::DoNotOptimize(carnot::group_mul(g, p, q));
}
BENCHMARK(BM_BchDouble)->Arg(0)->Arg(1);

void BM_GroupLawPolynomials(benchmark::State& state) {
  carnot::StratifiedLieAlgebra g =
      state.range(0) == 0 ? carnot::make_heisenberg(2) : carnot::make_engel();
  for (auto _ : state) benchmark::DoNotOptimize(carnot::group_law_polynomials(g));
}
BENCHMARK(BM_GroupLawPolynomials)->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();
