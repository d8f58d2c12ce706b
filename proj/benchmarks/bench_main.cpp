#include <benchmark/benchmark.h>

#include <random>

#include "pentagram/boussinesq.hpp"
#include "pentagram/invariants.hpp"
#include "pentagram/pentagram_map.hpp"
#include "pentagram/poisson.hpp"

using namespace pentagram;

namespace {

CornerCoords<double> convex_corners(int n) {
  return corner_coords(generate_universally_convex(n, 0.5, 2.0, 1.0, 1.0, 0.3, 1));
}

void BM_CornerMapFloat(benchmark::State& state) {
  CornerCoords<double> c = convex_corners(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    c = pentagram_in_corner(c);
    benchmark::DoNotOptimize(c.x.data());
  }
}
BENCHMARK(BM_CornerMapFloat)->Arg(7)->Arg(16)->Arg(64);

void BM_CornerMapExact(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  CornerCoords<Rational> c0 = corner_coords(random_polygon(n, 5));
  for (auto _ : state) {
    // Restart each iteration so coefficient sizes stay fixed.
    CornerCoords<Rational> c = pentagram_in_corner(c0);
    benchmark::DoNotOptimize(c.x.data());
  }
}
BENCHMARK(BM_CornerMapExact)->Arg(7)->Arg(16);

void BM_VertexMapExact(benchmark::State& state) {
  TwistedPolygon<Rational> p = random_polygon(static_cast<int>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(pentagram_vertices(p));
}
BENCHMARK(BM_VertexMapExact)->Arg(7)->Arg(16);

void BM_InvariantEvaluation(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  CornerCoords<double> c = convex_corners(n);
  corner_monodromy_invariants(n);  // build the symbolic cache outside the loop
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_invariants(c));
}
BENCHMARK(BM_InvariantEvaluation)->Arg(7)->Arg(10)->Arg(12);

void BM_MonodromySymbolic(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    SymbolicMatrix m = monodromy_matrix_symbolic(n);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_MonodromySymbolic)->Arg(5)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_ExactBracketSymbolic(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  const CornerInvariants& ci = corner_monodromy_invariants(n);
  PoissonStructure s = PoissonStructure::corner(n);
  for (auto _ : state) benchmark::DoNotOptimize(bracket_poly(ci.O[0], ci.E[0], s));
}
BENCHMARK(BM_ExactBracketSymbolic)->Arg(5)->Arg(7)->Unit(benchmark::kMicrosecond);

void BM_BoussinesqStep(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  BoussinesqState s = make_state(PeriodicField::random_band_limited(6, 0.5, 1),
                                 PeriodicField::random_band_limited(6, 0.5, 2), n);
  double dt = default_dt(n);
  for (auto _ : state) {
    s = step(s, dt);
    benchmark::DoNotOptimize(s.u.data());
  }
}
BENCHMARK(BM_BoussinesqStep)->Arg(64)->Arg(256)->Arg(1024);

void BM_Discretization(benchmark::State& state) {
  PeriodicField u(0.1, {0.3}, {0.2}), w(0.0, {-0.1}, {0.25});
  std::vector<double> eps = default_eps_list();
  for (auto _ : state) benchmark::DoNotOptimize(discretization_expansion(u, w, 0.3, eps));
}
BENCHMARK(BM_Discretization)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
