#include <benchmark/benchmark.h>

#include "ptdoublet/numeric.hpp"
#include "ptdoublet/spectrum.hpp"
#include "ptdoublet/wavefn.hpp"

using namespace ptdoublet;

static void BM_BuildGrid(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_grid(EpsilonProfile::decaying(0.25), -12, 12, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGrid)->Arg(2001)->Arg(8001)->Complexity();

static void BM_SolveDelta(benchmark::State& state) {
  int N = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_delta(N, 1.0, 10.0));
    N = (N + 1) % 6;
  }
}
BENCHMARK(BM_SolveDelta);

static void BM_SampleState(benchmark::State& state) {
  const GridPtr g = build_grid(EpsilonProfile::decaying(0.25), -12, 12, std::size_t(state.range(0)));
  const NatanzonState s({1.0, 10.0}, 1, Branch::Minus, g);
  for (auto _ : state) benchmark::DoNotOptimize(sample(s));
}
BENCHMARK(BM_SampleState)->Arg(2001);

// Straight contour, where the Eckart operator lives.
static DiscreteOperator eckart_operator(std::size_t n) {
  return discretize(build_grid(EpsilonProfile::constant(0.25), -12, 12, n), EckartParams{3.0, 1.0});
}

static void BM_EigenAll(benchmark::State& state) {
  const DiscreteOperator op = eckart_operator(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigen_all(op));
}
BENCHMARK(BM_EigenAll)->Arg(501)->Arg(1001)->Unit(benchmark::kMillisecond);

static void BM_EigenNear(benchmark::State& state) {
  const DiscreteOperator op = eckart_operator(std::size_t(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigen_near(op, cplx(-3.7, 0.01)));
}
BENCHMARK(BM_EigenNear)->Arg(2001)->Arg(8001)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
