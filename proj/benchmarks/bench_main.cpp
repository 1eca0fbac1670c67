#include <benchmark/benchmark.h>

#include "cellscale/channel.hpp"
#include "cellscale/config.hpp"
#include "cellscale/imh.hpp"
#include "cellscale/ish.hpp"

using namespace cellscale;

namespace {

ScalingExponents separating() { return default_config().exponents; }

void BM_GenerateNetwork(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate_network(separating(), n, 1));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GenerateNetwork)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_InterferenceIsh(benchmark::State& state) {
  const auto inst = generate_network(separating(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(interference_psd_ish_all(inst));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_InterferenceIsh)->RangeMultiplier(4)->Range(1024, 65536)->Complexity();

void BM_IshEvaluate(benchmark::State& state) {
  const auto inst = generate_network(separating(), static_cast<std::size_t>(state.range(0)), 1);
  const auto alloc = ish_allocate(inst);
  for (auto _ : state) benchmark::DoNotOptimize(ish_evaluate(inst, alloc).feasible_rate);
}
BENCHMARK(BM_IshEvaluate)->RangeMultiplier(4)->Range(1024, 16384);

void BM_ImhRoutes(benchmark::State& state) {
  const auto inst = generate_network(separating(), static_cast<std::size_t>(state.range(0)), 1);
  const auto grid = build_routing_grid(inst);
  for (auto _ : state) benchmark::DoNotOptimize(imh_build_routes(inst, grid));
}
BENCHMARK(BM_ImhRoutes)->RangeMultiplier(4)->Range(1024, 16384);

void BM_ImhRun(benchmark::State& state) {
  const auto inst = generate_network(separating(), static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(imh_run(inst).feasible_rate);
}
BENCHMARK(BM_ImhRun)->RangeMultiplier(4)->Range(1024, 16384);

void BM_Zeta(benchmark::State& state) {
  double s = 2.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(riemann_zeta(s));
    s = s > 5.0 ? 2.0 : s + 0.1;
  }
}
BENCHMARK(BM_Zeta);

}  // namespace

BENCHMARK_MAIN();
