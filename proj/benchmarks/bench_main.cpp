#include <benchmark/benchmark.h>

#include "dumenu/builtin.hpp"
#include "dumenu/menus.hpp"
#include "dumenu/oracle.hpp"
#include "dumenu/synthesis.hpp"
#include "dumenu/verification.hpp"

using namespace dumenu;

static void BM_Synthesize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Scenario sc = builtin_scenario("s1", n, 4 * n);
  for (auto _ : state) benchmark::DoNotOptimize(synthesize(0.25, sc));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Synthesize)->RangeMultiplier(2)->Range(32, 512)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_PremiumFromIC(benchmark::State& state) {
  const Scenario sc = builtin_scenario("s1", 201, 801);
  const auto r = synthesize(0.25, sc);
  for (auto _ : state) benchmark::DoNotOptimize(premium_from_ic(r.menu.retention, 0.0, sc));
}
BENCHMARK(BM_PremiumFromIC)->Unit(benchmark::kMicrosecond);

static void BM_VerifyIC(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Scenario sc = builtin_scenario("s1", n, 201);
  const auto r = synthesize(0.25, sc);
  for (auto _ : state) benchmark::DoNotOptimize(verify_ic(r.menu, sc));
}
BENCHMARK(BM_VerifyIC)->Arg(21)->Arg(41)->Arg(81)->Unit(benchmark::kMillisecond);

static void BM_EnumerateOptimum(benchmark::State& state) {
  const auto inst = SmallInstance::from(builtin_scenario("s1"), 2, 3);
  const auto workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_optimum(inst, 0.25, workers));
}
BENCHMARK(BM_EnumerateOptimum)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
