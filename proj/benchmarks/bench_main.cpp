#include <benchmark/benchmark.h>

#include "featforge/canonical.hpp"
#include "featforge/features.hpp"
#include "featforge/generators.hpp"
#include "featforge/labelers.hpp"
#include "featforge/stress.hpp"
#include "featforge/wl.hpp"

namespace ff = featforge;

namespace {

ff::Graph regular(std::int64_t n, std::int64_t d) {
  return ff::gen_regular(static_cast<std::size_t>(n), static_cast<std::size_t>(d), 7);
}

void BM_CanonicalForm(benchmark::State& state) {
  const auto g = regular(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ff::canonical_form(g));
}
BENCHMARK(BM_CanonicalForm)->Args({20, 3})->Args({20, 4})->Args({40, 3})->Args({64, 5});

void BM_WlRefine(benchmark::State& state) {
  const auto g = ff::gen_erdos_renyi(static_cast<std::size_t>(state.range(0)), 0.2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(ff::wl_refine(g));
}
BENCHMARK(BM_WlRefine)->Arg(20)->Arg(64)->Arg(200);

void BM_Stress(benchmark::State& state) {
  const auto g = regular(state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(ff::minimize_stress(g, 2, 11));
}
BENCHMARK(BM_Stress)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_LabelCycles(benchmark::State& state) {
  const auto g = regular(20, 4);
  const auto len = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ff::label_cycles(g, len));
}
BENCHMARK(BM_LabelCycles)->Arg(3)->Arg(4)->Arg(6)->Arg(8);

void BM_LabelCliques(benchmark::State& state) {
  const auto g = ff::gen_erdos_renyi(20, 0.5, 5);
  for (auto _ : state) benchmark::DoNotOptimize(ff::label_cliques(g, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_LabelCliques)->Arg(3)->Arg(4)->Arg(5);

void BM_Calibrate(benchmark::State& state) {
  ff::CalibrationOptions opts;
  opts.override_value = 3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ff::calibrate_balance(ff::Family::regular, ff::TaskSpec::cycle(3), 20, 1, opts));
  }
}
BENCHMARK(BM_Calibrate)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
