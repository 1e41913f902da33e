// Serial reference against the OpenMP kernels. Set OMP_NUM_THREADS to vary
// the parallel side.

#include "fixtures.hpp"

#include "edsh/height.hpp"
#include "edsh/lehmer.hpp"

#include <benchmark/benchmark.h>

using namespace edsh;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void arch_stillnodo(benchmark::State& st) {
    const auto s = fx::stillnodo();
    for (auto _ : st) benchmark::DoNotOptimize(archimedean_height(s.curve, s.point, 8, 256, mode(st)));
}

void height_silnodo(benchmark::State& st) {
    const auto s = fx::silnodo();
    HeightOptions o;
    o.exec = mode(st);
    for (auto _ : st) benchmark::DoNotOptimize(canonical_height(s.curve, s.point, 64, o).total);
}

void lehmer_qi(benchmark::State& st) {
    SearchConfig cfg;
    cfg.field = fx::qi();
    cfg.extend_to = 64;
    for (auto _ : st) benchmark::DoNotOptimize(search(cfg, mode(st)).examined);
}

}  // namespace

BENCHMARK(arch_stillnodo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(height_silnodo)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(lehmer_qi)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
