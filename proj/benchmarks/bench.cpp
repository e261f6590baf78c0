#include <benchmark/benchmark.h>

#include "conewalk/estimators.hpp"
#include "conewalk/geodesic.hpp"

using namespace conewalk;

static void BM_SampleFree(benchmark::State& state) {
    WienerParams p;
    p.seed = 1;
    const TimeGrid grid(0.0, 1.0, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        p.stream++;
        benchmark::DoNotOptimize(sample_free(p, grid));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleFree)->Arg(1024)->Arg(4096);

static void BM_SampleConePath(benchmark::State& state) {
    WienerParams p;
    p.seed = 1;
    const TimeGrid grid(0.0, 1.0, static_cast<int>(state.range(0)));
    const ConePoint start(2.0, 0.0);
    for (auto _ : state) {
        p.stream++;
        benchmark::DoNotOptimize(sample_cone_path(p, grid, start));
    }
}
BENCHMARK(BM_SampleConePath)->Arg(1024)->Arg(4096);

static void BM_DecomposeCone(benchmark::State& state) {
    WienerParams p;
    p.seed = 2;
    const TimeGrid grid(0.0, 1.0, static_cast<int>(state.range(0)));
    ConePath path = sample_cone_path(p, grid, ConePoint(2.0, 0.0));
    for (auto _ : state) benchmark::DoNotOptimize(decompose_cone(path));
}
BENCHMARK(BM_DecomposeCone)->Arg(1024)->Arg(4096);

static void BM_ConeAction(benchmark::State& state) {
    WienerParams p;
    p.seed = 3;
    const TimeGrid grid(0.0, 1.0, static_cast<int>(state.range(0)));
    ConePath path = sample_cone_path(p, grid, ConePoint(2.0, 0.0));
    for (auto _ : state) benchmark::DoNotOptimize(cone_action(path));
}
BENCHMARK(BM_ConeAction)->Arg(1024)->Arg(4096);

static void BM_GeodesicDistance(benchmark::State& state) {
    const CoverPoint a(1.0, 0.2), b(2.0, 5.5);
    for (auto _ : state) benchmark::DoNotOptimize(geodesic_distance(a, b));
}
BENCHMARK(BM_GeodesicDistance);

static void BM_KernelMcBatch(benchmark::State& state) {
    KernelQuery q;
    q.a = CoverPoint(2.0, 0.3);
    q.b = CoverPoint(2.0, 1.0);
    q.T = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel_mc(q, 512, 7, 1000, 1));
    }
    state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_KernelMcBatch);

BENCHMARK_MAIN();
