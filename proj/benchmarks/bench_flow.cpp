#include <benchmark/benchmark.h>

#include "hemi/flow.hpp"
#include "hemi/quadratic.hpp"

using namespace hemi;

static void BM_dulac_passage(benchmark::State& state) {
    ChartAtlas atlas = quadratic_atlas({-0.5, 0.5, 0, 0.01, -0.02});
    const real tol = std::pow(10.0, -state.range(0));
    for (auto _ : state) {
        MapValue v = dulac_passage(atlas, Side::upper, TimeDir::forward, 0.05, tol);
        benchmark::DoNotOptimize(v.value);
    }
}
BENCHMARK(BM_dulac_passage)->Arg(8)->Arg(10)->Arg(12);

static void BM_return_map_point(benchmark::State& state) {
    QuadParams p{-0.5, 0.5, 0, 0.02, 0};
    for (auto _ : state) {
        MapSamples m = return_map(p, {0.05}, 1e-10);
        benchmark::DoNotOptimize(m.rows[0].value);
    }
}
BENCHMARK(BM_return_map_point);
