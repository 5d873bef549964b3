#include <benchmark/benchmark.h>

#include "hemi/quadratic.hpp"
#include "hemi/saddle_coeffs.hpp"

using namespace hemi;

static void BM_d0_quadrature(benchmark::State& state) {
    QuadParams p{-1.5, 0.6, 0, 0.01, -0.02};
    for (auto _ : state) {
        SaddleEngine e(make_quadratic(p));
        benchmark::DoNotOptimize(e.d0().value);
    }
}
BENCHMARK(BM_d0_quadrature);

static void BM_full_report(benchmark::State& state) {
    QuadParams p{-0.5, 0.5, 0, 0.01, -0.02};
    DSystem d = make_quadratic(p);
    for (auto _ : state) {
        CoefficientReport r = compute_coefficients(d);
        benchmark::DoNotOptimize(r.d1.value);
    }
}
BENCHMARK(BM_full_report);

static void BM_closed_forms(benchmark::State& state) {
    QuadParams p{-1.5, 0.6, 0, 0.01, -0.02};
    for (auto _ : state) {
        ClosedForms cf = closed_forms(p);
        benchmark::DoNotOptimize(cf.m2p);
    }
}
BENCHMARK(BM_closed_forms);
