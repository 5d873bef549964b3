#include <cmath>

#include <benchmark/benchmark.h>

#include "hemi/quad.hpp"

using namespace hemi;

static void BM_quad_finite_smooth(benchmark::State& state) {
    QuadOptions opt;
    opt.abs_tol = opt.rel_tol = std::pow(10.0, -state.range(0));
    for (auto _ : state) {
        auto r = quad_finite([](real x) { return std::exp(-x) * std::cos(7.0 * x); }, 0.0, 4.0,
                             opt);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_quad_finite_smooth)->Arg(8)->Arg(10)->Arg(12);

static void BM_quad_a_inf_tail(benchmark::State& state) {
    QuadOptions opt;
    for (auto _ : state) {
        auto r = quad_a_inf([](real x) { return 1.0 / (1.0 + x * x * std::sqrt(x)); }, 1.0, opt);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_quad_a_inf_tail);

static void BM_quad_pow0_singular(benchmark::State& state) {
    QuadOptions opt;
    const real beta = -0.5 - 0.04 * state.range(0);
    for (auto _ : state) {
        auto r = quad_pow0([](real x) { return std::cos(x); }, 1.0, beta, opt);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_quad_pow0_singular)->Arg(0)->Arg(5)->Arg(9);
