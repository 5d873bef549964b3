#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "hemi/asymptotics.hpp"

using namespace hemi;

static MapSamples sample_series(int n, bool noisy) {
    MapSamples m;
    m.kind = MapKind::DiffUpper;
    m.label = "bench";
    for (int i = 0; i < n; ++i) {
        real s = 1e-3 * std::pow(100.0, static_cast<real>(i) / (n - 1));
        real v = 0.3 * std::pow(s, 1.5) + 0.05 * std::pow(s, 2.5);
        if (noisy) v += 1e-12 * ((i * 2654435761u) % 1000 - 500);
        m.rows.push_back({s, v, 1e-12});
    }
    return m;
}

static void BM_fit_fixed_lambda(benchmark::State& state) {
    MapSamples m = sample_series(static_cast<int>(state.range(0)), true);
    FitModel model = select_model(1.5);
    for (auto _ : state) {
        FitResult r = fit_expansion(m, model);
        benchmark::DoNotOptimize(r.coeffs[0]);
    }
}
BENCHMARK(BM_fit_fixed_lambda)->Arg(12)->Arg(48);

static void BM_fit_free_lambda(benchmark::State& state) {
    MapSamples m = sample_series(24, true);
    FitModel model = select_model(1.5);
    model.lambda_free = true;
    for (auto _ : state) {
        FitResult r = fit_expansion(m, model);
        benchmark::DoNotOptimize(r.lambda);
    }
}
BENCHMARK(BM_fit_free_lambda);

static void BM_mellin_hat(benchmark::State& state) {
    TaylorFn f{[](real x) { return std::sin(x) + 1.0; },
               [](int i) {
                   static const real c[6] = {1.0, 1.0, 0.0, -1.0 / 6, 0.0, 1.0 / 120};
                   return i < 6 ? c[i] : 0.0;
               }};
    for (auto _ : state) {
        real v = mellin_hat(f, 1.4, 0.8);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_mellin_hat);
