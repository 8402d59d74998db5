#include <benchmark/benchmark.h>

#include "veeww/ww_markov.hpp"

using namespace veeww;

static void BM_TauCurve(benchmark::State& state) {
    const auto grid = markov::make_grid(0.11, kHalfPi, static_cast<std::size_t>(state.range(0)),
                                        markov::Spacing::log);
    for (auto _ : state) {
        auto rows = markov::tau_curve(0.1, grid, RateForm::small_epsilon);
        benchmark::DoNotOptimize(rows.data());
    }
}
BENCHMARK(BM_TauCurve)->Arg(200)->Arg(5000);
BENCHMARK_MAIN();
