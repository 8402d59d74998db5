#include <benchmark/benchmark.h>

#include "veeww/rng.hpp"
#include "veeww/trajectory.hpp"

using namespace veeww;

static void BM_Philox(benchmark::State& state) {
    rng::Philox4x32Block ctr{0, 0, 0, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rng::philox4x32(ctr, {42, 0}));
        ++ctr[0];
    }
}
BENCHMARK(BM_Philox);

static void BM_ScatteringTimes(benchmark::State& state) {
    ModelParams p;
    p.delta = 0.1;
    p.epsilon = 0.2;
    const auto workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        auto v = trajectory::draw_scattering_times(p, RateForm::small_epsilon, 100000, {42, 0}, workers);
        benchmark::DoNotOptimize(v.data());
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_ScatteringTimes)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ConditionalArrivals(benchmark::State& state) {
    ModelParams p;
    p.delta = 0.001;
    p.epsilon = static_cast<double>(state.range(0)) / 100.0;
    for (auto _ : state) {
        auto d = trajectory::draw_conditional_arrivals(p, 100000, {42, 0});
        benchmark::DoNotOptimize(d.samples.data());
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_ConditionalArrivals)->Arg(0)->Arg(50)->Unit(benchmark::kMillisecond);
