#include <benchmark/benchmark.h>

#include "veeww/bath.hpp"

using namespace veeww;

static ModelParams decay_only() {
    ModelParams p;
    p.delta = 0.0;
    return p;
}

static void BM_ModeStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto bath = bath::build_bath(1.0, 1000.0, 50.0, n);
    bath::EvolveOptions opt;
    opt.dt = 0.1 / bath.cutoff;
    bath::ModeIntegrator integ(bath, decay_only(), opt);
    for (auto _ : state) {
        integ.step();
        benchmark::DoNotOptimize(integ.state().alpha);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_ModeStep)->Arg(2048)->Arg(4096)->Arg(8192);

static void BM_EvolveKernel(benchmark::State& state) {
    const auto bath = bath::build_bath(1.0, 1000.0, 50.0, 4096);
    bath::EvolveOptions opt;
    opt.t_end = static_cast<double>(state.range(0));
    for (auto _ : state) {
        auto traj = bath::evolve_kernel(bath, decay_only(), opt);
        benchmark::DoNotOptimize(traj.alpha.back());
    }
}
BENCHMARK(BM_EvolveKernel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_AngularIntegral(benchmark::State& state) {
    const auto d = bath::DipolePair::perpendicular(1.0).difference();
    for (auto _ : state) benchmark::DoNotOptimize(bath::angular_dipole_integral(d));
}
BENCHMARK(BM_AngularIntegral);
