#include <benchmark/benchmark.h>

#include <cmath>

#include "casimir/mie.hpp"
#include "casimir/reflection.hpp"
#include "casimir/solver.hpp"
#include "casimir/special_functions.hpp"

using namespace casimir;

static void BM_BesselScaled(benchmark::State& state) {
    const int ell = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bessel_ik_half_scaled(ell, 37.5));
}
BENCHMARK(BM_BesselScaled)->Arg(1)->Arg(100)->Arg(1000);

static void BM_MieSeriesBuild(benchmark::State& state) {
    const double x = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(MieSeries(x, 20.0));
}
BENCHMARK(BM_MieSeriesBuild)->Arg(1)->Arg(100)->Arg(1000);

static void BM_MieAmplitudes(benchmark::State& state) {
    const MieSeries series(static_cast<double>(state.range(0)), 20.0);
    double z = -1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(series.amplitudes_scaled(z));
        z = z < -19 ? -1.0 : z - 0.37;
    }
}
BENCHMARK(BM_MieAmplitudes)->Arg(1)->Arg(100)->Arg(1000);

static void BM_KernelElement(benchmark::State& state) {
    const auto kind = static_cast<KernelKind>(state.range(0));
    const RoundTripKernel kernel(0.3, Geometry(100.0, 1.0), kind, 3.0);
    double dphi = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernel(0.8, 1.1, std::cos(dphi), std::sin(dphi)));
        dphi += 0.01;
    }
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_KernelElement)->DenseRange(0, 2);

static void BM_BuildBlocks(benchmark::State& state) {
    const Geometry g(static_cast<double>(state.range(0)), 1.0);
    const auto config = QuadratureConfig{}.resolved(g);
    for (auto _ : state) benchmark::DoNotOptimize(build_blocks(0.3, g, KernelKind::Wkb0, config));
}
BENCHMARK(BM_BuildBlocks)->Arg(5)->Arg(50)->Unit(benchmark::kMillisecond);

static void BM_Energy(benchmark::State& state) {
    const auto kind = static_cast<KernelKind>(state.range(0));
    const Geometry g(10.0, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(energy(g, kind, QuadratureConfig{}));
    state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Energy)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
