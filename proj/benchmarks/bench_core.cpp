#include <benchmark/benchmark.h>

#include "morsem/kernels.hpp"
#include "morsem/morrey.hpp"
#include "morsem/semigroup.hpp"

using namespace morsem;

namespace {
const ModelManifold H3 = ModelManifold::hyperbolic(3, 1.0);
const ModelManifold E3 = ModelManifold::euclidean(3);
}  // namespace

static void BM_BallVolume(benchmark::State& state) {
    double r = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(ball_volume(H3, r));
        r = (r < 25.0) ? r + 0.1 : 0.5;
    }
}
BENCHMARK(BM_BallVolume);

static void BM_HeatKernelH3(benchmark::State& state) {
    HeatKernelModel model = HeatKernelModel::for_manifold(H3);
    double r = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(heat_kernel(model, 1.0, r));
        r = (r < 20.0) ? r + 0.01 : 0.0;
    }
}
BENCHMARK(BM_HeatKernelH3);

static void BM_PolarBallIntegral(benchmark::State& state) {
    QuadSpec spec;
    spec.rel_tol = 1e-6;
    RadialProfile f = power_exp_profile(0.5, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            integrate_polar_ball(H3, f, 2.0, BallSpec(1.5, 2.0), spec));
}
BENCHMARK(BM_PolarBallIntegral);

static void BM_RingApply(benchmark::State& state) {
    QuadSpec spec;
    spec.rel_tol = 1e-8;
    RadialProfile f = power_exp_profile(1.0, 1.0);
    std::vector<double> offsets = {0.0, 0.5, 1.0, 2.0, 4.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(apply_heat_radial(H3, f, 1.0, offsets, 0.0, spec));
}
BENCHMARK(BM_RingApply);

static void BM_MorreySweep(benchmark::State& state) {
    QuadSpec spec;
    spec.rel_tol = 1e-5;
    SweepSpec sweep = SweepSpec::log_radii(0.05, 20.0, 10, 5.0, 6, 1);
    RadialProfile f = power_exp_profile(0.5, 1.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            morrey_norm_radial(f, MorreyParams(2.0, 1.0), H3, sweep, spec).value);
}
BENCHMARK(BM_MorreySweep);

BENCHMARK_MAIN();
