#include <benchmark/benchmark.h>

#include "geomwork/cycles.hpp"
#include "geomwork/dynamics.hpp"
#include "geomwork/geometry.hpp"
#include "geomwork/steadystate.hpp"

using namespace geomwork;

static void BM_SteadyState(benchmark::State& state) {
    const LindbladModel model = tls_model(1.0, 0.2);
    for (auto _ : state) benchmark::DoNotOptimize(steady_state(model, {0.3, 0.7}));
}
BENCHMARK(BM_SteadyState);

static void BM_CurvatureFieldFD(benchmark::State& state) {
    const LindbladModel model = tls_model(1.0, 0.2);
    const GridSpec grid{{-3.0, 3.0, 61}, {0.05, 3.0, 60}};
    const auto threads = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            curvature_field(model, grid, CurvatureMethod::finite_difference, 1e-3, threads));
    }
}
BENCHMARK(BM_CurvatureFieldFD)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_LineIntegral(benchmark::State& state) {
    const LindbladModel model = tls_model(1.0, 0.2);
    const Cycle loop = default_loop('B');
    for (auto _ : state) benchmark::DoNotOptimize(line_integral_work(model, loop, 1024));
}
BENCHMARK(BM_LineIntegral)->Unit(benchmark::kMillisecond);

static void BM_EvolveOnePeriod(benchmark::State& state) {
    const LindbladModel model = tls_model(1.0, 0.0);
    const Cycle loop = default_loop('B');
    const double period = static_cast<double>(state.range(0));
    const DensityMatrix rho0 = steady_state(model, loop.position(0.0));
    const DriveSchedule schedule{loop, period, 1};
    const double dt = default_time_step(model, loop, period);
    for (auto _ : state) benchmark::DoNotOptimize(evolve(model, schedule, rho0, dt));
}
BENCHMARK(BM_EvolveOnePeriod)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
