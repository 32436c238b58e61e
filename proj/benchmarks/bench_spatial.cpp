#include <benchmark/benchmark.h>

#include "gcp/field.hpp"
#include "gcp/spatial.hpp"

namespace {

void BM_Convolve(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gcp::Grid1D grid(100.0, n);
    const gcp::Kernel kernel = gcp::Kernel::box(0.5);
    std::vector<double> row(n, 0.25);
    row[n / 2] = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::spatial::convolve(row, kernel, grid));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_Convolve)->Arg(1024)->Arg(4096)->Arg(16384);

// One RK4 step per iteration: the run length equals a single dt.
void BM_Rk4Step(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const int k = static_cast<int>(state.range(1));
    const gcp::ModelParams params(k, 1.5);
    const gcp::Grid1D grid(100.0, n);
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 1.0 / (k + 1));
    const gcp::spatial::Field field = gcp::spatial::uniform_field(grid, gcp::PopulationState(v));
    gcp::spatial::SimulationOptions opt;
    opt.t_end = opt.dt;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::spatial::run_spatial(field, params, gcp::Kernel::box(0.5), opt, {}));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_Rk4Step)->Args({4096, 1})->Args({4096, 3})->Args({16384, 1});

}  // namespace
