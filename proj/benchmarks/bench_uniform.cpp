#include <benchmark/benchmark.h>

#include "gcp/basin.hpp"
#include "gcp/uniform.hpp"

namespace {

void BM_Phi(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const gcp::ModelParams params(k, 1.5);
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 1.0 / (k + 1));
    const gcp::PopulationState init(v);
    double r = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::uniform::phi(params, init, r));
        r = r > 10.0 ? 0.0 : r + 0.01;
    }
}
BENCHMARK(BM_Phi)->Arg(1)->Arg(2)->Arg(5)->Arg(10);

void BM_ClassifyExtinct(benchmark::State& state) {
    const gcp::ModelParams params(2, 1.5);
    const gcp::PopulationState init({0.9, 0.05, 0.05});
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::uniform::classify(params, init));
    }
}
BENCHMARK(BM_ClassifyExtinct);

void BM_ClassifySustaining(benchmark::State& state) {
    const gcp::ModelParams params(2, 1.5);
    const gcp::PopulationState init({0.2, 0.3, 0.5});
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::uniform::classify(params, init));
    }
}
BENCHMARK(BM_ClassifySustaining);

void BM_BasinMap(benchmark::State& state) {
    const int resolution = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::uniform::basin_map(2.0, resolution, 1));
    }
}
BENCHMARK(BM_BasinMap)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
