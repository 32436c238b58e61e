#include <benchmark/benchmark.h>

#include "gcp/stability.hpp"

namespace {

void BM_SustainingSpectrum(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    double beta = 1e-3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gcp::stability::sustaining_spectrum(k, beta));
        beta = beta > 1e3 ? 1e-3 : beta * 1.5;
    }
}
BENCHMARK(BM_SustainingSpectrum)->Arg(1)->Arg(2)->Arg(5)->Arg(10);

}  // namespace
