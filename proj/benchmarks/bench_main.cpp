#include <benchmark/benchmark.h>

#include "qb/lattice_modes.hpp"

namespace {

void BM_FloquetPower(benchmark::State& state) {
    const auto mode = qb::floquet_one_kick(1.1, 0.785, -0.785);
    const long long m = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qb::floquet_power(mode, m));
    }
}
BENCHMARK(BM_FloquetPower)->Arg(10)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
