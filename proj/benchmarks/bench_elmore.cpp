// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <benchmark/benchmark.h>

#include "spiketile/hardware.hpp"
#include "spiketile/tilesim.hpp"

using namespace spiketile;

static ParasiticsTemplate sample_parasitics()
{
    ParasiticsTemplate p;
    p.r_wl = 2.5;
    p.r_bl = 2.5;
    p.c_wl = 1.0e-16;
    p.c_bl = 1.0e-16;
    p.c_wl_wl = 2.0e-17;
    p.c_wl_bl = 1.0e-17;
    p.c_bl_bl = 2.0e-17;
    return p;
}

static void bench_worst_path_delay(benchmark::State &state)
{
    const ParasiticsTemplate parasitics = sample_parasitics();
    const auto n = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(worst_path_delay(parasitics, n));
}
BENCHMARK(bench_worst_path_delay)->Arg(16)->Arg(128)->Arg(512);

static void bench_path_delay_sweep(benchmark::State &state)
{
    const ParasiticsTemplate parasitics = sample_parasitics();
    const auto n = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state)
    {
        double total = 0.0;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
                total += path_delay(parasitics, i, j);
        benchmark::DoNotOptimize(total);
    }
}
BENCHMARK(bench_path_delay_sweep)->Arg(16)->Arg(64);

BENCHMARK_MAIN();
