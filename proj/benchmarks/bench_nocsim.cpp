// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <benchmark/benchmark.h>

#include "spiketile/nocsim.hpp"
#include "spiketile/topology.hpp"

using namespace spiketile;

static void bench_mesh_random(benchmark::State &state)
{
    const int side = static_cast<int>(state.range(0));
    const TopologyGraph topo(MeshTopology{static_cast<std::uint32_t>(side),
                                          static_cast<std::uint32_t>(side)});
    TrafficModel model;
    model.kind = TrafficKind::Random;
    model.rate = 0.05;
    const std::vector<FlitSpec> flits = gen_traffic(model, topo, 256, 7);

    std::uint64_t delivered = 0;
    for (auto _ : state)
    {
        NocConfig config;
        NocSimulator sim(topo, config);
        sim.inject(flits);
        sim.run(1'000'000);
        delivered += sim.delivered_count();
    }
    state.counters["flits/s"] = benchmark::Counter(static_cast<double>(delivered),
                                                   benchmark::Counter::kIsRate);
}
BENCHMARK(bench_mesh_random)->Arg(4)->Arg(8)->Arg(16);

static void bench_routing_strategy(benchmark::State &state)
{
    const TopologyGraph topo(MeshTopology{8, 8});
    TrafficModel model;
    model.kind = TrafficKind::Transpose;
    const std::vector<FlitSpec> flits = gen_traffic(model, topo, 128, 7);
    const auto strategy = static_cast<RoutingStrategy>(state.range(0));

    for (auto _ : state)
    {
        NocConfig config;
        config.strategy = strategy;
        NocSimulator sim(topo, config);
        sim.inject(flits);
        benchmark::DoNotOptimize(sim.run(1'000'000));
    }
}
BENCHMARK(bench_routing_strategy)
    ->Arg(static_cast<int>(RoutingStrategy::Xy))
    ->Arg(static_cast<int>(RoutingStrategy::WestFirst))
    ->Arg(static_cast<int>(RoutingStrategy::OddEven));

BENCHMARK_MAIN();
