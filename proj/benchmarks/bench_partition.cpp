// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <benchmark/benchmark.h>

#include "spiketile/partition.hpp"
#include "spiketile/pipeline.hpp"

using namespace spiketile;

static SnnWorkload community_workload(std::size_t neurons)
{
    GenConfig config;
    config.kind = SyntheticKind::Community;
    config.neurons = neurons;
    config.communities = neurons / 16 + 1;
    config.seed = 11;
    return gen_synthetic(config);
}

static void bench_partition_algo(benchmark::State &state, PartitionAlgo algo)
{
    const SnnWorkload workload = community_workload(static_cast<std::size_t>(state.range(0)));
    PartitionConfig config;
    config.algo = algo;
    config.seed = 3;
    const CrossbarCapacity cap{16};
    for (auto _ : state)
    {
        const ClusteredGraph graph = partition(workload, cap, config);
        benchmark::DoNotOptimize(graph.clusters.size());
    }
}

static void bench_partition_kl(benchmark::State &state)
{
    bench_partition_algo(state, PartitionAlgo::KernighanLin);
}
static void bench_partition_greedy(benchmark::State &state)
{
    bench_partition_algo(state, PartitionAlgo::GreedyPack);
}
static void bench_partition_pso(benchmark::State &state)
{
    bench_partition_algo(state, PartitionAlgo::Pso);
}

BENCHMARK(bench_partition_kl)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(bench_partition_greedy)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(bench_partition_pso)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
