// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// partition.hpp - grouping neurons into crossbar-sized clusters
//
// Synapse traffic is weighted by the source neuron's mean spikes per frame
// (unit weight when the workload carries no trace), so minimizing the weight
// of the cut minimizes the spike count on the interconnect.
#ifndef SPIKETILE_PARTITION_HPP
#define SPIKETILE_PARTITION_HPP

#include <cstdint>
#include <vector>

#include "spiketile/cluster.hpp"
#include "spiketile/hardware.hpp"
#include "spiketile/workload.hpp"

namespace spiketile
{

enum class PartitionAlgo
{
    Arbitrary,
    GreedyPack,
    KernighanLin,
    Pso,
};

enum class PartitionObjective
{
    MinGlobalSpikes,
    MinClusterCount,
};

struct PsoParams
{
    int swarm{20};
    int iterations{200};
    double inertia{0.72};
    double c1{1.49};
    double c2{1.49};
    double velocity_clamp{4.0};
};

struct PartitionConfig
{
    PartitionAlgo algo{PartitionAlgo::KernighanLin};
    PartitionObjective objective{PartitionObjective::MinGlobalSpikes};
    std::uint64_t seed{0};
    PsoParams pso;
};

// Baseline: seeded random neuron order, filled sequentially. A cluster stays
// open only while the next neuron fits; once closed it is never revisited.
ClusteredGraph partition_arbitrary(const SnnWorkload &workload, CrossbarCapacity cap,
                                   std::uint64_t seed);

// First-fit-decreasing by in-degree over all open clusters. Guarded against
// the Arbitrary baseline for the same seed: whenever the random fill happens
// to need fewer clusters, that result is returned instead, so the greedy
// cluster count never exceeds the baseline's.
ClusteredGraph partition_greedy_pack(const SnnWorkload &workload, CrossbarCapacity cap,
                                     std::uint64_t seed = 0);

// Per-bipartition trace for tests: cut weight after every applied swap pass.
struct KlDiagnostics
{
    std::vector<std::vector<double>> pass_cuts;
};

// Recursive bipartitioning: any part that fits a crossbar becomes a cluster,
// any other is split by classic Kernighan-Lin swap passes on the
// spike-weighted graph (halves may differ by one neuron).
ClusteredGraph partition_kl(const SnnWorkload &workload, CrossbarCapacity cap,
                            std::uint64_t seed, KlDiagnostics *diagnostics = nullptr);

// Particle swarm over per-neuron cluster-slot scores: assignment is the
// argmax slot per neuron (lowest index wins ties), an overflow repair step
// moves neurons to the least-loaded feasible cluster, and fitness adds
// lambda times the capacity violation to the objective cost, with
// lambda = 10 x the largest synapse spike weight. One particle starts from
// the Arbitrary solution for the same seed, so the result never costs more
// than that baseline.
ClusteredGraph partition_pso(const SnnWorkload &workload, CrossbarCapacity cap,
                             PartitionObjective objective, std::uint64_t seed,
                             const PsoParams &params = {});

ClusteredGraph partition(const SnnWorkload &workload, CrossbarCapacity cap,
                         const PartitionConfig &config);

const char *to_string(PartitionAlgo algo);
PartitionAlgo partition_algo_from_string(const std::string &token);
const char *to_string(PartitionObjective objective);
PartitionObjective partition_objective_from_string(const std::string &token);

}

#endif
