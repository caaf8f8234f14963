// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// cluster.hpp - grouping neurons into crossbar-sized clusters
//
// A cluster occupies one tile. Its crossbar stores every synapse that
// terminates at a member neuron, so the feasibility check counts rows by
// distinct pre-synaptic sources feeding the cluster (whether those sources
// are members or live elsewhere) and columns by post-synaptic members.
#ifndef SPIKETILE_CLUSTER_HPP
#define SPIKETILE_CLUSTER_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spiketile/hardware.hpp"
#include "spiketile/types.hpp"
#include "spiketile/workload.hpp"

namespace spiketile
{

struct Cluster
{
    ClusterId id{0};
    std::vector<NeuronId> members;          // sorted
    std::vector<SynapseDecl> internal;      // both endpoints are members
};

// A synapse whose endpoints landed in different clusters. `spikes` is the
// per-frame mean spike count of the source neuron, the traffic this synapse
// puts on the interconnect.
struct GlobalSynapse
{
    ClusterId src_cluster{0};
    ClusterId dst_cluster{0};
    NeuronId src_neuron{0};
    NeuronId dst_neuron{0};
    double weight{0.0};
    double spikes{0.0};
};

struct ClusteredGraph
{
    std::vector<Cluster> clusters;
    std::vector<GlobalSynapse> global_synapses;
    CrossbarCapacity capacity;

    std::size_t cluster_count() const { return clusters.size(); }
};

// True when the member set fits an n x n crossbar: distinct sources feeding
// the members (internal ones included) stay within n rows, post-synaptic
// members stay within n columns, and no member's in-degree exceeds n.
bool fits_crossbar(const SnnWorkload &workload, const std::vector<NeuronId> &members,
                   CrossbarCapacity cap);
bool fits_crossbar(const Cluster &cluster, const ClusteredGraph &graph,
                   CrossbarCapacity cap);

// Build the clustered view from a per-neuron assignment (neuron id -> cluster
// label). Labels may be sparse; clusters are renumbered 0..C-1 in ascending
// order of their smallest member. Throws ValidationError when the assignment
// is not an exact partition, InfeasibleError when a cluster exceeds capacity.
ClusteredGraph build_clustered_graph(const SnnWorkload &workload,
                                     const std::vector<ClusterId> &assignment,
                                     CrossbarCapacity cap);

// Invariant re-check for an existing graph against its workload.
void validate_clustered_graph(const SnnWorkload &workload, const ClusteredGraph &graph);

// Cluster file: `capacity_n = N` header, then `cluster <id>: n1 n2 ...` and
// `global <srcC> <dstC> <srcN> <dstN> <weight> <spikes>` lines.
std::string serialize_clusters(const ClusteredGraph &graph);
void save_clusters(const ClusteredGraph &graph, const std::string &path);
ClusteredGraph parse_clusters(const std::string &content, const std::string &name,
                              const SnnWorkload &workload);
ClusteredGraph load_clusters(const std::string &path, const SnnWorkload &workload);

// Total per-frame spike traffic crossing cluster boundaries.
double cost_global_spikes(const ClusteredGraph &graph);

// Per-frame spike count that stays inside clusters (source spikes over
// internal synapses).
double local_spikes_per_frame(const SnnWorkload &workload, const ClusteredGraph &graph);

}

#endif
