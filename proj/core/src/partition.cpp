// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "spiketile/errors.hpp"
#include "spiketile/rng.hpp"

namespace spiketile
{

namespace
{

// Sources feeding each neuron, used to grow cluster row sets incrementally.
// Adding a neuron to a cluster only ever adds that neuron's own input
// sources: a source occupies a row whether it lives inside or outside.
struct NeuronFootprint
{
    std::vector<std::vector<NeuronId>> sources;
    std::vector<std::uint32_t> in_degree;
};

NeuronFootprint footprint(const SnnWorkload &workload)
{
    NeuronFootprint fp;
    fp.sources.resize(workload.neuron_count());
    fp.in_degree.assign(workload.neuron_count(), 0);
    for (const SynapseDecl &synapse : workload.synapses)
    {
        fp.sources[synapse.dst].push_back(synapse.src);
        ++fp.in_degree[synapse.dst];
    }
    return fp;
}

void require_singletons_feasible(const NeuronFootprint &fp, CrossbarCapacity cap)
{
    for (NeuronId neuron = 0; neuron < fp.in_degree.size(); ++neuron)
    {
        if (fp.in_degree[neuron] > cap.n)
        {
            throw InfeasibleError("neuron " + std::to_string(neuron) + " has in-degree " +
                                  std::to_string(fp.in_degree[neuron]) +
                                  " exceeding crossbar capacity n=" + std::to_string(cap.n) +
                                  "; decompose the workload first");
        }
    }
}

struct ClusterLoad
{
    std::set<NeuronId> sources;
    std::uint32_t columns{0};
    std::vector<NeuronId> members;
};

bool can_add(const ClusterLoad &load, NeuronId neuron, const NeuronFootprint &fp,
             CrossbarCapacity cap)
{
    const std::uint32_t columns = load.columns + (fp.in_degree[neuron] > 0 ? 1 : 0);
    if (columns > cap.n)
    {
        return false;
    }
    std::size_t rows = load.sources.size();
    for (const NeuronId source : fp.sources[neuron])
    {
        if (load.sources.count(source) == 0)
        {
            ++rows;
        }
    }
    return rows <= cap.n;
}

void add_member(ClusterLoad &load, NeuronId neuron, const NeuronFootprint &fp)
{
    load.members.push_back(neuron);
    load.columns += fp.in_degree[neuron] > 0 ? 1 : 0;
    load.sources.insert(fp.sources[neuron].begin(), fp.sources[neuron].end());
}

std::vector<ClusterId> loads_to_assignment(const std::vector<ClusterLoad> &loads,
                                           std::size_t neuron_count)
{
    std::vector<ClusterId> assignment(neuron_count, 0);
    for (std::size_t c = 0; c < loads.size(); ++c)
    {
        for (const NeuronId member : loads[c].members)
        {
            assignment[member] = static_cast<ClusterId>(c);
        }
    }
    return assignment;
}

}

ClusteredGraph partition_arbitrary(const SnnWorkload &workload, CrossbarCapacity cap,
                                   std::uint64_t seed)
{
    const NeuronFootprint fp = footprint(workload);
    require_singletons_feasible(fp, cap);

    std::vector<NeuronId> order(workload.neuron_count());
    for (NeuronId neuron = 0; neuron < order.size(); ++neuron)
    {
        order[neuron] = neuron;
    }
    Rng rng = derive_rng(seed, "partition-arbitrary");
    rng.shuffle(order);

    std::vector<ClusterLoad> loads;
    for (const NeuronId neuron : order)
    {
        if (loads.empty() || !can_add(loads.back(), neuron, fp, cap))
        {
            loads.emplace_back();
        }
        add_member(loads.back(), neuron, fp);
    }
    return build_clustered_graph(workload, loads_to_assignment(loads, workload.neuron_count()),
                                 cap);
}

ClusteredGraph partition_greedy_pack(const SnnWorkload &workload, CrossbarCapacity cap,
                                     std::uint64_t seed)
{
    const NeuronFootprint fp = footprint(workload);
    require_singletons_feasible(fp, cap);

    std::vector<NeuronId> order(workload.neuron_count());
    for (NeuronId neuron = 0; neuron < order.size(); ++neuron)
    {
        order[neuron] = neuron;
    }
    std::sort(order.begin(), order.end(), [&](NeuronId a, NeuronId b) {
        if (fp.in_degree[a] != fp.in_degree[b])
        {
            return fp.in_degree[a] > fp.in_degree[b];
        }
        return a < b;
    });

    std::vector<ClusterLoad> loads;
    for (const NeuronId neuron : order)
    {
        bool placed = false;
        for (ClusterLoad &load : loads)
        {
            if (can_add(load, neuron, fp, cap))
            {
                add_member(load, neuron, fp);
                placed = true;
                break;
            }
        }
        if (!placed)
        {
            loads.emplace_back();
            add_member(loads.back(), neuron, fp);
        }
    }
    ClusteredGraph packed = build_clustered_graph(
        workload, loads_to_assignment(loads, workload.neuron_count()), cap);
    // Baseline guard: never report more clusters than the arbitrary fill for
    // the same seed would.
    ClusteredGraph baseline = partition_arbitrary(workload, cap, seed);
    if (baseline.cluster_count() < packed.cluster_count())
    {
        return baseline;
    }
    return packed;
}

namespace
{

// Undirected spike-weighted adjacency for the swap passes.
using WeightMap = std::map<std::pair<NeuronId, NeuronId>, double>;

WeightMap build_weights(const SnnWorkload &workload)
{
    const std::vector<double> spikes = spikes_per_frame_table(workload);
    const bool unit = workload.trace.empty();
    WeightMap weights;
    for (const SynapseDecl &synapse : workload.synapses)
    {
        const auto key = std::minmax(synapse.src, synapse.dst);
        weights[{key.first, key.second}] += unit ? 1.0 : spikes[synapse.src];
    }
    return weights;
}

double edge_weight(const WeightMap &weights, NeuronId a, NeuronId b)
{
    const auto key = std::minmax(a, b);
    const auto it = weights.find({key.first, key.second});
    return it == weights.end() ? 0.0 : it->second;
}

double cut_weight(const WeightMap &weights, const std::map<NeuronId, int> &side)
{
    double cut = 0.0;
    for (const auto &[edge, weight] : weights)
    {
        const auto a = side.find(edge.first);
        const auto b = side.find(edge.second);
        if (a != side.end() && b != side.end() && a->second != b->second)
        {
            cut += weight;
        }
    }
    return cut;
}

// One Kernighan-Lin bipartition to a local optimum of the cut weight. The
// initial halves come from a seeded shuffle; sizes differ by at most one and
// are preserved by the pairwise swaps.
std::pair<std::vector<NeuronId>, std::vector<NeuronId>>
kl_bipartition(const std::vector<NeuronId> &nodes, const WeightMap &weights, Rng &rng,
               std::vector<double> *pass_cuts)
{
    std::vector<NeuronId> order = nodes;
    rng.shuffle(order);
    const std::size_t half = (order.size() + 1) / 2;
    std::map<NeuronId, int> side;
    for (std::size_t i = 0; i < order.size(); ++i)
    {
        side[order[i]] = i < half ? 0 : 1;
    }

    // Neighbor lists restricted to this node set keep the D updates cheap.
    std::map<NeuronId, std::vector<std::pair<NeuronId, double>>> neighbors;
    for (const auto &[edge, weight] : weights)
    {
        if (side.count(edge.first) != 0 && side.count(edge.second) != 0)
        {
            neighbors[edge.first].emplace_back(edge.second, weight);
            neighbors[edge.second].emplace_back(edge.first, weight);
        }
    }

    while (true)
    {
        std::map<NeuronId, double> gain_d;
        for (const auto &[node, s] : side)
        {
            double external = 0.0;
            double internal = 0.0;
            for (const auto &[other, weight] : neighbors[node])
            {
                (side.at(other) == s ? internal : external) += weight;
            }
            gain_d[node] = external - internal;
        }

        std::set<NeuronId> locked;
        std::vector<std::pair<NeuronId, NeuronId>> swaps;
        std::vector<double> cumulative;
        double running = 0.0;
        const std::size_t steps =
            std::min(order.size() - half, half);
        for (std::size_t step = 0; step < steps; ++step)
        {
            bool found = false;
            double best_gain = -std::numeric_limits<double>::infinity();
            NeuronId best_a = 0;
            NeuronId best_b = 0;
            for (const auto &[a, sa] : side)
            {
                if (sa != 0 || locked.count(a) != 0)
                {
                    continue;
                }
                for (const auto &[b, sb] : side)
                {
                    if (sb != 1 || locked.count(b) != 0)
                    {
                        continue;
                    }
                    const double gain = gain_d.at(a) + gain_d.at(b) -
                                        2.0 * edge_weight(weights, a, b);
                    if (gain > best_gain)
                    {
                        best_gain = gain;
                        best_a = a;
                        best_b = b;
                        found = true;
                    }
                }
            }
            if (!found)
            {
                break;
            }
            locked.insert(best_a);
            locked.insert(best_b);
            swaps.emplace_back(best_a, best_b);
            running += best_gain;
            cumulative.push_back(running);
            for (const auto &[node, s] : side)
            {
                if (locked.count(node) != 0)
                {
                    continue;
                }
                const double wa = edge_weight(weights, node, best_a);
                const double wb = edge_weight(weights, node, best_b);
                gain_d[node] += s == 0 ? 2.0 * wa - 2.0 * wb : 2.0 * wb - 2.0 * wa;
            }
        }

        std::size_t best_prefix = 0;
        double best_total = 0.0;
        for (std::size_t i = 0; i < cumulative.size(); ++i)
        {
            if (cumulative[i] > best_total + 1e-12)
            {
                best_total = cumulative[i];
                best_prefix = i + 1;
            }
        }
        if (best_prefix == 0)
        {
            break;
        }
        for (std::size_t i = 0; i < best_prefix; ++i)
        {
            side[swaps[i].first] = 1;
            side[swaps[i].second] = 0;
        }
        if (pass_cuts != nullptr)
        {
            pass_cuts->push_back(cut_weight(weights, side));
        }
    }

    std::vector<NeuronId> part_a;
    std::vector<NeuronId> part_b;
    for (const auto &[node, s] : side)
    {
        (s == 0 ? part_a : part_b).push_back(node);
    }
    return {part_a, part_b};
}

}

ClusteredGraph partition_kl(const SnnWorkload &workload, CrossbarCapacity cap,
                            std::uint64_t seed, KlDiagnostics *diagnostics)
{
    const NeuronFootprint fp = footprint(workload);
    require_singletons_feasible(fp, cap);
    const WeightMap weights = build_weights(workload);
    Rng rng = derive_rng(seed, "partition-kl");

    std::vector<std::vector<NeuronId>> parts;
    std::vector<std::vector<NeuronId>> pending;
    {
        std::vector<NeuronId> all(workload.neuron_count());
        for (NeuronId neuron = 0; neuron < all.size(); ++neuron)
        {
            all[neuron] = neuron;
        }
        if (!all.empty())
        {
            pending.push_back(std::move(all));
        }
    }
    while (!pending.empty())
    {
        std::vector<NeuronId> part = std::move(pending.back());
        pending.pop_back();
        if (fits_crossbar(workload, part, cap))
        {
            parts.push_back(std::move(part));
            continue;
        }
        if (part.size() == 1)
        {
            throw InfeasibleError("neuron " + std::to_string(part[0]) +
                                  " does not fit a crossbar on its own");
        }
        std::vector<double> *cuts = nullptr;
        if (diagnostics != nullptr)
        {
            diagnostics->pass_cuts.emplace_back();
            cuts = &diagnostics->pass_cuts.back();
        }
        auto [a, b] = kl_bipartition(part, weights, rng, cuts);
        pending.push_back(std::move(b));
        pending.push_back(std::move(a));
    }

    std::vector<ClusterId> assignment(workload.neuron_count(), 0);
    for (std::size_t c = 0; c < parts.size(); ++c)
    {
        for (const NeuronId member : parts[c])
        {
            assignment[member] = static_cast<ClusterId>(c);
        }
    }
    return build_clustered_graph(workload, assignment, cap);
}

namespace
{

struct SlotState
{
    std::vector<ClusterLoad> loads;

    void rebuild(const std::vector<ClusterId> &labels, std::size_t slots,
                 const NeuronFootprint &fp)
    {
        loads.assign(slots, ClusterLoad{});
        for (NeuronId neuron = 0; neuron < labels.size(); ++neuron)
        {
            add_member(loads[labels[neuron]], neuron, fp);
        }
    }
};

bool load_feasible(const ClusterLoad &load, CrossbarCapacity cap)
{
    return load.sources.size() <= cap.n && load.columns <= cap.n;
}

double slot_violation(const ClusterLoad &load, CrossbarCapacity cap)
{
    double violation = 0.0;
    if (load.sources.size() > cap.n)
    {
        violation += static_cast<double>(load.sources.size() - cap.n);
    }
    if (load.columns > cap.n)
    {
        violation += static_cast<double>(load.columns - cap.n);
    }
    return violation;
}

double assignment_cost(const std::vector<ClusterId> &labels, const SnnWorkload &workload,
                       const std::vector<double> &spike_weight,
                       PartitionObjective objective, std::size_t slots)
{
    if (objective == PartitionObjective::MinGlobalSpikes)
    {
        double cost = 0.0;
        for (std::size_t i = 0; i < workload.synapses.size(); ++i)
        {
            const SynapseDecl &synapse = workload.synapses[i];
            if (labels[synapse.src] != labels[synapse.dst])
            {
                cost += spike_weight[i];
            }
        }
        return cost;
    }
    std::vector<char> used(slots, 0);
    for (const ClusterId label : labels)
    {
        used[label] = 1;
    }
    double count = 0.0;
    for (const char u : used)
    {
        count += u;
    }
    return count;
}

// Deterministic repair: drain overfull slots (largest fanin first) and
// re-home the evicted neurons in the least-loaded slot that still fits them.
bool repair_labels(std::vector<ClusterId> &labels, std::size_t slots,
                   const NeuronFootprint &fp, CrossbarCapacity cap)
{
    SlotState state;
    state.rebuild(labels, slots, fp);
    std::vector<NeuronId> evicted;
    for (std::size_t slot = 0; slot < slots; ++slot)
    {
        ClusterLoad &load = state.loads[slot];
        while (!load_feasible(load, cap))
        {
            auto worst = load.members.end();
            for (auto it = load.members.begin(); it != load.members.end(); ++it)
            {
                if (worst == load.members.end() ||
                    fp.in_degree[*it] > fp.in_degree[*worst] ||
                    (fp.in_degree[*it] == fp.in_degree[*worst] && *it > *worst))
                {
                    worst = it;
                }
            }
            evicted.push_back(*worst);
            load.members.erase(worst);
            // Rebuild the row set from scratch; evictions are rare enough.
            load.sources.clear();
            load.columns = 0;
            std::vector<NeuronId> members = load.members;
            load.members.clear();
            for (const NeuronId member : members)
            {
                add_member(load, member, fp);
            }
        }
    }
    for (const NeuronId neuron : evicted)
    {
        std::size_t best_slot = slots;
        for (std::size_t slot = 0; slot < slots; ++slot)
        {
            if (!can_add(state.loads[slot], neuron, fp, cap))
            {
                continue;
            }
            if (best_slot == slots ||
                state.loads[slot].members.size() < state.loads[best_slot].members.size())
            {
                best_slot = slot;
            }
        }
        if (best_slot == slots)
        {
            return false;
        }
        add_member(state.loads[best_slot], neuron, fp);
    }
    for (std::size_t slot = 0; slot < slots; ++slot)
    {
        for (const NeuronId member : state.loads[slot].members)
        {
            labels[member] = static_cast<ClusterId>(slot);
        }
    }
    return true;
}

}

ClusteredGraph partition_pso(const SnnWorkload &workload, CrossbarCapacity cap,
                             PartitionObjective objective, std::uint64_t seed,
                             const PsoParams &params)
{
    const NeuronFootprint fp = footprint(workload);
    require_singletons_feasible(fp, cap);
    const std::size_t n = workload.neuron_count();
    if (n == 0)
    {
        return build_clustered_graph(workload, {}, cap);
    }

    const ClusteredGraph baseline = partition_arbitrary(workload, cap, seed);
    const std::size_t slots = std::min(n, baseline.cluster_count() + 2);

    std::vector<double> spike_weight(workload.synapses.size(), 1.0);
    double max_weight = 0.0;
    {
        const std::vector<double> spikes = spikes_per_frame_table(workload);
        const bool unit = workload.trace.empty();
        for (std::size_t i = 0; i < workload.synapses.size(); ++i)
        {
            spike_weight[i] = unit ? 1.0 : spikes[workload.synapses[i].src];
            max_weight = std::max(max_weight, spike_weight[i]);
        }
    }
    const double lambda = 10.0 * (max_weight > 0.0 ? max_weight : 1.0);

    Rng rng = derive_rng(seed, "partition-pso");
    const std::size_t dims = n * slots;
    const int swarm = std::max(1, params.swarm);

    std::vector<std::vector<double>> position(swarm, std::vector<double>(dims));
    std::vector<std::vector<double>> velocity(swarm, std::vector<double>(dims));
    for (int p = 0; p < swarm; ++p)
    {
        for (double &x : position[p])
        {
            x = rng.unit();
        }
        for (double &v : velocity[p])
        {
            v = rng.range(-0.5, 0.5);
        }
    }
    // Particle 0 starts on the arbitrary baseline.
    {
        std::vector<ClusterId> base_labels(n, 0);
        for (const Cluster &cluster : baseline.clusters)
        {
            for (const NeuronId member : cluster.members)
            {
                base_labels[member] = cluster.id;
            }
        }
        for (NeuronId neuron = 0; neuron < n; ++neuron)
        {
            for (std::size_t slot = 0; slot < slots; ++slot)
            {
                position[0][neuron * slots + slot] =
                    slot == base_labels[neuron] ? 1.0 : 0.0;
            }
        }
    }

    auto decode = [&](const std::vector<double> &x) {
        std::vector<ClusterId> labels(n, 0);
        for (NeuronId neuron = 0; neuron < n; ++neuron)
        {
            std::size_t best = 0;
            for (std::size_t slot = 1; slot < slots; ++slot)
            {
                if (x[neuron * slots + slot] > x[neuron * slots + best])
                {
                    best = slot;
                }
            }
            labels[neuron] = static_cast<ClusterId>(best);
        }
        return labels;
    };

    auto violation_of = [&](const std::vector<ClusterId> &labels) {
        SlotState state;
        state.rebuild(labels, slots, fp);
        double violation = 0.0;
        for (const ClusterLoad &load : state.loads)
        {
            violation += slot_violation(load, cap);
        }
        return violation;
    };

    std::vector<double> pbest_fitness(swarm, std::numeric_limits<double>::infinity());
    std::vector<std::vector<double>> pbest_position = position;
    double gbest_fitness = std::numeric_limits<double>::infinity();
    std::vector<double> gbest_position = position[0];

    bool have_solution = false;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<ClusterId> best_labels;

    auto evaluate = [&](int p) {
        std::vector<ClusterId> labels = decode(position[p]);
        std::vector<ClusterId> repaired = labels;
        double fitness;
        if (repair_labels(repaired, slots, fp, cap))
        {
            const double cost =
                assignment_cost(repaired, workload, spike_weight, objective, slots);
            fitness = cost;
            if (!have_solution || cost < best_cost)
            {
                have_solution = true;
                best_cost = cost;
                best_labels = repaired;
            }
        }
        else
        {
            fitness = assignment_cost(labels, workload, spike_weight, objective, slots) +
                      lambda * violation_of(labels);
        }
        if (fitness < pbest_fitness[p])
        {
            pbest_fitness[p] = fitness;
            pbest_position[p] = position[p];
        }
        if (fitness < gbest_fitness)
        {
            gbest_fitness = fitness;
            gbest_position = position[p];
        }
    };

    for (int p = 0; p < swarm; ++p)
    {
        evaluate(p);
    }
    for (int iter = 0; iter < params.iterations; ++iter)
    {
        for (int p = 0; p < swarm; ++p)
        {
            for (std::size_t d = 0; d < dims; ++d)
            {
                const double r1 = rng.unit();
                const double r2 = rng.unit();
                double v = params.inertia * velocity[p][d] +
                           params.c1 * r1 * (pbest_position[p][d] - position[p][d]) +
                           params.c2 * r2 * (gbest_position[d] - position[p][d]);
                v = std::clamp(v, -params.velocity_clamp, params.velocity_clamp);
                velocity[p][d] = v;
                position[p][d] = std::clamp(position[p][d] + v, 0.0, 1.0);
            }
            evaluate(p);
        }
    }

    if (!have_solution)
    {
        throw InfeasibleError("particle swarm found no feasible assignment for capacity n=" +
                              std::to_string(cap.n) + " with " + std::to_string(slots) +
                              " cluster slots");
    }
    return build_clustered_graph(workload, best_labels, cap);
}

ClusteredGraph partition(const SnnWorkload &workload, CrossbarCapacity cap,
                         const PartitionConfig &config)
{
    switch (config.algo)
    {
    case PartitionAlgo::Arbitrary:
        return partition_arbitrary(workload, cap, config.seed);
    case PartitionAlgo::GreedyPack:
        return partition_greedy_pack(workload, cap, config.seed);
    case PartitionAlgo::KernighanLin:
        return partition_kl(workload, cap, config.seed);
    default:
        return partition_pso(workload, cap, config.objective, config.seed, config.pso);
    }
}

const char *to_string(PartitionAlgo algo)
{
    switch (algo)
    {
    case PartitionAlgo::Arbitrary:
        return "arbitrary";
    case PartitionAlgo::GreedyPack:
        return "greedy";
    case PartitionAlgo::KernighanLin:
        return "kl";
    default:
        return "pso";
    }
}

PartitionAlgo partition_algo_from_string(const std::string &token)
{
    if (token == "arbitrary")
    {
        return PartitionAlgo::Arbitrary;
    }
    if (token == "greedy")
    {
        return PartitionAlgo::GreedyPack;
    }
    if (token == "kl")
    {
        return PartitionAlgo::KernighanLin;
    }
    if (token == "pso")
    {
        return PartitionAlgo::Pso;
    }
    throw ParseError("unknown partition algorithm '" + token + "'");
}

const char *to_string(PartitionObjective objective)
{
    return objective == PartitionObjective::MinGlobalSpikes ? "spikes" : "clusters";
}

PartitionObjective partition_objective_from_string(const std::string &token)
{
    if (token == "spikes")
    {
        return PartitionObjective::MinGlobalSpikes;
    }
    if (token == "clusters")
    {
        return PartitionObjective::MinClusterCount;
    }
    throw ParseError("unknown partition objective '" + token + "'");
}

}
