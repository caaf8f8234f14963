// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/tilesim.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spiketile/errors.hpp"

namespace spiketile
{

namespace
{

int index_of(const std::vector<NeuronId> &sorted, NeuronId neuron)
{
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), neuron);
    if (it == sorted.end() || *it != neuron)
        return -1;
    return static_cast<int>(it - sorted.begin());
}

}

int CrossbarInstance::row_of(NeuronId neuron) const
{
    return index_of(row_sources, neuron);
}

int CrossbarInstance::col_of(NeuronId neuron) const
{
    return index_of(col_neurons, neuron);
}

std::size_t CrossbarInstance::programmed_cells() const
{
    std::size_t count = 0;
    for (const auto &row : state)
        for (const std::uint8_t level : row)
            if (level > 0)
                ++count;
    return count;
}

double max_abs_weight(const SnnWorkload &workload)
{
    double ceiling = 0.0;
    for (const SynapseDecl &synapse : workload.synapses)
        ceiling = std::max(ceiling, std::fabs(synapse.weight));
    return ceiling;
}

std::uint8_t quantize_state(double weight, double weight_ceiling, std::uint32_t bits)
{
    if (bits < 1 || bits > 2)
        throw ValidationError("synapse quantization supports 1 or 2 bits");
    if (weight_ceiling <= 0.0)
        return 0;
    const double levels = static_cast<double>((1u << bits) - 1u);
    const double scaled = std::fabs(weight) / weight_ceiling * levels;
    const double level = std::floor(scaled + 0.5);
    return static_cast<std::uint8_t>(std::min(level, levels));
}

CrossbarInstance map_cluster(const SnnWorkload &workload, const ClusteredGraph &graph,
                             ClusterId cluster, const HardwareSpec &hardware)
{
    if (cluster >= graph.clusters.size())
        throw ValidationError("cluster id out of range");
    const Cluster &target = graph.clusters[cluster];
    const std::set<NeuronId> members(target.members.begin(), target.members.end());

    std::set<NeuronId> rows;
    std::set<NeuronId> cols;
    for (const SynapseDecl &synapse : workload.synapses)
        if (members.count(synapse.dst) != 0)
        {
            rows.insert(synapse.src);
            cols.insert(synapse.dst);
        }

    CrossbarInstance crossbar;
    crossbar.n = hardware.capacity.n;
    crossbar.cluster = cluster;
    crossbar.row_sources.assign(rows.begin(), rows.end());
    crossbar.col_neurons.assign(cols.begin(), cols.end());
    if (crossbar.row_sources.size() > hardware.capacity.n ||
        crossbar.col_neurons.size() > hardware.capacity.n)
        throw InfeasibleError("cluster " + std::to_string(cluster) +
                              " does not fit a " + std::to_string(hardware.capacity.n) + "x" +
                              std::to_string(hardware.capacity.n) + " crossbar");

    crossbar.state.assign(crossbar.row_sources.size(),
                          std::vector<std::uint8_t>(crossbar.col_neurons.size(), 0));
    crossbar.read_counts.assign(crossbar.row_sources.size(),
                                std::vector<std::uint64_t>(crossbar.col_neurons.size(), 0));

    const double ceiling = max_abs_weight(workload);
    for (const SynapseDecl &synapse : workload.synapses)
    {
        if (members.count(synapse.dst) == 0)
            continue;
        const int row = crossbar.row_of(synapse.src);
        const int col = crossbar.col_of(synapse.dst);
        crossbar.state[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
            quantize_state(synapse.weight, ceiling, hardware.tech.bits_per_synapse);
    }
    return crossbar;
}

double path_delay(const ParasiticsTemplate &parasitics, std::uint32_t i, std::uint32_t j)
{
    // RC ladder: the k-th segment sees the cumulative resistance of every
    // segment before it. Wordline segments load the line, line-to-line and
    // line-to-bitline coupling; bitline segments mirror that on their side.
    const double c_word = parasitics.c_wl + parasitics.c_wl_wl + parasitics.c_wl_bl;
    const double c_bit = parasitics.c_bl + parasitics.c_bl_bl + parasitics.c_wl_bl;
    const double wl_segments = static_cast<double>(j) + 1.0;
    const double bl_segments = static_cast<double>(i);

    double delay = parasitics.r_wl * c_word * wl_segments * (wl_segments + 1.0) / 2.0;
    delay += parasitics.r_wl * wl_segments * c_bit * bl_segments;
    delay += parasitics.r_bl * c_bit * bl_segments * (bl_segments + 1.0) / 2.0;
    return delay;
}

double worst_path_delay(const ParasiticsTemplate &parasitics, std::uint32_t n)
{
    if (n == 0)
        return 0.0;
    return path_delay(parasitics, n - 1, n - 1);
}

double compute_energy(std::uint64_t spikes, const TechTemplate &tech, std::uint32_t n,
                      std::uint32_t energy_ref_n)
{
    if (energy_ref_n == 0)
        throw ValidationError("energy reference dimension must be positive");
    const double scale = static_cast<double>(n) / static_cast<double>(energy_ref_n);
    return static_cast<double>(spikes) * tech.energy_per_spike_j * scale * scale;
}

void record_reads(CrossbarInstance &crossbar,
                  const std::map<NeuronId, std::uint64_t> &row_spike_totals)
{
    for (const auto &[neuron, spikes] : row_spike_totals)
    {
        const int row = crossbar.row_of(neuron);
        if (row < 0 || spikes == 0)
            continue;
        auto &states = crossbar.state[static_cast<std::size_t>(row)];
        auto &reads = crossbar.read_counts[static_cast<std::size_t>(row)];
        for (std::size_t col = 0; col < states.size(); ++col)
            if (states[col] > 0)
                reads[col] += spikes;
    }
}

std::uint64_t crossbar_lifetime(const CrossbarInstance &crossbar, std::uint64_t endurance,
                                std::uint64_t frames)
{
    std::uint64_t worst = 0;
    for (std::size_t row = 0; row < crossbar.read_counts.size(); ++row)
        for (std::size_t col = 0; col < crossbar.read_counts[row].size(); ++col)
            if (crossbar.state[row][col] > 0)
                worst = std::max(worst, crossbar.read_counts[row][col]);
    if (worst == 0 || frames == 0)
        return kUnboundedLifetime;
    // floor(endurance / (worst / frames)) without the intermediate division.
    return endurance / worst * frames + endurance % worst * frames / worst;
}

}
