// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// tilesim.hpp - crossbar tile model
//
// Each cluster programs one n x n crossbar: rows are the presynaptic
// sources feeding the cluster (local or remote), columns are the members
// that receive synapses. Cell states are quantized conductance levels,
// level 0 being the high-resistance (unprogrammed) state. The tile model
// answers three questions: how slow is the worst read path through the
// array parasitics, how much energy do the member spikes cost, and how
// many inference frames the programmed cells survive at a given read
// endurance.
#ifndef SPIKETILE_TILESIM_HPP
#define SPIKETILE_TILESIM_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "spiketile/cluster.hpp"
#include "spiketile/hardware.hpp"
#include "spiketile/workload.hpp"

namespace spiketile
{

struct CrossbarInstance
{
    // Physical array dimension; row/column vectors never exceed it.
    std::uint32_t n{0};
    ClusterId cluster{0};
    // Sources feeding the cluster, sorted; one wordline each.
    std::vector<NeuronId> row_sources;
    // Members with at least one incoming synapse, sorted; one bitline each.
    std::vector<NeuronId> col_neurons;
    // Quantized levels, state[row][col]; 0 means no programmed device.
    std::vector<std::vector<std::uint8_t>> state;
    std::vector<std::vector<std::uint64_t>> read_counts;

    int row_of(NeuronId neuron) const;
    int col_of(NeuronId neuron) const;
    std::size_t programmed_cells() const;
};

// Largest |weight| in the workload; quantization is relative to it so the
// same weight maps to the same level on every tile.
double max_abs_weight(const SnnWorkload &workload);

// Level in [0, 2^bits - 1], linear in |weight|, half-up rounding. A zero
// weight ceiling (all-zero workload) pins every cell to level 0.
std::uint8_t quantize_state(double weight, double weight_ceiling, std::uint32_t bits);

CrossbarInstance map_cluster(const SnnWorkload &workload, const ClusteredGraph &graph,
                             ClusterId cluster, const HardwareSpec &hardware);

// Elmore delay of the read path to the cell at row i, column j: j+1 wordline
// segments from the row driver, then i bitline segments down to the sense
// amplifier at row 0. Each segment carries its line capacitance plus the
// coupling loads.
double path_delay(const ParasiticsTemplate &parasitics, std::uint32_t i, std::uint32_t j);
double worst_path_delay(const ParasiticsTemplate &parasitics, std::uint32_t n);

// Spike processing energy. Larger arrays burn quadratically more per spike
// relative to the reference dimension.
double compute_energy(std::uint64_t spikes, const TechTemplate &tech, std::uint32_t n,
                      std::uint32_t energy_ref_n);

// Every spike on a row reads all programmed cells of that row.
void record_reads(CrossbarInstance &crossbar,
                  const std::map<NeuronId, std::uint64_t> &row_spike_totals);

inline constexpr std::uint64_t kUnboundedLifetime = std::numeric_limits<std::uint64_t>::max();

// Inference frames until the busiest programmed cell exhausts its read
// endurance: floor(endurance * frames / worst_cell_reads). Idle arrays
// return kUnboundedLifetime.
std::uint64_t crossbar_lifetime(const CrossbarInstance &crossbar, std::uint64_t endurance,
                                std::uint64_t frames);

}

#endif
