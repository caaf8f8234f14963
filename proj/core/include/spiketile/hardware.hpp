// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// hardware.hpp - target platform description
//
// A platform is a grid of tiles joined by an interconnect. Each tile carries
// one n x n crossbar whose wire parasitics and device technology are given
// by per-file templates. Shipped configs under configs/ carry illustrative
// defaults only; calibration values are the user's responsibility.
#ifndef SPIKETILE_HARDWARE_HPP
#define SPIKETILE_HARDWARE_HPP

#include <cstdint>
#include <string>
#include <variant>

#include "spiketile/types.hpp"

namespace spiketile
{

struct CrossbarCapacity
{
    // Rows and columns of the synaptic array (n inputs by n outputs).
    std::uint32_t n{128};
};

// Per-segment wire parasitics of the crossbar array. Resistances in ohms,
// capacitances in farads. Coupling terms are lumped onto the segment ground
// capacitance for delay purposes.
struct ParasiticsTemplate
{
    double r_wl{0.0};
    double r_bl{0.0};
    double c_wl{0.0};
    double c_bl{0.0};
    double c_wl_wl{0.0};
    double c_wl_bl{0.0};
    double c_bl_bl{0.0};
};

struct TechTemplate
{
    std::string neuron_tech{"cmos"};
    std::uint32_t node_nm{65};
    double supply_v{1.0};
    double energy_per_spike_j{50e-12};
    std::string synapse_tech{"oxrram"};
    std::string access_device{"nmos"};
    std::uint32_t bits_per_synapse{1};
    std::uint64_t read_endurance{1000000000};
    double hop_energy_j{1e-12};
};

struct MeshTopology
{
    int width{0};
    int height{0};
};

// A shared medium cut into bus segments: tiles sit in a line and adjacent
// tiles are joined by one time-multiplexed segment.
struct SegmentedBusTopology
{
    int segments{0};
};

// Tiles grouped under first-stage switches which meet at one second-stage
// switch: `groups` first-stage switches with `group_size` tiles each.
struct TwoStageTopology
{
    int groups{0};
    int group_size{0};
};

using Topology = std::variant<MeshTopology, SegmentedBusTopology, TwoStageTopology>;

int tile_count(const Topology &topology);
std::string to_string(const Topology &topology);
// Accepts mesh:WxH, bus:K, twostage:A,B.
Topology topology_from_string(const std::string &token);

struct HardwareSpec
{
    Topology topology{MeshTopology{4, 4}};
    CrossbarCapacity capacity;
    ParasiticsTemplate parasitics;
    TechTemplate tech;
    // Reference crossbar dimension for the quadratic energy scaling rule.
    std::uint32_t energy_ref_n{128};
    // Tick granularity used when reporting latencies in wall-clock terms.
    std::uint32_t ticks_per_ms{1000};
};

HardwareSpec load_hardware(const std::string &path);
HardwareSpec parse_hardware(const std::string &content, const std::string &name);
std::string serialize_hardware(const HardwareSpec &spec);
void save_hardware(const HardwareSpec &spec, const std::string &path);

}

#endif
