// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/hardware.hpp"

#include <set>

#include "spiketile/errors.hpp"
#include "spiketile/textio.hpp"

namespace spiketile
{

int tile_count(const Topology &topology)
{
    if (const auto *mesh = std::get_if<MeshTopology>(&topology))
    {
        return mesh->width * mesh->height;
    }
    if (const auto *bus = std::get_if<SegmentedBusTopology>(&topology))
    {
        return bus->segments;
    }
    const auto &stages = std::get<TwoStageTopology>(topology);
    return stages.groups * stages.group_size;
}

std::string to_string(const Topology &topology)
{
    if (const auto *mesh = std::get_if<MeshTopology>(&topology))
    {
        return "mesh:" + std::to_string(mesh->width) + "x" + std::to_string(mesh->height);
    }
    if (const auto *bus = std::get_if<SegmentedBusTopology>(&topology))
    {
        return "bus:" + std::to_string(bus->segments);
    }
    const auto &stages = std::get<TwoStageTopology>(topology);
    return "twostage:" + std::to_string(stages.groups) + "," +
           std::to_string(stages.group_size);
}

Topology topology_from_string(const std::string &token)
{
    const auto colon = token.find(':');
    if (colon == std::string::npos)
    {
        throw ParseError("topology '" + token + "' is missing parameters");
    }
    const std::string kind = token.substr(0, colon);
    const std::string args = token.substr(colon + 1);
    const std::string where = "topology '" + token + "'";
    if (kind == "mesh")
    {
        const auto x = args.find('x');
        if (x == std::string::npos)
        {
            throw ParseError(where + ": expected mesh:WxH");
        }
        MeshTopology mesh;
        mesh.width = static_cast<int>(parse_u64(args.substr(0, x), where));
        mesh.height = static_cast<int>(parse_u64(args.substr(x + 1), where));
        if (mesh.width < 1 || mesh.height < 1)
        {
            throw ValidationError(where + ": mesh dimensions must be positive");
        }
        return mesh;
    }
    if (kind == "bus")
    {
        SegmentedBusTopology bus;
        bus.segments = static_cast<int>(parse_u64(args, where));
        if (bus.segments < 1)
        {
            throw ValidationError(where + ": bus needs at least one segment");
        }
        return bus;
    }
    if (kind == "twostage")
    {
        const auto comma = args.find(',');
        if (comma == std::string::npos)
        {
            throw ParseError(where + ": expected twostage:A,B");
        }
        TwoStageTopology stages;
        stages.groups = static_cast<int>(parse_u64(args.substr(0, comma), where));
        stages.group_size = static_cast<int>(parse_u64(args.substr(comma + 1), where));
        if (stages.groups < 1 || stages.group_size < 1)
        {
            throw ValidationError(where + ": stage sizes must be positive");
        }
        return stages;
    }
    throw ParseError(where + ": unknown topology kind '" + kind + "'");
}

HardwareSpec load_hardware(const std::string &path)
{
    return parse_hardware(read_file(path), path);
}

HardwareSpec parse_hardware(const std::string &content, const std::string &name)
{
    const KeyValueFile kv = KeyValueFile::parse(content, name);
    static const std::set<std::string> known = {
        "topology",      "capacity_n",   "energy_ref_n", "ticks_per_ms", "r_wl",
        "r_bl",          "c_wl",         "c_bl",         "c_wl_wl",      "c_wl_bl",
        "c_bl_bl",       "neuron_tech",  "node_nm",      "supply_v",
        "energy_per_spike_j", "synapse_tech", "access_device", "bits_per_synapse",
        "read_endurance", "hop_energy_j"};
    for (const auto &[key, value] : kv.entries())
    {
        if (known.count(key) == 0)
        {
            throw ParseError(name + ": unknown key '" + key + "'");
        }
    }

    HardwareSpec spec;
    if (kv.has("topology"))
    {
        spec.topology = topology_from_string(kv.get("topology"));
    }
    if (kv.has("capacity_n"))
    {
        spec.capacity.n = static_cast<std::uint32_t>(kv.get_u64("capacity_n"));
    }
    if (kv.has("energy_ref_n"))
    {
        spec.energy_ref_n = static_cast<std::uint32_t>(kv.get_u64("energy_ref_n"));
    }
    if (kv.has("ticks_per_ms"))
    {
        spec.ticks_per_ms = static_cast<std::uint32_t>(kv.get_u64("ticks_per_ms"));
    }

    ParasiticsTemplate &par = spec.parasitics;
    if (kv.has("r_wl")) par.r_wl = kv.get_double("r_wl");
    if (kv.has("r_bl")) par.r_bl = kv.get_double("r_bl");
    if (kv.has("c_wl")) par.c_wl = kv.get_double("c_wl");
    if (kv.has("c_bl")) par.c_bl = kv.get_double("c_bl");
    if (kv.has("c_wl_wl")) par.c_wl_wl = kv.get_double("c_wl_wl");
    if (kv.has("c_wl_bl")) par.c_wl_bl = kv.get_double("c_wl_bl");
    if (kv.has("c_bl_bl")) par.c_bl_bl = kv.get_double("c_bl_bl");

    TechTemplate &tech = spec.tech;
    if (kv.has("neuron_tech")) tech.neuron_tech = kv.get("neuron_tech");
    if (kv.has("node_nm")) tech.node_nm = static_cast<std::uint32_t>(kv.get_u64("node_nm"));
    if (kv.has("supply_v")) tech.supply_v = kv.get_double("supply_v");
    if (kv.has("energy_per_spike_j"))
        tech.energy_per_spike_j = kv.get_double("energy_per_spike_j");
    if (kv.has("synapse_tech")) tech.synapse_tech = kv.get("synapse_tech");
    if (kv.has("access_device")) tech.access_device = kv.get("access_device");
    if (kv.has("bits_per_synapse"))
        tech.bits_per_synapse = static_cast<std::uint32_t>(kv.get_u64("bits_per_synapse"));
    if (kv.has("read_endurance")) tech.read_endurance = kv.get_u64("read_endurance");
    if (kv.has("hop_energy_j")) tech.hop_energy_j = kv.get_double("hop_energy_j");

    if (spec.capacity.n < 2)
    {
        throw ValidationError(name + ": capacity_n must be at least 2");
    }
    if (spec.energy_ref_n < 1)
    {
        throw ValidationError(name + ": energy_ref_n must be positive");
    }
    if (tech.bits_per_synapse != 1 && tech.bits_per_synapse != 2)
    {
        throw ValidationError(name + ": bits_per_synapse must be 1 or 2");
    }
    if (par.r_wl < 0 || par.r_bl < 0 || par.c_wl < 0 || par.c_bl < 0 ||
        par.c_wl_wl < 0 || par.c_wl_bl < 0 || par.c_bl_bl < 0)
    {
        throw ValidationError(name + ": parasitic values must be non-negative");
    }
    return spec;
}

std::string serialize_hardware(const HardwareSpec &spec)
{
    KeyValueFile kv;
    kv.set("topology", to_string(spec.topology));
    kv.set("capacity_n", std::to_string(spec.capacity.n));
    kv.set("energy_ref_n", std::to_string(spec.energy_ref_n));
    kv.set("ticks_per_ms", std::to_string(spec.ticks_per_ms));
    kv.set("r_wl", format_double(spec.parasitics.r_wl));
    kv.set("r_bl", format_double(spec.parasitics.r_bl));
    kv.set("c_wl", format_double(spec.parasitics.c_wl));
    kv.set("c_bl", format_double(spec.parasitics.c_bl));
    kv.set("c_wl_wl", format_double(spec.parasitics.c_wl_wl));
    kv.set("c_wl_bl", format_double(spec.parasitics.c_wl_bl));
    kv.set("c_bl_bl", format_double(spec.parasitics.c_bl_bl));
    kv.set("neuron_tech", spec.tech.neuron_tech);
    kv.set("node_nm", std::to_string(spec.tech.node_nm));
    kv.set("supply_v", format_double(spec.tech.supply_v));
    kv.set("energy_per_spike_j", format_double(spec.tech.energy_per_spike_j));
    kv.set("synapse_tech", spec.tech.synapse_tech);
    kv.set("access_device", spec.tech.access_device);
    kv.set("bits_per_synapse", std::to_string(spec.tech.bits_per_synapse));
    kv.set("read_endurance", std::to_string(spec.tech.read_endurance));
    kv.set("hop_energy_j", format_double(spec.tech.hop_energy_j));
    return kv.serialize();
}

void save_hardware(const HardwareSpec &spec, const std::string &path)
{
    write_file(path, serialize_hardware(spec));
}

}
