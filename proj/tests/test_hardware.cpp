// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <doctest.h>

#include "spiketile/errors.hpp"
#include "spiketile/hardware.hpp"

using namespace spiketile;

TEST_SUITE("hardware")
{
    TEST_CASE("topology strings parse and print")
    {
        const Topology mesh = topology_from_string("mesh:5x3");
        CHECK(tile_count(mesh) == 15);
        CHECK(to_string(mesh) == "mesh:5x3");

        const Topology bus = topology_from_string("bus:7");
        CHECK(tile_count(bus) == 7);
        CHECK(to_string(bus) == "bus:7");

        const Topology staged = topology_from_string("twostage:3,4");
        CHECK(tile_count(staged) == 12);
        CHECK(to_string(staged) == "twostage:3,4");

        CHECK_THROWS_AS(topology_from_string("ring:9"), ParseError);
        CHECK_THROWS_AS(topology_from_string("mesh:4"), ParseError);
        CHECK_THROWS_AS(topology_from_string("mesh:0x4"), ValidationError);
        CHECK_THROWS_AS(topology_from_string("twostage:4"), ParseError);
    }

    TEST_CASE("hardware files round-trip every field")
    {
        HardwareSpec spec;
        spec.topology = MeshTopology{3, 2};
        spec.capacity.n = 32;
        spec.parasitics.r_wl = 2.5;
        spec.parasitics.c_bl_bl = 3e-17;
        spec.tech.node_nm = 45;
        spec.tech.read_endurance = 123456789;
        spec.tech.bits_per_synapse = 2;
        spec.energy_ref_n = 64;
        spec.ticks_per_ms = 10;

        const HardwareSpec again = parse_hardware(serialize_hardware(spec), "mem");
        CHECK(to_string(again.topology) == "mesh:3x2");
        CHECK(again.capacity.n == 32);
        CHECK(again.parasitics.r_wl == 2.5);
        CHECK(again.parasitics.c_bl_bl == 3e-17);
        CHECK(again.tech.node_nm == 45);
        CHECK(again.tech.read_endurance == 123456789);
        CHECK(again.tech.bits_per_synapse == 2);
        CHECK(again.energy_ref_n == 64);
        CHECK(again.ticks_per_ms == 10);
    }

    TEST_CASE("defaults survive a minimal file")
    {
        const HardwareSpec spec = parse_hardware("topology = bus:4\n", "mem");
        CHECK(tile_count(spec.topology) == 4);
        CHECK(spec.capacity.n == 128);
        CHECK(spec.tech.energy_per_spike_j == doctest::Approx(50e-12));
        CHECK(spec.tech.hop_energy_j == doctest::Approx(1e-12));
    }

    TEST_CASE("invalid hardware values are rejected")
    {
        CHECK_THROWS_AS(parse_hardware("capacity_n = 1\n", "mem"), ValidationError);
        CHECK_THROWS_AS(parse_hardware("bits_per_synapse = 3\n", "mem"), ValidationError);
        CHECK_THROWS_AS(parse_hardware("unknown_key = 1\n", "mem"), ParseError);
    }
}
