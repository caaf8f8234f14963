// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <doctest.h>

#include "oracles.hpp"
#include "spiketile/cluster.hpp"
#include "spiketile/errors.hpp"
#include "spiketile/tilesim.hpp"

using namespace spiketile;

namespace
{

// 0 -> 2 (1.0), 1 -> 2 (-2.0), 2 -> 3 (4.0); clusters {0, 1} and {2, 3}.
struct Fixture
{
    SnnWorkload workload;
    ClusteredGraph graph;

    Fixture()
    {
        workload = make_workload(
            {{0, NeuronKind::Input}, {1, NeuronKind::Input}, {2, NeuronKind::Hidden},
             {3, NeuronKind::Output}},
            {{0, 2, 1.0}, {1, 2, -2.0}, {2, 3, 4.0}}, {});
        graph = build_clustered_graph(workload, {0, 0, 1, 1}, CrossbarCapacity{8});
    }
};

ParasiticsTemplate sample_parasitics()
{
    ParasiticsTemplate p;
    p.r_wl = 2.0;
    p.r_bl = 4.0;
    p.c_wl = 0.1;
    p.c_bl = 0.2;
    p.c_wl_wl = 0.01;
    p.c_wl_bl = 0.02;
    p.c_bl_bl = 0.03;
    return p;
}

}

TEST_SUITE("tilesim")
{
    TEST_CASE("quantization is linear with half-up rounding")
    {
        CHECK(quantize_state(0.0, 1.0, 1) == 0);
        CHECK(quantize_state(0.49, 1.0, 1) == 0);
        CHECK(quantize_state(0.5, 1.0, 1) == 1);
        CHECK(quantize_state(-0.8, 1.0, 1) == 1);  // magnitude only
        CHECK(quantize_state(1.0, 3.0, 2) == 1);   // 1.0 exactly
        CHECK(quantize_state(0.5, 1.0, 2) == 2);   // 1.5 rounds up
        CHECK(quantize_state(2.5, 3.0, 2) == 3);
        CHECK(quantize_state(9.0, 1.0, 2) == 3);   // clamped to the top level
        CHECK(quantize_state(0.7, 0.0, 1) == 0);   // zero ceiling pins to 0
        CHECK_THROWS_AS(quantize_state(0.5, 1.0, 3), ValidationError);
        CHECK_THROWS_AS(quantize_state(0.5, 1.0, 0), ValidationError);
    }

    TEST_CASE("mapping a cluster programs rows by source and columns by target")
    {
        const Fixture fx;
        HardwareSpec hardware;
        hardware.capacity.n = 8;
        hardware.tech.bits_per_synapse = 2;

        const CrossbarInstance crossbar = map_cluster(fx.workload, fx.graph, 1, hardware);
        CHECK(crossbar.row_sources == std::vector<NeuronId>{0, 1, 2});
        CHECK(crossbar.col_neurons == std::vector<NeuronId>{2, 3});
        CHECK(crossbar.programmed_cells() == 3);
        // Ceiling 4.0: |1| -> 0.75 -> 1, |-2| -> 1.5 -> 2, |4| -> 3.
        CHECK(crossbar.state[0][0] == 1);
        CHECK(crossbar.state[1][0] == 2);
        CHECK(crossbar.state[2][1] == 3);
        CHECK(crossbar.state[0][1] == 0);
        CHECK(crossbar.row_of(3) == -1);
        CHECK(crossbar.col_of(0) == -1);

        // Cluster 0 holds only the two inputs; nothing terminates there.
        const CrossbarInstance empty = map_cluster(fx.workload, fx.graph, 0, hardware);
        CHECK(empty.row_sources.empty());
        CHECK(empty.programmed_cells() == 0);

        hardware.capacity.n = 2;  // three sources no longer fit
        CHECK_THROWS_AS(map_cluster(fx.workload, fx.graph, 1, hardware), InfeasibleError);
        CHECK_THROWS_AS(map_cluster(fx.workload, fx.graph, 7, hardware), ValidationError);
    }

    TEST_CASE("read path delay matches its closed form on frozen points")
    {
        const ParasiticsTemplate p = sample_parasitics();
        // c_word = 0.13, c_bit = 0.25.
        CHECK(path_delay(p, 0, 0) == doctest::Approx(0.26).epsilon(1e-12));
        CHECK(path_delay(p, 2, 1) == doctest::Approx(5.78).epsilon(1e-12));
        CHECK(worst_path_delay(p, 3) == path_delay(p, 2, 2));
        CHECK(worst_path_delay(p, 0) == 0.0);
    }

    TEST_CASE("read path delay agrees with a transient ladder simulation")
    {
        const ParasiticsTemplate p = sample_parasitics();
        for (const auto [i, j] : {std::pair<std::uint32_t, std::uint32_t>{0, 0},
                                  std::pair<std::uint32_t, std::uint32_t>{1, 2},
                                  std::pair<std::uint32_t, std::uint32_t>{3, 3}})
        {
            const double simulated = oracle::rc_ladder_first_moment(p, i, j);
            CHECK(path_delay(p, i, j) == doctest::Approx(simulated).epsilon(0.005));
        }
    }

    TEST_CASE("far corner reads are the slowest")
    {
        const ParasiticsTemplate p = sample_parasitics();
        const std::uint32_t n = 6;
        const double worst = worst_path_delay(p, n);
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = 0; j < n; ++j)
            {
                CHECK(path_delay(p, i, j) <= worst);
            }
        CHECK(path_delay(p, 0, 0) < worst);
    }

    TEST_CASE("spike energy scales quadratically with array size")
    {
        const TechTemplate tech;  // 50 pJ per spike
        CHECK(compute_energy(1, tech, 128, 128) == doctest::Approx(50e-12).epsilon(1e-12));
        CHECK(compute_energy(10, tech, 128, 128) ==
              doctest::Approx(500e-12).epsilon(1e-12));
        const double base = compute_energy(1000, tech, 128, 128);
        CHECK(compute_energy(1000, tech, 256, 128) / base == 4.0);
        CHECK(compute_energy(1000, tech, 64, 128) / base == 0.25);
        CHECK_THROWS_AS(compute_energy(1, tech, 128, 0), ValidationError);
    }

    TEST_CASE("row spikes wear only programmed cells")
    {
        const Fixture fx;
        HardwareSpec hardware;
        hardware.capacity.n = 8;
        hardware.tech.bits_per_synapse = 2;  // keep the weight-1 cell above level 0
        CrossbarInstance crossbar = map_cluster(fx.workload, fx.graph, 1, hardware);

        record_reads(crossbar, {{0, 100}, {1, 50}, {2, 25}, {9, 77}});
        CHECK(crossbar.read_counts[0][0] == 100);
        CHECK(crossbar.read_counts[1][0] == 50);
        CHECK(crossbar.read_counts[2][1] == 25);
        CHECK(crossbar.read_counts[0][1] == 0);  // no device at this cell
        record_reads(crossbar, {{0, 1}});
        CHECK(crossbar.read_counts[0][0] == 101);
    }

    TEST_CASE("lifetime counts frames until the busiest cell wears out")
    {
        const Fixture fx;
        HardwareSpec hardware;
        hardware.capacity.n = 8;
        hardware.tech.bits_per_synapse = 2;
        CrossbarInstance crossbar = map_cluster(fx.workload, fx.graph, 1, hardware);

        // Idle arrays never wear out.
        CHECK(crossbar_lifetime(crossbar, 1000, 5) == kUnboundedLifetime);

        record_reads(crossbar, {{0, 100}, {1, 50}, {2, 25}});
        // Worst cell sees 100 reads over 10 frames; 1e6 endurance.
        CHECK(crossbar_lifetime(crossbar, 1000000, 10) == 100000);
        CHECK(crossbar_lifetime(crossbar, 1000000, 0) == kUnboundedLifetime);
    }

    TEST_CASE("lifetime survives products beyond 64 bits")
    {
        const Fixture fx;
        HardwareSpec hardware;
        hardware.capacity.n = 8;
        hardware.tech.bits_per_synapse = 2;
        CrossbarInstance crossbar = map_cluster(fx.workload, fx.graph, 1, hardware);
        record_reads(crossbar, {{0, 3}});
        // floor(5e18 * 11 / 3) stays under 2^64 but the product does not.
        CHECK(crossbar_lifetime(crossbar, 5000000000000000000ull, 11) ==
              18333333333333333333ull);
    }
}
