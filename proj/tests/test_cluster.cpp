// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <doctest.h>

#include "spiketile/cluster.hpp"
#include "spiketile/errors.hpp"

using namespace spiketile;

namespace
{

// 0 -> 1 -> 2 chain; neuron 0 spikes twice per frame, neuron 1 once.
SnnWorkload chain3()
{
    SpikeTrace trace;
    trace.frames = {{{0, 0}, {1, 1}, {0, 2}}};
    return make_workload(
        {{0, NeuronKind::Input}, {1, NeuronKind::Hidden}, {2, NeuronKind::Output}},
        {{0, 1, 1.0}, {1, 2, 1.0}}, trace);
}

// Two disjoint pairs 0 -> 1, 2 -> 3.
SnnWorkload two_pairs()
{
    return make_workload({{0, NeuronKind::Input},
                          {1, NeuronKind::Output},
                          {2, NeuronKind::Input},
                          {3, NeuronKind::Output}},
                         {{0, 1, 1.0}, {2, 3, 1.0}}, {});
}

}

TEST_SUITE("cluster")
{
    TEST_CASE("rows count distinct sources, not members")
    {
        // All four neurons of two disjoint pairs fit one 2x2 array: two
        // source rows, two target columns.
        CHECK(fits_crossbar(two_pairs(), {0, 1, 2, 3}, CrossbarCapacity{2}));
        // A 3-chain also fits n=2: rows {0,1}, columns {1,2}.
        CHECK(fits_crossbar(chain3(), {0, 1, 2}, CrossbarCapacity{2}));
        // But three targets need three columns.
        SnnWorkload fan = make_workload({{0, NeuronKind::Input},
                                         {1, NeuronKind::Output},
                                         {2, NeuronKind::Output},
                                         {3, NeuronKind::Output}},
                                        {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, {});
        CHECK_FALSE(fits_crossbar(fan, {0, 1, 2, 3}, CrossbarCapacity{2}));
        CHECK(fits_crossbar(fan, {0, 1, 2, 3}, CrossbarCapacity{3}));
    }

    TEST_CASE("fanin above n never fits")
    {
        std::vector<NeuronDecl> neurons;
        std::vector<SynapseDecl> synapses;
        for (NeuronId i = 0; i < 5; ++i)
        {
            neurons.push_back({i, NeuronKind::Input});
            if (i > 0)
            {
                synapses.push_back({i, 0, 1.0});
            }
        }
        const SnnWorkload w = make_workload(neurons, synapses, {});
        CHECK_FALSE(fits_crossbar(w, {0}, CrossbarCapacity{3}));
        CHECK(fits_crossbar(w, {0}, CrossbarCapacity{4}));
    }

    TEST_CASE("build_clustered_graph renumbers labels by smallest member")
    {
        const SnnWorkload w = chain3();
        // Labels 7 and 3: neuron 0 gets 7, so label 7 becomes cluster 0.
        const ClusteredGraph graph = build_clustered_graph(w, {7, 3, 3}, CrossbarCapacity{4});
        REQUIRE(graph.cluster_count() == 2);
        CHECK(graph.clusters[0].members == std::vector<NeuronId>{0});
        CHECK(graph.clusters[1].members == std::vector<NeuronId>{1, 2});
        REQUIRE(graph.global_synapses.size() == 1);
        const GlobalSynapse &gs = graph.global_synapses[0];
        CHECK(gs.src_cluster == 0);
        CHECK(gs.dst_cluster == 1);
        CHECK(gs.src_neuron == 0);
        CHECK(gs.dst_neuron == 1);
        CHECK(gs.spikes == doctest::Approx(2.0));  // neuron 0 spikes twice per frame
        CHECK(graph.clusters[1].internal.size() == 1);
    }

    TEST_CASE("spike costs split into global and local parts")
    {
        const SnnWorkload w = chain3();
        const ClusteredGraph split = build_clustered_graph(w, {0, 1, 1}, CrossbarCapacity{4});
        CHECK(cost_global_spikes(split) == doctest::Approx(2.0));
        CHECK(local_spikes_per_frame(w, split) == doctest::Approx(1.0));

        const ClusteredGraph merged = build_clustered_graph(w, {0, 0, 0}, CrossbarCapacity{4});
        CHECK(cost_global_spikes(merged) == 0.0);
        CHECK(local_spikes_per_frame(w, merged) == doctest::Approx(3.0));
    }

    TEST_CASE("capacity violations are infeasible, bad assignments invalid")
    {
        const SnnWorkload w = chain3();
        CHECK_THROWS_AS(build_clustered_graph(w, {0, 0}, CrossbarCapacity{4}),
                        ValidationError);
        SnnWorkload fan = make_workload({{0, NeuronKind::Input},
                                         {1, NeuronKind::Input},
                                         {2, NeuronKind::Input},
                                         {3, NeuronKind::Output}},
                                        {{0, 3, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}}, {});
        CHECK_THROWS_AS(build_clustered_graph(fan, {0, 0, 0, 0}, CrossbarCapacity{2}),
                        InfeasibleError);
    }

    TEST_CASE("cluster files round-trip against their workload")
    {
        const SnnWorkload w = chain3();
        const ClusteredGraph graph = build_clustered_graph(w, {0, 1, 1}, CrossbarCapacity{4});
        const std::string text = serialize_clusters(graph);
        const ClusteredGraph again = parse_clusters(text, "mem", w);
        REQUIRE(again.cluster_count() == 2);
        CHECK(again.capacity.n == 4);
        CHECK(again.clusters[1].members == std::vector<NeuronId>{1, 2});
        CHECK(again.clusters[1].internal.size() == 1);
        REQUIRE(again.global_synapses.size() == 1);
        CHECK(again.global_synapses[0].spikes == doctest::Approx(2.0));
        CHECK(serialize_clusters(again) == text);
    }

    TEST_CASE("cluster file validation")
    {
        const SnnWorkload w = chain3();
        CHECK_THROWS_AS(parse_clusters("cluster 0: 0 1 2\n", "mem", w), ParseError);
        CHECK_THROWS_AS(parse_clusters("capacity_n = 4\ncluster 0: 0 1\n", "mem", w),
                        ValidationError);
        CHECK_THROWS_AS(
            parse_clusters("capacity_n = 4\ncluster 1: 0 1 2\n", "mem", w), ParseError);
        CHECK_THROWS_AS(
            parse_clusters("capacity_n = 4\ncluster 0: 0 1 2 3\n", "mem", w),
            ValidationError);
    }

    TEST_CASE("validate_clustered_graph rejects overlaps and empties")
    {
        const SnnWorkload w = chain3();
        ClusteredGraph graph = build_clustered_graph(w, {0, 0, 0}, CrossbarCapacity{4});
        graph.clusters[0].members = {0, 1};
        CHECK_THROWS_AS(validate_clustered_graph(w, graph), ValidationError);
        graph.clusters[0].members = {};
        CHECK_THROWS_AS(validate_clustered_graph(w, graph), ValidationError);
    }
}
