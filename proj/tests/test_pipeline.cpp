// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <doctest.h>

#include <filesystem>

#include "spiketile/errors.hpp"
#include "spiketile/pipeline.hpp"
#include "spiketile/rng.hpp"
#include "spiketile/textio.hpp"
#include "spiketile/tilesim.hpp"

using namespace spiketile;

namespace
{

// 0 -> 2, 1 -> 2 cross the cluster boundary; 2 -> 3 stays inside.
SnnWorkload split_workload()
{
    SpikeTrace trace;
    trace.frames = {{{0, 0}, {1, 1}, {2, 2}}, {{0, 10}}};
    return make_workload({{0, NeuronKind::Input},
                          {1, NeuronKind::Input},
                          {2, NeuronKind::Hidden},
                          {3, NeuronKind::Output}},
                         {{0, 2, 1.0}, {1, 2, -2.0}, {2, 3, 4.0}}, std::move(trace));
}

SimulationReport sample_report()
{
    SimulationReport report;
    report.preset = "PyCarlStyle";
    report.routing = "xy";
    report.cluster_count = 4;
    report.global_spikes_per_frame = 10.0;
    report.comm_energy_j = 2e-9;
    report.latency = LatencyStats{1, 7, 2.5, 6, 12};
    report.total_flits = 12;
    report.total_segments = 30;
    report.total_hops = 18;
    return report;
}

}

TEST_SUITE("pipeline")
{
    TEST_CASE("presets expand to their stage bundles")
    {
        const StageConfigs pycarl = expand_preset(PipelinePreset::PyCarlStyle, 9);
        CHECK(!pycarl.do_decompose);
        CHECK(pycarl.partition.algo == PartitionAlgo::Arbitrary);
        CHECK(pycarl.placement.algo == PlacementAlgo::Arbitrary);
        CHECK(pycarl.partition.seed == derive_seed(9, "stage-partition"));
        CHECK(pycarl.placement.seed == derive_seed(9, "stage-place"));

        const StageConfigs spinemap = expand_preset(PipelinePreset::SpiNeMapStyle, 9);
        CHECK(!spinemap.do_decompose);
        CHECK(spinemap.partition.algo == PartitionAlgo::KernighanLin);
        CHECK(spinemap.partition.objective == PartitionObjective::MinGlobalSpikes);
        CHECK(spinemap.placement.algo == PlacementAlgo::Pso);

        const StageConfigs decomposed = expand_preset(PipelinePreset::DecomposedStyle, 9);
        CHECK(decomposed.do_decompose);
        CHECK(decomposed.decompose.mode == DecomposeMode::Full);
        CHECK(decomposed.partition.algo == PartitionAlgo::GreedyPack);
        CHECK(decomposed.partition.objective == PartitionObjective::MinClusterCount);
        CHECK(decomposed.placement.algo == PlacementAlgo::Pso);
    }

    TEST_CASE("preset names round-trip and accept the short aliases")
    {
        for (const auto preset :
             {PipelinePreset::PyCarlStyle, PipelinePreset::SpiNeMapStyle,
              PipelinePreset::DecomposedStyle, PipelinePreset::Custom})
        {
            CHECK(pipeline_preset_from_string(to_string(preset)) == preset);
        }
        CHECK(pipeline_preset_from_string("pycarl") == PipelinePreset::PyCarlStyle);
        CHECK(pipeline_preset_from_string("spinemap") == PipelinePreset::SpiNeMapStyle);
        CHECK(pipeline_preset_from_string("decomposed") == PipelinePreset::DecomposedStyle);
        CHECK_THROWS_AS(pipeline_preset_from_string("fast"), ValidationError);
    }

    TEST_CASE("trace flits carry one flit per source spike per boundary synapse")
    {
        const SnnWorkload workload = split_workload();
        const ClusteredGraph graph =
            build_clustered_graph(workload, {0, 0, 1, 1}, CrossbarCapacity{8});
        REQUIRE(graph.global_synapses.size() == 2);

        Placement placement;
        placement.tile_of = {0, 3};
        const std::vector<FlitSpec> flits = trace_flits(workload, graph, placement);
        REQUIRE(flits.size() == 3);  // neuron 2's spike stays local
        CHECK(flits[0].inject_tick == 0);
        CHECK(flits[0].src == 0);
        CHECK(flits[0].dst == 3);
        CHECK(flits[1].inject_tick == 1);
        CHECK(flits[2].inject_tick == 10);
        CHECK(flits[0].stream != flits[1].stream);   // distinct synapses
        CHECK(flits[0].stream == flits[2].stream);   // same synapse, later spike
    }

    TEST_CASE("noc summaries count segments, hops and energy")
    {
        const TopologyGraph topo(MeshTopology{3, 1});
        NocSimulator sim(topo, {});
        sim.inject({0, 0, 2, 0});
        sim.inject({5, 0, 2, 0});
        REQUIRE(sim.run(100) == 0);
        TechTemplate tech;  // 1 pJ per segment
        const SimulationReport report = summarize_noc(sim, 1, tech);
        CHECK(report.total_flits == 2);
        CHECK(report.undelivered == 0);
        CHECK(report.total_segments == 4);
        CHECK(report.total_hops == 2);
        CHECK(report.comm_energy_j == doctest::Approx(4e-12).epsilon(1e-12));
        CHECK(report.latency.min == 2);
        CHECK(report.latency.max == 2);
        CHECK(report.latency.count == 2);
        // Uniform delay: intervals preserved, order preserved.
        CHECK(report.isi_distortion == 0.0);
        CHECK(report.spike_disorder == 0.0);
    }

    TEST_CASE("a single-cluster pipeline run has no interconnect traffic")
    {
        SpikeTrace trace;
        trace.frames = {{{0, 0}, {0, 1}}};
        const SnnWorkload workload = make_workload(
            {{0, NeuronKind::Input}, {1, NeuronKind::Output}}, {{0, 1, 1.0}},
            std::move(trace));

        HardwareSpec hardware;
        hardware.topology = MeshTopology{2, 2};
        hardware.capacity.n = 8;
        hardware.energy_ref_n = 8;

        PipelineConfig config;
        config.preset = PipelinePreset::Custom;
        config.stages.partition.algo = PartitionAlgo::GreedyPack;

        const SimulationReport report = run_pipeline(workload, hardware, config);
        CHECK(report.preset == "Custom");
        CHECK(report.cluster_count == 1);
        CHECK(report.global_spikes_per_frame == 0.0);
        CHECK(report.local_spikes_per_frame == 2.0);
        CHECK(report.total_flits == 0);
        CHECK(report.undelivered == 0);
        CHECK(report.comm_energy_j == 0.0);
        CHECK(report.isi_distortion == 0.0);
        CHECK(report.spike_disorder == 0.0);
        CHECK(report.latency.count == 0);
        // Two spikes at 50 pJ each, reference-sized array.
        CHECK(report.compute_energy_j == doctest::Approx(1e-10).epsilon(1e-12));
        // The 0 -> 1 cell sees 2 reads in 1 frame at 1e9 endurance.
        CHECK(report.inference_lifetime_frames == 500000000);
        CHECK(report.worst_path_delay_s == 0.0);
    }

    TEST_CASE("preset batches come back in order and rerun identically")
    {
        GenConfig gen;
        gen.kind = SyntheticKind::Community;
        gen.neurons = 24;
        gen.communities = 3;
        gen.p_in = 0.4;
        gen.p_out = 0.05;
        gen.frames = 2;
        gen.frame_ticks = 16;
        gen.rate = 0.1;
        gen.seed = 5;
        const SnnWorkload workload = gen_synthetic(gen);

        HardwareSpec hardware;
        hardware.topology = MeshTopology{3, 3};
        hardware.capacity.n = 16;

        PipelineConfig base;
        base.seed = 11;
        const std::vector<PipelinePreset> presets = {PipelinePreset::PyCarlStyle,
                                                     PipelinePreset::SpiNeMapStyle};
        const auto first = run_presets(workload, hardware, presets, base);
        const auto second = run_presets(workload, hardware, presets, base);
        REQUIRE(first.size() == 2);
        CHECK(first[0].preset == "PyCarlStyle");
        CHECK(first[1].preset == "SpiNeMapStyle");
        CHECK(serialize_report(first[0]) == serialize_report(second[0]));
        CHECK(serialize_report(first[1]) == serialize_report(second[1]));
    }

    TEST_CASE("reports round-trip through their text form")
    {
        SimulationReport report = sample_report();
        report.isi_distortion = 0.125;
        report.inference_lifetime_frames = 123456789;
        const SimulationReport back = parse_report(serialize_report(report), "mem");
        CHECK(serialize_report(back) == serialize_report(report));
        CHECK(back.latency.mean == 2.5);
        CHECK(back.inference_lifetime_frames == 123456789);

        report.inference_lifetime_frames = kUnboundedLifetime;
        const std::string text = serialize_report(report);
        CHECK(text.find("inference_lifetime_frames = unbounded") != std::string::npos);
        CHECK(parse_report(text, "mem").inference_lifetime_frames == kUnboundedLifetime);
    }

    TEST_CASE("comparisons normalize against the first report")
    {
        SimulationReport base = sample_report();
        SimulationReport other = sample_report();
        other.preset = "SpiNeMapStyle";
        other.cluster_count = 2;
        other.global_spikes_per_frame = 5.0;
        other.inference_lifetime_frames = 1000;
        other.isi_distortion = 0.5;

        const std::vector<ComparisonRow> rows = compare_reports({base, other});
        REQUIRE(rows.size() == 24);  // 12 metrics, 2 presets
        CHECK(rows[0].metric == "cluster_count");
        CHECK(rows[0].preset == "PyCarlStyle");
        CHECK(rows[0].value == "4");
        CHECK(rows[0].normalized == "1");

        auto find_row = [&rows](const std::string &metric, const std::string &preset) {
            for (const ComparisonRow &row : rows)
                if (row.metric == metric && row.preset == preset)
                    return row;
            throw std::logic_error("row not found");
        };
        CHECK(find_row("cluster_count", "SpiNeMapStyle").normalized == "0.5");
        CHECK(find_row("global_spikes_per_frame", "SpiNeMapStyle").normalized == "0.5");
        // Baseline lifetime is unbounded, the other one is finite.
        CHECK(find_row("inference_lifetime_frames", "PyCarlStyle").value == "unbounded");
        CHECK(find_row("inference_lifetime_frames", "PyCarlStyle").normalized == "1");
        CHECK(find_row("inference_lifetime_frames", "SpiNeMapStyle").normalized == "na");
        // Baseline distortion is zero, the other one is not.
        CHECK(find_row("isi_distortion", "PyCarlStyle").normalized == "1");
        CHECK(find_row("isi_distortion", "SpiNeMapStyle").normalized == "na");

        const std::string csv = serialize_comparison(rows);
        CHECK(csv.rfind("metric,preset,value,normalized\n", 0) == 0);
        CHECK(csv.find("cluster_count,SpiNeMapStyle,2,0.5\n") != std::string::npos);
    }

    TEST_CASE("plot data lands in one csv per metric")
    {
        const auto dir =
            std::filesystem::temp_directory_path() / "spiketile-test-plots";
        std::filesystem::remove_all(dir);
        emit_plot_data({sample_report()}, "toy", dir.string());
        const std::string csv = read_file((dir / "cluster_count.csv").string());
        CHECK(csv == "workload,label,value,normalized\ntoy,PyCarlStyle/xy,4,1\n");
        CHECK(std::filesystem::exists(dir / "latency_mean.csv"));
        CHECK(std::filesystem::exists(dir / "inference_lifetime_frames.csv"));
        std::filesystem::remove_all(dir);
        CHECK_THROWS_AS(emit_plot_data({}, "toy", dir.string()), ValidationError);
    }

    TEST_CASE("layered generator wires consecutive layers densely")
    {
        GenConfig gen;
        gen.kind = SyntheticKind::Layered;
        gen.widths = {4, 3, 1};
        gen.frames = 0;
        const SnnWorkload workload = gen_synthetic(gen);
        CHECK(workload.neuron_count() == 8);
        CHECK(workload.synapses.size() == 15);
        for (std::size_t i = 0; i < 4; ++i)
        {
            CHECK(workload.neurons[i].kind == NeuronKind::Input);
        }
        for (std::size_t i = 4; i < 7; ++i)
        {
            CHECK(workload.neurons[i].kind == NeuronKind::Hidden);
        }
        CHECK(workload.neurons[7].kind == NeuronKind::Output);
        CHECK(workload.trace.empty());
    }

    TEST_CASE("high-fanin generator converges on one output")
    {
        GenConfig gen;
        gen.kind = SyntheticKind::HighFanin;
        gen.fanin = 8;
        gen.frames = 0;
        const SnnWorkload workload = gen_synthetic(gen);
        CHECK(workload.neuron_count() == 9);
        CHECK(workload.synapses.size() == 8);
        CHECK(in_degrees(workload)[8] == 8);
        CHECK(workload.neurons[8].kind == NeuronKind::Output);
    }

    TEST_CASE("community generator keeps edges inside blocks when p_out is zero")
    {
        GenConfig gen;
        gen.kind = SyntheticKind::Community;
        gen.neurons = 12;
        gen.communities = 3;
        gen.p_in = 0.9;
        gen.p_out = 0.0;
        gen.frames = 1;
        gen.frame_ticks = 8;
        gen.rate = 0.2;
        gen.seed = 3;
        const SnnWorkload workload = gen_synthetic(gen);
        CHECK(workload.neuron_count() == 12);
        CHECK(!workload.synapses.empty());
        for (const SynapseDecl &synapse : workload.synapses)
        {
            CHECK(synapse.src / 4 == synapse.dst / 4);
        }
        for (const SpikeEvent &event : workload.trace.frames[0])
        {
            CHECK(event.tick >= 0);
            CHECK(event.tick < 8);
        }
        // Same configuration, same workload.
        CHECK(serialize_model(gen_synthetic(gen)) == serialize_model(workload));
    }

    TEST_CASE("generator rejects out-of-range shapes")
    {
        GenConfig gen;
        gen.kind = SyntheticKind::Community;
        gen.neurons = 0;
        CHECK_THROWS_AS(gen_synthetic(gen), ValidationError);
        gen.neurons = 8;
        gen.p_in = 1.5;
        CHECK_THROWS_AS(gen_synthetic(gen), ValidationError);
        gen.p_in = 0.3;
        gen.rate = -0.1;
        CHECK_THROWS_AS(gen_synthetic(gen), ValidationError);
        gen.rate = 0.05;

        gen.kind = SyntheticKind::Layered;
        gen.widths = {4};
        CHECK_THROWS_AS(gen_synthetic(gen), ValidationError);
        gen.widths = {4, 0};
        CHECK_THROWS_AS(gen_synthetic(gen), ValidationError);

        gen.kind = SyntheticKind::HighFanin;
        gen.widths = {};
        gen.fanin = 0;
        CHECK_THROWS_AS(gen_synthetic(gen), ValidationError);
    }
}
