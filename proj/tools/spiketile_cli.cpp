// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// spiketile - command line front end for the mapping and simulation library.
//
// Exit codes: 0 success, 1 usage, 2 invalid input, 3 infeasible mapping,
// 4 simulation incomplete.

#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "spiketile/decompose.hpp"
#include "spiketile/errors.hpp"
#include "spiketile/hardware.hpp"
#include "spiketile/nocsim.hpp"
#include "spiketile/partition.hpp"
#include "spiketile/pipeline.hpp"
#include "spiketile/placement.hpp"
#include "spiketile/rng.hpp"
#include "spiketile/textio.hpp"
#include "spiketile/tilesim.hpp"
#include "spiketile/workload.hpp"

namespace
{

using namespace spiketile;

int guarded(const std::function<void()> &body)
{
    try
    {
        body();
        return 0;
    }
    catch (const InfeasibleError &err)
    {
        std::fprintf(stderr, "error: infeasible: %s\n", err.what());
        return 3;
    }
    catch (const SimIncompleteError &err)
    {
        std::fprintf(stderr, "error: simulation incomplete: %s\n", err.what());
        return 4;
    }
    catch (const ParseError &err)
    {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
    catch (const ValidationError &err)
    {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
    catch (const std::exception &err)
    {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 2;
    }
}

DecomposeOptions parse_mode(const std::string &mode)
{
    DecomposeOptions options;
    if (mode == "full")
    {
        options.mode = DecomposeMode::Full;
        return options;
    }
    if (mode.rfind("limit:", 0) == 0)
    {
        options.mode = DecomposeMode::Limit;
        options.fanin_limit = static_cast<std::uint32_t>(
            parse_u64(mode.substr(6), "--mode limit value"));
        return options;
    }
    throw ValidationError("mode must be 'full' or 'limit:<f>', got '" + mode + "'");
}

std::vector<std::size_t> parse_width_list(const std::string &text)
{
    std::vector<std::size_t> widths;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        widths.push_back(static_cast<std::size_t>(parse_u64(token, "--widths")));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return widths;
}

// "xy" ... or "table:<file>"; the table needs the topology to validate.
void apply_routing(const std::string &token, const TopologyGraph &topo, RoutingStrategy &strategy,
                   std::optional<RoutingTable> &table)
{
    if (token.rfind("table:", 0) == 0)
    {
        strategy = RoutingStrategy::TableBased;
        table = load_routing_table(token.substr(6), topo);
        return;
    }
    strategy = routing_strategy_from_string(token);
    if (strategy == RoutingStrategy::TableBased)
        throw ValidationError("table routing needs a file: --routing table:<file>");
}

TrafficModel parse_traffic(const std::string &token)
{
    TrafficModel model;
    if (token.rfind("random:", 0) == 0)
    {
        model.kind = TrafficKind::Random;
        model.rate = parse_double(token.substr(7), "--traffic random rate");
        return model;
    }
    if (token.rfind("table:", 0) == 0)
    {
        model.kind = TrafficKind::TableBased;
        model.table_path = token.substr(6);
        return model;
    }
    model.kind = traffic_kind_from_string(token);
    if (model.kind == TrafficKind::Random)
        throw ValidationError("random traffic needs a rate: --traffic random:<rate>");
    if (model.kind == TrafficKind::TableBased)
        throw ValidationError("table traffic needs a file: --traffic table:<file>");
    return model;
}

std::vector<PipelinePreset> parse_presets(const std::string &text)
{
    std::vector<PipelinePreset> presets;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        presets.push_back(pipeline_preset_from_string(token));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (presets.empty())
        throw ValidationError("preset list is empty");
    return presets;
}

}

int main(int argc, char **argv)
{
    CLI::App app{"Mapping and simulation toolchain for spiking workloads on tiled "
                 "crossbar hardware"};
    app.require_subcommand(1);

    // gen
    auto *gen_cmd = app.add_subcommand("gen", "Generate a synthetic workload and spike trace");
    std::string gen_kind = "community";
    GenConfig gen_config;
    std::string gen_widths;
    std::string gen_out_model;
    std::string gen_out_trace;
    gen_cmd->add_option("--kind", gen_kind, "community | layered | highfanin");
    gen_cmd->add_option("--neurons", gen_config.neurons, "Community graph size");
    gen_cmd->add_option("--communities", gen_config.communities, "Community count");
    gen_cmd->add_option("--p-in", gen_config.p_in, "Edge probability inside a community");
    gen_cmd->add_option("--p-out", gen_config.p_out, "Edge probability across communities");
    gen_cmd->add_option("--widths", gen_widths, "Layered graph widths, e.g. 4,3,1");
    gen_cmd->add_option("--fanin", gen_config.fanin, "High-fanin input count");
    gen_cmd->add_option("--frames", gen_config.frames, "Trace frames");
    gen_cmd->add_option("--frame-ticks", gen_config.frame_ticks, "Ticks per frame");
    gen_cmd->add_option("--rate", gen_config.rate, "Per-neuron per-tick spike probability");
    gen_cmd->add_option("--seed", gen_config.seed, "Generator seed");
    gen_cmd->add_option("--out-model", gen_out_model, "Output model file")->required();
    gen_cmd->add_option("--out-trace", gen_out_trace, "Output trace file")->required();

    // decompose
    auto *dec_cmd = app.add_subcommand("decompose", "Rewrite high-fanin neurons into units");
    std::string dec_mode = "full";
    std::string dec_in;
    std::string dec_out;
    std::string dec_fit_map;
    dec_cmd->add_option("--mode", dec_mode, "full | limit:<f>");
    dec_cmd->add_option("--in", dec_in, "Input model file")->required();
    dec_cmd->add_option("--out", dec_out, "Output model file")->required();
    dec_cmd->add_option("--fit-map", dec_fit_map, "Fit map sidecar (default <out>.fitmap)");

    // partition
    auto *part_cmd = app.add_subcommand("partition", "Group neurons into crossbar clusters");
    std::string part_algo = "kl";
    std::string part_objective = "spikes";
    std::uint32_t part_capacity = 128;
    std::uint64_t part_seed = 0;
    std::string part_model;
    std::string part_trace;
    std::string part_out;
    part_cmd->add_option("--algo", part_algo, "kl | pso | greedy | arbitrary");
    part_cmd->add_option("--objective", part_objective, "spikes | clusters");
    part_cmd->add_option("--capacity", part_capacity, "Crossbar dimension n");
    part_cmd->add_option("--seed", part_seed, "Partition seed");
    part_cmd->add_option("--model", part_model, "Model file")->required();
    part_cmd->add_option("--trace", part_trace, "Trace file (optional spike weights)");
    part_cmd->add_option("--out", part_out, "Output cluster file")->required();

    // place
    auto *place_cmd = app.add_subcommand("place", "Assign clusters to interconnect tiles");
    std::string place_algo = "pso";
    std::uint64_t place_seed = 0;
    std::string place_hw;
    std::string place_model;
    std::string place_clusters;
    std::string place_out;
    place_cmd->add_option("--algo", place_algo, "pso | arbitrary");
    place_cmd->add_option("--seed", place_seed, "Placement seed");
    place_cmd->add_option("--hw", place_hw, "Hardware spec file")->required();
    place_cmd->add_option("--model", place_model, "Model file")->required();
    place_cmd->add_option("--clusters", place_clusters, "Cluster file")->required();
    place_cmd->add_option("--out", place_out, "Output placement file")->required();

    // nocsim
    auto *noc_cmd = app.add_subcommand("nocsim", "Simulate synthetic traffic on an interconnect");
    std::string noc_topo = "mesh:4x4";
    std::string noc_routing = "xy";
    std::string noc_traffic = "random:0.1";
    Tick noc_ticks = 64;
    std::int64_t noc_cycles = 1'000'000;
    std::uint64_t noc_seed = 0;
    std::size_t noc_fifo = 4;
    int noc_dyad = 3;
    std::string noc_hw;
    std::string noc_out_log;
    std::string noc_out_report;
    noc_cmd->add_option("--topo", noc_topo, "mesh:WxH | bus:K | twostage:A,B");
    noc_cmd->add_option("--routing", noc_routing,
                        "xy | westfirst | northlast | negfirst | oddeven | dyad | table:<file>");
    noc_cmd->add_option("--traffic", noc_traffic,
                        "random:<rate> | transpose | bitrev | butterfly | shuffle | table:<file>");
    noc_cmd->add_option("--ticks", noc_ticks, "Injection window in ticks");
    noc_cmd->add_option("--cycles", noc_cycles, "Simulation cycle budget");
    noc_cmd->add_option("--seed", noc_seed, "Traffic seed");
    noc_cmd->add_option("--fifo-depth", noc_fifo, "Input FIFO depth");
    noc_cmd->add_option("--dyad-threshold", noc_dyad, "Dyad split distance in segments");
    noc_cmd->add_option("--hw", noc_hw, "Hardware spec file (energy constants)");
    noc_cmd->add_option("--out-log", noc_out_log, "Delivered flit log CSV");
    noc_cmd->add_option("--out-report", noc_out_report, "Report key-value file");

    // run
    auto *run_cmd = app.add_subcommand("run", "Run mapping pipelines and compare presets");
    std::string run_model;
    std::string run_trace;
    std::string run_hw;
    std::string run_presets_str = "PyCarlStyle,SpiNeMapStyle,DecomposedStyle";
    std::string run_routing = "xy";
    std::uint64_t run_seed = 0;
    std::int64_t run_cycles = 10'000'000;
    std::size_t run_fifo = 4;
    int run_dyad = 3;
    std::string run_out_dir = "out";
    std::string run_name;
    std::string run_custom_decompose = "none";
    std::string run_custom_algo = "kl";
    std::string run_custom_objective = "spikes";
    std::string run_custom_place = "pso";
    run_cmd->add_option("--model", run_model, "Model file")->required();
    run_cmd->add_option("--trace", run_trace, "Trace file");
    run_cmd->add_option("--hw", run_hw, "Hardware spec file")->required();
    run_cmd->add_option("--presets", run_presets_str, "Comma list; first is the baseline");
    run_cmd->add_option("--routing", run_routing, "Routing strategy (or table:<file>)");
    run_cmd->add_option("--seed", run_seed, "Root seed");
    run_cmd->add_option("--cycles", run_cycles, "Simulation cycle budget");
    run_cmd->add_option("--fifo-depth", run_fifo, "Input FIFO depth");
    run_cmd->add_option("--dyad-threshold", run_dyad, "Dyad split distance in segments");
    run_cmd->add_option("--out-dir", run_out_dir, "Output directory");
    run_cmd->add_option("--workload-name", run_name, "Label in plot data");
    run_cmd->add_option("--custom-decompose", run_custom_decompose,
                        "Custom preset: none | full | limit:<f>");
    run_cmd->add_option("--custom-algo", run_custom_algo, "Custom preset partition algorithm");
    run_cmd->add_option("--custom-objective", run_custom_objective,
                        "Custom preset partition objective");
    run_cmd->add_option("--custom-place", run_custom_place, "Custom preset placement algorithm");

    // report
    auto *rep_cmd = app.add_subcommand("report", "Merge saved reports into comparison tables");
    std::vector<std::string> rep_inputs;
    std::string rep_name = "workload";
    std::string rep_out_dir = "out";
    rep_cmd->add_option("--in", rep_inputs, "Report files; first is the baseline")->required();
    rep_cmd->add_option("--workload-name", rep_name, "Label in plot data");
    rep_cmd->add_option("--out-dir", rep_out_dir, "Output directory");

    app.set_config("--config", "",
                   "Key-value config file; verb options live under a [<verb>] section");
    for (CLI::App *sub : {gen_cmd, dec_cmd, part_cmd, place_cmd, noc_cmd, run_cmd, rep_cmd})
        sub->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &err)
    {
        const int code = app.exit(err);
        return code == 0 ? 0 : 1;
    }

    if (gen_cmd->parsed())
        return guarded([&] {
            if (gen_kind == "community")
                gen_config.kind = SyntheticKind::Community;
            else if (gen_kind == "layered")
                gen_config.kind = SyntheticKind::Layered;
            else if (gen_kind == "highfanin")
                gen_config.kind = SyntheticKind::HighFanin;
            else
                throw ValidationError("unknown kind '" + gen_kind + "'");
            if (!gen_widths.empty())
                gen_config.widths = parse_width_list(gen_widths);
            const SnnWorkload workload = gen_synthetic(gen_config);
            save_model(workload, gen_out_model);
            save_trace(workload.trace, gen_out_trace);
            std::printf("wrote %zu neurons, %zu synapses, %zu trace events\n",
                        workload.neuron_count(), workload.synapses.size(),
                        workload.trace.total_events());
        });

    if (dec_cmd->parsed())
        return guarded([&] {
            const DecomposeOptions options = parse_mode(dec_mode);
            const SnnWorkload workload = load_model(dec_in);
            const DecomposedWorkload decomposed = decompose(workload, options);
            save_model(decomposed.base, dec_out);
            const std::string fit_path = dec_fit_map.empty() ? dec_out + ".fitmap" : dec_fit_map;
            save_fit_map(decomposed, fit_path);
            std::printf("decomposed %zu -> %zu neurons (%zu rewritten)\n",
                        workload.neuron_count(), decomposed.base.neuron_count(),
                        decomposed.fit_map.size());
        });

    if (part_cmd->parsed())
        return guarded([&] {
            const SnnWorkload workload = part_trace.empty()
                                             ? load_model(part_model)
                                             : load_workload(part_model, part_trace);
            PartitionConfig config;
            config.algo = partition_algo_from_string(part_algo);
            config.objective = partition_objective_from_string(part_objective);
            config.seed = part_seed;
            const CrossbarCapacity cap{part_capacity};
            const ClusteredGraph graph = partition(workload, cap, config);
            save_clusters(graph, part_out);
            std::printf("%zu clusters, %.6g global spikes/frame\n", graph.clusters.size(),
                        cost_global_spikes(graph));
        });

    if (place_cmd->parsed())
        return guarded([&] {
            const HardwareSpec hardware = load_hardware(place_hw);
            const TopologyGraph topo(hardware.topology);
            const SnnWorkload workload = load_model(place_model);
            const ClusteredGraph graph = load_clusters(place_clusters, workload);
            PlacementConfig config;
            config.algo = placement_algo_from_string(place_algo);
            config.seed = place_seed;
            const Placement placement = place(graph, topo, config);
            save_placement(place_out, placement, topo);
            std::printf("placed %zu clusters, cost %.6g spike-segments/frame\n",
                        placement.cluster_count(), placement_cost(graph, topo, placement));
        });

    if (noc_cmd->parsed())
        return guarded([&] {
            const Topology topology = topology_from_string(noc_topo);
            const TopologyGraph topo(topology);
            NocConfig config;
            apply_routing(noc_routing, topo, config.strategy, config.table);
            config.fifo_depth = noc_fifo;
            config.dyad_threshold = noc_dyad;
            const TrafficModel model = parse_traffic(noc_traffic);
            std::vector<FlitSpec> flits = gen_traffic(model, topo, noc_ticks, noc_seed);
            // Streams for interval/order statistics: one per (src, dst) pair.
            std::map<std::pair<TileIndex, TileIndex>, std::uint32_t> stream_ids;
            for (FlitSpec &spec : flits)
            {
                const auto key = std::make_pair(spec.src, spec.dst);
                const auto it = stream_ids.find(key);
                if (it == stream_ids.end())
                {
                    spec.stream = static_cast<std::uint32_t>(stream_ids.size());
                    stream_ids.emplace(key, spec.stream);
                }
                else
                {
                    spec.stream = it->second;
                }
            }
            NocSimulator sim(topo, config);
            sim.inject(flits);
            const std::size_t undelivered = sim.run(noc_cycles);
            const TechTemplate tech =
                noc_hw.empty() ? TechTemplate{} : load_hardware(noc_hw).tech;
            SimulationReport report = summarize_noc(sim, stream_ids.size(), tech);
            report.routing = to_string(config.strategy);
            if (!noc_out_log.empty())
                save_flit_log(noc_out_log, sim);
            if (!noc_out_report.empty())
                save_report(noc_out_report, report);
            std::printf("%s", serialize_report(report).c_str());
            if (!sim.conservation_ok())
                throw ValidationError("flit conservation violated");
            if (undelivered > 0)
                throw SimIncompleteError(std::to_string(undelivered) +
                                         " flits undelivered after " +
                                         std::to_string(noc_cycles) + " cycles");
        });

    if (run_cmd->parsed())
        return guarded([&] {
            const SnnWorkload workload = run_trace.empty()
                                             ? load_model(run_model)
                                             : load_workload(run_model, run_trace);
            const HardwareSpec hardware = load_hardware(run_hw);
            const TopologyGraph topo(hardware.topology);

            PipelineConfig base;
            apply_routing(run_routing, topo, base.routing, base.routing_table);
            base.fifo_depth = run_fifo;
            base.dyad_threshold = run_dyad;
            base.max_cycles = run_cycles;
            base.seed = run_seed;
            if (run_custom_decompose != "none")
            {
                base.stages.do_decompose = true;
                base.stages.decompose = parse_mode(run_custom_decompose);
            }
            base.stages.partition.algo = partition_algo_from_string(run_custom_algo);
            base.stages.partition.objective =
                partition_objective_from_string(run_custom_objective);
            base.stages.partition.seed = derive_seed(run_seed, "stage-partition");
            base.stages.placement.algo = placement_algo_from_string(run_custom_place);
            base.stages.placement.seed = derive_seed(run_seed, "stage-place");

            const std::vector<PipelinePreset> presets = parse_presets(run_presets_str);
            const std::vector<SimulationReport> reports =
                run_presets(workload, hardware, presets, base);

            std::filesystem::create_directories(run_out_dir);
            std::uint64_t undelivered = 0;
            for (const SimulationReport &report : reports)
            {
                save_report(run_out_dir + "/report_" + report.preset + ".txt", report);
                undelivered += report.undelivered;
            }
            write_file(run_out_dir + "/comparison.csv",
                       serialize_comparison(compare_reports(reports)));
            const std::string name =
                run_name.empty()
                    ? std::filesystem::path(run_model).stem().string()
                    : run_name;
            emit_plot_data(reports, name, run_out_dir + "/plots");
            for (const SimulationReport &report : reports)
                std::printf("%-16s clusters %-5zu spikes/frame %-10.6g comm %.4g J\n",
                            report.preset.c_str(), report.cluster_count,
                            report.global_spikes_per_frame, report.comm_energy_j);
            std::printf("outputs in %s\n", run_out_dir.c_str());
            if (undelivered > 0)
                throw SimIncompleteError(std::to_string(undelivered) +
                                         " flits undelivered; raise --cycles");
        });

    if (rep_cmd->parsed())
        return guarded([&] {
            std::vector<SimulationReport> reports;
            reports.reserve(rep_inputs.size());
            for (const std::string &path : rep_inputs)
                reports.push_back(load_report(path));
            std::filesystem::create_directories(rep_out_dir);
            write_file(rep_out_dir + "/comparison.csv",
                       serialize_comparison(compare_reports(reports)));
            emit_plot_data(reports, rep_name, rep_out_dir + "/plots");
            std::printf("merged %zu reports into %s\n", reports.size(), rep_out_dir.c_str());
        });

    return 1;
}
