// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <future>
#include <map>
#include <stdexcept>

#include "spiketile/errors.hpp"
#include "spiketile/rng.hpp"
#include "spiketile/textio.hpp"
#include "spiketile/tilesim.hpp"

namespace spiketile
{

const char *to_string(PipelinePreset preset)
{
    switch (preset)
    {
    case PipelinePreset::PyCarlStyle: return "PyCarlStyle";
    case PipelinePreset::SpiNeMapStyle: return "SpiNeMapStyle";
    case PipelinePreset::DecomposedStyle: return "DecomposedStyle";
    case PipelinePreset::Custom: return "Custom";
    }
    return "?";
}

PipelinePreset pipeline_preset_from_string(const std::string &text)
{
    if (text == "PyCarlStyle" || text == "pycarl")
        return PipelinePreset::PyCarlStyle;
    if (text == "SpiNeMapStyle" || text == "spinemap")
        return PipelinePreset::SpiNeMapStyle;
    if (text == "DecomposedStyle" || text == "decomposed")
        return PipelinePreset::DecomposedStyle;
    if (text == "Custom" || text == "custom")
        return PipelinePreset::Custom;
    throw ValidationError("unknown pipeline preset '" + text + "'");
}

StageConfigs expand_preset(PipelinePreset preset, std::uint64_t seed)
{
    StageConfigs stages;
    stages.partition.seed = derive_seed(seed, "stage-partition");
    stages.placement.seed = derive_seed(seed, "stage-place");
    switch (preset)
    {
    case PipelinePreset::PyCarlStyle:
        stages.partition.algo = PartitionAlgo::Arbitrary;
        stages.placement.algo = PlacementAlgo::Arbitrary;
        break;
    case PipelinePreset::SpiNeMapStyle:
        stages.partition.algo = PartitionAlgo::KernighanLin;
        stages.partition.objective = PartitionObjective::MinGlobalSpikes;
        stages.placement.algo = PlacementAlgo::Pso;
        break;
    case PipelinePreset::DecomposedStyle:
        stages.do_decompose = true;
        stages.decompose.mode = DecomposeMode::Full;
        stages.partition.algo = PartitionAlgo::GreedyPack;
        stages.partition.objective = PartitionObjective::MinClusterCount;
        stages.placement.algo = PlacementAlgo::Pso;
        break;
    case PipelinePreset::Custom:
        break;
    }
    return stages;
}

std::vector<FlitSpec> trace_flits(const SnnWorkload &workload, const ClusteredGraph &graph,
                                  const Placement &placement)
{
    std::map<NeuronId, std::vector<std::uint32_t>> streams_by_src;
    for (std::size_t i = 0; i < graph.global_synapses.size(); ++i)
        streams_by_src[graph.global_synapses[i].src_neuron].push_back(
            static_cast<std::uint32_t>(i));

    std::vector<FlitSpec> flits;
    for (const auto &frame : workload.trace.frames)
        for (const SpikeEvent &event : frame)
        {
            const auto it = streams_by_src.find(event.neuron);
            if (it == streams_by_src.end())
                continue;
            for (const std::uint32_t stream : it->second)
            {
                const GlobalSynapse &gs = graph.global_synapses[stream];
                FlitSpec spec;
                spec.inject_tick = event.tick;
                spec.src = placement.tile_of[gs.src_cluster];
                spec.dst = placement.tile_of[gs.dst_cluster];
                spec.stream = stream;
                flits.push_back(spec);
            }
        }
    return flits;
}

namespace
{

// Per-stream interval and ordering statistics over the delivered flits.
void stream_metrics(const NocSimulator &sim, std::size_t stream_count, double &isi_out,
                    double &disorder_out)
{
    isi_out = 0.0;
    disorder_out = 0.0;
    if (stream_count == 0)
        return;

    struct Stream
    {
        std::vector<Tick> source_ticks;
        std::vector<Tick> arrival_ticks;
        std::vector<std::uint64_t> arrival_ranks;
        std::uint64_t next_rank{0};
    };
    std::vector<Stream> streams(stream_count);

    // Arrival rank within each stream, in delivery order.
    std::vector<std::uint64_t> rank_of(sim.flits().size(), 0);
    for (const std::size_t id : sim.delivery_order())
    {
        Stream &stream = streams[sim.flits()[id].spec.stream];
        rank_of[id] = stream.next_rank++;
    }
    // Source order = injection id order within each stream.
    for (std::size_t id = 0; id < sim.flits().size(); ++id)
    {
        const FlitRecord &record = sim.flits()[id];
        if (!record.delivered())
            continue;
        Stream &stream = streams[record.spec.stream];
        stream.source_ticks.push_back(record.spec.inject_tick);
        stream.arrival_ticks.push_back(record.arrival_tick);
        stream.arrival_ranks.push_back(rank_of[id]);
    }

    std::size_t active = 0;
    double isi_total = 0.0;
    double disorder_total = 0.0;
    for (const Stream &stream : streams)
    {
        if (stream.source_ticks.empty())
            continue;
        ++active;
        isi_total += isi_distortion(stream.source_ticks, stream.arrival_ticks);
        disorder_total += static_cast<double>(spike_disorder(stream.arrival_ranks));
    }
    if (active == 0)
        return;
    isi_out = isi_total / static_cast<double>(active);
    disorder_out = disorder_total / static_cast<double>(active);
}

}

SimulationReport summarize_noc(const NocSimulator &sim, std::size_t stream_count,
                               const TechTemplate &tech)
{
    SimulationReport report;
    report.total_flits = sim.injected_count();
    report.undelivered = sim.injected_count() - sim.delivered_count();
    std::vector<std::int64_t> latencies;
    for (const FlitRecord &record : sim.flits())
    {
        if (!record.delivered())
            continue;
        latencies.push_back(record.latency());
        report.total_segments += record.route.size();
        if (!record.route.empty())
            report.total_hops += record.route.size() - 1;
    }
    report.latency = latency_stats(latencies);
    report.comm_energy_j = static_cast<double>(report.total_segments) * tech.hop_energy_j;
    stream_metrics(sim, stream_count, report.isi_distortion, report.spike_disorder);
    return report;
}

SimulationReport run_pipeline(const SnnWorkload &workload, const HardwareSpec &hardware,
                              const PipelineConfig &config)
{
    StageConfigs stages = config.stages;
    if (config.preset != PipelinePreset::Custom)
        stages = expand_preset(config.preset, config.seed);

    SnnWorkload wl = workload;
    if (stages.do_decompose)
    {
        const DecomposedWorkload dec = decompose(workload, stages.decompose);
        SpikeTrace derived = derived_trace(dec, workload.trace);
        wl = dec.base;
        wl.trace = std::move(derived);
    }

    const ClusteredGraph graph = partition(wl, hardware.capacity, stages.partition);
    const TopologyGraph topo(hardware.topology);
    const Placement placement = place(graph, topo, stages.placement);
    validate_placement(placement, graph, topo);

    const std::vector<FlitSpec> flits = trace_flits(wl, graph, placement);
    NocConfig noc;
    noc.strategy = config.routing;
    noc.fifo_depth = config.fifo_depth;
    noc.dyad_threshold = config.dyad_threshold;
    noc.table = config.routing_table;
    NocSimulator sim(topo, noc);
    sim.inject(flits);
    sim.run(config.max_cycles);
    if (!sim.conservation_ok())
        throw std::logic_error("flit conservation violated");

    SimulationReport report = summarize_noc(sim, graph.global_synapses.size(), hardware.tech);
    report.preset = to_string(config.preset);
    report.routing = to_string(config.routing);
    report.cluster_count = graph.clusters.size();
    report.global_spikes_per_frame = cost_global_spikes(graph);
    report.local_spikes_per_frame = local_spikes_per_frame(wl, graph);

    // Tile accounting: spikes of every mapped neuron cost compute energy;
    // row activity wears the programmed cells.
    std::vector<std::uint64_t> event_totals(wl.neuron_count(), 0);
    for (const auto &frame : wl.trace.frames)
        for (const SpikeEvent &event : frame)
            ++event_totals[event.neuron];

    std::uint64_t member_spikes = 0;
    std::uint64_t lifetime = kUnboundedLifetime;
    for (const Cluster &cluster : graph.clusters)
    {
        for (const NeuronId member : cluster.members)
            member_spikes += event_totals[member];
        CrossbarInstance crossbar = map_cluster(wl, graph, cluster.id, hardware);
        std::map<NeuronId, std::uint64_t> row_totals;
        for (const NeuronId source : crossbar.row_sources)
            row_totals[source] = event_totals[source];
        record_reads(crossbar, row_totals);
        lifetime = std::min(lifetime,
                            crossbar_lifetime(crossbar, hardware.tech.read_endurance,
                                              wl.trace.frame_count()));
    }
    report.compute_energy_j = compute_energy(member_spikes, hardware.tech, hardware.capacity.n,
                                             hardware.energy_ref_n);
    report.inference_lifetime_frames = lifetime;
    report.worst_path_delay_s = worst_path_delay(hardware.parasitics, hardware.capacity.n);
    return report;
}

std::vector<SimulationReport> run_presets(const SnnWorkload &workload,
                                          const HardwareSpec &hardware,
                                          const std::vector<PipelinePreset> &presets,
                                          const PipelineConfig &base)
{
    // Independent jobs; merge order is the preset order.
    std::vector<std::future<SimulationReport>> jobs;
    jobs.reserve(presets.size());
    for (const PipelinePreset preset : presets)
    {
        PipelineConfig config = base;
        config.preset = preset;
        jobs.push_back(std::async(std::launch::async, [&workload, &hardware, config] {
            return run_pipeline(workload, hardware, config);
        }));
    }
    std::vector<SimulationReport> reports;
    reports.reserve(presets.size());
    for (auto &job : jobs)
        reports.push_back(job.get());
    return reports;
}

namespace
{

constexpr const char *kUnboundedText = "unbounded";

struct MetricValue
{
    double value{0.0};
    bool unbounded{false};
};

std::vector<std::pair<std::string, MetricValue>> report_metrics(const SimulationReport &report)
{
    const bool unbounded_life = report.inference_lifetime_frames == kUnboundedLifetime;
    return {
        {"cluster_count", {static_cast<double>(report.cluster_count), false}},
        {"global_spikes_per_frame", {report.global_spikes_per_frame, false}},
        {"local_spikes_per_frame", {report.local_spikes_per_frame, false}},
        {"comm_energy_j", {report.comm_energy_j, false}},
        {"compute_energy_j", {report.compute_energy_j, false}},
        {"latency_mean", {report.latency.mean, false}},
        {"latency_max", {static_cast<double>(report.latency.max), false}},
        {"isi_distortion", {report.isi_distortion, false}},
        {"spike_disorder", {report.spike_disorder, false}},
        {"inference_lifetime_frames",
         {unbounded_life ? 0.0 : static_cast<double>(report.inference_lifetime_frames),
          unbounded_life}},
        {"total_segments", {static_cast<double>(report.total_segments), false}},
        {"total_hops", {static_cast<double>(report.total_hops), false}},
    };
}

std::string metric_text(const MetricValue &metric)
{
    return metric.unbounded ? kUnboundedText : format_double(metric.value);
}

std::string normalized_text(const MetricValue &metric, const MetricValue &base)
{
    if (metric.unbounded || base.unbounded)
        return metric.unbounded && base.unbounded ? "1" : "na";
    if (base.value == 0.0)
        return metric.value == 0.0 ? "1" : "na";
    return format_double(metric.value / base.value);
}

}

std::vector<ComparisonRow> compare_reports(const std::vector<SimulationReport> &reports)
{
    std::vector<ComparisonRow> rows;
    if (reports.empty())
        return rows;
    const auto base_metrics = report_metrics(reports.front());
    for (const SimulationReport &report : reports)
    {
        const auto metrics = report_metrics(report);
        for (std::size_t m = 0; m < metrics.size(); ++m)
        {
            ComparisonRow row;
            row.metric = metrics[m].first;
            row.preset = report.preset;
            row.value = metric_text(metrics[m].second);
            row.normalized = normalized_text(metrics[m].second, base_metrics[m].second);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string serialize_comparison(const std::vector<ComparisonRow> &rows)
{
    std::string out = "metric,preset,value,normalized\n";
    for (const ComparisonRow &row : rows)
        out += row.metric + "," + row.preset + "," + row.value + "," + row.normalized + "\n";
    return out;
}

void emit_plot_data(const std::vector<SimulationReport> &reports, const std::string &workload_name,
                    const std::string &out_dir)
{
    if (reports.empty())
        throw ValidationError("plot data needs at least one report");
    std::filesystem::create_directories(out_dir);
    const auto base_metrics = report_metrics(reports.front());
    for (std::size_t m = 0; m < base_metrics.size(); ++m)
    {
        // The sentinel value "unbounded" (idle lifetime) and "na" (mixed
        // normalization) can appear in the data columns.
        std::string out = "workload,label,value,normalized\n";
        for (const SimulationReport &report : reports)
        {
            const auto metrics = report_metrics(report);
            out += workload_name + "," + report.preset + "/" + report.routing + "," +
                   metric_text(metrics[m].second) + "," +
                   normalized_text(metrics[m].second, base_metrics[m].second) + "\n";
        }
        write_file(out_dir + "/" + base_metrics[m].first + ".csv", out);
    }
}

std::string serialize_report(const SimulationReport &report)
{
    KeyValueFile kv;
    kv.set("preset", report.preset);
    kv.set("routing", report.routing);
    kv.set("cluster_count", std::to_string(report.cluster_count));
    kv.set("global_spikes_per_frame", format_double(report.global_spikes_per_frame));
    kv.set("local_spikes_per_frame", format_double(report.local_spikes_per_frame));
    kv.set("comm_energy_j", format_double(report.comm_energy_j));
    kv.set("compute_energy_j", format_double(report.compute_energy_j));
    kv.set("latency_min", std::to_string(report.latency.min));
    kv.set("latency_mean", format_double(report.latency.mean));
    kv.set("latency_max", std::to_string(report.latency.max));
    kv.set("latency_p99", std::to_string(report.latency.p99));
    kv.set("latency_count", std::to_string(report.latency.count));
    kv.set("isi_distortion", format_double(report.isi_distortion));
    kv.set("spike_disorder", format_double(report.spike_disorder));
    kv.set("inference_lifetime_frames",
           report.inference_lifetime_frames == kUnboundedLifetime
               ? std::string(kUnboundedText)
               : std::to_string(report.inference_lifetime_frames));
    kv.set("total_flits", std::to_string(report.total_flits));
    kv.set("undelivered", std::to_string(report.undelivered));
    kv.set("total_segments", std::to_string(report.total_segments));
    kv.set("total_hops", std::to_string(report.total_hops));
    kv.set("worst_path_delay_s", format_double(report.worst_path_delay_s));
    return kv.serialize();
}

SimulationReport parse_report(const std::string &content, const std::string &name)
{
    const KeyValueFile kv = KeyValueFile::parse(content, name);
    SimulationReport report;
    report.preset = kv.get("preset");
    report.routing = kv.get("routing");
    report.cluster_count = kv.get_u64("cluster_count");
    report.global_spikes_per_frame = kv.get_double("global_spikes_per_frame");
    report.local_spikes_per_frame = kv.get_double("local_spikes_per_frame");
    report.comm_energy_j = kv.get_double("comm_energy_j");
    report.compute_energy_j = kv.get_double("compute_energy_j");
    report.latency.min = static_cast<std::int64_t>(kv.get_u64("latency_min"));
    report.latency.mean = kv.get_double("latency_mean");
    report.latency.max = static_cast<std::int64_t>(kv.get_u64("latency_max"));
    report.latency.p99 = static_cast<std::int64_t>(kv.get_u64("latency_p99"));
    report.latency.count = kv.get_u64("latency_count");
    report.isi_distortion = kv.get_double("isi_distortion");
    report.spike_disorder = kv.get_double("spike_disorder");
    report.inference_lifetime_frames = kv.get("inference_lifetime_frames") == kUnboundedText
                                           ? kUnboundedLifetime
                                           : kv.get_u64("inference_lifetime_frames");
    report.total_flits = kv.get_u64("total_flits");
    report.undelivered = kv.get_u64("undelivered");
    report.total_segments = kv.get_u64("total_segments");
    report.total_hops = kv.get_u64("total_hops");
    report.worst_path_delay_s = kv.get_double("worst_path_delay_s");
    return report;
}

void save_report(const std::string &path, const SimulationReport &report)
{
    write_file(path, serialize_report(report));
}

SimulationReport load_report(const std::string &path)
{
    return parse_report(read_file(path), path);
}

SnnWorkload gen_synthetic(const GenConfig &config)
{
    Rng rng = derive_rng(config.seed, "gen-graph");
    std::vector<NeuronDecl> neurons;
    std::vector<SynapseDecl> synapses;
    std::size_t count = 0;

    auto random_weight = [&rng] { return rng.range(0.25, 1.0); };

    switch (config.kind)
    {
    case SyntheticKind::Community:
    {
        if (config.neurons == 0 || config.communities == 0)
            throw ValidationError("community graphs need neurons and communities >= 1");
        if (config.p_in < 0.0 || config.p_in > 1.0 || config.p_out < 0.0 || config.p_out > 1.0)
            throw ValidationError("edge probabilities must lie in [0, 1]");
        count = config.neurons;
        auto community_of = [&](std::size_t i) {
            return i * config.communities / config.neurons;
        };
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t j = i + 1; j < count; ++j)
            {
                const bool same = community_of(i) == community_of(j);
                if (!rng.chance(same ? config.p_in : config.p_out))
                    continue;
                SynapseDecl synapse;
                synapse.weight = random_weight();
                if (rng.chance(0.5))
                {
                    synapse.src = static_cast<NeuronId>(i);
                    synapse.dst = static_cast<NeuronId>(j);
                }
                else
                {
                    synapse.src = static_cast<NeuronId>(j);
                    synapse.dst = static_cast<NeuronId>(i);
                }
                synapses.push_back(synapse);
            }
        break;
    }
    case SyntheticKind::Layered:
    {
        if (config.widths.size() < 2)
            throw ValidationError("layered graphs need at least two layers");
        for (const std::size_t width : config.widths)
            if (width == 0)
                throw ValidationError("layer widths must be positive");
        std::size_t offset = 0;
        for (std::size_t layer = 0; layer + 1 < config.widths.size(); ++layer)
        {
            const std::size_t next_offset = offset + config.widths[layer];
            for (std::size_t a = 0; a < config.widths[layer]; ++a)
                for (std::size_t b = 0; b < config.widths[layer + 1]; ++b)
                {
                    SynapseDecl synapse;
                    synapse.src = static_cast<NeuronId>(offset + a);
                    synapse.dst = static_cast<NeuronId>(next_offset + b);
                    synapse.weight = random_weight();
                    synapses.push_back(synapse);
                }
            offset = next_offset;
        }
        count = offset + config.widths.back();
        break;
    }
    case SyntheticKind::HighFanin:
    {
        if (config.fanin == 0)
            throw ValidationError("high-fanin graphs need fanin >= 1");
        count = config.fanin + 1;
        for (std::size_t i = 0; i < config.fanin; ++i)
        {
            SynapseDecl synapse;
            synapse.src = static_cast<NeuronId>(i);
            synapse.dst = static_cast<NeuronId>(config.fanin);
            synapse.weight = random_weight();
            synapses.push_back(synapse);
        }
        break;
    }
    }

    std::vector<std::uint32_t> fanin(count, 0);
    std::vector<std::uint32_t> fanout(count, 0);
    for (const SynapseDecl &synapse : synapses)
    {
        ++fanin[synapse.dst];
        ++fanout[synapse.src];
    }
    neurons.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        NeuronDecl decl;
        decl.id = static_cast<NeuronId>(i);
        if (fanin[i] == 0)
            decl.kind = NeuronKind::Input;
        else if (fanout[i] == 0)
            decl.kind = NeuronKind::Output;
        else
            decl.kind = NeuronKind::Hidden;
        neurons.push_back(decl);
    }

    if (config.rate < 0.0 || config.rate > 1.0)
        throw ValidationError("spike rate must lie in [0, 1]");
    if (config.frame_ticks <= 0 && config.frames > 0)
        throw ValidationError("frame length must be positive");
    SpikeTrace trace;
    Rng trace_rng = derive_rng(config.seed, "gen-trace");
    trace.frames.resize(config.frames);
    for (std::size_t frame = 0; frame < config.frames; ++frame)
    {
        const Tick start = static_cast<Tick>(frame) * config.frame_ticks;
        for (Tick t = start; t < start + config.frame_ticks; ++t)
            for (std::size_t i = 0; i < count; ++i)
                if (trace_rng.chance(config.rate))
                    trace.frames[frame].push_back(SpikeEvent{static_cast<NeuronId>(i), t});
    }

    return make_workload(std::move(neurons), std::move(synapses), std::move(trace));
}

}
