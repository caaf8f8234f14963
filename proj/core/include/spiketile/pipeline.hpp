// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// pipeline.hpp - end-to-end mapping flow and evaluation reports
//
// A pipeline takes a workload through decompose (optional), partition,
// placement and interconnect simulation, then reports energy, latency,
// spike stream quality and inference lifetime. Three presets bundle the
// stage choices:
//   PyCarlStyle    - no decomposition, arbitrary partition, arbitrary place
//   SpiNeMapStyle  - no decomposition, spike-minimizing partition, swarm place
//   DecomposedStyle- full fanin decomposition, greedy packing, swarm place
// Comparisons normalize every metric to the PyCarlStyle run of the same
// workload and seed.
#ifndef SPIKETILE_PIPELINE_HPP
#define SPIKETILE_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spiketile/cluster.hpp"
#include "spiketile/decompose.hpp"
#include "spiketile/hardware.hpp"
#include "spiketile/metrics.hpp"
#include "spiketile/nocsim.hpp"
#include "spiketile/partition.hpp"
#include "spiketile/placement.hpp"
#include "spiketile/workload.hpp"

namespace spiketile
{

enum class PipelinePreset : std::uint8_t
{
    PyCarlStyle,
    SpiNeMapStyle,
    DecomposedStyle,
    Custom,
};

const char *to_string(PipelinePreset preset);
PipelinePreset pipeline_preset_from_string(const std::string &text);

struct StageConfigs
{
    bool do_decompose{false};
    DecomposeOptions decompose{};
    PartitionConfig partition{};
    PlacementConfig placement{};
};

// Stage choices for a preset; every stage seed is derived from the root.
StageConfigs expand_preset(PipelinePreset preset, std::uint64_t seed);

struct PipelineConfig
{
    PipelinePreset preset{PipelinePreset::PyCarlStyle};
    // Stage configs; presets other than Custom overwrite these.
    StageConfigs stages{};
    RoutingStrategy routing{RoutingStrategy::Xy};
    std::optional<RoutingTable> routing_table{};
    std::size_t fifo_depth{4};
    int dyad_threshold{3};
    std::int64_t max_cycles{10'000'000};
    std::uint64_t seed{0};
};

struct SimulationReport
{
    std::string preset{"Custom"};
    std::string routing{"xy"};
    std::size_t cluster_count{0};
    double global_spikes_per_frame{0.0};
    double local_spikes_per_frame{0.0};
    double comm_energy_j{0.0};
    double compute_energy_j{0.0};
    LatencyStats latency{};
    double isi_distortion{0.0};
    double spike_disorder{0.0};
    // Unbounded until a crossbar with read wear enters the picture.
    std::uint64_t inference_lifetime_frames{~std::uint64_t{0}};
    std::uint64_t total_flits{0};
    std::uint64_t undelivered{0};
    std::uint64_t total_segments{0};
    std::uint64_t total_hops{0};
    double worst_path_delay_s{0.0};
};

std::string serialize_report(const SimulationReport &report);
SimulationReport parse_report(const std::string &content, const std::string &name);
void save_report(const std::string &path, const SimulationReport &report);
SimulationReport load_report(const std::string &path);

// Flits for a placed clustered workload: one flit per source spike per
// global synapse, injected at the spike tick, stream id = global synapse
// index.
std::vector<FlitSpec> trace_flits(const SnnWorkload &workload, const ClusteredGraph &graph,
                                  const Placement &placement);

// Report skeleton from a finished interconnect run: latency distribution,
// segment/hop counts, communication energy and per-stream spike statistics.
SimulationReport summarize_noc(const NocSimulator &sim, std::size_t stream_count,
                               const TechTemplate &tech);

SimulationReport run_pipeline(const SnnWorkload &workload, const HardwareSpec &hardware,
                              const PipelineConfig &config);

// One pipeline run per preset, same workload and root seed; reports come
// back in preset order.
std::vector<SimulationReport> run_presets(const SnnWorkload &workload,
                                          const HardwareSpec &hardware,
                                          const std::vector<PipelinePreset> &presets,
                                          const PipelineConfig &base);

struct ComparisonRow
{
    std::string metric;
    std::string preset;
    std::string value;
    // Value divided by the first (baseline) report's value; "1" when both
    // sides are zero or both unbounded, "na" when only one side is.
    std::string normalized;
};

std::vector<ComparisonRow> compare_reports(const std::vector<SimulationReport> &reports);
std::string serialize_comparison(const std::vector<ComparisonRow> &rows);

// One CSV per metric, columns workload,label,value,normalized.
void emit_plot_data(const std::vector<SimulationReport> &reports, const std::string &workload_name,
                    const std::string &out_dir);

enum class SyntheticKind : std::uint8_t
{
    Community,
    Layered,
    HighFanin,
};

struct GenConfig
{
    SyntheticKind kind{SyntheticKind::Community};
    // Community graphs: total neurons split into `communities` blocks with
    // dense inside edges (p_in) and sparse cross edges (p_out).
    std::size_t neurons{32};
    std::size_t communities{4};
    double p_in{0.3};
    double p_out{0.02};
    // Layered graphs: fully connected consecutive layers.
    std::vector<std::size_t> widths{};
    // High-fanin: `fanin` inputs converging on one output neuron.
    std::size_t fanin{8};
    // Trace shape: every neuron spikes per tick with probability `rate`.
    std::size_t frames{4};
    Tick frame_ticks{64};
    double rate{0.05};
    std::uint64_t seed{0};
};

SnnWorkload gen_synthetic(const GenConfig &config);

}

#endif
