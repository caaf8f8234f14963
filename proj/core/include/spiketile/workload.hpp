// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// workload.hpp - spiking workload: neuron/synapse graph plus recorded spikes
//
// A workload couples a directed synapse graph with a spike trace recorded
// from a functional simulation of the same network. The trace is organized
// into frames (presentation windows); all averaged spike statistics are
// per-frame means.
#ifndef SPIKETILE_WORKLOAD_HPP
#define SPIKETILE_WORKLOAD_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spiketile/types.hpp"

namespace spiketile
{

enum class NeuronKind
{
    Input,
    Hidden,
    Output,
};

const char *to_string(NeuronKind kind);
NeuronKind neuron_kind_from_string(const std::string &token);

struct NeuronDecl
{
    NeuronId id{0};
    NeuronKind kind{NeuronKind::Hidden};
};

struct SynapseDecl
{
    NeuronId src{0};
    NeuronId dst{0};
    double weight{0.0};
};

struct SpikeEvent
{
    NeuronId neuron{0};
    Tick tick{0};
};

// Spike events grouped by frame. Frames may be empty; events within a frame
// are kept sorted by (tick, neuron). Frame windows must not overlap in time.
struct SpikeTrace
{
    std::vector<std::vector<SpikeEvent>> frames;

    std::size_t frame_count() const { return frames.size(); }
    std::size_t total_events() const;
    bool empty() const { return frames.empty(); }
};

struct SnnWorkload
{
    // Neurons are stored id-sorted with dense ids, so neurons[i].id == i.
    std::vector<NeuronDecl> neurons;
    // Synapses are sorted by (src, dst); no self-loops, no duplicates.
    std::vector<SynapseDecl> synapses;
    SpikeTrace trace;

    std::size_t neuron_count() const { return neurons.size(); }
};

// Canonicalize raw declarations: ids are remapped to a dense 0..n-1 range in
// ascending order of the original ids, synapses and trace events follow, and
// every model invariant is checked. Throws ValidationError on violations.
SnnWorkload make_workload(std::vector<NeuronDecl> neurons,
                          std::vector<SynapseDecl> synapses, SpikeTrace trace);

// Re-run the invariant checks on an already-canonical workload.
void validate_workload(const SnnWorkload &workload);

// Model file: `neuron <id> <input|hidden|output>` and
// `synapse <src> <dst> <weight>` lines, '#' comments allowed.
// Trace file: CSV `frame,neuron,tick`, sorted by (frame, tick).
SnnWorkload load_workload(const std::string &model_path, const std::string &trace_path);
SnnWorkload load_model(const std::string &model_path);
SpikeTrace load_trace(const std::string &trace_path);
void save_model(const SnnWorkload &workload, const std::string &path);
void save_trace(const SpikeTrace &trace, const std::string &path);

std::string serialize_model(const SnnWorkload &workload);
std::string serialize_trace(const SpikeTrace &trace);
SnnWorkload parse_model(const std::string &content, const std::string &name);
SpikeTrace parse_trace(const std::string &content, const std::string &name);

// Mean spikes per frame for one neuron: total spikes over the whole trace
// divided by the frame count. A workload with no frames averages to zero.
double spikes_per_frame(const SnnWorkload &workload, NeuronId neuron);

// Per-neuron tables, indexed by dense neuron id.
std::vector<std::uint32_t> in_degrees(const SnnWorkload &workload);
std::vector<double> spikes_per_frame_table(const SnnWorkload &workload);

}

#endif
