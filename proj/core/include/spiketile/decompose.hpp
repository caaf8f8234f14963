// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// decompose.hpp - rewriting high-fanin neurons into fanin-limited units
//
// A neuron with k inputs does not fit a crossbar column when k exceeds the
// row count, and even below that bound it fragments the array. Full
// decomposition rewrites every neuron with k > 2 inputs into a chain of k-1
// two-input units; the limited mode builds balanced fanin-f trees instead.
// Intermediate units are unit-gain accumulators with no leak and no
// threshold: whatever charge arrives in one tick is forwarded to the next
// unit on the following tick. The original neuron keeps its id, its outgoing
// synapses, and its firing semantics as the final unit of its chain.
#ifndef SPIKETILE_DECOMPOSE_HPP
#define SPIKETILE_DECOMPOSE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spiketile/types.hpp"
#include "spiketile/workload.hpp"

namespace spiketile
{

enum class DecomposeMode
{
    Full,   // fanin 2 chains
    Limit,  // balanced fanin-f trees, f >= 2
};

struct DecomposeOptions
{
    DecomposeMode mode{DecomposeMode::Full};
    std::uint32_t fanin_limit{2};
};

struct DecomposedWorkload
{
    SnnWorkload base;
    DecomposeMode mode{DecomposeMode::Full};
    std::uint32_t fanin_limit{2};
    // Ids below this bound are original neurons; the rest are added units.
    NeuronId original_count{0};
    // Original neuron id -> its units in creation order; the last entry is
    // always the original id itself. Only rewritten neurons appear here.
    std::map<NeuronId, std::vector<NeuronId>> fit_map;
};

DecomposedWorkload decompose(const SnnWorkload &workload, DecomposeOptions options);

// Simulate both graphs under the reference accumulate-and-forward semantics
// and return the worst per-tick difference between the final unit's
// accumulated weighted input and the original neuron's, after shifting the
// decomposed side back by its chain latency. The stimulus may only drive
// input neurons. For a single burst at tick 0 the error is exactly zero for
// integer weights; spread-out stimuli show the real transient skew of the
// chain and are reported as-is.
double check_equivalence(const SnnWorkload &original, const DecomposedWorkload &decomposed,
                         const SpikeTrace &stimulus);

// One spike on every input neuron at tick 0; the canonical equivalence
// stimulus.
SpikeTrace impulse_stimulus(const SnnWorkload &workload);

// Extend a trace recorded for the original network onto the decomposed one.
// Original neurons keep their recorded events; an added unit emits one tick
// after each tick at which any of its sources emitted (its accumulator only
// changes value then). The result is for traffic scheduling and per-frame
// accounting; shifted events may spill past the recorded frame windows, so it
// is not required to satisfy the frame-overlap invariant of recorded traces.
SpikeTrace derived_trace(const DecomposedWorkload &decomposed, const SpikeTrace &recorded);

// Sidecar format: `<orig_id>: <unit_id>,<unit_id>,...` per rewritten neuron.
std::string serialize_fit_map(const DecomposedWorkload &decomposed);
void save_fit_map(const DecomposedWorkload &decomposed, const std::string &path);
std::map<NeuronId, std::vector<NeuronId>> parse_fit_map(const std::string &content,
                                                        const std::string &name);

}

#endif
