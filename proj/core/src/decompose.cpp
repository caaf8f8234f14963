// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/decompose.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "spiketile/errors.hpp"
#include "spiketile/textio.hpp"

namespace spiketile
{

namespace
{

struct Stream
{
    NeuronId source{0};
    double weight{0.0};
};

}

DecomposedWorkload decompose(const SnnWorkload &workload, DecomposeOptions options)
{
    if (options.mode == DecomposeMode::Limit && options.fanin_limit < 2)
    {
        throw ValidationError("fanin limit must be at least 2");
    }
    const std::uint32_t limit =
        options.mode == DecomposeMode::Full ? 2 : options.fanin_limit;

    DecomposedWorkload result;
    result.mode = options.mode;
    result.fanin_limit = limit;
    result.original_count = static_cast<NeuronId>(workload.neuron_count());

    std::vector<NeuronDecl> neurons = workload.neurons;
    std::vector<SynapseDecl> synapses;
    NeuronId next_id = result.original_count;

    // Synapses are sorted by (src, dst), so grouping by destination keeps
    // each neuron's inputs in ascending source order.
    std::vector<std::vector<Stream>> inputs(workload.neuron_count());
    for (const SynapseDecl &synapse : workload.synapses)
    {
        inputs[synapse.dst].push_back({synapse.src, synapse.weight});
    }

    for (NeuronId neuron = 0; neuron < workload.neuron_count(); ++neuron)
    {
        std::vector<Stream> &streams = inputs[neuron];
        std::sort(streams.begin(), streams.end(),
                  [](const Stream &a, const Stream &b) { return a.source < b.source; });
        if (streams.size() <= limit)
        {
            for (const Stream &stream : streams)
            {
                synapses.push_back({stream.source, neuron, stream.weight});
            }
            continue;
        }

        std::vector<NeuronId> units;
        auto new_unit = [&](const std::vector<Stream> &taken) {
            const NeuronId unit = next_id++;
            neurons.push_back({unit, NeuronKind::Hidden});
            for (const Stream &stream : taken)
            {
                synapses.push_back({stream.source, unit, stream.weight});
            }
            units.push_back(unit);
            return Stream{unit, 1.0};
        };

        if (options.mode == DecomposeMode::Full)
        {
            // Chain: the first unit absorbs the two lowest-id inputs, each
            // following unit takes the running chain plus one new input, and
            // the original neuron closes the chain.
            Stream chain = new_unit({streams[0], streams[1]});
            for (std::size_t i = 2; i + 1 < streams.size(); ++i)
            {
                chain = new_unit({chain, streams[i]});
            }
            synapses.push_back({chain.source, neuron, chain.weight});
            synapses.push_back({streams.back().source, neuron, streams.back().weight});
        }
        else
        {
            // Balanced tree: combine fanin-f groups left to right until at
            // most f streams remain, then hand those to the original neuron.
            std::vector<Stream> level = streams;
            while (level.size() > limit)
            {
                std::vector<Stream> next;
                for (std::size_t i = 0; i < level.size(); i += limit)
                {
                    const std::size_t count = std::min<std::size_t>(limit, level.size() - i);
                    if (count < 2)
                    {
                        next.push_back(level[i]);
                    }
                    else
                    {
                        next.push_back(new_unit(
                            {level.begin() + i, level.begin() + i + count}));
                    }
                }
                level = std::move(next);
            }
            for (const Stream &stream : level)
            {
                synapses.push_back({stream.source, neuron, stream.weight});
            }
        }
        units.push_back(neuron);
        result.fit_map.emplace(neuron, std::move(units));
    }

    result.base = make_workload(std::move(neurons), std::move(synapses), workload.trace);
    return result;
}

namespace
{

// Per-unit hop count down to the final unit of its group. The final unit
// itself is depth 0.
std::map<NeuronId, int> unit_depths(const DecomposedWorkload &decomposed,
                                    const std::vector<NeuronId> &units)
{
    std::map<NeuronId, NeuronId> consumer;
    const std::set<NeuronId> unit_set(units.begin(), units.end());
    for (const SynapseDecl &synapse : decomposed.base.synapses)
    {
        if (unit_set.count(synapse.src) != 0 && unit_set.count(synapse.dst) != 0 &&
            synapse.src >= decomposed.original_count)
        {
            consumer[synapse.src] = synapse.dst;
        }
    }
    std::map<NeuronId, int> depth;
    const NeuronId final_unit = units.back();
    depth[final_unit] = 0;
    for (const NeuronId unit : units)
    {
        if (depth.count(unit) != 0)
        {
            continue;
        }
        NeuronId walk = unit;
        int steps = 0;
        while (walk != final_unit)
        {
            walk = consumer.at(walk);
            ++steps;
            if (const auto it = depth.find(walk); it != depth.end())
            {
                steps += it->second;
                break;
            }
        }
        depth[unit] = steps;
    }
    return depth;
}

std::vector<std::vector<Tick>> flatten_stimulus(const SnnWorkload &original,
                                                const SpikeTrace &stimulus)
{
    std::vector<std::vector<Tick>> ticks(original.neuron_count());
    for (const auto &frame : stimulus.frames)
    {
        for (const SpikeEvent &event : frame)
        {
            if (event.neuron >= original.neuron_count())
            {
                throw ValidationError("stimulus references unknown neuron " +
                                      std::to_string(event.neuron));
            }
            if (original.neurons[event.neuron].kind != NeuronKind::Input)
            {
                throw ValidationError("stimulus drives non-input neuron " +
                                      std::to_string(event.neuron));
            }
            ticks[event.neuron].push_back(event.tick);
        }
    }
    for (auto &list : ticks)
    {
        std::sort(list.begin(), list.end());
    }
    return ticks;
}

}

double check_equivalence(const SnnWorkload &original, const DecomposedWorkload &decomposed,
                         const SpikeTrace &stimulus)
{
    if (decomposed.fit_map.empty())
    {
        return 0.0;
    }
    const auto stim = flatten_stimulus(original, stimulus);

    Tick stim_end = 0;
    bool any_spike = false;
    for (const auto &list : stim)
    {
        if (!list.empty())
        {
            stim_end = std::max(stim_end, list.back());
            any_spike = true;
        }
    }
    if (!any_spike)
    {
        return 0.0;
    }

    int max_shift = 0;
    std::map<NeuronId, int> shifts;
    for (const auto &[neuron, units] : decomposed.fit_map)
    {
        const auto depths = unit_depths(decomposed, units);
        int shift = 0;
        for (const auto &[unit, depth] : depths)
        {
            shift = std::max(shift, depth);
        }
        shifts[neuron] = shift;
        max_shift = std::max(max_shift, shift);
    }

    const Tick horizon = stim_end + max_shift + 2;
    auto spike_at = [&](NeuronId neuron, Tick t) {
        const auto &list = stim[neuron];
        return std::binary_search(list.begin(), list.end(), t) ? 1.0 : 0.0;
    };

    // Decomposed side: value of each added unit's forwarded charge per tick.
    // A unit outputs at t what it received at t-1. Inputs come either from
    // stimulated originals or from chain units, never from other originals'
    // units, so one pass per tick in id order is enough once previous-tick
    // outputs are kept.
    const std::size_t total = decomposed.base.neuron_count();
    std::vector<std::vector<std::pair<NeuronId, double>>> fanin(total);
    for (const SynapseDecl &synapse : decomposed.base.synapses)
    {
        fanin[synapse.dst].emplace_back(synapse.src, synapse.weight);
    }

    std::vector<double> unit_out_prev(total, 0.0);
    std::vector<double> unit_in_now(total, 0.0);
    // Accumulated weighted input of each rewritten neuron's final unit, per
    // tick, plus the original-graph accumulation for comparison.
    std::map<NeuronId, std::vector<double>> acc_dec;
    std::map<NeuronId, std::vector<double>> acc_orig;
    for (const auto &[neuron, units] : decomposed.fit_map)
    {
        acc_dec[neuron] = std::vector<double>(static_cast<std::size_t>(horizon) + 1, 0.0);
        acc_orig[neuron] = std::vector<double>(static_cast<std::size_t>(horizon) + 1, 0.0);
    }

    std::vector<std::vector<std::pair<NeuronId, double>>> orig_fanin(original.neuron_count());
    for (const SynapseDecl &synapse : original.synapses)
    {
        orig_fanin[synapse.dst].emplace_back(synapse.src, synapse.weight);
    }

    for (Tick t = 0; t <= horizon; ++t)
    {
        for (NeuronId node = 0; node < total; ++node)
        {
            double in = 0.0;
            for (const auto &[source, weight] : fanin[node])
            {
                if (source < decomposed.original_count)
                {
                    if (original.neurons[source].kind == NeuronKind::Input)
                    {
                        in += weight * spike_at(source, t);
                    }
                }
                else
                {
                    in += weight * unit_out_prev[source];
                }
            }
            unit_in_now[node] = in;
        }
        for (auto &[neuron, acc] : acc_dec)
        {
            const double prev = t > 0 ? acc[static_cast<std::size_t>(t) - 1] : 0.0;
            acc[static_cast<std::size_t>(t)] = prev + unit_in_now[neuron];
        }
        for (auto &[neuron, acc] : acc_orig)
        {
            double in = 0.0;
            for (const auto &[source, weight] : orig_fanin[neuron])
            {
                if (original.neurons[source].kind == NeuronKind::Input)
                {
                    in += weight * spike_at(source, t);
                }
            }
            const double prev = t > 0 ? acc[static_cast<std::size_t>(t) - 1] : 0.0;
            acc[static_cast<std::size_t>(t)] = prev + in;
        }
        for (NeuronId node = decomposed.original_count; node < total; ++node)
        {
            unit_out_prev[node] = unit_in_now[node];
        }
    }

    double worst = 0.0;
    for (const auto &[neuron, units] : decomposed.fit_map)
    {
        const int shift = shifts.at(neuron);
        const auto &dec = acc_dec.at(neuron);
        const auto &ref = acc_orig.at(neuron);
        for (Tick t = 0; t + shift <= horizon && t <= stim_end + 1; ++t)
        {
            const double diff = dec[static_cast<std::size_t>(t + shift)] -
                                ref[static_cast<std::size_t>(t)];
            worst = std::max(worst, std::abs(diff));
        }
    }
    return worst;
}

SpikeTrace impulse_stimulus(const SnnWorkload &workload)
{
    SpikeTrace trace;
    trace.frames.resize(1);
    for (const NeuronDecl &neuron : workload.neurons)
    {
        if (neuron.kind == NeuronKind::Input)
        {
            trace.frames[0].push_back({neuron.id, 0});
        }
    }
    return trace;
}

SpikeTrace derived_trace(const DecomposedWorkload &decomposed, const SpikeTrace &recorded)
{
    SpikeTrace trace = recorded;
    if (decomposed.fit_map.empty() || recorded.empty())
    {
        return trace;
    }

    std::vector<std::vector<std::pair<NeuronId, double>>> fanin(
        decomposed.base.neuron_count());
    for (const SynapseDecl &synapse : decomposed.base.synapses)
    {
        fanin[synapse.dst].emplace_back(synapse.src, synapse.weight);
    }

    // Per-frame tick sets, filled lazily: originals from the recording, units
    // from the union of their sources' ticks shifted one tick down the chain.
    // fit_map lists producers before consumers, so one forward pass works.
    const std::size_t frame_count = recorded.frame_count();
    std::vector<std::vector<std::vector<Tick>>> ticks(decomposed.base.neuron_count());
    for (NeuronId neuron = 0; neuron < decomposed.original_count; ++neuron)
    {
        ticks[neuron].resize(frame_count);
    }
    for (std::size_t f = 0; f < frame_count; ++f)
    {
        for (const SpikeEvent &event : recorded.frames[f])
        {
            ticks[event.neuron][f].push_back(event.tick);
        }
    }

    for (const auto &[neuron, units] : decomposed.fit_map)
    {
        for (const NeuronId unit : units)
        {
            if (unit < decomposed.original_count)
            {
                continue;
            }
            ticks[unit].resize(frame_count);
            for (std::size_t f = 0; f < frame_count; ++f)
            {
                std::set<Tick> merged;
                for (const auto &[source, weight] : fanin[unit])
                {
                    for (const Tick t : ticks[source][f])
                    {
                        merged.insert(t + 1);
                    }
                }
                ticks[unit][f].assign(merged.begin(), merged.end());
            }
            for (std::size_t f = 0; f < frame_count; ++f)
            {
                for (const Tick t : ticks[unit][f])
                {
                    trace.frames[f].push_back({unit, t});
                }
            }
        }
    }
    for (auto &frame : trace.frames)
    {
        std::sort(frame.begin(), frame.end(), [](const SpikeEvent &a, const SpikeEvent &b) {
            return a.tick != b.tick ? a.tick < b.tick : a.neuron < b.neuron;
        });
    }
    return trace;
}

std::string serialize_fit_map(const DecomposedWorkload &decomposed)
{
    std::string out;
    out += "# mode: ";
    out += decomposed.mode == DecomposeMode::Full
               ? "full"
               : "limit:" + std::to_string(decomposed.fanin_limit);
    out += "\n";
    for (const auto &[neuron, units] : decomposed.fit_map)
    {
        out += std::to_string(neuron) + ":";
        for (std::size_t i = 0; i < units.size(); ++i)
        {
            out += i == 0 ? " " : ",";
            out += std::to_string(units[i]);
        }
        out += "\n";
    }
    return out;
}

void save_fit_map(const DecomposedWorkload &decomposed, const std::string &path)
{
    write_file(path, serialize_fit_map(decomposed));
}

std::map<NeuronId, std::vector<NeuronId>> parse_fit_map(const std::string &content,
                                                        const std::string &name)
{
    std::map<NeuronId, std::vector<NeuronId>> map;
    std::istringstream stream(content);
    std::string raw;
    int number = 0;
    while (std::getline(stream, raw))
    {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
        {
            raw.erase(hash);
        }
        const auto begin = raw.find_first_not_of(" \t\r");
        if (begin == std::string::npos)
        {
            continue;
        }
        const std::string where = name + ":" + std::to_string(number);
        const auto colon = raw.find(':');
        if (colon == std::string::npos)
        {
            throw ParseError(where + ": expected '<orig>: <unit>,<unit>,...'");
        }
        const NeuronId orig =
            static_cast<NeuronId>(parse_u64(raw.substr(begin, colon - begin), where));
        std::vector<NeuronId> units;
        std::string rest = raw.substr(colon + 1);
        std::istringstream items(rest);
        std::string item;
        while (std::getline(items, item, ','))
        {
            const auto b = item.find_first_not_of(" \t");
            if (b == std::string::npos)
            {
                throw ParseError(where + ": empty unit id");
            }
            const auto e = item.find_last_not_of(" \t");
            units.push_back(
                static_cast<NeuronId>(parse_u64(item.substr(b, e - b + 1), where)));
        }
        if (units.empty())
        {
            throw ParseError(where + ": no units listed");
        }
        if (!map.emplace(orig, std::move(units)).second)
        {
            throw ParseError(where + ": duplicate original id");
        }
    }
    return map;
}

}
