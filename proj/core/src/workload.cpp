// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/workload.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "spiketile/errors.hpp"
#include "spiketile/textio.hpp"

namespace spiketile
{

const char *to_string(NeuronKind kind)
{
    switch (kind)
    {
    case NeuronKind::Input:
        return "input";
    case NeuronKind::Hidden:
        return "hidden";
    default:
        return "output";
    }
}

NeuronKind neuron_kind_from_string(const std::string &token)
{
    if (token == "input")
    {
        return NeuronKind::Input;
    }
    if (token == "hidden")
    {
        return NeuronKind::Hidden;
    }
    if (token == "output")
    {
        return NeuronKind::Output;
    }
    throw ParseError("unknown neuron kind '" + token + "'");
}

std::size_t SpikeTrace::total_events() const
{
    std::size_t count = 0;
    for (const auto &frame : frames)
    {
        count += frame.size();
    }
    return count;
}

namespace
{

void check_trace(const SpikeTrace &trace, std::size_t neuron_count)
{
    Tick previous_frame_max = 0;
    bool have_previous_frame = false;
    for (std::size_t f = 0; f < trace.frames.size(); ++f)
    {
        const auto &frame = trace.frames[f];
        std::map<NeuronId, Tick> last_tick;
        for (std::size_t i = 0; i < frame.size(); ++i)
        {
            const SpikeEvent &event = frame[i];
            if (event.neuron >= neuron_count)
            {
                throw ValidationError("trace frame " + std::to_string(f) +
                                      " references unknown neuron " +
                                      std::to_string(event.neuron));
            }
            if (i > 0)
            {
                const SpikeEvent &prev = frame[i - 1];
                if (event.tick < prev.tick ||
                    (event.tick == prev.tick && event.neuron < prev.neuron))
                {
                    throw ValidationError("trace frame " + std::to_string(f) +
                                          " is not sorted by (tick, neuron)");
                }
            }
            if (const auto it = last_tick.find(event.neuron); it != last_tick.end())
            {
                if (event.tick <= it->second)
                {
                    throw ValidationError(
                        "neuron " + std::to_string(event.neuron) + " spike times in frame " +
                        std::to_string(f) + " are not strictly increasing");
                }
            }
            last_tick[event.neuron] = event.tick;
        }
        if (!frame.empty())
        {
            if (have_previous_frame && frame.front().tick <= previous_frame_max)
            {
                throw ValidationError("frame " + std::to_string(f) +
                                      " overlaps the previous frame in time");
            }
            previous_frame_max = frame.back().tick;
            have_previous_frame = true;
        }
    }
}

}

SnnWorkload make_workload(std::vector<NeuronDecl> neurons,
                          std::vector<SynapseDecl> synapses, SpikeTrace trace)
{
    std::sort(neurons.begin(), neurons.end(),
              [](const NeuronDecl &a, const NeuronDecl &b) { return a.id < b.id; });
    std::map<NeuronId, NeuronId> remap;
    for (std::size_t i = 0; i < neurons.size(); ++i)
    {
        if (!remap.emplace(neurons[i].id, static_cast<NeuronId>(i)).second)
        {
            throw ValidationError("duplicate neuron id " + std::to_string(neurons[i].id));
        }
    }
    for (auto &neuron : neurons)
    {
        neuron.id = remap.at(neuron.id);
    }

    for (auto &synapse : synapses)
    {
        const auto src = remap.find(synapse.src);
        const auto dst = remap.find(synapse.dst);
        if (src == remap.end() || dst == remap.end())
        {
            throw ValidationError("synapse " + std::to_string(synapse.src) + " -> " +
                                  std::to_string(synapse.dst) +
                                  " references an undeclared neuron");
        }
        synapse.src = src->second;
        synapse.dst = dst->second;
        if (synapse.src == synapse.dst)
        {
            throw ValidationError("self-loop on neuron " + std::to_string(synapse.src));
        }
    }
    std::sort(synapses.begin(), synapses.end(),
              [](const SynapseDecl &a, const SynapseDecl &b) {
                  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
              });
    for (std::size_t i = 1; i < synapses.size(); ++i)
    {
        if (synapses[i].src == synapses[i - 1].src && synapses[i].dst == synapses[i - 1].dst)
        {
            throw ValidationError("duplicate synapse " + std::to_string(synapses[i].src) +
                                  " -> " + std::to_string(synapses[i].dst));
        }
    }

    for (auto &frame : trace.frames)
    {
        for (auto &event : frame)
        {
            const auto it = remap.find(event.neuron);
            if (it == remap.end())
            {
                throw ValidationError("trace references undeclared neuron " +
                                      std::to_string(event.neuron));
            }
            event.neuron = it->second;
        }
        std::sort(frame.begin(), frame.end(), [](const SpikeEvent &a, const SpikeEvent &b) {
            return a.tick != b.tick ? a.tick < b.tick : a.neuron < b.neuron;
        });
    }

    SnnWorkload workload{std::move(neurons), std::move(synapses), std::move(trace)};
    validate_workload(workload);
    return workload;
}

void validate_workload(const SnnWorkload &workload)
{
    for (std::size_t i = 0; i < workload.neurons.size(); ++i)
    {
        if (workload.neurons[i].id != i)
        {
            throw ValidationError("neuron ids are not dense at index " + std::to_string(i));
        }
    }
    for (std::size_t i = 0; i < workload.synapses.size(); ++i)
    {
        const SynapseDecl &synapse = workload.synapses[i];
        if (synapse.src >= workload.neuron_count() || synapse.dst >= workload.neuron_count())
        {
            throw ValidationError("synapse endpoint out of range");
        }
        if (synapse.src == synapse.dst)
        {
            throw ValidationError("self-loop on neuron " + std::to_string(synapse.src));
        }
        if (i > 0)
        {
            const SynapseDecl &prev = workload.synapses[i - 1];
            if (synapse.src < prev.src ||
                (synapse.src == prev.src && synapse.dst <= prev.dst))
            {
                throw ValidationError("synapses are not sorted and unique");
            }
        }
    }
    check_trace(workload.trace, workload.neuron_count());
}

SnnWorkload load_model(const std::string &model_path)
{
    return parse_model(read_file(model_path), model_path);
}

SnnWorkload parse_model(const std::string &content, const std::string &name)
{
    std::vector<NeuronDecl> neurons;
    std::vector<SynapseDecl> synapses;
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
        const auto fields = split_fields(raw);
        if (fields.empty())
        {
            continue;
        }
        const std::string where = name + ":" + std::to_string(number);
        if (fields[0] == "neuron" && fields.size() == 3)
        {
            NeuronDecl decl;
            decl.id = static_cast<NeuronId>(parse_u64(fields[1], where));
            decl.kind = neuron_kind_from_string(fields[2]);
            neurons.push_back(decl);
        }
        else if (fields[0] == "synapse" && fields.size() == 4)
        {
            SynapseDecl decl;
            decl.src = static_cast<NeuronId>(parse_u64(fields[1], where));
            decl.dst = static_cast<NeuronId>(parse_u64(fields[2], where));
            decl.weight = parse_double(fields[3], where);
            synapses.push_back(decl);
        }
        else
        {
            throw ParseError(where + ": expected 'neuron <id> <kind>' or "
                                     "'synapse <src> <dst> <weight>'");
        }
    }
    return make_workload(std::move(neurons), std::move(synapses), SpikeTrace{});
}

SpikeTrace load_trace(const std::string &trace_path)
{
    return parse_trace(read_file(trace_path), trace_path);
}

SpikeTrace parse_trace(const std::string &content, const std::string &name)
{
    std::istringstream stream(content);
    std::string raw;
    if (!std::getline(stream, raw))
    {
        throw ParseError(name + ": empty trace file (expected header)");
    }
    if (const auto end = raw.find_last_not_of(" \t\r"); end != std::string::npos)
    {
        raw.erase(end + 1);
    }
    if (raw != "frame,neuron,tick")
    {
        throw ParseError(name + ": expected header 'frame,neuron,tick'");
    }

    SpikeTrace trace;
    int number = 1;
    std::int64_t last_frame = -1;
    Tick last_tick = 0;
    while (std::getline(stream, raw))
    {
        ++number;
        if (const auto end = raw.find_last_not_of(" \t\r"); end != std::string::npos)
        {
            raw.erase(end + 1);
        }
        else
        {
            continue;
        }
        const std::string where = name + ":" + std::to_string(number);
        const auto c1 = raw.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : raw.find(',', c1 + 1);
        if (c2 == std::string::npos)
        {
            throw ParseError(where + ": expected 'frame,neuron,tick'");
        }
        const std::int64_t frame = parse_i64(raw.substr(0, c1), where);
        const NeuronId neuron =
            static_cast<NeuronId>(parse_u64(raw.substr(c1 + 1, c2 - c1 - 1), where));
        const Tick tick = parse_i64(raw.substr(c2 + 1), where);
        if (frame < 0)
        {
            throw ParseError(where + ": negative frame index");
        }
        if (frame < last_frame || (frame == last_frame && tick < last_tick))
        {
            throw ParseError(where + ": trace rows are not sorted by (frame, tick)");
        }
        last_frame = frame;
        last_tick = tick;
        if (static_cast<std::size_t>(frame) >= trace.frames.size())
        {
            trace.frames.resize(static_cast<std::size_t>(frame) + 1);
        }
        trace.frames[static_cast<std::size_t>(frame)].push_back({neuron, tick});
    }
    return trace;
}

SnnWorkload load_workload(const std::string &model_path, const std::string &trace_path)
{
    SnnWorkload workload = load_model(model_path);
    workload.trace = load_trace(trace_path);
    for (auto &frame : workload.trace.frames)
    {
        std::sort(frame.begin(), frame.end(), [](const SpikeEvent &a, const SpikeEvent &b) {
            return a.tick != b.tick ? a.tick < b.tick : a.neuron < b.neuron;
        });
    }
    validate_workload(workload);
    return workload;
}

std::string serialize_model(const SnnWorkload &workload)
{
    std::string out;
    for (const NeuronDecl &neuron : workload.neurons)
    {
        out += "neuron " + std::to_string(neuron.id) + " " + to_string(neuron.kind) + "\n";
    }
    for (const SynapseDecl &synapse : workload.synapses)
    {
        out += "synapse " + std::to_string(synapse.src) + " " + std::to_string(synapse.dst) +
               " " + format_double(synapse.weight) + "\n";
    }
    return out;
}

std::string serialize_trace(const SpikeTrace &trace)
{
    std::string out = "frame,neuron,tick\n";
    for (std::size_t f = 0; f < trace.frames.size(); ++f)
    {
        for (const SpikeEvent &event : trace.frames[f])
        {
            out += std::to_string(f) + "," + std::to_string(event.neuron) + "," +
                   std::to_string(event.tick) + "\n";
        }
    }
    return out;
}

void save_model(const SnnWorkload &workload, const std::string &path)
{
    write_file(path, serialize_model(workload));
}

void save_trace(const SpikeTrace &trace, const std::string &path)
{
    write_file(path, serialize_trace(trace));
}

double spikes_per_frame(const SnnWorkload &workload, NeuronId neuron)
{
    if (neuron >= workload.neuron_count())
    {
        throw ValidationError("unknown neuron " + std::to_string(neuron));
    }
    if (workload.trace.empty())
    {
        return 0.0;
    }
    std::size_t count = 0;
    for (const auto &frame : workload.trace.frames)
    {
        for (const SpikeEvent &event : frame)
        {
            if (event.neuron == neuron)
            {
                ++count;
            }
        }
    }
    return static_cast<double>(count) / static_cast<double>(workload.trace.frame_count());
}

std::vector<std::uint32_t> in_degrees(const SnnWorkload &workload)
{
    std::vector<std::uint32_t> degrees(workload.neuron_count(), 0);
    for (const SynapseDecl &synapse : workload.synapses)
    {
        ++degrees[synapse.dst];
    }
    return degrees;
}

std::vector<double> spikes_per_frame_table(const SnnWorkload &workload)
{
    std::vector<double> table(workload.neuron_count(), 0.0);
    if (workload.trace.empty())
    {
        return table;
    }
    for (const auto &frame : workload.trace.frames)
    {
        for (const SpikeEvent &event : frame)
        {
            table[event.neuron] += 1.0;
        }
    }
    const double frames = static_cast<double>(workload.trace.frame_count());
    for (double &value : table)
    {
        value /= frames;
    }
    return table;
}

}
