// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/cluster.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "spiketile/errors.hpp"
#include "spiketile/textio.hpp"

namespace spiketile
{

bool fits_crossbar(const SnnWorkload &workload, const std::vector<NeuronId> &members,
                   CrossbarCapacity cap)
{
    std::set<NeuronId> member_set(members.begin(), members.end());
    std::set<NeuronId> sources;
    std::map<NeuronId, std::uint32_t> fanin;
    for (const SynapseDecl &synapse : workload.synapses)
    {
        if (member_set.count(synapse.dst) == 0)
        {
            continue;
        }
        sources.insert(synapse.src);
        ++fanin[synapse.dst];
    }
    if (sources.size() > cap.n || fanin.size() > cap.n)
    {
        return false;
    }
    for (const auto &[neuron, degree] : fanin)
    {
        if (degree > cap.n)
        {
            return false;
        }
    }
    return true;
}

bool fits_crossbar(const Cluster &cluster, const ClusteredGraph &graph, CrossbarCapacity cap)
{
    std::set<NeuronId> sources;
    std::map<NeuronId, std::uint32_t> fanin;
    for (const SynapseDecl &synapse : cluster.internal)
    {
        sources.insert(synapse.src);
        ++fanin[synapse.dst];
    }
    for (const GlobalSynapse &synapse : graph.global_synapses)
    {
        if (synapse.dst_cluster != cluster.id)
        {
            continue;
        }
        sources.insert(synapse.src_neuron);
        ++fanin[synapse.dst_neuron];
    }
    if (sources.size() > cap.n || fanin.size() > cap.n)
    {
        return false;
    }
    for (const auto &[neuron, degree] : fanin)
    {
        if (degree > cap.n)
        {
            return false;
        }
    }
    return true;
}

ClusteredGraph build_clustered_graph(const SnnWorkload &workload,
                                     const std::vector<ClusterId> &assignment,
                                     CrossbarCapacity cap)
{
    if (assignment.size() != workload.neuron_count())
    {
        throw ValidationError("assignment covers " + std::to_string(assignment.size()) +
                              " neurons, workload has " +
                              std::to_string(workload.neuron_count()));
    }

    // Renumber labels by ascending smallest member so equal partitions always
    // serialize identically.
    std::map<ClusterId, ClusterId> relabel;
    for (NeuronId neuron = 0; neuron < assignment.size(); ++neuron)
    {
        relabel.emplace(assignment[neuron], 0);
    }
    {
        std::map<ClusterId, NeuronId> first_member;
        for (NeuronId neuron = 0; neuron < assignment.size(); ++neuron)
        {
            first_member.emplace(assignment[neuron], neuron);
        }
        std::vector<std::pair<NeuronId, ClusterId>> order;
        for (const auto &[label, neuron] : first_member)
        {
            order.emplace_back(neuron, label);
        }
        std::sort(order.begin(), order.end());
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            relabel[order[i].second] = static_cast<ClusterId>(i);
        }
    }

    ClusteredGraph graph;
    graph.capacity = cap;
    graph.clusters.resize(relabel.size());
    for (std::size_t i = 0; i < graph.clusters.size(); ++i)
    {
        graph.clusters[i].id = static_cast<ClusterId>(i);
    }
    std::vector<ClusterId> where(workload.neuron_count());
    for (NeuronId neuron = 0; neuron < assignment.size(); ++neuron)
    {
        where[neuron] = relabel.at(assignment[neuron]);
        graph.clusters[where[neuron]].members.push_back(neuron);
    }

    const std::vector<double> spikes = spikes_per_frame_table(workload);
    for (const SynapseDecl &synapse : workload.synapses)
    {
        const ClusterId src_cluster = where[synapse.src];
        const ClusterId dst_cluster = where[synapse.dst];
        if (src_cluster == dst_cluster)
        {
            graph.clusters[src_cluster].internal.push_back(synapse);
        }
        else
        {
            GlobalSynapse global;
            global.src_cluster = src_cluster;
            global.dst_cluster = dst_cluster;
            global.src_neuron = synapse.src;
            global.dst_neuron = synapse.dst;
            global.weight = synapse.weight;
            global.spikes = spikes[synapse.src];
            graph.global_synapses.push_back(global);
        }
    }

    for (const Cluster &cluster : graph.clusters)
    {
        if (!fits_crossbar(workload, cluster.members, cap))
        {
            throw InfeasibleError("cluster " + std::to_string(cluster.id) +
                                  " exceeds crossbar capacity n=" + std::to_string(cap.n));
        }
    }
    return graph;
}

void validate_clustered_graph(const SnnWorkload &workload, const ClusteredGraph &graph)
{
    std::vector<char> seen(workload.neuron_count(), 0);
    for (std::size_t i = 0; i < graph.clusters.size(); ++i)
    {
        const Cluster &cluster = graph.clusters[i];
        if (cluster.id != i)
        {
            throw ValidationError("cluster ids are not dense");
        }
        if (cluster.members.empty())
        {
            throw ValidationError("cluster " + std::to_string(i) + " is empty");
        }
        for (const NeuronId member : cluster.members)
        {
            if (member >= workload.neuron_count())
            {
                throw ValidationError("cluster member out of range");
            }
            if (seen[member])
            {
                throw ValidationError("neuron " + std::to_string(member) +
                                      " appears in two clusters");
            }
            seen[member] = 1;
        }
        if (!fits_crossbar(workload, cluster.members, graph.capacity))
        {
            throw InfeasibleError("cluster " + std::to_string(i) +
                                  " exceeds crossbar capacity");
        }
    }
    for (NeuronId neuron = 0; neuron < workload.neuron_count(); ++neuron)
    {
        if (!seen[neuron])
        {
            throw ValidationError("neuron " + std::to_string(neuron) +
                                  " is not assigned to any cluster");
        }
    }
}

std::string serialize_clusters(const ClusteredGraph &graph)
{
    std::string out = "capacity_n = " + std::to_string(graph.capacity.n) + "\n";
    for (const Cluster &cluster : graph.clusters)
    {
        out += "cluster " + std::to_string(cluster.id) + ":";
        for (const NeuronId member : cluster.members)
        {
            out += " " + std::to_string(member);
        }
        out += "\n";
    }
    for (const GlobalSynapse &synapse : graph.global_synapses)
    {
        out += "global " + std::to_string(synapse.src_cluster) + " " +
               std::to_string(synapse.dst_cluster) + " " +
               std::to_string(synapse.src_neuron) + " " +
               std::to_string(synapse.dst_neuron) + " " + format_double(synapse.weight) +
               " " + format_double(synapse.spikes) + "\n";
    }
    return out;
}

void save_clusters(const ClusteredGraph &graph, const std::string &path)
{
    write_file(path, serialize_clusters(graph));
}

ClusteredGraph parse_clusters(const std::string &content, const std::string &name,
                              const SnnWorkload &workload)
{
    ClusteredGraph graph;
    std::istringstream stream(content);
    std::string raw;
    int number = 0;
    bool have_capacity = false;
    while (std::getline(stream, raw))
    {
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
        {
            raw.erase(hash);
        }
        auto fields = split_fields(raw);
        if (fields.empty())
        {
            continue;
        }
        const std::string where = name + ":" + std::to_string(number);
        if (fields[0] == "capacity_n" && fields.size() == 3 && fields[1] == "=")
        {
            graph.capacity.n = static_cast<std::uint32_t>(parse_u64(fields[2], where));
            have_capacity = true;
        }
        else if (fields[0] == "cluster" && fields.size() >= 2)
        {
            std::string label = fields[1];
            if (label.empty() || label.back() != ':')
            {
                throw ParseError(where + ": expected 'cluster <id>:'");
            }
            label.pop_back();
            Cluster cluster;
            cluster.id = static_cast<ClusterId>(parse_u64(label, where));
            if (cluster.id != graph.clusters.size())
            {
                throw ParseError(where + ": cluster ids must be dense and in order");
            }
            for (std::size_t i = 2; i < fields.size(); ++i)
            {
                cluster.members.push_back(
                    static_cast<NeuronId>(parse_u64(fields[i], where)));
            }
            std::sort(cluster.members.begin(), cluster.members.end());
            graph.clusters.push_back(std::move(cluster));
        }
        else if (fields[0] == "global" && fields.size() == 7)
        {
            GlobalSynapse synapse;
            synapse.src_cluster = static_cast<ClusterId>(parse_u64(fields[1], where));
            synapse.dst_cluster = static_cast<ClusterId>(parse_u64(fields[2], where));
            synapse.src_neuron = static_cast<NeuronId>(parse_u64(fields[3], where));
            synapse.dst_neuron = static_cast<NeuronId>(parse_u64(fields[4], where));
            synapse.weight = parse_double(fields[5], where);
            synapse.spikes = parse_double(fields[6], where);
            graph.global_synapses.push_back(synapse);
        }
        else
        {
            throw ParseError(where + ": unrecognized cluster file line");
        }
    }
    if (!have_capacity)
    {
        throw ParseError(name + ": missing 'capacity_n = <n>' line");
    }

    // Rebuild internal synapse lists from the workload so the file stays a
    // thin membership record.
    std::vector<ClusterId> where_is(workload.neuron_count(), 0);
    std::vector<char> seen(workload.neuron_count(), 0);
    for (const Cluster &cluster : graph.clusters)
    {
        for (const NeuronId member : cluster.members)
        {
            if (member >= workload.neuron_count())
            {
                throw ValidationError(name + ": member neuron " + std::to_string(member) +
                                      " not in workload");
            }
            where_is[member] = cluster.id;
            seen[member] = 1;
        }
    }
    for (NeuronId neuron = 0; neuron < workload.neuron_count(); ++neuron)
    {
        if (!seen[neuron])
        {
            throw ValidationError(name + ": neuron " + std::to_string(neuron) +
                                  " missing from cluster file");
        }
    }
    for (const SynapseDecl &synapse : workload.synapses)
    {
        if (where_is[synapse.src] == where_is[synapse.dst])
        {
            graph.clusters[where_is[synapse.src]].internal.push_back(synapse);
        }
    }
    validate_clustered_graph(workload, graph);
    return graph;
}

ClusteredGraph load_clusters(const std::string &path, const SnnWorkload &workload)
{
    return parse_clusters(read_file(path), path, workload);
}

double cost_global_spikes(const ClusteredGraph &graph)
{
    double cost = 0.0;
    for (const GlobalSynapse &synapse : graph.global_synapses)
    {
        cost += synapse.spikes;
    }
    return cost;
}

double local_spikes_per_frame(const SnnWorkload &workload, const ClusteredGraph &graph)
{
    const std::vector<double> spikes = spikes_per_frame_table(workload);
    double total = 0.0;
    for (const Cluster &cluster : graph.clusters)
    {
        for (const SynapseDecl &synapse : cluster.internal)
        {
            total += spikes[synapse.src];
        }
    }
    return total;
}

}
