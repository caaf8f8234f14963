// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/placement.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "spiketile/errors.hpp"
#include "spiketile/rng.hpp"
#include "spiketile/textio.hpp"

namespace spiketile
{

const char *to_string(PlacementAlgo algo)
{
    switch (algo)
    {
    case PlacementAlgo::Arbitrary: return "arbitrary";
    case PlacementAlgo::Pso: return "pso";
    }
    return "?";
}

PlacementAlgo placement_algo_from_string(const std::string &text)
{
    if (text == "arbitrary")
        return PlacementAlgo::Arbitrary;
    if (text == "pso")
        return PlacementAlgo::Pso;
    throw ValidationError("unknown placement algorithm '" + text + "'");
}

double placement_cost(const ClusteredGraph &graph, const TopologyGraph &topo,
                      const Placement &placement)
{
    double cost = 0.0;
    for (const GlobalSynapse &gs : graph.global_synapses)
    {
        const TileIndex src = placement.tile_of[gs.src_cluster];
        const TileIndex dst = placement.tile_of[gs.dst_cluster];
        cost += gs.spikes * static_cast<double>(topo.segments(src, dst));
    }
    return cost;
}

namespace
{

void require_capacity(const ClusteredGraph &graph, const TopologyGraph &topo)
{
    if (graph.clusters.size() > static_cast<std::size_t>(topo.tile_count()))
        throw InfeasibleError("placement needs " + std::to_string(graph.clusters.size()) +
                              " tiles but the interconnect has " +
                              std::to_string(topo.tile_count()));
}

// First cluster_count tiles of the key-ranked order receive the clusters.
Placement decode_keys(const std::vector<double> &keys, std::size_t cluster_count)
{
    std::vector<int> order(keys.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&keys](int a, int b) {
        const double ka = keys[static_cast<std::size_t>(a)];
        const double kb = keys[static_cast<std::size_t>(b)];
        if (ka != kb)
            return ka < kb;
        return a < b;
    });
    Placement placement;
    placement.tile_of.resize(cluster_count);
    for (std::size_t c = 0; c < cluster_count; ++c)
        placement.tile_of[c] = static_cast<TileIndex>(order[c]);
    return placement;
}

}

Placement place_arbitrary(const ClusteredGraph &graph, const TopologyGraph &topo,
                          std::uint64_t seed)
{
    require_capacity(graph, topo);
    std::vector<TileIndex> tiles(static_cast<std::size_t>(topo.tile_count()));
    std::iota(tiles.begin(), tiles.end(), 0);
    Rng rng = derive_rng(seed, "place-arbitrary");
    rng.shuffle(tiles);
    Placement placement;
    placement.tile_of.assign(tiles.begin(), tiles.begin() + static_cast<std::ptrdiff_t>(graph.clusters.size()));
    return placement;
}

Placement place_pso(const ClusteredGraph &graph, const TopologyGraph &topo,
                    std::uint64_t seed, const PsoParams &params)
{
    require_capacity(graph, topo);
    const std::size_t clusters = graph.clusters.size();
    if (clusters == 0)
        return Placement{};
    const std::size_t dims = static_cast<std::size_t>(topo.tile_count());

    const Placement warm = place_arbitrary(graph, topo, seed);
    Rng rng = derive_rng(seed, "place-pso");

    std::vector<std::vector<double>> pos(params.swarm, std::vector<double>(dims));
    std::vector<std::vector<double>> vel(params.swarm, std::vector<double>(dims));
    for (std::size_t p = 0; p < params.swarm; ++p)
        for (std::size_t d = 0; d < dims; ++d)
        {
            pos[p][d] = rng.unit();
            vel[p][d] = rng.range(-0.5, 0.5);
        }

    // Seed particle 0 with keys that decode back to the arbitrary placement:
    // the warm tiles take the lowest ranks in cluster order.
    {
        std::vector<double> &keys = pos[0];
        std::vector<bool> used(dims, false);
        for (std::size_t c = 0; c < clusters; ++c)
        {
            keys[warm.tile_of[c]] = static_cast<double>(c) / static_cast<double>(dims);
            used[warm.tile_of[c]] = true;
        }
        std::size_t rank = clusters;
        for (std::size_t d = 0; d < dims; ++d)
            if (!used[d])
                keys[d] = static_cast<double>(rank++) / static_cast<double>(dims);
    }

    std::vector<std::vector<double>> pbest_pos = pos;
    std::vector<double> pbest_cost(params.swarm, std::numeric_limits<double>::infinity());
    std::vector<double> gbest_pos;
    double gbest_cost = std::numeric_limits<double>::infinity();
    Placement best;

    auto evaluate = [&](std::size_t p) {
        const Placement candidate = decode_keys(pos[p], clusters);
        const double cost = placement_cost(graph, topo, candidate);
        if (cost < pbest_cost[p])
        {
            pbest_cost[p] = cost;
            pbest_pos[p] = pos[p];
        }
        if (cost < gbest_cost)
        {
            gbest_cost = cost;
            gbest_pos = pos[p];
            best = candidate;
        }
    };

    for (std::size_t p = 0; p < params.swarm; ++p)
        evaluate(p);

    for (std::size_t iter = 0; iter < params.iterations; ++iter)
        for (std::size_t p = 0; p < params.swarm; ++p)
        {
            for (std::size_t d = 0; d < dims; ++d)
            {
                const double r1 = rng.unit();
                const double r2 = rng.unit();
                double v = params.inertia * vel[p][d] +
                           params.c1 * r1 * (pbest_pos[p][d] - pos[p][d]) +
                           params.c2 * r2 * (gbest_pos[d] - pos[p][d]);
                v = std::clamp(v, -params.velocity_clamp, params.velocity_clamp);
                vel[p][d] = v;
                pos[p][d] = std::clamp(pos[p][d] + v, 0.0, 1.0);
            }
            evaluate(p);
        }

    return best;
}

Placement place(const ClusteredGraph &graph, const TopologyGraph &topo,
                const PlacementConfig &config)
{
    switch (config.algo)
    {
    case PlacementAlgo::Arbitrary: return place_arbitrary(graph, topo, config.seed);
    case PlacementAlgo::Pso: return place_pso(graph, topo, config.seed, config.pso);
    }
    throw ValidationError("unknown placement algorithm");
}

void validate_placement(const Placement &placement, const ClusteredGraph &graph,
                        const TopologyGraph &topo)
{
    if (placement.tile_of.size() != graph.clusters.size())
        throw ValidationError("placement covers " + std::to_string(placement.tile_of.size()) +
                              " clusters, graph has " + std::to_string(graph.clusters.size()));
    std::set<TileIndex> seen;
    for (std::size_t c = 0; c < placement.tile_of.size(); ++c)
    {
        const TileIndex tile = placement.tile_of[c];
        if (tile >= static_cast<TileIndex>(topo.tile_count()))
            throw ValidationError("cluster " + std::to_string(c) + " placed on tile " +
                                  std::to_string(tile) + " outside the interconnect");
        if (!seen.insert(tile).second)
            throw ValidationError("tile " + std::to_string(tile) + " holds more than one cluster");
    }
}

std::string serialize_placement(const Placement &placement, const TopologyGraph &topo)
{
    std::string out;
    for (std::size_t c = 0; c < placement.tile_of.size(); ++c)
    {
        const TileIndex tile = placement.tile_of[c];
        out += "cluster " + std::to_string(c) + " -> ";
        if (topo.is_mesh())
        {
            const Coord coord = topo.coord_of(topo.tile_node(tile));
            out += "(" + std::to_string(coord.x) + "," + std::to_string(coord.y) + ")";
        }
        else
        {
            out += std::to_string(tile);
        }
        out += "\n";
    }
    return out;
}

Placement parse_placement(const std::string &content, const std::string &name,
                          const TopologyGraph &topo)
{
    Placement placement;
    for (const TextLine &line : split_content_lines(content))
    {
        const std::string where = name + ":" + std::to_string(line.number);
        const std::vector<std::string> fields = split_fields(line.text);
        if (fields.size() != 4 || fields[0] != "cluster" || fields[2] != "->")
            throw ParseError(where + ": expected 'cluster <id> -> <tile>'");
        const std::uint64_t id = parse_u64(fields[1], where);
        if (id != placement.tile_of.size())
            throw ParseError(where + ": cluster ids must appear densely in order");
        const std::string &target = fields[3];
        TileIndex tile = 0;
        if (!target.empty() && target.front() == '(')
        {
            if (target.back() != ')')
                throw ParseError(where + ": unterminated coordinate");
            const std::string inner = target.substr(1, target.size() - 2);
            const std::size_t comma = inner.find(',');
            if (comma == std::string::npos)
                throw ParseError(where + ": coordinate needs 'x,y'");
            const int x = static_cast<int>(parse_i64(inner.substr(0, comma), where));
            const int y = static_cast<int>(parse_i64(inner.substr(comma + 1), where));
            try
            {
                tile = static_cast<TileIndex>(topo.node_tile(topo.node_at(Coord{x, y})));
            }
            catch (const ValidationError &err)
            {
                throw ParseError(where + ": " + err.what());
            }
        }
        else
        {
            tile = static_cast<TileIndex>(parse_u64(target, where));
            if (tile >= static_cast<TileIndex>(topo.tile_count()))
                throw ParseError(where + ": tile index out of range");
        }
        placement.tile_of.push_back(tile);
    }
    return placement;
}

void save_placement(const std::string &path, const Placement &placement,
                    const TopologyGraph &topo)
{
    write_file(path, serialize_placement(placement, topo));
}

Placement load_placement(const std::string &path, const TopologyGraph &topo)
{
    return parse_placement(read_file(path), path, topo);
}

}
