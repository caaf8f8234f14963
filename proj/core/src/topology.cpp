// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/topology.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "spiketile/errors.hpp"

namespace spiketile
{

const char *to_string(Direction dir)
{
    switch (dir)
    {
    case Direction::East: return "E";
    case Direction::West: return "W";
    case Direction::North: return "N";
    case Direction::South: return "S";
    }
    return "?";
}

namespace
{

void add_edge(std::vector<std::vector<TopoEdge>> &edges, int from, int to, int port)
{
    edges[from].push_back(TopoEdge{to, port});
}

}

TopologyGraph::TopologyGraph(const Topology &topology) : topology_(topology)
{
    if (const auto *mesh = std::get_if<MeshTopology>(&topology_))
    {
        mesh_width_ = mesh->width;
        mesh_height_ = mesh->height;
        const int n = mesh_width_ * mesh_height_;
        out_edges_.assign(static_cast<std::size_t>(n), {});
        tile_nodes_.resize(static_cast<std::size_t>(n));
        node_tiles_.resize(static_cast<std::size_t>(n));
        for (int node = 0; node < n; ++node)
        {
            tile_nodes_[static_cast<std::size_t>(node)] = node;
            node_tiles_[static_cast<std::size_t>(node)] = node;
            const int x = node % mesh_width_;
            const int y = node / mesh_width_;
            if (x + 1 < mesh_width_)
                add_edge(out_edges_, node, node + 1, static_cast<int>(Direction::East));
            if (x > 0)
                add_edge(out_edges_, node, node - 1, static_cast<int>(Direction::West));
            if (y + 1 < mesh_height_)
                add_edge(out_edges_, node, node + mesh_width_, static_cast<int>(Direction::North));
            if (y > 0)
                add_edge(out_edges_, node, node - mesh_width_, static_cast<int>(Direction::South));
        }
    }
    else if (const auto *bus = std::get_if<SegmentedBusTopology>(&topology_))
    {
        const int n = bus->segments;
        out_edges_.assign(static_cast<std::size_t>(n), {});
        tile_nodes_.resize(static_cast<std::size_t>(n));
        node_tiles_.resize(static_cast<std::size_t>(n));
        for (int node = 0; node < n; ++node)
        {
            tile_nodes_[static_cast<std::size_t>(node)] = node;
            node_tiles_[static_cast<std::size_t>(node)] = node;
            if (node + 1 < n)
                add_edge(out_edges_, node, node + 1, 0);
            if (node > 0)
                add_edge(out_edges_, node, node - 1, 1);
        }
    }
    else
    {
        const auto &two = std::get<TwoStageTopology>(topology_);
        const int tiles = two.groups * two.group_size;
        const int switches = two.groups;
        const int root = tiles + switches;
        const int n = tiles + switches + 1;
        out_edges_.assign(static_cast<std::size_t>(n), {});
        tile_nodes_.resize(static_cast<std::size_t>(tiles));
        node_tiles_.assign(static_cast<std::size_t>(n), -1);
        for (int tile = 0; tile < tiles; ++tile)
        {
            tile_nodes_[static_cast<std::size_t>(tile)] = tile;
            node_tiles_[static_cast<std::size_t>(tile)] = tile;
            const int sw = tiles + tile / two.group_size;
            add_edge(out_edges_, tile, sw, 0);
            add_edge(out_edges_, sw, tile, tile % two.group_size);
        }
        for (int g = 0; g < switches; ++g)
        {
            add_edge(out_edges_, tiles + g, root, two.group_size);
            add_edge(out_edges_, root, tiles + g, g);
        }
    }

    // All-pairs BFS; the graphs stay small (a few hundred nodes at most).
    const int n = node_count();
    distance_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    next_hop_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
    for (int dst = 0; dst < n; ++dst)
    {
        auto &dist = distance_[static_cast<std::size_t>(dst)];
        dist[static_cast<std::size_t>(dst)] = 0;
        std::deque<int> queue{dst};
        while (!queue.empty())
        {
            const int cur = queue.front();
            queue.pop_front();
            for (const TopoEdge &edge : out_edges_[static_cast<std::size_t>(cur)])
            {
                if (dist[static_cast<std::size_t>(edge.to)] >= 0)
                    continue;
                dist[static_cast<std::size_t>(edge.to)] = dist[static_cast<std::size_t>(cur)] + 1;
                // BFS runs backwards from dst, so cur is the next step on the
                // shortest path from edge.to toward dst.
                next_hop_[static_cast<std::size_t>(edge.to)][static_cast<std::size_t>(dst)] = cur;
                queue.push_back(edge.to);
            }
        }
    }
}

Coord TopologyGraph::coord_of(int node) const
{
    if (!is_mesh())
        throw std::logic_error("coord_of requires a mesh topology");
    return Coord{node % mesh_width_, node / mesh_width_};
}

int TopologyGraph::node_at(Coord coord) const
{
    if (!is_mesh())
        throw std::logic_error("node_at requires a mesh topology");
    if (coord.x < 0 || coord.x >= mesh_width_ || coord.y < 0 || coord.y >= mesh_height_)
        throw ValidationError("mesh coordinate out of range");
    return coord.y * mesh_width_ + coord.x;
}

int TopologyGraph::segments(TileIndex a, TileIndex b) const
{
    const int na = tile_node(a);
    const int nb = tile_node(b);
    return distance_[static_cast<std::size_t>(na)][static_cast<std::size_t>(nb)];
}

int TopologyGraph::hops(TileIndex a, TileIndex b) const
{
    const int seg = segments(a, b);
    return seg > 0 ? seg - 1 : 0;
}

int TopologyGraph::tree_next(int node, int dst_node) const
{
    const int next = next_hop_[static_cast<std::size_t>(node)][static_cast<std::size_t>(dst_node)];
    if (next < 0 && node != dst_node)
        throw std::logic_error("no path between nodes");
    return next;
}

}
