// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// topology.hpp - interconnect link graphs
//
// All interconnects run on the same flit engine over a directed link graph.
// A mesh has one node per tile; a segmented bus is a line of tiles joined by
// time-multiplexed segments; a two-stage network adds switch nodes that
// carry no tiles of their own. Distances are counted in segments (links on
// the shortest path); hops are the switch traversals, one fewer than the
// segments.
#ifndef SPIKETILE_TOPOLOGY_HPP
#define SPIKETILE_TOPOLOGY_HPP

#include <cstdint>
#include <vector>

#include "spiketile/hardware.hpp"
#include "spiketile/types.hpp"

namespace spiketile
{

enum class Direction : std::uint8_t
{
    East = 0,
    West = 1,
    North = 2,
    South = 3,
};

const char *to_string(Direction dir);

struct TopoEdge
{
    int to{0};
    // For meshes this is the Direction; other topologies number their ports
    // in neighbor order.
    int port{0};
};

class TopologyGraph
{
public:
    explicit TopologyGraph(const Topology &topology);

    const Topology &topology() const { return topology_; }
    bool is_mesh() const { return mesh_width_ > 0; }
    int node_count() const { return static_cast<int>(out_edges_.size()); }
    int tile_count() const { return static_cast<int>(tile_nodes_.size()); }

    int tile_node(TileIndex tile) const { return tile_nodes_[tile]; }
    // Only tiles have an inverse mapping; switch nodes return -1.
    int node_tile(int node) const { return node_tiles_[node]; }

    Coord coord_of(int node) const;
    int node_at(Coord coord) const;
    int mesh_width() const { return mesh_width_; }
    int mesh_height() const { return mesh_height_; }

    const std::vector<TopoEdge> &edges_from(int node) const { return out_edges_[node]; }

    // Shortest-path link count between two tiles.
    int segments(TileIndex a, TileIndex b) const;
    // Switch traversals on that path: segments - 1, zero for a == b.
    int hops(TileIndex a, TileIndex b) const;

    // Next node on the unique shortest path toward dst_node. Only valid for
    // tree-shaped interconnects (bus, two-stage); meshes route by strategy.
    int tree_next(int node, int dst_node) const;

private:
    Topology topology_;
    int mesh_width_{0};
    int mesh_height_{0};
    std::vector<int> tile_nodes_;
    std::vector<int> node_tiles_;
    std::vector<std::vector<TopoEdge>> out_edges_;
    std::vector<std::vector<int>> distance_;
    std::vector<std::vector<int>> next_hop_;
};

}

#endif
