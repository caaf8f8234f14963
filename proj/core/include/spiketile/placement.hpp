// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// placement.hpp - assigning clusters to interconnect tiles
//
// A placement maps every cluster to a distinct tile. Its cost is the total
// spike traffic weighted by the segment distance each spike travels:
//   cost = sum over global synapses of spikes * segments(tile_src, tile_dst).
#ifndef SPIKETILE_PLACEMENT_HPP
#define SPIKETILE_PLACEMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "spiketile/cluster.hpp"
#include "spiketile/partition.hpp"
#include "spiketile/topology.hpp"
#include "spiketile/types.hpp"

namespace spiketile
{

enum class PlacementAlgo : std::uint8_t
{
    Arbitrary,
    Pso,
};

const char *to_string(PlacementAlgo algo);
PlacementAlgo placement_algo_from_string(const std::string &text);

struct Placement
{
    // tile_of[c] is the tile holding cluster c. Entries are distinct.
    std::vector<TileIndex> tile_of;

    TileIndex tile_of_cluster(ClusterId cluster) const { return tile_of[cluster]; }
    std::size_t cluster_count() const { return tile_of.size(); }
};

struct PlacementConfig
{
    PlacementAlgo algo{PlacementAlgo::Pso};
    std::uint64_t seed{0};
    PsoParams pso{};
};

double placement_cost(const ClusteredGraph &graph, const TopologyGraph &topo,
                      const Placement &placement);

// Clusters dropped onto a seeded shuffle of the tiles. Throws InfeasibleError
// when there are more clusters than tiles.
Placement place_arbitrary(const ClusteredGraph &graph, const TopologyGraph &topo,
                          std::uint64_t seed);

// Particle-swarm search over tile orderings. Each particle carries one key
// per tile; ranking the keys yields the tile visiting order and the first
// cluster_count tiles receive the clusters in id order. The swarm starts from
// the arbitrary placement for the same seed, so the result never costs more.
Placement place_pso(const ClusteredGraph &graph, const TopologyGraph &topo,
                    std::uint64_t seed, const PsoParams &params = {});

Placement place(const ClusteredGraph &graph, const TopologyGraph &topo,
                const PlacementConfig &config);

void validate_placement(const Placement &placement, const ClusteredGraph &graph,
                        const TopologyGraph &topo);

// Text form, one line per cluster. Meshes write coordinates,
//   cluster 3 -> (1,2)
// linear and staged interconnects write the tile index,
//   cluster 3 -> 5
std::string serialize_placement(const Placement &placement, const TopologyGraph &topo);
Placement parse_placement(const std::string &content, const std::string &name,
                          const TopologyGraph &topo);
void save_placement(const std::string &path, const Placement &placement,
                    const TopologyGraph &topo);
Placement load_placement(const std::string &path, const TopologyGraph &topo);

}

#endif
