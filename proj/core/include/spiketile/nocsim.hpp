// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// nocsim.hpp - cycle-accurate interconnect simulator
//
// Flits move one link per cycle. A flit injected at tick t may take its
// first link during cycle t; reaching the destination node during cycle c
// stamps arrival_tick c+1, so an uncongested flit's latency equals its
// segment count. Each node owns one FIFO per incoming link (default depth
// 4) plus an unbounded source queue; grants use the occupancy snapshot from
// the start of the cycle, so a slot freed this cycle is usable next cycle.
// Output ports arbitrate round robin over their candidate input ports, the
// source queue arbitrating as the last port. Ejection is unlimited: a flit
// landing on its destination node leaves the network immediately.
#ifndef SPIKETILE_NOCSIM_HPP
#define SPIKETILE_NOCSIM_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "spiketile/topology.hpp"
#include "spiketile/types.hpp"

namespace spiketile
{

enum class RoutingStrategy : std::uint8_t
{
    Xy,
    WestFirst,
    NorthLast,
    NegativeFirst,
    OddEven,
    Dyad,
    TableBased,
};

const char *to_string(RoutingStrategy strategy);
RoutingStrategy routing_strategy_from_string(const std::string &text);

// Deterministic routing table for meshes: next[node][dst_tile] holds the
// Direction to take, -1 where unset. Loaded tables must be complete and
// loop free.
struct RoutingTable
{
    std::vector<std::vector<std::int8_t>> next;
};

RoutingTable parse_routing_table(const std::string &content, const std::string &name,
                                 const TopologyGraph &topo);
RoutingTable load_routing_table(const std::string &path, const TopologyGraph &topo);
void validate_routing_table(const RoutingTable &table, const TopologyGraph &topo);
// The classic dimension-order table, handy as a table-based baseline.
RoutingTable make_xy_table(const TopologyGraph &topo);
std::string serialize_routing_table(const RoutingTable &table, const TopologyGraph &topo);

// Minimal directions a strategy permits at cur toward dst; src is the
// flit's injection coordinate (column parity rules depend on it).
std::vector<Direction> permitted_directions(RoutingStrategy strategy, Coord cur, Coord dst,
                                            Coord src);

struct FlitSpec
{
    Tick inject_tick{0};
    TileIndex src{0};
    TileIndex dst{0};
    // Connection the flit belongs to (AER source stream); groups delivered
    // flits for interval and ordering statistics. Raw traffic leaves it 0.
    std::uint32_t stream{0};
};

struct FlitRecord
{
    FlitSpec spec;
    Tick arrival_tick{-1};
    // Ports taken, in order; Direction values on meshes.
    std::vector<std::uint8_t> route;
    // Strategy actually applied (resolved at injection for hybrid modes).
    RoutingStrategy used{RoutingStrategy::Xy};

    bool delivered() const { return arrival_tick >= 0; }
    std::int64_t latency() const { return arrival_tick - spec.inject_tick; }
};

struct NocConfig
{
    RoutingStrategy strategy{RoutingStrategy::Xy};
    std::size_t fifo_depth{4};
    // Hybrid split point: shorter paths ride dimension order, longer ones
    // the adaptive column-parity strategy.
    int dyad_threshold{3};
    std::optional<RoutingTable> table;
};

class NocSimulator
{
public:
    NocSimulator(const TopologyGraph &topo, NocConfig config);

    void inject(const FlitSpec &spec);
    void inject(const std::vector<FlitSpec> &specs);

    // Advance one cycle. Returns true while flits remain in flight or wait
    // for a later injection tick.
    bool step();
    // Run until drained or max_cycles elapse; returns undelivered count.
    std::size_t run(std::int64_t max_cycles);

    Tick cycle() const { return cycle_; }
    std::size_t injected_count() const { return flits_.size(); }
    std::size_t delivered_count() const { return delivery_order_.size(); }
    std::size_t in_flight_count() const;

    const std::vector<FlitRecord> &flits() const { return flits_; }
    const std::vector<std::size_t> &delivery_order() const { return delivery_order_; }
    const TopologyGraph &topo() const { return topo_; }

    // Flits created == delivered + queued + in fifos, checked every cycle.
    bool conservation_ok() const { return conservation_ok_; }

private:
    struct NodeState
    {
        std::vector<std::deque<std::size_t>> in_fifos;
        std::deque<std::size_t> source_queue;
        // Round-robin pointer per output edge, over input ports plus the
        // source queue as the final port.
        std::vector<std::size_t> rr;
    };

    struct FlitState
    {
        int cur_node{0};
        int dst_node{0};
        Coord src_coord{};
        int last_dir{-1};
    };

    int desired_edge(std::size_t flit_id) const;
    void start_cycle_injections();
    void check_conservation();

    const TopologyGraph &topo_;
    NocConfig config_;
    std::vector<NodeState> nodes_;
    // in_port_[node][edge index at source] lookup: for edge u->v with index
    // j in edges_from(u), in_port_of_[u][j] is the input port at v.
    std::vector<std::vector<std::size_t>> in_port_of_;
    std::vector<FlitRecord> flits_;
    std::vector<FlitState> states_;
    std::vector<std::size_t> delivery_order_;
    // Pending injections sorted by tick; next_inject_ is the cursor.
    std::vector<std::size_t> inject_schedule_;
    std::size_t next_inject_{0};
    Tick cycle_{0};
    bool started_{false};
    std::size_t queued_or_buffered_{0};
    bool conservation_ok_{true};
};

// Delivered flits in delivery order: "inject_tick,src,dst,arrival_tick".
std::string serialize_flit_log(const NocSimulator &sim);
void save_flit_log(const std::string &path, const NocSimulator &sim);

// Turn-rule violations in a recorded route, replayed position by position.
// Counts both non-minimal moves and forbidden turns for the strategy used.
std::size_t audit_route(const TopologyGraph &topo, const FlitRecord &record);

enum class TrafficKind : std::uint8_t
{
    Random,
    Transpose,
    BitReversal,
    Butterfly,
    Shuffle,
    TableBased,
};

const char *to_string(TrafficKind kind);
TrafficKind traffic_kind_from_string(const std::string &text);

struct TrafficModel
{
    TrafficKind kind{TrafficKind::Random};
    // Random only: per-node per-tick injection probability.
    double rate{0.1};
    // TableBased only: csv with header "tick,src,dst".
    std::string table_path;
};

// Fixed-permutation target for an address of `bits` bits.
TileIndex permutation_target(TrafficKind kind, TileIndex node, int bits);

std::vector<FlitSpec> gen_traffic(const TrafficModel &model, const TopologyGraph &topo,
                                  Tick ticks, std::uint64_t seed);

std::vector<FlitSpec> parse_traffic_table(const std::string &content, const std::string &name,
                                          const TopologyGraph &topo);
std::string serialize_traffic_table(const std::vector<FlitSpec> &specs);

}

#endif
