// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/nocsim.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "spiketile/errors.hpp"
#include "spiketile/rng.hpp"
#include "spiketile/textio.hpp"

namespace spiketile
{

const char *to_string(RoutingStrategy strategy)
{
    switch (strategy)
    {
    case RoutingStrategy::Xy: return "xy";
    case RoutingStrategy::WestFirst: return "westfirst";
    case RoutingStrategy::NorthLast: return "northlast";
    case RoutingStrategy::NegativeFirst: return "negfirst";
    case RoutingStrategy::OddEven: return "oddeven";
    case RoutingStrategy::Dyad: return "dyad";
    case RoutingStrategy::TableBased: return "table";
    }
    return "?";
}

RoutingStrategy routing_strategy_from_string(const std::string &text)
{
    if (text == "xy")
        return RoutingStrategy::Xy;
    if (text == "westfirst")
        return RoutingStrategy::WestFirst;
    if (text == "northlast")
        return RoutingStrategy::NorthLast;
    if (text == "negfirst" || text == "negativefirst")
        return RoutingStrategy::NegativeFirst;
    if (text == "oddeven")
        return RoutingStrategy::OddEven;
    if (text == "dyad")
        return RoutingStrategy::Dyad;
    if (text == "table")
        return RoutingStrategy::TableBased;
    throw ValidationError("unknown routing strategy '" + text + "'");
}

std::vector<Direction> permitted_directions(RoutingStrategy strategy, Coord cur, Coord dst,
                                            Coord src)
{
    const int dx = dst.x - cur.x;
    const int dy = dst.y - cur.y;
    std::vector<Direction> out;
    if (dx == 0 && dy == 0)
        return out;
    const Direction vertical = dy > 0 ? Direction::North : Direction::South;

    switch (strategy)
    {
    case RoutingStrategy::Xy:
        if (dx > 0)
            out.push_back(Direction::East);
        else if (dx < 0)
            out.push_back(Direction::West);
        else
            out.push_back(vertical);
        break;
    case RoutingStrategy::WestFirst:
        // All westbound movement happens before anything else; the rest is
        // fully adaptive.
        if (dx < 0)
        {
            out.push_back(Direction::West);
        }
        else
        {
            if (dx > 0)
                out.push_back(Direction::East);
            if (dy > 0)
                out.push_back(Direction::North);
            if (dy < 0)
                out.push_back(Direction::South);
        }
        break;
    case RoutingStrategy::NorthLast:
        // North only once nothing else remains.
        if (dx > 0)
            out.push_back(Direction::East);
        if (dx < 0)
            out.push_back(Direction::West);
        if (dy < 0)
            out.push_back(Direction::South);
        if (out.empty())
            out.push_back(Direction::North);
        break;
    case RoutingStrategy::NegativeFirst:
        // West and south before east or north.
        if (dx < 0)
            out.push_back(Direction::West);
        if (dy < 0)
            out.push_back(Direction::South);
        if (out.empty())
        {
            if (dx > 0)
                out.push_back(Direction::East);
            if (dy > 0)
                out.push_back(Direction::North);
        }
        break;
    case RoutingStrategy::OddEven:
        // Column-parity rules: turns off an eastbound track are taken in odd
        // columns (or before leaving the source column); turns onto a
        // westbound track are taken in even columns. The lookahead on the
        // east move keeps the flit out of an even destination column it
        // could not turn in.
        if (dx == 0)
        {
            out.push_back(vertical);
        }
        else if (dx > 0)
        {
            if (dy == 0)
            {
                out.push_back(Direction::East);
            }
            else
            {
                if (cur.x % 2 != 0 || cur.x == src.x)
                    out.push_back(vertical);
                if (dst.x % 2 != 0 || dx != 1)
                    out.push_back(Direction::East);
            }
        }
        else
        {
            out.push_back(Direction::West);
            if (cur.x % 2 == 0 && dy != 0)
                out.push_back(vertical);
        }
        break;
    case RoutingStrategy::Dyad:
    case RoutingStrategy::TableBased:
        throw std::logic_error("strategy must be resolved before routing");
    }
    return out;
}

RoutingTable make_xy_table(const TopologyGraph &topo)
{
    if (!topo.is_mesh())
        throw ValidationError("routing tables require a mesh topology");
    const int tiles = topo.tile_count();
    RoutingTable table;
    table.next.assign(static_cast<std::size_t>(tiles),
                      std::vector<std::int8_t>(static_cast<std::size_t>(tiles), -1));
    for (int node = 0; node < tiles; ++node)
        for (int dst = 0; dst < tiles; ++dst)
        {
            if (node == dst)
                continue;
            const std::vector<Direction> dirs = permitted_directions(
                RoutingStrategy::Xy, topo.coord_of(node), topo.coord_of(dst), topo.coord_of(node));
            table.next[static_cast<std::size_t>(node)][static_cast<std::size_t>(dst)] =
                static_cast<std::int8_t>(dirs.front());
        }
    return table;
}

void validate_routing_table(const RoutingTable &table, const TopologyGraph &topo)
{
    if (!topo.is_mesh())
        throw ValidationError("routing tables require a mesh topology");
    const int tiles = topo.tile_count();
    if (table.next.size() != static_cast<std::size_t>(tiles))
        throw ValidationError("routing table covers the wrong node count");
    for (int node = 0; node < tiles; ++node)
    {
        if (table.next[static_cast<std::size_t>(node)].size() != static_cast<std::size_t>(tiles))
            throw ValidationError("routing table row has the wrong width");
        for (int dst = 0; dst < tiles; ++dst)
        {
            const std::int8_t dir = table.next[static_cast<std::size_t>(node)][static_cast<std::size_t>(dst)];
            if (node == dst)
            {
                if (dir != -1)
                    throw ValidationError("routing table sets a direction for node == dst");
                continue;
            }
            if (dir < 0 || dir > 3)
                throw ValidationError("routing table misses an entry for node " +
                                      std::to_string(node) + " toward " + std::to_string(dst));
            bool edge_exists = false;
            for (const TopoEdge &edge : topo.edges_from(node))
                if (edge.port == dir)
                    edge_exists = true;
            if (!edge_exists)
                throw ValidationError("routing table points off the mesh at node " +
                                      std::to_string(node));
        }
    }
    // Every walk must reach its destination without revisiting a node.
    for (int dst = 0; dst < tiles; ++dst)
        for (int start = 0; start < tiles; ++start)
        {
            int cur = start;
            int steps = 0;
            while (cur != dst)
            {
                if (++steps > tiles)
                    throw ValidationError("routing table loops between node " +
                                          std::to_string(start) + " and " + std::to_string(dst));
                const std::int8_t dir = table.next[static_cast<std::size_t>(cur)][static_cast<std::size_t>(dst)];
                for (const TopoEdge &edge : topo.edges_from(cur))
                    if (edge.port == dir)
                    {
                        cur = edge.to;
                        break;
                    }
            }
        }
}

RoutingTable parse_routing_table(const std::string &content, const std::string &name,
                                 const TopologyGraph &topo)
{
    if (!topo.is_mesh())
        throw ValidationError("routing tables require a mesh topology");
    const int tiles = topo.tile_count();
    RoutingTable table;
    table.next.assign(static_cast<std::size_t>(tiles),
                      std::vector<std::int8_t>(static_cast<std::size_t>(tiles), -1));
    for (const TextLine &line : split_content_lines(content))
    {
        const std::string where = name + ":" + std::to_string(line.number);
        const std::vector<std::string> fields = split_fields(line.text);
        if (fields.size() != 3)
            throw ParseError(where + ": expected '<node> <dst> <dir>'");
        const std::uint64_t node = parse_u64(fields[0], where);
        const std::uint64_t dst = parse_u64(fields[1], where);
        if (node >= static_cast<std::uint64_t>(tiles) || dst >= static_cast<std::uint64_t>(tiles))
            throw ParseError(where + ": node index out of range");
        std::int8_t dir = -1;
        if (fields[2] == "E")
            dir = static_cast<std::int8_t>(Direction::East);
        else if (fields[2] == "W")
            dir = static_cast<std::int8_t>(Direction::West);
        else if (fields[2] == "N")
            dir = static_cast<std::int8_t>(Direction::North);
        else if (fields[2] == "S")
            dir = static_cast<std::int8_t>(Direction::South);
        else
            throw ParseError(where + ": direction must be E, W, N or S");
        if (table.next[node][dst] != -1)
            throw ParseError(where + ": duplicate entry");
        table.next[node][dst] = dir;
    }
    validate_routing_table(table, topo);
    return table;
}

RoutingTable load_routing_table(const std::string &path, const TopologyGraph &topo)
{
    return parse_routing_table(read_file(path), path, topo);
}

std::string serialize_routing_table(const RoutingTable &table, const TopologyGraph &topo)
{
    std::string out;
    const char *names = "EWNS";
    for (std::size_t node = 0; node < table.next.size(); ++node)
        for (std::size_t dst = 0; dst < table.next[node].size(); ++dst)
        {
            const std::int8_t dir = table.next[node][dst];
            if (dir < 0)
                continue;
            out += std::to_string(node) + " " + std::to_string(dst) + " " + names[dir] + "\n";
        }
    (void)topo;
    return out;
}

NocSimulator::NocSimulator(const TopologyGraph &topo, NocConfig config)
    : topo_(topo), config_(std::move(config))
{
    if (config_.strategy == RoutingStrategy::TableBased)
    {
        if (!config_.table)
            throw ValidationError("table routing needs a routing table");
        validate_routing_table(*config_.table, topo_);
    }
    if (config_.fifo_depth == 0)
        throw ValidationError("fifo depth must be at least 1");

    const int n = topo_.node_count();
    nodes_.resize(static_cast<std::size_t>(n));
    in_port_of_.resize(static_cast<std::size_t>(n));
    std::vector<std::size_t> in_count(static_cast<std::size_t>(n), 0);
    for (int u = 0; u < n; ++u)
    {
        const auto &edges = topo_.edges_from(u);
        in_port_of_[static_cast<std::size_t>(u)].resize(edges.size());
        for (std::size_t j = 0; j < edges.size(); ++j)
            in_port_of_[static_cast<std::size_t>(u)][j] = in_count[static_cast<std::size_t>(edges[j].to)]++;
    }
    for (int u = 0; u < n; ++u)
    {
        nodes_[static_cast<std::size_t>(u)].in_fifos.resize(in_count[static_cast<std::size_t>(u)]);
        nodes_[static_cast<std::size_t>(u)].rr.assign(topo_.edges_from(u).size(), 0);
    }
}

void NocSimulator::inject(const FlitSpec &spec)
{
    if (started_)
        throw ValidationError("flits must be injected before the simulation starts");
    if (spec.inject_tick < 0)
        throw ValidationError("inject tick must be non-negative");
    if (spec.src >= static_cast<TileIndex>(topo_.tile_count()) ||
        spec.dst >= static_cast<TileIndex>(topo_.tile_count()))
        throw ValidationError("flit endpoint outside the interconnect");

    FlitRecord record;
    record.spec = spec;
    record.used = config_.strategy;
    if (topo_.is_mesh() && config_.strategy == RoutingStrategy::Dyad)
        record.used = topo_.segments(spec.src, spec.dst) < config_.dyad_threshold
                          ? RoutingStrategy::Xy
                          : RoutingStrategy::OddEven;

    FlitState state;
    state.cur_node = topo_.tile_node(spec.src);
    state.dst_node = topo_.tile_node(spec.dst);
    if (topo_.is_mesh())
        state.src_coord = topo_.coord_of(state.cur_node);

    flits_.push_back(std::move(record));
    states_.push_back(state);
}

void NocSimulator::inject(const std::vector<FlitSpec> &specs)
{
    for (const FlitSpec &spec : specs)
        inject(spec);
}

int NocSimulator::desired_edge(std::size_t flit_id) const
{
    const FlitState &state = states_[flit_id];
    const int cur = state.cur_node;
    int next_node = -1;
    int want_dir = -1;
    if (!topo_.is_mesh())
    {
        next_node = topo_.tree_next(cur, state.dst_node);
    }
    else if (flits_[flit_id].used == RoutingStrategy::TableBased)
    {
        want_dir = config_.table->next[static_cast<std::size_t>(cur)]
                                      [static_cast<std::size_t>(flits_[flit_id].spec.dst)];
    }
    else
    {
        const std::vector<Direction> permitted = permitted_directions(
            flits_[flit_id].used, topo_.coord_of(cur), topo_.coord_of(state.dst_node),
            state.src_coord);
        // Fixed preference east, west, north, south among the permitted set.
        for (int dir = 0; dir < 4 && want_dir < 0; ++dir)
            for (const Direction d : permitted)
                if (static_cast<int>(d) == dir)
                {
                    want_dir = dir;
                    break;
                }
        if (want_dir < 0)
            throw std::logic_error("routing produced no permitted direction");
    }

    const auto &edges = topo_.edges_from(cur);
    for (std::size_t j = 0; j < edges.size(); ++j)
    {
        if (next_node >= 0 && edges[j].to == next_node)
            return static_cast<int>(j);
        if (want_dir >= 0 && edges[j].port == want_dir)
            return static_cast<int>(j);
    }
    throw std::logic_error("desired move has no matching link");
}

void NocSimulator::start_cycle_injections()
{
    while (next_inject_ < inject_schedule_.size())
    {
        const std::size_t id = inject_schedule_[next_inject_];
        if (flits_[id].spec.inject_tick > cycle_)
            break;
        ++next_inject_;
        if (states_[id].cur_node == states_[id].dst_node)
        {
            // Local delivery never touches the network.
            flits_[id].arrival_tick = flits_[id].spec.inject_tick;
            delivery_order_.push_back(id);
            continue;
        }
        nodes_[static_cast<std::size_t>(states_[id].cur_node)].source_queue.push_back(id);
        ++queued_or_buffered_;
    }
}

void NocSimulator::check_conservation()
{
    std::size_t buffered = 0;
    for (const NodeState &node : nodes_)
    {
        buffered += node.source_queue.size();
        for (const auto &fifo : node.in_fifos)
            buffered += fifo.size();
    }
    if (buffered != queued_or_buffered_ ||
        next_inject_ != delivery_order_.size() + buffered)
        conservation_ok_ = false;
}

bool NocSimulator::step()
{
    if (!started_)
    {
        started_ = true;
        inject_schedule_.resize(flits_.size());
        for (std::size_t i = 0; i < flits_.size(); ++i)
            inject_schedule_[i] = i;
        std::stable_sort(inject_schedule_.begin(), inject_schedule_.end(),
                         [this](std::size_t a, std::size_t b) {
                             return flits_[a].spec.inject_tick < flits_[b].spec.inject_tick;
                         });
    }

    start_cycle_injections();

    struct Move
    {
        std::size_t flit;
        int from_node;
        std::size_t from_slot;
        int edge;
    };
    std::vector<Move> moves;

    // Occupancy snapshot; grants this cycle see the sizes from the start of
    // the cycle, so a slot drained now opens only next cycle.
    std::vector<std::vector<std::size_t>> snapshot(nodes_.size());
    for (std::size_t u = 0; u < nodes_.size(); ++u)
    {
        snapshot[u].resize(nodes_[u].in_fifos.size());
        for (std::size_t p = 0; p < nodes_[u].in_fifos.size(); ++p)
            snapshot[u][p] = nodes_[u].in_fifos[p].size();
    }

    for (std::size_t u = 0; u < nodes_.size(); ++u)
    {
        NodeState &node = nodes_[u];
        const std::size_t ports = node.in_fifos.size();
        if (node.source_queue.empty())
        {
            bool any = false;
            for (const auto &fifo : node.in_fifos)
                if (!fifo.empty())
                {
                    any = true;
                    break;
                }
            if (!any)
                continue;
        }

        // Desired output edge of each head flit; the source queue is the
        // final arbitration slot.
        std::vector<int> slot_flit(ports + 1, -1);
        std::vector<int> slot_edge(ports + 1, -1);
        for (std::size_t p = 0; p < ports; ++p)
            if (!node.in_fifos[p].empty())
            {
                slot_flit[p] = static_cast<int>(node.in_fifos[p].front());
                slot_edge[p] = desired_edge(node.in_fifos[p].front());
            }
        if (!node.source_queue.empty())
        {
            slot_flit[ports] = static_cast<int>(node.source_queue.front());
            slot_edge[ports] = desired_edge(node.source_queue.front());
        }

        const auto &edges = topo_.edges_from(static_cast<int>(u));
        for (std::size_t j = 0; j < edges.size(); ++j)
        {
            const std::size_t slots = ports + 1;
            std::size_t winner = slots;
            for (std::size_t k = 0; k < slots; ++k)
            {
                const std::size_t slot = (node.rr[j] + k) % slots;
                if (slot_flit[slot] >= 0 && slot_edge[slot] == static_cast<int>(j))
                {
                    winner = slot;
                    break;
                }
            }
            if (winner == slots)
                continue;
            const std::size_t flit = static_cast<std::size_t>(slot_flit[winner]);
            const int to = edges[j].to;
            if (to != states_[flit].dst_node &&
                snapshot[static_cast<std::size_t>(to)][in_port_of_[u][j]] >= config_.fifo_depth)
                continue;
            moves.push_back(Move{flit, static_cast<int>(u), winner, static_cast<int>(j)});
            node.rr[j] = (winner + 1) % slots;
            slot_flit[winner] = -1;
        }
    }

    for (const Move &move : moves)
    {
        NodeState &from = nodes_[static_cast<std::size_t>(move.from_node)];
        if (move.from_slot == from.in_fifos.size())
            from.source_queue.pop_front();
        else
            from.in_fifos[move.from_slot].pop_front();

        const TopoEdge &edge = topo_.edges_from(move.from_node)[static_cast<std::size_t>(move.edge)];
        FlitState &state = states_[move.flit];
        state.cur_node = edge.to;
        state.last_dir = edge.port;
        flits_[move.flit].route.push_back(static_cast<std::uint8_t>(edge.port));
        if (edge.to == state.dst_node)
        {
            flits_[move.flit].arrival_tick = cycle_ + 1;
            delivery_order_.push_back(move.flit);
            --queued_or_buffered_;
        }
        else
        {
            nodes_[static_cast<std::size_t>(edge.to)]
                .in_fifos[in_port_of_[static_cast<std::size_t>(move.from_node)]
                                     [static_cast<std::size_t>(move.edge)]]
                .push_back(move.flit);
        }
    }

    check_conservation();
    ++cycle_;
    return queued_or_buffered_ > 0 || next_inject_ < inject_schedule_.size();
}

std::size_t NocSimulator::run(std::int64_t max_cycles)
{
    std::int64_t used = 0;
    while (true)
    {
        if (started_ && queued_or_buffered_ == 0)
        {
            if (next_inject_ >= inject_schedule_.size())
                break;
            // Nothing in flight: skip straight to the next injection tick.
            const Tick tick = flits_[inject_schedule_[next_inject_]].spec.inject_tick;
            if (tick > cycle_)
                cycle_ = tick;
        }
        if (used >= max_cycles)
            break;
        if (!step())
            break;
        ++used;
    }
    return flits_.size() - delivery_order_.size();
}

std::size_t NocSimulator::in_flight_count() const
{
    return queued_or_buffered_;
}

std::string serialize_flit_log(const NocSimulator &sim)
{
    std::string out = "inject_tick,src,dst,arrival_tick\n";
    char buf[96];
    for (const std::size_t id : sim.delivery_order())
    {
        const FlitRecord &record = sim.flits()[id];
        std::snprintf(buf, sizeof buf, "%lld,%u,%u,%lld\n",
                      static_cast<long long>(record.spec.inject_tick), record.spec.src,
                      record.spec.dst, static_cast<long long>(record.arrival_tick));
        out += buf;
    }
    return out;
}

void save_flit_log(const std::string &path, const NocSimulator &sim)
{
    write_file(path, serialize_flit_log(sim));
}

namespace
{

Coord step_coord(Coord cur, int dir)
{
    switch (static_cast<Direction>(dir))
    {
    case Direction::East: return Coord{cur.x + 1, cur.y};
    case Direction::West: return Coord{cur.x - 1, cur.y};
    case Direction::North: return Coord{cur.x, cur.y + 1};
    case Direction::South: return Coord{cur.x, cur.y - 1};
    }
    return cur;
}

bool forbidden_turn(RoutingStrategy strategy, int prev, int dir, Coord at)
{
    if (prev < 0)
        return false;
    const bool prev_vertical = prev == static_cast<int>(Direction::North) ||
                               prev == static_cast<int>(Direction::South);
    const bool dir_horizontal = dir == static_cast<int>(Direction::East) ||
                                dir == static_cast<int>(Direction::West);
    switch (strategy)
    {
    case RoutingStrategy::Xy:
        return prev_vertical && dir_horizontal;
    case RoutingStrategy::WestFirst:
        return dir == static_cast<int>(Direction::West) &&
               prev != static_cast<int>(Direction::West);
    case RoutingStrategy::NorthLast:
        return prev == static_cast<int>(Direction::North) &&
               dir != static_cast<int>(Direction::North);
    case RoutingStrategy::NegativeFirst:
        return (prev == static_cast<int>(Direction::East) ||
                prev == static_cast<int>(Direction::North)) &&
               (dir == static_cast<int>(Direction::West) ||
                dir == static_cast<int>(Direction::South));
    case RoutingStrategy::OddEven:
        if (prev == static_cast<int>(Direction::East) &&
            (dir == static_cast<int>(Direction::North) ||
             dir == static_cast<int>(Direction::South)))
            return at.x % 2 == 0;
        if (prev_vertical && dir == static_cast<int>(Direction::West))
            return at.x % 2 != 0;
        return false;
    case RoutingStrategy::Dyad:
    case RoutingStrategy::TableBased:
        return false;
    }
    return false;
}

}

std::size_t audit_route(const TopologyGraph &topo, const FlitRecord &record)
{
    std::size_t violations = 0;
    if (!topo.is_mesh())
    {
        int cur = topo.tile_node(record.spec.src);
        const int dst = topo.tile_node(record.spec.dst);
        for (const std::uint8_t port : record.route)
        {
            int next = -1;
            for (const TopoEdge &edge : topo.edges_from(cur))
                if (edge.port == static_cast<int>(port))
                    next = edge.to;
            if (next < 0)
                return violations + 1;
            cur = next;
        }
        if (record.delivered())
        {
            if (cur != dst)
                ++violations;
            if (record.route.size() !=
                static_cast<std::size_t>(topo.segments(record.spec.src, record.spec.dst)))
                ++violations;
        }
        return violations;
    }

    Coord cur = topo.coord_of(topo.tile_node(record.spec.src));
    const Coord dst = topo.coord_of(topo.tile_node(record.spec.dst));
    int prev = -1;
    for (const std::uint8_t dir : record.route)
    {
        if (forbidden_turn(record.used, prev, dir, cur))
            ++violations;
        const Coord next = step_coord(cur, dir);
        if (record.used != RoutingStrategy::TableBased)
        {
            const int before = std::abs(dst.x - cur.x) + std::abs(dst.y - cur.y);
            const int after = std::abs(dst.x - next.x) + std::abs(dst.y - next.y);
            if (after != before - 1)
                ++violations;
        }
        if (next.x < 0 || next.x >= topo.mesh_width() || next.y < 0 || next.y >= topo.mesh_height())
            return violations + 1;
        cur = next;
        prev = dir;
    }
    if (record.delivered() && !(cur == dst))
        ++violations;
    return violations;
}

const char *to_string(TrafficKind kind)
{
    switch (kind)
    {
    case TrafficKind::Random: return "random";
    case TrafficKind::Transpose: return "transpose";
    case TrafficKind::BitReversal: return "bitrev";
    case TrafficKind::Butterfly: return "butterfly";
    case TrafficKind::Shuffle: return "shuffle";
    case TrafficKind::TableBased: return "table";
    }
    return "?";
}

TrafficKind traffic_kind_from_string(const std::string &text)
{
    if (text == "random")
        return TrafficKind::Random;
    if (text == "transpose")
        return TrafficKind::Transpose;
    if (text == "bitrev" || text == "bitreversal")
        return TrafficKind::BitReversal;
    if (text == "butterfly")
        return TrafficKind::Butterfly;
    if (text == "shuffle")
        return TrafficKind::Shuffle;
    if (text == "table")
        return TrafficKind::TableBased;
    throw ValidationError("unknown traffic model '" + text + "'");
}

TileIndex permutation_target(TrafficKind kind, TileIndex node, int bits)
{
    const TileIndex mask = static_cast<TileIndex>((1u << bits) - 1u);
    switch (kind)
    {
    case TrafficKind::Transpose:
    {
        const int half = bits / 2;
        return static_cast<TileIndex>(((node << half) | (node >> (bits - half))) & mask);
    }
    case TrafficKind::BitReversal:
    {
        TileIndex out = 0;
        for (int b = 0; b < bits; ++b)
            if (node & (1u << b))
                out |= 1u << (bits - 1 - b);
        return out;
    }
    case TrafficKind::Butterfly:
    {
        const TileIndex low = node & 1u;
        const TileIndex high = (node >> (bits - 1)) & 1u;
        TileIndex out = node & mask & static_cast<TileIndex>(~(1u | (1u << (bits - 1))));
        out |= low << (bits - 1);
        out |= high;
        return out;
    }
    case TrafficKind::Shuffle:
        return static_cast<TileIndex>(((node << 1) | (node >> (bits - 1))) & mask);
    case TrafficKind::Random:
    case TrafficKind::TableBased:
        break;
    }
    throw std::logic_error("not a permutation traffic model");
}

std::vector<FlitSpec> gen_traffic(const TrafficModel &model, const TopologyGraph &topo,
                                  Tick ticks, std::uint64_t seed)
{
    const TileIndex tiles = static_cast<TileIndex>(topo.tile_count());
    std::vector<FlitSpec> specs;

    if (model.kind == TrafficKind::Random)
    {
        if (model.rate < 0.0 || model.rate > 1.0)
            throw ValidationError("traffic rate must lie in [0, 1]");
        if (tiles < 2)
            throw ValidationError("random traffic needs at least two tiles");
        Rng rng = derive_rng(seed, "traffic-random");
        for (Tick tick = 0; tick < ticks; ++tick)
            for (TileIndex node = 0; node < tiles; ++node)
            {
                if (!rng.chance(model.rate))
                    continue;
                TileIndex dst = static_cast<TileIndex>(rng.below(tiles - 1));
                if (dst >= node)
                    ++dst;
                specs.push_back(FlitSpec{tick, node, dst});
            }
        return specs;
    }

    if (model.kind == TrafficKind::TableBased)
        return parse_traffic_table(read_file(model.table_path), model.table_path, topo);

    if (tiles < 2 || (tiles & (tiles - 1)) != 0)
        throw ValidationError("permutation traffic needs a power-of-two tile count");
    int bits = 0;
    while ((1u << bits) < tiles)
        ++bits;
    if (model.kind == TrafficKind::Transpose && bits % 2 != 0)
        throw ValidationError("transpose traffic needs an even address width");
    for (Tick tick = 0; tick < ticks; ++tick)
        for (TileIndex node = 0; node < tiles; ++node)
        {
            const TileIndex dst = permutation_target(model.kind, node, bits);
            if (dst == node)
                continue;
            specs.push_back(FlitSpec{tick, node, dst});
        }
    return specs;
}

std::vector<FlitSpec> parse_traffic_table(const std::string &content, const std::string &name,
                                          const TopologyGraph &topo)
{
    const std::vector<TextLine> lines = split_content_lines(content);
    if (lines.empty() || lines.front().text != "tick,src,dst")
        throw ParseError(name + ": traffic table must start with header 'tick,src,dst'");
    std::vector<FlitSpec> specs;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const std::string where = name + ":" + std::to_string(lines[i].number);
        const std::string &row = lines[i].text;
        const std::size_t c1 = row.find(',');
        const std::size_t c2 = c1 == std::string::npos ? std::string::npos : row.find(',', c1 + 1);
        if (c2 == std::string::npos || row.find(',', c2 + 1) != std::string::npos)
            throw ParseError(where + ": expected 'tick,src,dst'");
        FlitSpec spec;
        spec.inject_tick = parse_i64(row.substr(0, c1), where);
        spec.src = static_cast<TileIndex>(parse_u64(row.substr(c1 + 1, c2 - c1 - 1), where));
        spec.dst = static_cast<TileIndex>(parse_u64(row.substr(c2 + 1), where));
        if (spec.inject_tick < 0)
            throw ParseError(where + ": tick must be non-negative");
        if (spec.src >= static_cast<TileIndex>(topo.tile_count()) ||
            spec.dst >= static_cast<TileIndex>(topo.tile_count()))
            throw ParseError(where + ": tile index out of range");
        specs.push_back(spec);
    }
    std::stable_sort(specs.begin(), specs.end(), [](const FlitSpec &a, const FlitSpec &b) {
        return a.inject_tick < b.inject_tick;
    });
    return specs;
}

std::string serialize_traffic_table(const std::vector<FlitSpec> &specs)
{
    std::string out = "tick,src,dst\n";
    char buf[64];
    for (const FlitSpec &spec : specs)
    {
        std::snprintf(buf, sizeof buf, "%lld,%u,%u\n", static_cast<long long>(spec.inject_tick),
                      spec.src, spec.dst);
        out += buf;
    }
    return out;
}

}
