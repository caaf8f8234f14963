// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include <doctest.h>

#include <set>

#include "spiketile/errors.hpp"
#include "spiketile/nocsim.hpp"

using namespace spiketile;

namespace
{

NocSimulator run_one(const TopologyGraph &topo, const FlitSpec &spec, NocConfig config = {})
{
    NocSimulator sim(topo, config);
    sim.inject(spec);
    sim.run(1000);
    return sim;
}

std::vector<Direction> route_of(const NocSimulator &sim, std::size_t flit = 0)
{
    std::vector<Direction> dirs;
    for (const std::uint8_t port : sim.flits()[flit].route)
    {
        dirs.push_back(static_cast<Direction>(port));
    }
    return dirs;
}

}

TEST_SUITE("nocsim")
{
    TEST_CASE("single xy flit crosses an empty mesh in segment time")
    {
        const TopologyGraph topo(MeshTopology{3, 3});
        const NocSimulator sim = run_one(topo, {0, 0, 8, 0});  // (0,0) -> (2,2)
        REQUIRE(sim.delivered_count() == 1);
        const FlitRecord &flit = sim.flits()[0];
        CHECK(flit.arrival_tick == 4);
        CHECK(flit.latency() == topo.segments(0, 8));
        using enum Direction;
        CHECK(route_of(sim) == std::vector<Direction>{East, East, North, North});
        CHECK(audit_route(topo, flit) == 0);
    }

    TEST_CASE("west-first goes west before anything else")
    {
        const TopologyGraph topo(MeshTopology{3, 2});
        NocConfig config;
        config.strategy = RoutingStrategy::WestFirst;
        // (2,0) -> (0,1): west twice, then north.
        const NocSimulator sim = run_one(topo, {0, 2, 3, 0}, config);
        using enum Direction;
        CHECK(route_of(sim) == std::vector<Direction>{West, West, North});
        CHECK(audit_route(topo, sim.flits()[0]) == 0);
    }

    TEST_CASE("every strategy delivers every pair at segment latency when alone")
    {
        const TopologyGraph topo(MeshTopology{4, 4});
        for (const auto strategy :
             {RoutingStrategy::Xy, RoutingStrategy::WestFirst, RoutingStrategy::NorthLast,
              RoutingStrategy::NegativeFirst, RoutingStrategy::OddEven,
              RoutingStrategy::Dyad})
        {
            NocConfig config;
            config.strategy = strategy;
            for (TileIndex src = 0; src < 16; ++src)
            {
                for (TileIndex dst = 0; dst < 16; ++dst)
                {
                    if (src == dst)
                    {
                        continue;
                    }
                    NocSimulator sim(topo, config);
                    sim.inject({0, src, dst, 0});
                    REQUIRE(sim.run(100) == 0);
                    const FlitRecord &flit = sim.flits()[0];
                    CHECK(flit.latency() == topo.segments(src, dst));
                    CHECK(audit_route(topo, flit) == 0);
                    CHECK(sim.conservation_ok());
                }
            }
        }
    }

    TEST_CASE("same-tile traffic leaves the network instantly")
    {
        const TopologyGraph topo(MeshTopology{2, 2});
        const NocSimulator sim = run_one(topo, {5, 3, 3, 0});
        const FlitRecord &flit = sim.flits()[0];
        CHECK(flit.arrival_tick == 5);
        CHECK(flit.route.empty());
        CHECK(flit.latency() == 0);
    }

    TEST_CASE("two flits wanting one link: the second waits exactly one cycle")
    {
        const TopologyGraph topo(MeshTopology{2, 2});
        NocSimulator sim(topo, {});
        sim.inject({0, 0, 3, 0});  // (0,0) -> (1,1), turns north at (1,0)
        sim.inject({1, 1, 3, 1});  // (1,0) -> (1,1), same link, same cycle
        REQUIRE(sim.run(100) == 0);
        CHECK(sim.flits()[0].latency() == 2);  // unobstructed
        CHECK(sim.flits()[1].latency() == 2);  // one segment plus one stall
    }

    TEST_CASE("shallow fifos add backpressure, deeper ones pipeline")
    {
        const TopologyGraph topo(MeshTopology{3, 1});
        for (const auto [depth, expected_last_latency] :
             {std::pair<std::size_t, std::int64_t>{1, 3},
              std::pair<std::size_t, std::int64_t>{2, 2}})
        {
            NocConfig config;
            config.fifo_depth = depth;
            NocSimulator sim(topo, config);
            sim.inject({0, 0, 2, 0});
            sim.inject({1, 0, 2, 1});
            REQUIRE(sim.run(100) == 0);
            CHECK(sim.flits()[0].latency() == 2);
            CHECK(sim.flits()[1].latency() == expected_last_latency);
        }
    }

    TEST_CASE("injection is sealed once the clock starts")
    {
        const TopologyGraph topo(MeshTopology{2, 2});
        NocSimulator sim(topo, {});
        sim.inject({0, 0, 1, 0});
        sim.step();
        CHECK_THROWS_AS(sim.inject({5, 0, 1, 0}), ValidationError);
    }

    TEST_CASE("idle stretches are skipped, not simulated")
    {
        const TopologyGraph topo(MeshTopology{2, 2});
        NocSimulator sim(topo, {});
        sim.inject({1'000'000, 0, 3, 0});
        CHECK(sim.run(10) == 0);  // ten cycles of budget suffice
        CHECK(sim.flits()[0].arrival_tick == 1'000'002);
    }

    TEST_CASE("identical seeds give identical logs")
    {
        const TopologyGraph topo(MeshTopology{4, 4});
        TrafficModel model;
        model.kind = TrafficKind::Random;
        model.rate = 0.3;
        std::string first_log;
        for (int round = 0; round < 2; ++round)
        {
            NocSimulator sim(topo, {});
            sim.inject(gen_traffic(model, topo, 64, 42));
            sim.run(10'000);
            const std::string log = serialize_flit_log(sim);
            if (round == 0)
            {
                first_log = log;
            }
            else
            {
                CHECK(log == first_log);
            }
        }
        CHECK(first_log.rfind("inject_tick,src,dst,arrival_tick\n", 0) == 0);
    }

    TEST_CASE("audit flags corrupted routes")
    {
        const TopologyGraph topo(MeshTopology{3, 3});
        NocSimulator sim = run_one(topo, {0, 0, 8, 0});
        FlitRecord bad = sim.flits()[0];
        using enum Direction;
        // An xy route that turns back east after going north.
        bad.route = {static_cast<std::uint8_t>(North), static_cast<std::uint8_t>(East),
                     static_cast<std::uint8_t>(North), static_cast<std::uint8_t>(East)};
        CHECK(audit_route(topo, bad) > 0);
        // A route that walks off the mesh.
        bad.route = {static_cast<std::uint8_t>(West)};
        CHECK(audit_route(topo, bad) > 0);
    }

    TEST_CASE("dyad splits short and long journeys")
    {
        const TopologyGraph topo(MeshTopology{4, 4});
        NocConfig config;
        config.strategy = RoutingStrategy::Dyad;
        config.dyad_threshold = 3;
        NocSimulator sim(topo, config);
        sim.inject({0, 0, 1, 0});   // 1 segment: below the threshold
        sim.inject({0, 0, 15, 1});  // 6 segments: odd-even side
        sim.run(100);
        CHECK(sim.flits()[0].used == RoutingStrategy::Xy);
        CHECK(sim.flits()[1].used == RoutingStrategy::OddEven);
    }

    TEST_CASE("routing tables: xy construction, round-trip, validation")
    {
        const TopologyGraph topo(MeshTopology{3, 3});
        const RoutingTable table = make_xy_table(topo);
        validate_routing_table(table, topo);
        const RoutingTable again =
            parse_routing_table(serialize_routing_table(table, topo), "mem", topo);
        CHECK(again.next == table.next);

        NocConfig config;
        config.strategy = RoutingStrategy::TableBased;
        config.table = table;
        NocSimulator sim(topo, config);
        sim.inject({0, 0, 8, 0});
        REQUIRE(sim.run(100) == 0);
        CHECK(sim.flits()[0].latency() == 4);

        RoutingTable incomplete = table;
        incomplete.next[0][8] = -1;
        CHECK_THROWS_AS(validate_routing_table(incomplete, topo), ValidationError);

        RoutingTable looping = table;
        // 0 -> east -> 1 -> west -> 0 when heading for tile 8.
        looping.next[0][8] = static_cast<std::int8_t>(Direction::East);
        looping.next[1][8] = static_cast<std::int8_t>(Direction::West);
        CHECK_THROWS_AS(validate_routing_table(looping, topo), ValidationError);
    }

    TEST_CASE("permutation targets match their bit rules")
    {
        CHECK(permutation_target(TrafficKind::BitReversal, 3, 4) == 12);
        CHECK(permutation_target(TrafficKind::Butterfly, 8, 4) == 1);
        CHECK(permutation_target(TrafficKind::Shuffle, 9, 4) == 3);
        CHECK(permutation_target(TrafficKind::Transpose, 3, 4) == 12);
        CHECK(permutation_target(TrafficKind::Transpose, 0, 4) == 0);
    }

    TEST_CASE("permutation traffic covers every tick and skips self-targets")
    {
        const TopologyGraph topo(MeshTopology{4, 4});
        TrafficModel model;
        model.kind = TrafficKind::BitReversal;
        const auto flits = gen_traffic(model, topo, 3, 0);
        // Nodes 0, 6, 9, 15 map to themselves under 4-bit reversal.
        CHECK(flits.size() == 3 * (16 - 4));
        for (const FlitSpec &spec : flits)
        {
            CHECK(spec.dst == permutation_target(TrafficKind::BitReversal, spec.src, 4));
        }
    }

    TEST_CASE("permutations demand power-of-two node counts")
    {
        const TopologyGraph topo(MeshTopology{3, 3});
        TrafficModel model;
        model.kind = TrafficKind::Shuffle;
        CHECK_THROWS_AS(gen_traffic(model, topo, 4, 0), ValidationError);

        const TopologyGraph eight(MeshTopology{4, 2});
        model.kind = TrafficKind::Transpose;  // needs an even bit count
        CHECK_THROWS_AS(gen_traffic(model, eight, 4, 0), ValidationError);
        model.kind = TrafficKind::Butterfly;  // three bits are fine here
        CHECK_NOTHROW(gen_traffic(model, eight, 4, 0));
    }

    TEST_CASE("random traffic respects the rate and never self-targets")
    {
        const TopologyGraph topo(MeshTopology{4, 4});
        TrafficModel model;
        model.kind = TrafficKind::Random;
        model.rate = 0.25;
        const auto flits = gen_traffic(model, topo, 400, 7);
        const double expected = 0.25 * 16 * 400;
        CHECK(flits.size() > expected * 0.85);
        CHECK(flits.size() < expected * 1.15);
        for (const FlitSpec &spec : flits)
        {
            CHECK(spec.src != spec.dst);
        }
        model.rate = 1.5;
        CHECK_THROWS_AS(gen_traffic(model, topo, 4, 0), ValidationError);
    }

    TEST_CASE("traffic tables round-trip and validate")
    {
        const TopologyGraph topo(MeshTopology{2, 2});
        const std::vector<FlitSpec> flits = {{0, 0, 1, 0}, {0, 2, 3, 0}, {4, 3, 0, 0}};
        const auto again =
            parse_traffic_table(serialize_traffic_table(flits), "mem", topo);
        REQUIRE(again.size() == 3);
        CHECK(again[2].inject_tick == 4);
        CHECK(again[2].src == 3);
        CHECK_THROWS_AS(parse_traffic_table("bad header\n", "mem", topo), ParseError);
        CHECK_THROWS_AS(parse_traffic_table("tick,src,dst\n0,9,0\n", "mem", topo), ParseError);
        // Rows are stable-sorted by tick on load.
        const auto sorted =
            parse_traffic_table("tick,src,dst\n5,0,1\n1,2,3\n", "mem", topo);
        CHECK(sorted[0].inject_tick == 1);
    }

    TEST_CASE("bus and two-stage interconnects deliver at tree distance")
    {
        const TopologyGraph bus(SegmentedBusTopology{6});
        NocSimulator on_bus(bus, {});
        on_bus.inject({0, 1, 5, 0});
        REQUIRE(on_bus.run(100) == 0);
        CHECK(on_bus.flits()[0].latency() == 4);
        CHECK(audit_route(bus, on_bus.flits()[0]) == 0);

        const TopologyGraph staged(TwoStageTopology{2, 4});
        NocSimulator on_staged(staged, {});
        on_staged.inject({0, 0, 1, 0});
        on_staged.inject({0, 2, 6, 1});
        REQUIRE(on_staged.run(100) == 0);
        CHECK(on_staged.flits()[0].latency() == 2);  // via the group switch
        CHECK(on_staged.flits()[1].latency() == 4);  // via the root
        CHECK(audit_route(staged, on_staged.flits()[1]) == 0);
    }

    TEST_CASE("undelivered flits are reported when the budget runs out")
    {
        const TopologyGraph topo(MeshTopology{4, 4});
        NocSimulator sim(topo, {});
        sim.inject({0, 0, 15, 0});
        CHECK(sim.run(2) == 1);
        CHECK(sim.in_flight_count() == 1);
        CHECK(sim.conservation_ok());
    }

    TEST_CASE("strategy and traffic names round-trip")
    {
        for (const auto strategy :
             {RoutingStrategy::Xy, RoutingStrategy::WestFirst, RoutingStrategy::NorthLast,
              RoutingStrategy::NegativeFirst, RoutingStrategy::OddEven, RoutingStrategy::Dyad,
              RoutingStrategy::TableBased})
        {
            CHECK(routing_strategy_from_string(to_string(strategy)) == strategy);
        }
        CHECK(std::string(to_string(RoutingStrategy::NegativeFirst)) == "negfirst");
        CHECK(routing_strategy_from_string("negativefirst") == RoutingStrategy::NegativeFirst);
        for (const auto kind : {TrafficKind::Random, TrafficKind::Transpose,
                                TrafficKind::BitReversal, TrafficKind::Butterfly,
                                TrafficKind::Shuffle, TrafficKind::TableBased})
        {
            CHECK(traffic_kind_from_string(to_string(kind)) == kind);
        }
        CHECK(std::string(to_string(TrafficKind::BitReversal)) == "bitrev");
    }
}
