// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// oracles.hpp - independent brute-force references for the test suite
//
// Everything here is written against the problem statements, not the library
// code under test: exhaustive enumeration where the space is small, direct
// O(n^2) counting, and a time-stepped circuit solver for delays. Slow on
// purpose.
#ifndef SPIKETILE_TEST_ORACLES_HPP
#define SPIKETILE_TEST_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <set>
#include <vector>

#include "spiketile/cluster.hpp"
#include "spiketile/hardware.hpp"
#include "spiketile/topology.hpp"
#include "spiketile/workload.hpp"

namespace oracle
{

// Visit every partition of {0..n-1} as an assignment vector, via restricted
// growth strings. Bell(10) = 115975, fine for n <= 10.
inline void for_each_set_partition(
    std::size_t n, const std::function<void(const std::vector<spiketile::ClusterId> &)> &visit)
{
    if (n == 0)
    {
        return;
    }
    std::vector<spiketile::ClusterId> a(n, 0);
    // maxima[i] = max(a[0..i]); a[i] may grow up to maxima[i-1] + 1.
    std::vector<spiketile::ClusterId> maxima(n, 0);
    while (true)
    {
        visit(a);
        std::size_t i = n - 1;
        while (i >= 1 && a[i] > maxima[i - 1])
        {
            --i;
        }
        if (i == 0)
        {
            return;
        }
        ++a[i];
        maxima[i] = std::max(maxima[i - 1], a[i]);
        for (std::size_t j = i + 1; j < n; ++j)
        {
            a[j] = 0;
            maxima[j] = maxima[j - 1];
        }
    }
}

// Feasibility per the crossbar statement: distinct sources of synapses into
// the member set <= n rows, members with incoming synapses <= n columns,
// every member fanin <= n.
inline bool feasible_cluster(const spiketile::SnnWorkload &workload,
                             const std::vector<spiketile::NeuronId> &members, std::uint32_t n)
{
    const std::set<spiketile::NeuronId> member_set(members.begin(), members.end());
    std::set<spiketile::NeuronId> rows;
    std::set<spiketile::NeuronId> cols;
    std::vector<std::uint32_t> fanin(workload.neuron_count(), 0);
    for (const auto &synapse : workload.synapses)
    {
        if (member_set.count(synapse.dst) != 0)
        {
            rows.insert(synapse.src);
            cols.insert(synapse.dst);
            if (++fanin[synapse.dst] > n)
            {
                return false;
            }
        }
    }
    return rows.size() <= n && cols.size() <= n;
}

// Spike weight of one synapse: source mean spikes per frame, or 1 without a
// trace.
inline double synapse_spikes(const spiketile::SnnWorkload &workload,
                             const std::vector<double> &per_frame, spiketile::NeuronId src)
{
    return workload.trace.empty() ? 1.0 : per_frame[src];
}

struct PartitionOptimum
{
    double best_cut{std::numeric_limits<double>::infinity()};
    std::size_t best_clusters{std::numeric_limits<std::size_t>::max()};
    bool any_feasible{false};
};

// Exhaustive scan of all set partitions: minimum cut weight and minimum
// cluster count over the feasible ones (each minimized independently).
inline PartitionOptimum exhaustive_partition(const spiketile::SnnWorkload &workload,
                                             std::uint32_t capacity)
{
    using namespace spiketile;
    PartitionOptimum result;
    const std::vector<double> per_frame = spikes_per_frame_table(workload);
    for_each_set_partition(workload.neuron_count(), [&](const std::vector<ClusterId> &assign) {
        const ClusterId groups = *std::max_element(assign.begin(), assign.end()) + 1;
        std::vector<std::vector<NeuronId>> members(groups);
        for (NeuronId v = 0; v < assign.size(); ++v)
        {
            members[assign[v]].push_back(v);
        }
        for (const auto &group : members)
        {
            if (!feasible_cluster(workload, group, capacity))
            {
                return;
            }
        }
        double cut = 0.0;
        for (const auto &synapse : workload.synapses)
        {
            if (assign[synapse.src] != assign[synapse.dst])
            {
                cut += synapse_spikes(workload, per_frame, synapse.src);
            }
        }
        result.any_feasible = true;
        result.best_cut = std::min(result.best_cut, cut);
        result.best_clusters = std::min(result.best_clusters, static_cast<std::size_t>(groups));
    });
    return result;
}

// Exhaustive placement: try every injective cluster -> tile map.
inline double exhaustive_placement_cost(const spiketile::ClusteredGraph &graph,
                                        const spiketile::TopologyGraph &topo)
{
    using namespace spiketile;
    const std::size_t clusters = graph.clusters.size();
    const std::size_t tiles = static_cast<std::size_t>(topo.tile_count());
    std::vector<TileIndex> slot(clusters, 0);
    std::vector<bool> used(tiles, false);
    double best = std::numeric_limits<double>::infinity();
    const std::function<void(std::size_t)> recurse = [&](std::size_t c) {
        if (c == clusters)
        {
            double cost = 0.0;
            for (const GlobalSynapse &gs : graph.global_synapses)
            {
                cost += gs.spikes * topo.segments(slot[gs.src_cluster], slot[gs.dst_cluster]);
            }
            best = std::min(best, cost);
            return;
        }
        for (std::size_t t = 0; t < tiles; ++t)
        {
            if (!used[t])
            {
                used[t] = true;
                slot[c] = static_cast<TileIndex>(t);
                recurse(c + 1);
                used[t] = false;
            }
        }
    };
    recurse(0);
    return best;
}

// O(n^2) inversion count.
inline std::uint64_t naive_inversions(const std::vector<std::uint64_t> &ranks)
{
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i)
    {
        for (std::size_t j = i + 1; j < ranks.size(); ++j)
        {
            if (ranks[i] > ranks[j])
            {
                ++count;
            }
        }
    }
    return count;
}

// Delay of the read path through the array wiring, by direct simulation of
// the RC ladder: j+1 wordline segments (resistance r_wl, node capacitance
// c_wl + c_wl_wl + c_wl_bl each) followed by i bitline segments (r_bl,
// c_bl + c_bl_bl + c_wl_bl each). The output is the far end of the chain; the
// delay metric is the first moment integral(0,inf) (1 - v_out) dt of the
// unit step response, evaluated with backward Euler and halved-step
// Richardson extrapolation.
inline double rc_ladder_first_moment(const spiketile::ParasiticsTemplate &p, std::uint32_t i,
                                     std::uint32_t j)
{
    const double c_word = p.c_wl + p.c_wl_wl + p.c_wl_bl;
    const double c_bit = p.c_bl + p.c_bl_bl + p.c_wl_bl;
    std::vector<double> res;
    std::vector<double> cap;
    for (std::uint32_t k = 0; k <= j; ++k)
    {
        res.push_back(p.r_wl);
        cap.push_back(c_word);
    }
    for (std::uint32_t k = 0; k < i; ++k)
    {
        res.push_back(p.r_bl);
        cap.push_back(c_bit);
    }
    const std::size_t nodes = res.size();
    double tau_total = 0.0;
    for (std::size_t k = 0; k < nodes; ++k)
    {
        tau_total += res[k] * cap[k] * static_cast<double>(nodes);
    }
    if (tau_total <= 0.0)
    {
        return 0.0;
    }

    const auto integrate = [&](double dt) {
        // Backward Euler on C dv/dt = A v + b with the tridiagonal nodal
        // matrix of the ladder; Thomas solves per step.
        std::vector<double> v(nodes, 0.0);
        std::vector<double> lower(nodes), diag(nodes), upper(nodes), rhs(nodes);
        double integral = 0.0;
        const double horizon = 80.0 * tau_total;
        for (double t = 0.0; t < horizon; t += dt)
        {
            for (std::size_t k = 0; k < nodes; ++k)
            {
                const double g_prev = 1.0 / res[k];
                const double g_next = k + 1 < nodes ? 1.0 / res[k + 1] : 0.0;
                diag[k] = cap[k] / dt + g_prev + g_next;
                lower[k] = k > 0 ? -1.0 / res[k] : 0.0;
                upper[k] = k + 1 < nodes ? -g_next : 0.0;
                rhs[k] = cap[k] / dt * v[k] + (k == 0 ? 1.0 / res[0] : 0.0);
            }
            for (std::size_t k = 1; k < nodes; ++k)
            {
                const double m = lower[k] / diag[k - 1];
                diag[k] -= m * upper[k - 1];
                rhs[k] -= m * rhs[k - 1];
            }
            v[nodes - 1] = rhs[nodes - 1] / diag[nodes - 1];
            for (std::size_t k = nodes - 1; k > 0; --k)
            {
                v[k - 1] = (rhs[k - 1] - upper[k - 1] * v[k]) / diag[k - 1];
            }
            integral += (1.0 - v[nodes - 1]) * dt;
            if (1.0 - v[nodes - 1] < 1e-14)
            {
                break;
            }
        }
        return integral;
    };

    const double coarse = integrate(tau_total / 4000.0);
    const double fine = integrate(tau_total / 8000.0);
    return 2.0 * fine - coarse;
}

}

#endif
