// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// metrics.hpp - spike stream quality measures
#ifndef SPIKETILE_METRICS_HPP
#define SPIKETILE_METRICS_HPP

#include <cstdint>
#include <vector>

#include "spiketile/types.hpp"

namespace spiketile
{

// Mean absolute difference between consecutive inter-spike intervals of the
// source stream and the delivered stream, paired in source order. Streams
// with fewer than two common spikes have no interval to distort: 0.
double isi_distortion(const std::vector<Tick> &source_ticks,
                      const std::vector<Tick> &delivered_ticks);

// Number of pairs delivered in the opposite order from their injection.
// arrival_ranks[i] is the arrival position of the i-th injected spike; a
// fully reversed stream of n spikes scores n*(n-1)/2.
std::uint64_t spike_disorder(const std::vector<std::uint64_t> &arrival_ranks);

struct LatencyStats
{
    std::int64_t min{0};
    std::int64_t max{0};
    double mean{0.0};
    // Nearest-rank 99th percentile.
    std::int64_t p99{0};
    std::size_t count{0};
};

LatencyStats latency_stats(const std::vector<std::int64_t> &latencies);

}

#endif
