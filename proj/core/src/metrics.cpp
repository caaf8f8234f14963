// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)

#include "spiketile/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace spiketile
{

double isi_distortion(const std::vector<Tick> &source_ticks,
                      const std::vector<Tick> &delivered_ticks)
{
    const std::size_t n = std::min(source_ticks.size(), delivered_ticks.size());
    if (n < 2)
        return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
    {
        const Tick src_isi = source_ticks[i + 1] - source_ticks[i];
        const Tick dst_isi = delivered_ticks[i + 1] - delivered_ticks[i];
        total += static_cast<double>(std::llabs(src_isi - dst_isi));
    }
    return total / static_cast<double>(n - 1);
}

namespace
{

// Merge sort inversion count, n log n.
std::uint64_t count_inversions(std::vector<std::uint64_t> &values, std::vector<std::uint64_t> &scratch,
                               std::size_t lo, std::size_t hi)
{
    if (hi - lo < 2)
        return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inversions = count_inversions(values, scratch, lo, mid) +
                               count_inversions(values, scratch, mid, hi);
    std::size_t a = lo;
    std::size_t b = mid;
    std::size_t out = lo;
    while (a < mid && b < hi)
    {
        if (values[a] <= values[b])
        {
            scratch[out++] = values[a++];
        }
        else
        {
            inversions += mid - a;
            scratch[out++] = values[b++];
        }
    }
    while (a < mid)
        scratch[out++] = values[a++];
    while (b < hi)
        scratch[out++] = values[b++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
              scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              values.begin() + static_cast<std::ptrdiff_t>(lo));
    return inversions;
}

}

std::uint64_t spike_disorder(const std::vector<std::uint64_t> &arrival_ranks)
{
    std::vector<std::uint64_t> values = arrival_ranks;
    std::vector<std::uint64_t> scratch(values.size());
    return count_inversions(values, scratch, 0, values.size());
}

LatencyStats latency_stats(const std::vector<std::int64_t> &latencies)
{
    LatencyStats stats;
    if (latencies.empty())
        return stats;
    std::vector<std::int64_t> sorted = latencies;
    std::sort(sorted.begin(), sorted.end());
    stats.count = sorted.size();
    stats.min = sorted.front();
    stats.max = sorted.back();
    double total = 0.0;
    for (const std::int64_t value : sorted)
        total += static_cast<double>(value);
    stats.mean = total / static_cast<double>(sorted.size());
    const std::size_t rank = static_cast<std::size_t>(
        std::ceil(0.99 * static_cast<double>(sorted.size())));
    stats.p99 = sorted[rank == 0 ? 0 : rank - 1];
    return stats;
}

}
