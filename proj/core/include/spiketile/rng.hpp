// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// rng.hpp - deterministic random streams
//
// Every stochastic stage draws from an Rng derived from one root seed and a
// stage label. Distributions are implemented by hand instead of <random> so
// that a given (seed, label) pair produces the same stream on every platform
// and standard library. The generator is splitmix64, which is enough for
// simulation workloads here (no cryptographic use).
#ifndef SPIKETILE_RNG_HPP
#define SPIKETILE_RNG_HPP

#include <cstdint>
#include <string_view>
#include <vector>

namespace spiketile
{

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64()
    {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound). bound must be nonzero.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v = next_u64();
        while (v >= limit)
        {
            v = next_u64();
        }
        return v % bound;
    }

    // Uniform double in [0, 1) with 53 bits of resolution.
    double unit()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double range(double lo, double hi)
    {
        return lo + (hi - lo) * unit();
    }

    bool chance(double p)
    {
        return unit() < p;
    }

    template <typename T> void shuffle(std::vector<T> &values)
    {
        for (std::size_t i = values.size(); i > 1; --i)
        {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t state_;
};

// Derive the sub-seed for a named stage (e.g. "partition", "place") so that
// stages never share a stream even when they run in a different order.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view stage)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : stage)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    Rng mixer(root ^ h);
    return mixer.next_u64();
}

inline Rng derive_rng(std::uint64_t root, std::string_view stage)
{
    return Rng(derive_seed(root, stage));
}

}

#endif
