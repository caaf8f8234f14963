// Copyright (c) 2026 - the spiketile authors
// This code is licensed under the MIT license (see LICENSE for details)
//
// types.hpp - shared identifier and coordinate types
#ifndef SPIKETILE_TYPES_HPP
#define SPIKETILE_TYPES_HPP

#include <cstdint>

namespace spiketile
{

using NeuronId = std::uint32_t;
using ClusterId = std::uint32_t;
using TileIndex = std::uint32_t;
using Tick = std::int64_t;

// Position on a mesh, in Cartesian coordinates. x grows east, y grows north.
struct Coord
{
    int x{0};
    int y{0};
    bool operator==(const Coord &other) const = default;
};

}

#endif
