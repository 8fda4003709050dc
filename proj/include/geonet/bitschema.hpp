#pragma once

#include <cstdint>

#include "geonet/errors.hpp"

namespace geonet {

/// Canonical bit-size schema for protocol payloads, so that ledgers count a
/// model-faithful number of bits per message:
///   tag            = ceil(log2(#kinds))
///   node id        = ceil(log2(n))
///   grid point     = 2 * ceil(log2(G))
///   counter (0..n) = ceil(log2(n+1))
///   cell index     = ceil(log2(#cells))
struct BitSchema {
    std::uint32_t tag_bits = 0;
    std::uint32_t id_bits = 0;
    std::uint32_t point_bits = 0;
    std::uint32_t counter_bits = 0;
    std::uint32_t cell_bits = 0;

    /// Smallest b with 2^b >= count (0 for count <= 1).
    static std::uint32_t bits_for(std::uint64_t count) {
        std::uint32_t b = 0;
        std::uint64_t reach = 1;
        while (reach < count) {
            reach <<= 1;
            ++b;
        }
        return b;
    }

    static BitSchema make(std::uint64_t n, std::int64_t grid_side, std::uint64_t kinds,
                          std::uint64_t cells = 0) {
        if (n == 0 || grid_side <= 0 || kinds == 0)
            throw SchemaError("BitSchema: n, G and kind count must be positive");
        BitSchema s;
        s.tag_bits = bits_for(kinds);
        s.id_bits = bits_for(n);
        s.point_bits = 2 * bits_for(static_cast<std::uint64_t>(grid_side));
        s.counter_bits = bits_for(n + 1);
        s.cell_bits = bits_for(cells);
        return s;
    }
};

}  // namespace geonet
