#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "geonet/bitschema.hpp"
#include "geonet/geometry.hpp"

namespace geonet {

using NodeId = std::uint32_t;

enum class Knowledge : std::uint8_t { KT0, KT1 };

inline std::int64_t grid_side_for(std::uint64_t n, double exponent) {
    const double v = std::pow(static_cast<double>(n), exponent);
    const double r = std::round(v);
    const double g = (std::abs(v - r) < 1e-6 * std::max(1.0, r)) ? r : std::ceil(v);
    if (!(g >= 1.0)) throw ParameterError("grid side must be at least 1");
    if (g > 1e9) throw ParameterError("grid side exceeds the supported 1e9 limit");
    return static_cast<std::int64_t>(g);
}

/// Node positions + undirected adjacency + knowledge level. Validated on
/// construction: connected, positions distinct and on the [1..G]^2 grid.
/// Ports are indices into the sorted neighbor list of a node.
class GeoNetwork {
public:
    GeoNetwork(std::vector<GridPoint> positions, std::vector<std::pair<NodeId, NodeId>> edges,
               double grid_exponent, Knowledge knowledge,
               std::int64_t explicit_grid_side = 0)
        : positions_(std::move(positions)),
          grid_exponent_(grid_exponent),
          knowledge_(knowledge) {
        const std::size_t n = positions_.size();
        if (n == 0) throw NetworkError("network must have at least one node");
        grid_side_ = explicit_grid_side > 0 ? explicit_grid_side
                                            : grid_side_for(n, grid_exponent_);
        if (grid_side_ > 1000000000) throw NetworkError("grid side exceeds the 1e9 limit");

        std::set<GridPoint> seen;
        for (const auto& p : positions_) {
            if (p.x < 1 || p.x > grid_side_ || p.y < 1 || p.y > grid_side_)
                throw NetworkError("node position outside [1..G]^2");
            if (!seen.insert(p).second) throw NetworkError("duplicate node position");
        }

        std::set<std::pair<NodeId, NodeId>> edge_set;
        for (auto [u, v] : edges) {
            if (u >= n || v >= n) throw NetworkError("edge endpoint out of range");
            if (u == v) throw NetworkError("self-loop edge");
            edge_set.insert({std::min(u, v), std::max(u, v)});
        }
        edges_.assign(edge_set.begin(), edge_set.end());

        adjacency_.assign(n, {});
        for (auto [u, v] : edges_) {
            adjacency_[u].push_back(v);
            adjacency_[v].push_back(u);
        }
        for (auto& row : adjacency_) std::sort(row.begin(), row.end());

        // Connectivity.
        std::vector<char> visited(n, 0);
        std::vector<NodeId> stack{0};
        visited[0] = 1;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (const NodeId v : adjacency_[u]) {
                if (!visited[v]) {
                    visited[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        if (reached != n) throw NetworkError("network is not connected");

        budget_bits_ = default_budget();
    }

    std::size_t size() const { return positions_.size(); }
    double grid_exponent() const { return grid_exponent_; }
    std::int64_t grid_side() const { return grid_side_; }
    Knowledge knowledge() const { return knowledge_; }
    const std::vector<GridPoint>& positions() const { return positions_; }
    const std::vector<std::pair<NodeId, NodeId>>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<NodeId>& neighbors(NodeId u) const { return adjacency_[u]; }
    int degree(NodeId u) const { return static_cast<int>(adjacency_[u].size()); }

    /// Port of neighbor v at node u (v must be adjacent to u).
    int port_of(NodeId u, NodeId v) const {
        const auto& row = adjacency_[u];
        const auto it = std::lower_bound(row.begin(), row.end(), v);
        if (it == row.end() || *it != v) throw NetworkError("port_of: not a neighbor");
        return static_cast<int>(it - row.begin());
    }

    /// CONGEST per-message budget B in bits. Default b_factor scales with the
    /// grid exponent so one tagged grid point plus a node id fits.
    std::uint32_t budget_bits() const { return budget_bits_; }
    void set_budget_bits(std::uint32_t b) { budget_bits_ = b; }

private:
    std::uint32_t default_budget() const {
        // b * ceil(log2(n+1)) with b scaled to the grid exponent so a tagged
        // grid point plus a node id always fits in one message.
        const std::uint32_t base = BitSchema::bits_for(positions_.size() + 1);
        const std::uint32_t point_cap =
            2 * BitSchema::bits_for(static_cast<std::uint64_t>(grid_side_)) +
            BitSchema::bits_for(positions_.size()) + 6;
        std::uint32_t b_factor = std::max<std::uint32_t>(
            4, 2 * static_cast<std::uint32_t>(std::ceil(grid_exponent_)) + 2);
        b_factor = std::max(b_factor, (point_cap + base - 1) / base);
        return b_factor * base;
    }

    std::vector<GridPoint> positions_;
    std::vector<std::pair<NodeId, NodeId>> edges_;
    std::vector<std::vector<NodeId>> adjacency_;
    double grid_exponent_ = 2.0;
    std::int64_t grid_side_ = 1;
    Knowledge knowledge_ = Knowledge::KT1;
    std::uint32_t budget_bits_ = 0;
};

// ---------------------------------------------------------------------------
// Topology builders. Positions are drawn uniformly without replacement from
// the [1..G]^2 grid with the given seed.

inline std::vector<GridPoint> random_positions(std::size_t n, std::int64_t grid_side,
                                               std::mt19937_64& rng) {
    if (static_cast<double>(grid_side) * static_cast<double>(grid_side) <
        static_cast<double>(n))
        throw ParameterError("grid too small for distinct positions");
    std::uniform_int_distribution<std::int64_t> coord(1, grid_side);
    std::set<GridPoint> seen;
    std::vector<GridPoint> pts;
    pts.reserve(n);
    while (pts.size() < n) {
        GridPoint p{coord(rng), coord(rng)};
        if (seen.insert(p).second) pts.push_back(p);
    }
    return pts;
}

inline GeoNetwork make_path(std::size_t n, double c, Knowledge kt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pos = random_positions(n, grid_side_for(n, c), rng);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    return GeoNetwork(std::move(pos), std::move(edges), c, kt);
}

inline GeoNetwork make_cycle(std::size_t n, double c, Knowledge kt, std::uint64_t seed) {
    if (n < 3) throw ParameterError("cycle needs at least 3 nodes");
    std::mt19937_64 rng(seed);
    auto pos = random_positions(n, grid_side_for(n, c), rng);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
    edges.push_back({static_cast<NodeId>(n - 1), 0});
    return GeoNetwork(std::move(pos), std::move(edges), c, kt);
}

inline GeoNetwork make_complete(std::size_t n, double c, Knowledge kt, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pos = random_positions(n, grid_side_for(n, c), rng);
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) edges.push_back({i, j});
    return GeoNetwork(std::move(pos), std::move(edges), c, kt);
}

/// G(n,p) conditioned on connectivity by union with a random spanning path.
inline GeoNetwork make_random_connected(std::size_t n, double p, double c, Knowledge kt,
                                        std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("edge probability outside [0,1]");
    std::mt19937_64 rng(seed);
    auto pos = random_positions(n, grid_side_for(n, c), rng);
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng) < p) edges.push_back({i, j});
    std::vector<NodeId> perm(n);
    for (NodeId i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({perm[i], perm[i + 1]});
    return GeoNetwork(std::move(pos), std::move(edges), c, kt);
}

}  // namespace geonet
