#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "geonet/geometry.hpp"
#include "geonet/network.hpp"

namespace geonet {

/// Characteristic vector of a subset of {1..N}.
using CharVector = std::vector<std::uint8_t>;

inline bool vectors_intersect(const CharVector& a, const CharVector& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (a[i] && b[i]) return true;
    return false;
}

enum class GadgetKind : std::uint8_t {
    diameter,
    hull,
    closest_base,
    closest_spread,
    closest_grouped
};

inline std::string_view gadget_kind_name(GadgetKind kind) {
    switch (kind) {
        case GadgetKind::diameter: return "diameter";
        case GadgetKind::hull: return "hull";
        case GadgetKind::closest_base: return "closest_base";
        case GadgetKind::closest_spread: return "closest_spread";
        case GadgetKind::closest_grouped: return "closest_grouped";
    }
    return "?";
}

/// A geometric network encoding a two-party set-disjointness instance.
/// Node ids: w_i -> i-1, u_i -> N+i-1, h_i -> 2N+i-1.
struct GadgetInstance {
    GadgetKind kind = GadgetKind::diameter;
    GeoNetwork network;
    CharVector a, b;
    std::size_t N = 0;
    double c = 2.0;
    std::int64_t r = 0;
    std::int64_t R = 0;
    std::int64_t k = 0;
    bool expected_answer = false;
    int witness = -1;  // first index i (1-based) with a_i = b_i = 1, else -1

    // Hull gadget: the 4N rounded candidate slot positions, slot 4(i-1)+j.
    std::vector<GridPoint> hull_slots;
};

namespace gadget_detail {

inline int first_witness(const CharVector& a, const CharVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && b[i]) return static_cast<int>(i + 1);
    return -1;
}

/// Path edges w_1..w_N, u_1..u_N, h_1..h_N plus the two connectors.
inline std::vector<std::pair<NodeId, NodeId>> gadget_edges(std::size_t N, bool hull_style) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    const auto w = [&](std::size_t i) { return static_cast<NodeId>(i - 1); };
    const auto u = [&](std::size_t i) { return static_cast<NodeId>(N + i - 1); };
    const auto h = [&](std::size_t i) { return static_cast<NodeId>(2 * N + i - 1); };
    for (std::size_t i = 1; i < N; ++i) {
        edges.push_back({w(i), w(i + 1)});
        edges.push_back({u(i), u(i + 1)});
        edges.push_back({h(i), h(i + 1)});
    }
    if (hull_style) {
        edges.push_back({w(1), h(1)});
        edges.push_back({h(N), u(N)});
    } else {
        edges.push_back({w(N), h(1)});
        edges.push_back({h(N), u(1)});
    }
    return edges;
}

/// First `count` lattice points strictly inside the radius-r disk around the
/// center, in row-major order (y ascending, then x).
inline std::vector<GridPoint> disk_lattice_points(GridPoint center, std::int64_t r,
                                                  std::size_t count) {
    std::vector<GridPoint> pts;
    for (std::int64_t y = center.y - r + 1; y <= center.y + r - 1 && pts.size() < count; ++y) {
        for (std::int64_t x = center.x - r + 1; x <= center.x + r - 1 && pts.size() < count;
             ++x) {
            const std::int64_t dx = x - center.x;
            const std::int64_t dy = y - center.y;
            if (dx * dx + dy * dy < r * r) pts.push_back({x, y});
        }
    }
    if (pts.size() < count)
        throw ParameterError("disk too small for the required lattice points");
    return pts;
}

inline std::int64_t floor_snap(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::floor(v));
}
inline std::int64_t ceil_snap(double v) {
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-9) return static_cast<std::int64_t>(r);
    return static_cast<std::int64_t>(std::ceil(v));
}

/// Quadrant rounding of the diameter construction: upper-ray points move to
/// the top corner away from the axis, lower-ray points symmetrically down.
/// The displacement keeps a non-negative projection onto the ray direction.
inline GridPoint round_upper(double x, double y, double ray_angle) {
    if (ray_angle <= std::numbers::pi / 2 + 1e-12)
        return {ceil_snap(x), ceil_snap(y)};  // top right
    return {floor_snap(x), ceil_snap(y)};     // top left
}
inline GridPoint round_lower(double x, double y, double ray_angle) {
    if (ray_angle <= 3 * std::numbers::pi / 2 + 1e-12)
        return {floor_snap(x), floor_snap(y)};  // bottom left
    return {ceil_snap(x), floor_snap(y)};       // bottom right
}

/// Radial-outward rounding: each coordinate moves away from the center.
inline GridPoint round_outward(double x, double y, GridPoint center) {
    GridPoint p;
    p.x = x >= static_cast<double>(center.x) ? ceil_snap(x) : floor_snap(x);
    p.y = y >= static_cast<double>(center.y) ? ceil_snap(y) : floor_snap(y);
    return p;
}

}  // namespace gadget_detail

/// Reduction instance for the diameter threshold test: W on upper rays at
/// radius R (a_i=1) or r, U on the opposite rays per b, H on lattice points
/// inside the small disk. r = N, R = 2N^2.
inline GadgetInstance gen_diameter_gadget(const CharVector& a, const CharVector& b, double c) {
    const std::size_t N = a.size();
    if (N < 2 || b.size() != N)
        throw ParameterError("diameter gadget: need |a| = |b| = N >= 2");
    const std::size_t n = 3 * N;
    const double min_c = 2.0 + 2.0 / std::log2(static_cast<double>(n));
    if (c < min_c - 1e-12)
        throw ParameterError("diameter gadget: grid exponent must be >= 2 + 2/lg n");

    const std::int64_t r = static_cast<std::int64_t>(N);
    const std::int64_t R = 2 * static_cast<std::int64_t>(N) * static_cast<std::int64_t>(N);
    const std::int64_t G = grid_side_for(n, c);
    if (G < 2 * R + 4) throw ParameterError("diameter gadget: grid too small for radius R");
    const GridPoint center{G / 2, G / 2};

    std::vector<GridPoint> pos(n);
    for (std::size_t i = 1; i <= N; ++i) {
        const double upper = std::numbers::pi * static_cast<double>(i) / static_cast<double>(N);
        const double lower = upper + std::numbers::pi;
        const double rw = a[i - 1] ? static_cast<double>(R) : static_cast<double>(r);
        const double ru = b[i - 1] ? static_cast<double>(R) : static_cast<double>(r);
        pos[i - 1] = gadget_detail::round_upper(center.x + rw * std::cos(upper),
                                                center.y + rw * std::sin(upper), upper);
        pos[N + i - 1] = gadget_detail::round_lower(center.x + ru * std::cos(lower),
                                                    center.y + ru * std::sin(lower), lower);
    }
    const auto lattice = gadget_detail::disk_lattice_points(center, r, N);
    for (std::size_t i = 0; i < N; ++i) pos[2 * N + i] = lattice[i];

    GadgetInstance inst{GadgetKind::diameter,
                        GeoNetwork(pos, gadget_detail::gadget_edges(N, false), c,
                                   Knowledge::KT1),
                        a,
                        b,
                        N,
                        c,
                        r,
                        R,
                        0,
                        vectors_intersect(a, b),
                        gadget_detail::first_witness(a, b),
                        {}};
    return inst;
}

/// Reduction instance for the hull-adjacency test: 4N candidate slots on the
/// radius-2N circle, w_i at slot 0/1, u_i at slot 2/3 of group i, H inside
/// the radius-N disk.
inline GadgetInstance gen_hull_gadget(const CharVector& a, const CharVector& b, double c) {
    const std::size_t N = a.size();
    if (N < 3 || b.size() != N) throw ParameterError("hull gadget: need |a| = |b| = N >= 3");
    const std::size_t n = 3 * N;
    const double min_c = 1.0 + 1.0 / (2.0 * std::log2(static_cast<double>(n)));
    if (c < min_c - 1e-12)
        throw ParameterError("hull gadget: grid exponent must be > 1 + 1/(2 lg n)");

    const std::int64_t r = static_cast<std::int64_t>(N);
    const std::int64_t G = grid_side_for(n, c);
    if (G < 4 * static_cast<std::int64_t>(N) + 4)
        throw ParameterError("hull gadget: grid too small for radius 2N");
    const GridPoint center{G / 2, G / 2};

    // A strictly convex integer polygon with 4N vertices needs a box of side
    // Omega(N^{3/2}) (Andrews), so radius 2N stops working around N = 32.
    // Keep the base radius 2N and deterministically double it until the
    // rounded catalog can be nudged into strict convex position; then every
    // occupancy subset keeps all its W/U nodes as hull vertices. Nudges
    // re-project a slot outward along its exact ray, so the catalog's cyclic
    // order is preserved (deviation sqrt(2)/R < half the slot spacing).
    std::int64_t R = 2 * static_cast<std::int64_t>(N);
    std::vector<GridPoint> slots(4 * N);
    for (;; R *= 2) {
        if (G < 2 * R + 4)
            throw ParameterError("hull gadget: grid too small to host a convex slot catalog");
        std::vector<std::int64_t> bump(4 * N, 0);
        const auto place = [&](std::size_t s) {
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(s) /
                               static_cast<double>(4 * N);
            const double radius = static_cast<double>(R + bump[s]);
            slots[s] = gadget_detail::round_outward(center.x + radius * std::cos(ang),
                                                    center.y + radius * std::sin(ang), center);
        };
        for (std::size_t s = 0; s < 4 * N; ++s) place(s);
        const auto at = [&](std::size_t s) { return slots[s % (4 * N)]; };
        bool ok = true;
        bool changed = true;
        for (int sweep = 0; changed && ok; ++sweep) {
            if (sweep > 64) {
                ok = false;
                break;
            }
            changed = false;
            for (std::size_t s = 0; s < 4 * N && ok; ++s) {
                if (cross(at(s + 4 * N - 1), at(s), at(s + 1)) > 0) continue;
                const GridPoint before = slots[s];
                while (slots[s] == before) {
                    if (++bump[s] > 8) {
                        ok = false;
                        break;
                    }
                    place(s);
                }
                changed = true;
            }
        }
        if (ok) break;
    }

    std::vector<GridPoint> pos(n);
    for (std::size_t i = 1; i <= N; ++i) {
        pos[i - 1] = slots[4 * (i - 1) + (a[i - 1] ? 1 : 0)];
        pos[N + i - 1] = slots[4 * (i - 1) + (b[i - 1] ? 3 : 2)];
    }
    const auto lattice = gadget_detail::disk_lattice_points(center, r, N);
    for (std::size_t i = 0; i < N; ++i) pos[2 * N + i] = lattice[i];

    GadgetInstance inst{GadgetKind::hull,
                        GeoNetwork(pos, gadget_detail::gadget_edges(N, true), c, Knowledge::KT1),
                        a,
                        b,
                        N,
                        c,
                        r,
                        R,
                        0,
                        vectors_intersect(a, b),
                        gadget_detail::first_witness(a, b),
                        std::move(slots)};
    return inst;
}

enum class ClosestVariant : std::uint8_t { base, spread, grouped };

/// Reduction instances for the closest-pair threshold test. Base uses the
/// four rows y = 1..4; spread scales the lattice by k = ceil(N^(c-1)/2);
/// grouped tiles ceil(sqrt N) spread-style bands at pitch 3k+2.
inline GadgetInstance gen_closest_gadget(const CharVector& a, const CharVector& b,
                                         ClosestVariant variant, double c) {
    const std::size_t N = a.size();
    if (N < 2 || b.size() != N)
        throw ParameterError("closest gadget: need |a| = |b| = N >= 2");
    const std::size_t n = 3 * N;
    if (variant != ClosestVariant::base) {
        const double min_c = 1.0 + 1.0 / (2.0 * std::log2(static_cast<double>(n)));
        if (c < min_c - 1e-12)
            throw ParameterError("closest gadget: grid exponent must be > 1 + 1/(2 lg n)");
    }
    const std::int64_t G = grid_side_for(n, c);

    std::vector<GridPoint> pos(n);
    std::int64_t k = 1;
    if (variant == ClosestVariant::base) {
        // w_i at (2i, 0|1), u_i at (2i, 3|2), h_i at (2(i+N), 0 or 3),
        // shifted by +1 onto the 1-based grid.
        for (std::size_t i = 1; i <= N; ++i) {
            const auto x = static_cast<std::int64_t>(2 * i) + 1;
            pos[i - 1] = {x, (a[i - 1] ? 1 : 0) + 1};
            pos[N + i - 1] = {x, (b[i - 1] ? 2 : 3) + 1};
            const auto hx = static_cast<std::int64_t>(2 * (i + N)) + 1;
            pos[2 * N + i - 1] = {hx, (2 * i <= N ? 0 : 3) + 1};
        }
    } else {
        k = static_cast<std::int64_t>(
            std::ceil(std::pow(static_cast<double>(N), c - 1.0) / 2.0));
        k = std::max<std::int64_t>(k, 2);
        if (variant == ClosestVariant::spread) {
            for (std::size_t i = 1; i <= N; ++i) {
                const std::int64_t x = k * static_cast<std::int64_t>(i) + 1;
                pos[i - 1] = {x, (a[i - 1] ? k : 0) + 1};
                pos[N + i - 1] = {x, (b[i - 1] ? k + 1 : 2 * k + 1) + 1};
                const std::int64_t hx = k * static_cast<std::int64_t>(i + N) + 1;
                pos[2 * N + i - 1] = {hx, (2 * i <= N ? 0 : 2 * k + 1) + 1};
            }
        } else {
            // Grouped: ceil(sqrt N) indices per band; band pitch 3k+2 keeps
            // cross-band gaps at k+1. H sits to the right of the W/U columns.
            const auto group_size = static_cast<std::size_t>(
                std::ceil(std::sqrt(static_cast<double>(N))));
            const std::int64_t pitch = 3 * k + 2;
            for (std::size_t i = 1; i <= N; ++i) {
                const std::int64_t g = static_cast<std::int64_t>((i - 1) / group_size);
                const std::int64_t j = static_cast<std::int64_t>((i - 1) % group_size) + 1;
                const std::int64_t base_y = g * pitch;
                pos[i - 1] = {k * j + 1, base_y + (a[i - 1] ? k : 0) + 1};
                pos[N + i - 1] = {k * j + 1, base_y + (b[i - 1] ? k + 1 : 2 * k + 1) + 1};
                const std::int64_t hx = k * (static_cast<std::int64_t>(group_size) + 1 + j) + 1;
                pos[2 * N + i - 1] = {hx, base_y + (2 * j <= static_cast<std::int64_t>(group_size)
                                                        ? 0
                                                        : 2 * k + 1) +
                                              1};
            }
        }
    }
    for (const auto& p : pos)
        if (p.x > G || p.y > G)
            throw ParameterError("closest gadget: construction exceeds the grid");

    const GadgetKind kind = variant == ClosestVariant::base      ? GadgetKind::closest_base
                            : variant == ClosestVariant::spread  ? GadgetKind::closest_spread
                                                                 : GadgetKind::closest_grouped;
    GadgetInstance inst{kind,
                        GeoNetwork(pos, gadget_detail::gadget_edges(N, false), c,
                                   Knowledge::KT1),
                        a,
                        b,
                        N,
                        c,
                        0,
                        0,
                        k,
                        vectors_intersect(a, b),
                        gadget_detail::first_witness(a, b),
                        {}};
    return inst;
}

struct GadgetReport {
    bool claim_holds = false;
    double oracle_value = 0.0;
    double threshold = 0.0;
};

/// Oracle check of the gadget's iff-claim:
///  - diameter: farthest distance >= 2R  iff  the sets intersect
///  - hull: some occupied (slot 1, slot 3) pair of one group is hull-adjacent
///    iff the sets intersect
///  - closest: closest distance <= 1  iff  the sets intersect
inline GadgetReport verify_gadget(const GadgetInstance& inst) {
    GadgetReport report;
    const auto& pos = inst.network.positions();
    switch (inst.kind) {
        case GadgetKind::diameter: {
            const auto far = diameter_oracle(pos);
            report.oracle_value = far.dist;
            report.threshold = 2.0 * static_cast<double>(inst.R);
            const bool at_least_2R =
                far.dist_sq >= 4 * inst.R * inst.R;  // exact integer compare
            report.claim_holds = (at_least_2R == inst.expected_answer);
            return report;
        }
        case GadgetKind::hull: {
            const HullPolygon hull = convex_hull(pos);
            const auto& v = hull.vertices;
            bool fired = false;
            for (std::size_t i = 1; i <= inst.N && !fired; ++i) {
                const GridPoint w_slot = inst.hull_slots[4 * (i - 1) + 1];
                const GridPoint u_slot = inst.hull_slots[4 * (i - 1) + 3];
                if (!(inst.a[i - 1] && inst.b[i - 1])) continue;  // slots unoccupied
                // Both occupied; adjacency on the hull cycle.
                std::ptrdiff_t wi = -1, ui = -1;
                for (std::size_t j = 0; j < v.size(); ++j) {
                    if (v[j] == w_slot) wi = static_cast<std::ptrdiff_t>(j);
                    if (v[j] == u_slot) ui = static_cast<std::ptrdiff_t>(j);
                }
                if (wi < 0 || ui < 0) continue;
                const auto len = static_cast<std::ptrdiff_t>(v.size());
                const auto gap = (ui - wi + len) % len;
                if (gap == 1 || gap == len - 1) fired = true;
            }
            report.oracle_value = fired ? 1.0 : 0.0;
            report.threshold = 0.5;
            report.claim_holds = (fired == inst.expected_answer);
            return report;
        }
        case GadgetKind::closest_base:
        case GadgetKind::closest_spread:
        case GadgetKind::closest_grouped: {
            const auto near = closest_pair_oracle(pos);
            report.oracle_value = near.dist;
            report.threshold = 1.0;
            report.claim_holds = ((near.dist_sq <= 1) == inst.expected_answer);
            return report;
        }
    }
    throw ParameterError("verify_gadget: unknown kind");
}

}  // namespace geonet
