#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "geonet/errors.hpp"

namespace geonet {

/// Integer planar position on the [1..G]^2 grid.
/// operator<=> gives the lexicographic (x, y) order used by every
/// deterministic tie-break in the library.
struct GridPoint {
    std::int64_t x = 0;
    std::int64_t y = 0;

    friend constexpr auto operator<=>(const GridPoint&, const GridPoint&) = default;
};

inline std::int64_t squared_distance(GridPoint a, GridPoint b) {
    const std::int64_t dx = a.x - b.x;
    const std::int64_t dy = a.y - b.y;
    return dx * dx + dy * dy;
}

inline double distance(GridPoint a, GridPoint b) {
    return std::sqrt(static_cast<double>(squared_distance(a, b)));
}

/// Unit direction for a line angle (radians, measured from the x-axis).
struct UnitDir {
    double ux = 1.0;
    double uy = 0.0;

    double dot(GridPoint p) const {
        return ux * static_cast<double>(p.x) + uy * static_cast<double>(p.y);
    }
};

inline UnitDir unit_for_angle(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Spread of the projections of `points` onto the direction at `angle`.
inline double directional_width(double angle, std::span<const GridPoint> points) {
    if (points.empty()) throw EmptyInputError("directional_width: empty point set");
    if (!std::isfinite(angle)) throw ParameterError("directional_width: non-finite angle");
    const UnitDir u = unit_for_angle(angle);
    double lo = u.dot(points[0]);
    double hi = lo;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d = u.dot(points[i]);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return hi - lo;
}

/// (argmax, argmin) of the projection onto the line at `angle`.
/// Ties in the projection are broken toward the lexicographically smallest
/// point, which makes the result independent of input order.
inline std::pair<GridPoint, GridPoint> extreme_points_for_line(double angle,
                                                               std::span<const GridPoint> points) {
    if (points.empty()) throw EmptyInputError("extreme_points_for_line: empty point set");
    const UnitDir u = unit_for_angle(angle);
    GridPoint max_p = points[0];
    GridPoint min_p = points[0];
    double max_d = u.dot(points[0]);
    double min_d = max_d;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double d = u.dot(points[i]);
        if (d > max_d || (d == max_d && points[i] < max_p)) {
            max_d = d;
            max_p = points[i];
        }
        if (d < min_d || (d == min_d && points[i] < min_p)) {
            min_d = d;
            min_p = points[i];
        }
    }
    return {max_p, min_p};
}

/// The rounded direction set: angles delta*i for i = 1..ceil(pi/delta),
/// delta = sqrt(2*epsilon). The last angle may exceed pi; projection code
/// treats lines modulo pi, so the <= delta gap over [0, pi) is preserved.
struct DirectionSet {
    double epsilon = 0.0;
    double delta = 0.0;
    std::vector<double> angles;

    std::size_t line_count() const { return angles.size(); }
    UnitDir unit(std::size_t i) const { return unit_for_angle(angles[i]); }

    static DirectionSet make(double epsilon) {
        if (!(epsilon > 0.0) || !(epsilon < 1.0))
            throw ParameterError("DirectionSet: epsilon must lie in (0,1)");
        DirectionSet ds;
        ds.epsilon = epsilon;
        ds.delta = std::sqrt(2.0 * epsilon);
        const auto count =
            static_cast<std::size_t>(std::ceil(std::numbers::pi / ds.delta));
        ds.angles.reserve(count);
        for (std::size_t i = 1; i <= count; ++i)
            ds.angles.push_back(ds.delta * static_cast<double>(i));
        return ds;
    }
};

inline DirectionSet make_direction_set(double epsilon) { return DirectionSet::make(epsilon); }

/// Convex polygon in canonical form: counterclockwise, strictly convex,
/// first vertex lexicographically smallest. Fewer than 3 vertices marks a
/// degenerate (point or segment) hull.
struct HullPolygon {
    std::vector<GridPoint> vertices;

    bool degenerate() const { return vertices.size() < 3; }
};

// Cross product of (b-a) x (c-a). Positive = left turn (counterclockwise).
inline std::int64_t cross(GridPoint a, GridPoint b, GridPoint c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Strict convex hull by monotone chain; collinear boundary points dropped.
inline HullPolygon convex_hull(std::span<const GridPoint> points) {
    if (points.empty()) throw EmptyInputError("convex_hull: empty point set");
    std::vector<GridPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    if (pts.size() <= 2) return HullPolygon{std::move(pts)};

    const std::size_t n = pts.size();
    std::vector<GridPoint> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower chain
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {  // upper chain
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);  // last point equals the first
    if (hull.size() == 2 && hull[0] == hull[1]) hull.resize(1);
    return HullPolygon{std::move(hull)};
}

// Is p on the segment [a, b]?
inline bool on_segment(GridPoint p, GridPoint a, GridPoint b) {
    if (cross(a, b, p) != 0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Exact membership test: p inside or on the boundary of the hull.
inline bool hull_contains(const HullPolygon& hull, GridPoint p) {
    const auto& v = hull.vertices;
    if (v.empty()) return false;
    if (v.size() == 1) return p == v[0];
    if (v.size() == 2) return on_segment(p, v[0], v[1]);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (cross(v[i], v[(i + 1) % v.size()], p) < 0) return false;
    }
    return true;
}

inline double point_segment_distance(GridPoint p, GridPoint a, GridPoint b) {
    const double ax = static_cast<double>(a.x), ay = static_cast<double>(a.y);
    const double bx = static_cast<double>(b.x), by = static_cast<double>(b.y);
    const double px = static_cast<double>(p.x), py = static_cast<double>(p.y);
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return distance(p, a);
    double t = ((px - ax) * dx + (py - ay) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = ax + t * dx, cy = ay + t * dy;
    return std::hypot(px - cx, py - cy);
}

/// 0 for points inside or on the hull, otherwise the Euclidean distance to
/// the nearest edge or vertex. Degenerate hulls reduce to segment/point
/// distance.
inline double distance_to_hull(GridPoint p, const HullPolygon& hull) {
    const auto& v = hull.vertices;
    if (v.empty()) throw EmptyInputError("distance_to_hull: empty hull");
    if (v.size() == 1) return distance(p, v[0]);
    if (v.size() == 2) return point_segment_distance(p, v[0], v[1]);
    if (hull_contains(hull, p)) return 0.0;
    double best = point_segment_distance(p, v.back(), v.front());
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
        best = std::min(best, point_segment_distance(p, v[i], v[i + 1]));
    return best;
}

/// Result of the brute-force pair oracles. The pair is normalized a <= b and
/// is the lexicographically smallest pair achieving the extreme distance.
struct PointPair {
    GridPoint a;
    GridPoint b;
    double dist = 0.0;
    std::int64_t dist_sq = 0;
};

namespace detail {

template <class Better>
PointPair scan_pairs(std::span<const GridPoint> points, Better better, const char* who) {
    if (points.size() < 2) throw EmptyInputError(std::string(who) + ": need at least 2 points");
    std::vector<GridPoint> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end());
    PointPair result{pts[0], pts[1], 0.0, squared_distance(pts[0], pts[1])};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const std::int64_t d2 = squared_distance(pts[i], pts[j]);
            if (better(d2, result.dist_sq)) {
                result = PointPair{pts[i], pts[j], 0.0, d2};
            }
        }
    }
    result.dist = std::sqrt(static_cast<double>(result.dist_sq));
    return result;
}

}  // namespace detail

/// Exact farthest pair, O(n^2).
inline PointPair diameter_oracle(std::span<const GridPoint> points) {
    return detail::scan_pairs(
        points, [](std::int64_t d2, std::int64_t best) { return d2 > best; }, "diameter_oracle");
}

/// Exact closest pair, O(n^2).
inline PointPair closest_pair_oracle(std::span<const GridPoint> points) {
    return detail::scan_pairs(
        points, [](std::int64_t d2, std::int64_t best) { return d2 < best; },
        "closest_pair_oracle");
}

}  // namespace geonet
