#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "geonet/geometry.hpp"

namespace geonet {

/// Per-line extreme pairs over a point set: for angle i of the direction set,
/// extremes[i] = (argmax, argmin) of the projection, with the library's
/// lexicographic tie-break. points() flattens to the deduplicated set.
struct KernelSet {
    std::vector<std::pair<GridPoint, GridPoint>> extremes;

    std::vector<GridPoint> points() const {
        std::vector<GridPoint> pts;
        pts.reserve(2 * extremes.size());
        for (const auto& [mx, mn] : extremes) {
            pts.push_back(mx);
            pts.push_back(mn);
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }
};

/// Extreme points for every line of the direction set.
inline KernelSet kernel_of(std::span<const GridPoint> points, const DirectionSet& dirs) {
    if (points.empty()) throw EmptyInputError("kernel_of: empty point set");
    KernelSet ks;
    ks.extremes.reserve(dirs.line_count());
    for (std::size_t i = 0; i < dirs.line_count(); ++i)
        ks.extremes.push_back(extreme_points_for_line(dirs.angles[i], points));
    return ks;
}

/// Recomputes the kernel over the union of the constituent points of
/// `kernels` plus the optional extra point. Because per-line extremes are a
/// fold over a total order, this equals the kernel of the union of the
/// underlying sets: associative, commutative, idempotent.
inline KernelSet combine_kernels(std::span<const KernelSet> kernels,
                                 std::optional<GridPoint> extra, const DirectionSet& dirs) {
    std::vector<GridPoint> pool;
    for (const auto& k : kernels) {
        if (k.extremes.size() != dirs.line_count())
            throw ParameterError("combine_kernels: kernel built over a different direction set");
        for (const auto& [mx, mn] : k.extremes) {
            pool.push_back(mx);
            pool.push_back(mn);
        }
    }
    if (extra) pool.push_back(*extra);
    if (pool.empty()) throw EmptyInputError("combine_kernels: nothing to combine");
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    return kernel_of(pool, dirs);
}

struct KernelVerifyReport {
    bool ok = false;
    double worst_ratio = 1.0;
    double worst_angle = 0.0;
};

/// Checks (1-eps)*w(u,P) <= w(u,Q) over sample_factor * ceil(pi/delta)
/// uniformly spaced directions plus all directions orthogonal to segments
/// between hull vertices of P. Comparisons use relative tolerance 1e-9.
inline KernelVerifyReport verify_eps_kernel(const KernelSet& candidate,
                                            std::span<const GridPoint> points, double epsilon,
                                            int sample_factor = 4) {
    if (points.empty()) throw EmptyInputError("verify_eps_kernel: empty point set");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw ParameterError("verify_eps_kernel: epsilon must lie in (0,1)");
    if (sample_factor < 1) throw ParameterError("verify_eps_kernel: sample_factor must be >= 1");

    const std::vector<GridPoint> cand = candidate.points();
    {
        std::vector<GridPoint> sorted(points.begin(), points.end());
        std::sort(sorted.begin(), sorted.end());
        for (const GridPoint& p : cand) {
            if (!std::binary_search(sorted.begin(), sorted.end(), p))
                throw ContainmentError("verify_eps_kernel: candidate point not in point set");
        }
    }

    std::vector<double> test_angles;
    const double delta = std::sqrt(2.0 * epsilon);
    const auto samples = static_cast<std::size_t>(sample_factor) *
                         static_cast<std::size_t>(std::ceil(std::numbers::pi / delta));
    test_angles.reserve(samples);
    for (std::size_t j = 0; j < samples; ++j)
        test_angles.push_back(std::numbers::pi * static_cast<double>(j) /
                              static_cast<double>(samples));

    const HullPolygon hull = convex_hull(points);
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < hull.vertices.size(); ++j) {
            const GridPoint a = hull.vertices[i];
            const GridPoint b = hull.vertices[j];
            double ang = std::atan2(static_cast<double>(b.y - a.y),
                                    static_cast<double>(b.x - a.x)) +
                         std::numbers::pi / 2.0;
            while (ang < 0.0) ang += std::numbers::pi;
            while (ang >= std::numbers::pi) ang -= std::numbers::pi;
            test_angles.push_back(ang);
        }
    }

    KernelVerifyReport report;
    report.ok = true;
    bool first = true;
    for (const double ang : test_angles) {
        const double wp = directional_width(ang, points);
        const double wq = directional_width(ang, cand);
        const double ratio = (wp == 0.0) ? 1.0 : wq / wp;
        if (first || ratio < report.worst_ratio) {
            report.worst_ratio = ratio;
            report.worst_angle = ang;
            first = false;
        }
        if (wq < (1.0 - epsilon) * wp - 1e-9 * std::max(1.0, wp)) report.ok = false;
    }
    return report;
}

}  // namespace geonet
