#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "geonet/geometry.hpp"

using namespace geonet;

namespace {

// Independent interiority oracle: p is a hull vertex iff it is not contained
// in a triangle or segment spanned by other points.
std::vector<GridPoint> hull_vertices_by_interiority(const std::vector<GridPoint>& input) {
    std::vector<GridPoint> pts = input;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<GridPoint> verts;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        bool covered = false;
        for (std::size_t i = 0; i < pts.size() && !covered; ++i) {
            if (i == p) continue;
            for (std::size_t j = i + 1; j < pts.size() && !covered; ++j) {
                if (j == p) continue;
                if (on_segment(pts[p], pts[i], pts[j])) covered = true;
                for (std::size_t k = j + 1; k < pts.size() && !covered; ++k) {
                    if (k == p) continue;
                    if (cross(pts[i], pts[j], pts[k]) == 0) continue;  // segment case above
                    const auto s1 = cross(pts[i], pts[j], pts[p]);
                    const auto s2 = cross(pts[j], pts[k], pts[p]);
                    const auto s3 = cross(pts[k], pts[i], pts[p]);
                    if ((s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0))
                        covered = true;
                }
            }
        }
        if (!covered) verts.push_back(pts[p]);
    }
    return verts;
}

double brute_width(double angle, const std::vector<GridPoint>& pts) {
    const UnitDir u = unit_for_angle(angle);
    double lo = u.dot(pts[0]), hi = lo;
    for (const auto& p : pts) {
        lo = std::min(lo, u.dot(p));
        hi = std::max(hi, u.dot(p));
    }
    return hi - lo;
}

}  // namespace

TEST_CASE("directional width on axis directions") {
    std::vector<GridPoint> pts{{1, 1}, {4, 5}};
    CHECK(directional_width(0.0, pts) == Catch::Approx(3.0));
    CHECK(directional_width(std::numbers::pi / 2, pts) == Catch::Approx(4.0));
}

TEST_CASE("directional width on the diagonal") {
    std::vector<GridPoint> pts{{1, 1}, {3, 3}, {2, 1}};
    const double expected = brute_width(std::numbers::pi / 4, pts);
    CHECK(expected == Catch::Approx(2.0 * std::sqrt(2.0)));
    CHECK(directional_width(std::numbers::pi / 4, pts) == Catch::Approx(expected));
}

TEST_CASE("directional width rejects empty input") {
    std::vector<GridPoint> none;
    CHECK_THROWS_AS(directional_width(0.0, none), EmptyInputError);
}

TEST_CASE("extreme points along x and y") {
    std::vector<GridPoint> pts{{1, 1}, {4, 5}, {2, 2}};
    auto [mx, mn] = extreme_points_for_line(0.0, pts);
    CHECK(mx == GridPoint{4, 5});
    CHECK(mn == GridPoint{1, 1});

    std::vector<GridPoint> pts2{{3, 7}, {5, 2}, {4, 4}};
    auto [mx2, mn2] = extreme_points_for_line(std::numbers::pi / 2, pts2);
    CHECK(mx2 == GridPoint{3, 7});
    CHECK(mn2 == GridPoint{5, 2});
}

TEST_CASE("extreme points break projection ties lexicographically") {
    std::vector<GridPoint> pts{{1, 1}, {1, 5}};
    auto [mx, mn] = extreme_points_for_line(0.0, pts);
    CHECK(mx == GridPoint{1, 1});
    CHECK(mn == GridPoint{1, 1});

    // Input order must not matter.
    std::vector<GridPoint> rev{{1, 5}, {1, 1}};
    auto [mx2, mn2] = extreme_points_for_line(0.0, rev);
    CHECK(mx2 == mx);
    CHECK(mn2 == mn);
}

TEST_CASE("direction set sizes") {
    CHECK(DirectionSet::make(0.5).line_count() == 4);
    CHECK(DirectionSet::make(0.02).line_count() == 16);
    CHECK(DirectionSet::make(0.125).line_count() == 7);
    CHECK_THROWS_AS(DirectionSet::make(0.0), ParameterError);
    CHECK_THROWS_AS(DirectionSet::make(1.0), ParameterError);
    CHECK_THROWS_AS(DirectionSet::make(-0.2), ParameterError);
}

TEST_CASE("direction set invariants") {
    for (const double eps : {0.5, 0.1, 0.02, 0.125, 0.9}) {
        const auto ds = DirectionSet::make(eps);
        CHECK(ds.delta == Catch::Approx(std::sqrt(2.0 * eps)));
        REQUIRE(!ds.angles.empty());
        CHECK(ds.angles.front() == Catch::Approx(ds.delta));
        for (std::size_t i = 1; i < ds.angles.size(); ++i)
            CHECK(ds.angles[i] - ds.angles[i - 1] == Catch::Approx(ds.delta));
        // Coverage of [0, pi) modulo pi with max gap <= delta.
        std::vector<double> mod;
        for (double a : ds.angles) mod.push_back(std::fmod(a, std::numbers::pi));
        mod.push_back(0.0);
        mod.push_back(std::numbers::pi);
        std::sort(mod.begin(), mod.end());
        for (std::size_t i = 1; i < mod.size(); ++i)
            CHECK(mod[i] - mod[i - 1] <= ds.delta + 1e-12);
    }
}

TEST_CASE("convex hull of a square with interior point") {
    std::vector<GridPoint> pts{{0, 0}, {4, 0}, {4, 4}, {0, 4}, {2, 2}};
    const auto hull = convex_hull(pts);
    REQUIRE(hull.vertices.size() == 4);
    CHECK(hull.vertices[0] == GridPoint{0, 0});
    CHECK(hull.vertices[1] == GridPoint{4, 0});
    CHECK(hull.vertices[2] == GridPoint{4, 4});
    CHECK(hull.vertices[3] == GridPoint{0, 4});
    CHECK(!hull.degenerate());
}

TEST_CASE("degenerate hulls") {
    std::vector<GridPoint> one{{1, 1}};
    auto h1 = convex_hull(one);
    CHECK(h1.degenerate());
    CHECK(h1.vertices == std::vector<GridPoint>{{1, 1}});

    std::vector<GridPoint> collinear{{1, 1}, {3, 3}, {2, 2}, {5, 5}};
    auto h2 = convex_hull(collinear);
    CHECK(h2.degenerate());
    CHECK(h2.vertices == std::vector<GridPoint>{{1, 1}, {5, 5}});
}

TEST_CASE("convex hull matches interiority oracle on random small sets") {
    std::mt19937_64 rng(20240817);
    std::uniform_int_distribution<std::int64_t> coord(1, 5);
    std::uniform_int_distribution<int> size(1, 8);
    for (int draw = 0; draw < 1000; ++draw) {
        std::vector<GridPoint> pts;
        const int n = size(rng);
        for (int i = 0; i < n; ++i) pts.push_back({coord(rng), coord(rng)});

        const auto hull = convex_hull(pts);
        std::vector<GridPoint> got = hull.vertices;
        std::sort(got.begin(), got.end());
        const auto expected = hull_vertices_by_interiority(pts);
        REQUIRE(got == expected);

        // Canonical form: CCW, strictly convex, starts at the lexicographic
        // minimum, and contains every input point.
        if (!hull.degenerate()) {
            const auto& v = hull.vertices;
            CHECK(v[0] == *std::min_element(v.begin(), v.end()));
            for (std::size_t i = 0; i < v.size(); ++i) {
                const auto a = v[i], b = v[(i + 1) % v.size()], c = v[(i + 2) % v.size()];
                CHECK(cross(a, b, c) > 0);
            }
        }
        for (const auto& p : pts) CHECK(hull_contains(hull, p));
    }
}

TEST_CASE("diameter and closest pair oracles") {
    std::vector<GridPoint> pts{{0, 0}, {3, 4}, {1, 1}};
    const auto far = diameter_oracle(pts);
    CHECK(far.a == GridPoint{0, 0});
    CHECK(far.b == GridPoint{3, 4});
    CHECK(far.dist == Catch::Approx(5.0));

    const auto near = closest_pair_oracle(pts);
    CHECK(near.a == GridPoint{0, 0});
    CHECK(near.b == GridPoint{1, 1});
    CHECK(near.dist == Catch::Approx(std::sqrt(2.0)));

    std::vector<GridPoint> single{{1, 2}};
    CHECK_THROWS_AS(diameter_oracle(single), EmptyInputError);
    CHECK_THROWS_AS(closest_pair_oracle(single), EmptyInputError);
}

TEST_CASE("distance to hull") {
    std::vector<GridPoint> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto hull = convex_hull(square);
    CHECK(distance_to_hull({2, 2}, hull) == Catch::Approx(std::sqrt(2.0)));
    CHECK(distance_to_hull({0, 0}, hull) == 0.0);
    CHECK(distance_to_hull({1, 1}, hull) == 0.0);

    // Degenerate hulls fall back to segment / point distance.
    std::vector<GridPoint> seg{{0, 0}, {4, 0}};
    CHECK(distance_to_hull({2, 3}, convex_hull(seg)) == Catch::Approx(3.0));
    std::vector<GridPoint> pt{{5, 5}};
    CHECK(distance_to_hull({5, 9}, convex_hull(pt)) == Catch::Approx(4.0));
}

TEST_CASE("width monotonicity and projection bound") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> coord(1, 1000);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<GridPoint> pts;
        for (int i = 0; i < 40; ++i) pts.push_back({coord(rng), coord(rng)});
        std::vector<GridPoint> sub(pts.begin(), pts.begin() + 10);

        const auto far = diameter_oracle(pts);
        for (int j = 0; j < 32; ++j) {
            const double ang = std::numbers::pi * j / 32.0;
            CHECK(directional_width(ang, sub) <= directional_width(ang, pts) + 1e-9);
            CHECK(directional_width(ang, pts) <= far.dist + 1e-9);
        }
    }
}
