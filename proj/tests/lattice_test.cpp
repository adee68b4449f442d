#include "torsimax/hex_tiling.hpp"
#include "torsimax/lattice.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace torsimax;

namespace {

// Boundary oracle: p is in the closed union and some nearby point in one of eight
// directions is outside it.
bool on_boundary_by_probing(const LatticeDomain& q, Point p) {
    if (!q.contains(p)) return false;
    const double d = 1e-3 * q.eps();
    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
            if (!q.contains({p.x + d * dx, p.y + d * dy})) return true;
    return false;
}

std::set<std::pair<long, long>> as_set(const std::vector<LatticePoint>& pts) {
    std::set<std::pair<long, long>> s;
    for (const auto& p : pts) s.insert({static_cast<long>(p.a), static_cast<long>(p.b)});
    return s;
}

} // namespace

TEST(LatticeDomain, SingleCellBoundaryIsFourCorners) {
    const LatticeDomain q(0.5, {{1, 1}});
    const auto b = as_set(q.discrete_boundary_lattice());
    EXPECT_EQ(b, (std::set<std::pair<long, long>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
    EXPECT_DOUBLE_EQ(q.area(), 0.25);
}

TEST(LatticeDomain, BlockBoundaryExcludesCenter) {
    const LatticeDomain q(1.0, {{1, 1}, {1, 2}, {2, 1}, {2, 2}});
    const auto b = as_set(q.discrete_boundary_lattice());
    EXPECT_EQ(b.size(), 8u);
    EXPECT_EQ(b.count({1, 1}), 0u);
}

TEST(LatticeDomain, RandomPolyominoBoundaryMatchesProbe) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto q = grow_polyomino(20, 0.1, seed);
        const auto b = as_set(q.discrete_boundary_lattice());
        const auto box = q.bounds();
        for (long a = box.imin - 2; a <= box.imax + 1; ++a)
            for (long c = box.jmin - 2; c <= box.jmax + 1; ++c) {
                const bool expected = on_boundary_by_probing(q, q.to_point({a, c}));
                EXPECT_EQ(b.count({a, c}) == 1, expected) << a << "," << c;
            }
        EXPECT_NEAR(q.area(), static_cast<double>(q.size()) * 0.01, 1e-15);
    }
}

TEST(LatticeDomain, CornerTouchingRejected) {
    try {
        LatticeDomain(1.0, {{1, 1}, {2, 2}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::CornerTouching);
    }
    EXPECT_THROW(LatticeDomain(1.0, {}), Error);
    EXPECT_THROW(LatticeDomain(0.0, {{0, 0}}), Error);
}

TEST(LatticeDomain, MembershipOnEdgesAndCorners) {
    const LatticeDomain q(0.1, {{1, 1}, {2, 1}, {1, 2}});
    EXPECT_TRUE(q.contains({0.05, 0.05}));
    EXPECT_TRUE(q.contains_open({0.1, 0.05}));  // shared edge
    EXPECT_TRUE(q.contains({0.2, 0.1}));        // outer corner, closed only
    EXPECT_FALSE(q.contains_open({0.2, 0.1}));
    EXPECT_FALSE(q.contains({0.2, 0.2}));
    EXPECT_FALSE(q.contains_open({0.1, 0.1}));  // reflex corner
    EXPECT_TRUE(q.contains({0.1, 0.1}));
    EXPECT_FALSE(q.contains({0.15, 0.15}));
    EXPECT_TRUE(q.contains_rational(3, 3, 10, false));
    EXPECT_FALSE(q.contains_rational(15, 15, 10, false));
}

TEST(LatticeDomain, DistanceToBoundaryMatchesSegmentOracle) {
    const auto q = grow_polyomino(25, 0.2, 4);
    std::vector<std::array<Point, 2>> segs;
    for (const auto& [i, j] : q.cells()) {
        const double x0 = 0.2 * (i - 1), y0 = 0.2 * (j - 1), x1 = 0.2 * i, y1 = 0.2 * j;
        if (!q.has_cell(i, j - 1)) segs.push_back({Point{x0, y0}, Point{x1, y0}});
        if (!q.has_cell(i, j + 1)) segs.push_back({Point{x0, y1}, Point{x1, y1}});
        if (!q.has_cell(i - 1, j)) segs.push_back({Point{x0, y0}, Point{x0, y1}});
        if (!q.has_cell(i + 1, j)) segs.push_back({Point{x1, y0}, Point{x1, y1}});
    }
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 2000; ++k) {
        const Point p{u(rng), u(rng)};
        double best = 1e300;
        for (const auto& s : segs) {
            // Clamp-projection distance, written out independently.
            const Point d = s[1] - s[0];
            double t = ((p.x - s[0].x) * d.x + (p.y - s[0].y) * d.y) / (d.x * d.x + d.y * d.y);
            t = std::max(0.0, std::min(1.0, t));
            best = std::min(best, std::hypot(p.x - s[0].x - t * d.x, p.y - s[0].y - t * d.y));
        }
        EXPECT_NEAR(q.distance_to_boundary(p), best, 1e-12);
    }
}

TEST(LatticeDomain, JsonRoundTripAndErrors) {
    const auto q = grow_polyomino(12, 0.25, 2);
    const auto back = LatticeDomain::from_json(q.to_json());
    EXPECT_EQ(back.cells(), q.cells());
    EXPECT_DOUBLE_EQ(back.eps(), 0.25);
    try {
        lattice_from_json_text(R"({"eps": 0.1, "cells": [[1, 1], [2, )");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos);
    }
    EXPECT_THROW(lattice_from_json_text(R"({"eps": 0.1, "cells": [[1, 1.5]]})"), Error);
    EXPECT_THROW(lattice_from_json_text(R"({"cells": [[1, 1]]})"), Error);
}

TEST(Classify, SingleCellBothInterior) {
    const LatticeDomain q(1.0, {{1, 1}});
    const auto bm = boundary_mesh(q);
    const auto c = classify_triangles(bm, q);
    EXPECT_EQ(c.interior.size(), 2u);
    EXPECT_TRUE(c.exterior.empty());
}

TEST(Classify, LShapeNoStraddle) {
    const LatticeDomain q(1.0, {{1, 1}, {2, 1}, {1, 2}});
    const auto bm = boundary_mesh(q);
    const auto c = classify_triangles(bm, q);
    double area = 0.0;
    for (std::size_t t : c.interior) area += bm.mesh.triangle(t).area();
    EXPECT_NEAR(area, 3.0, 1e-12);
    // Dense samples along every edge and inside every triangle agree with the class.
    for (std::size_t t = 0; t < bm.mesh.size(); ++t) {
        const bool inside = std::find(c.interior.begin(), c.interior.end(), t) != c.interior.end();
        const Triangle tri = bm.mesh.triangle(t);
        for (int k = 1; k < 40; ++k)
            for (int l = 1; k + l < 40; ++l) {
                const double s = k / 40.0, r = l / 40.0;
                const Point x = tri.vertex(0) + s * (tri.vertex(1) - tri.vertex(0)) + r * (tri.vertex(2) - tri.vertex(0));
                EXPECT_EQ(q.contains_open(x), inside);
            }
    }
}

TEST(Classify, RandomPolyominoCircumcentersInside) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto q = grow_polyomino(30, 0.1, 100 + seed);
        const auto bm = boundary_mesh(q);
        const auto c = classify_triangles(bm, q);
        double area = 0.0;
        for (std::size_t t : c.interior) {
            const auto& v = bm.mesh.triangles[t];
            const auto cc = circumcenter_rational(bm.lattice[static_cast<std::size_t>(v[0])],
                                                  bm.lattice[static_cast<std::size_t>(v[1])],
                                                  bm.lattice[static_cast<std::size_t>(v[2])]);
            EXPECT_TRUE(q.contains_rational(cc.x, cc.y, cc.den, false));
            area += bm.mesh.triangle(t).area();
        }
        // The hull covers q and no triangle straddles, so interior triangles tile q.
        EXPECT_NEAR(area, q.area(), 1e-9);
    }
}

TEST(HexTiling, VerticesAtSideFromNearestCenter) {
    const BoundingBox box{-3.0, -3.0, 3.0, 3.0};
    const auto tiling = hex_tiling(1.0, box);
    const TriangularLattice lat(1.0);
    for (const Point& v : tiling.vertices) EXPECT_NEAR(distance(v, lat.nearest(v)), 1.0, 1e-12);
    const double expected = box.area() / (1.5 * std::sqrt(3.0));
    EXPECT_NEAR(static_cast<double>(tiling.centers.size()), expected, 4.0 * 6.0 / std::sqrt(3.0) + 4.0);
    double closest = 1e300;
    for (std::size_t a = 0; a < tiling.centers.size(); ++a)
        for (std::size_t b = a + 1; b < tiling.centers.size(); ++b)
            closest = std::min(closest, distance(tiling.centers[a], tiling.centers[b]));
    EXPECT_GE(closest, std::sqrt(3.0) - 1e-12);
    // Each hexagon owns two honeycomb vertices.
    const auto big = hex_tiling(1.0, {-10.0, -10.0, 10.0, 10.0});
    const double cells = 400.0 / (1.5 * std::sqrt(3.0));
    const double layer = 80.0 / std::sqrt(3.0) + 4.0;
    EXPECT_NEAR(static_cast<double>(big.centers.size()), cells, layer);
    EXPECT_NEAR(static_cast<double>(big.vertices.size()), 2.0 * cells, 2.0 * layer);
}
