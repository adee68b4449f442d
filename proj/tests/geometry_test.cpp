#include "torsimax/geometry.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace torsimax;

namespace {

// Equidistant point from a 2x2 solve of the two perpendicular-bisector equations.
Point bisector_solve(Point a, Point b, Point c) {
    const double a11 = 2.0 * (b.x - a.x), a12 = 2.0 * (b.y - a.y);
    const double a21 = 2.0 * (c.x - a.x), a22 = 2.0 * (c.y - a.y);
    const double r1 = dot(b, b) - dot(a, a);
    const double r2 = dot(c, c) - dot(a, a);
    const double det = a11 * a22 - a12 * a21;
    return {(r1 * a22 - a12 * r2) / det, (a11 * r2 - r1 * a21) / det};
}

} // namespace

TEST(Triangle, EquilateralOnUnitCircle) {
    const Triangle t({1.0, 0.0}, {std::cos(2 * kPi / 3), std::sin(2 * kPi / 3)},
                     {std::cos(4 * kPi / 3), std::sin(4 * kPi / 3)});
    const Circle c = circumcircle(t);
    EXPECT_NEAR(c.center.x, 0.0, 1e-14);
    EXPECT_NEAR(c.center.y, 0.0, 1e-14);
    EXPECT_NEAR(c.radius, 1.0, 1e-14);
}

TEST(Triangle, RightTriangleCenterAtHypotenuseMidpoint) {
    const Triangle t({0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0});
    EXPECT_NEAR(t.circumcenter().x, 1.0, 1e-14);
    EXPECT_NEAR(t.circumcenter().y, 1.0, 1e-14);
    EXPECT_NEAR(t.circumradius(), std::sqrt(2.0), 1e-14);
    EXPECT_TRUE(t.is_right());
    EXPECT_FALSE(t.is_obtuse());
}

TEST(Triangle, RandomMatchesLinearSolve) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const Point a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
        if (std::abs(orient2d(a, b, c)) < 1e-3) continue;
        const Triangle t(a, b, c);
        const Point ref = bisector_solve(a, b, c);
        EXPECT_NEAR(t.circumcenter().x, ref.x, 1e-9);
        EXPECT_NEAR(t.circumcenter().y, ref.y, 1e-9);
        EXPECT_GT(t.area(), 0.0);
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(distance(t.circumcenter(), t.vertex(k)) / t.circumradius(), 1.0, 1e-12);
            EXPECT_NEAR(t.side(k), distance(t.vertex((k + 1) % 3), t.vertex((k + 2) % 3)), 1e-15);
        }
    }
}

TEST(Triangle, NormalizesToCounterclockwise) {
    const Triangle t({0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0});
    EXPECT_GT(orient2d(t.vertex(0), t.vertex(1), t.vertex(2)), 0.0);
    EXPECT_DOUBLE_EQ(t.area(), 0.5);
}

TEST(Triangle, CollinearRejected) {
    try {
        Triangle({0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateTriangle);
    }
    EXPECT_THROW(make_point(std::nan(""), 0.0), Error);
}

TEST(InCircumcircle, TriState) {
    const Triangle t({0.0, 0.0}, {3.0, 0.5}, {1.0, 2.0});
    EXPECT_EQ(in_circumcircle(t, t.circumcenter()), CircleSide::inside);
    for (int k = 0; k < 3; ++k) EXPECT_EQ(in_circumcircle(t, t.vertex(k)), CircleSide::on);
    const Point far = t.circumcenter() + Point{2.0 * t.circumradius(), 0.0};
    EXPECT_EQ(in_circumcircle(t, far), CircleSide::outside);
}

TEST(Polygon, HullAndArea) {
    std::vector<Point> pts{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.5, 0.0}};
    const auto hull = convex_hull(pts);
    EXPECT_EQ(hull.size(), 4u);
    EXPECT_DOUBLE_EQ(polygon_area(hull), 1.0);
}

TEST(Polygon, ClipHalfPlane) {
    const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto [n, off] = bisector_half_plane({0.0, 0.0}, {1.0, 0.0});
    const auto half = clip_half_plane(sq, n, off);
    EXPECT_NEAR(polygon_area(half), 0.5, 1e-15);
    EXPECT_NEAR(point_segment_distance({0.5, 1.0}, {0.0, 0.0}, {1.0, 0.0}), 1.0, 1e-15);
    EXPECT_NEAR(point_segment_distance({2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}), 1.0, 1e-15);
}
