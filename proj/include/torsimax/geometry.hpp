#pragma once

#include "torsimax/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace torsimax {

inline constexpr double kPi = std::numbers::pi;

/// Value of E on equilateral triangles; also the mean of |x| over the unit-circumradius hexagon.
inline const double kHoneycombConstant = 1.0 / 3.0 + std::log(3.0) / 4.0;

struct Point {
    double x = 0.0;
    double y = 0.0;

    constexpr Point() = default;
    constexpr Point(double x_, double y_) : x(x_), y(y_) {}

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend constexpr Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
    friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Point a, Point b) = default;
    friend constexpr auto operator<=>(Point a, Point b) = default;
};

/// Constructor-style check; geometry entry points reject NaN/inf coordinates.
inline Point make_point(double x, double y) {
    require(std::isfinite(x) && std::isfinite(y), ErrorKind::InvalidParameters,
            "point coordinates must be finite");
    return {x, y};
}

constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
constexpr double squared_distance(Point a, Point b) { return dot(a - b, a - b); }

/// Twice the signed area of (a, b, c); positive when counterclockwise.
constexpr double orient2d(Point a, Point b, Point c) { return cross(b - a, c - a); }

/// Standard in-circle determinant, positive when d lies inside the circle through the
/// counterclockwise triple (a, b, c). Computed relative to d.
constexpr double incircle_det(Point a, Point b, Point c, Point d) {
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double ad = adx * adx + ady * ady;
    const double bd = bdx * bdx + bdy * bdy;
    const double cd = cdx * cdx + cdy * cdy;
    return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

enum class CircleSide { inside, on, outside };

inline constexpr double kOrientTolerance = 1e-14;   // relative to scale^2
inline constexpr double kIncircleTolerance = 1e-10; // relative to scale^4

/// Half-width of the "on circle" band for the triple (a, b, c): 1e-10 times the fourth
/// power of its longest side.
inline double incircle_band(Point a, Point b, Point c) {
    const double s2 = std::max({squared_distance(a, b), squared_distance(b, c), squared_distance(c, a)});
    return kIncircleTolerance * s2 * s2;
}

struct Circle {
    Point center;
    double radius = 0.0;
};

class Triangle {
public:
    /// Vertices are reordered counterclockwise; throws DegenerateTriangle when the
    /// area does not exceed 1e-14 * scale^2 (scale = longest side).
    Triangle(Point a, Point b, Point c) : v_{a, b, c} {
        for (const Point& p : v_) {
            require(std::isfinite(p.x) && std::isfinite(p.y), ErrorKind::InvalidParameters,
                    "triangle vertices must be finite");
        }
        double o = orient2d(a, b, c);
        if (o < 0.0) {
            std::swap(v_[1], v_[2]);
            o = -o;
        }
        for (int i = 0; i < 3; ++i) sides_[i] = distance(v_[(i + 1) % 3], v_[(i + 2) % 3]);
        const double scale = std::max({sides_[0], sides_[1], sides_[2]});
        require(scale > 0.0 && 0.5 * o > kOrientTolerance * scale * scale,
                ErrorKind::DegenerateTriangle, "vertices are collinear within tolerance");
        area_ = 0.5 * o;

        // Circumcenter relative to v0 keeps cancellation local.
        const Point b0 = v_[1] - v_[0];
        const Point c0 = v_[2] - v_[0];
        const double bb = dot(b0, b0), cc = dot(c0, c0);
        const double den = 2.0 * cross(b0, c0);
        const Point rel{(c0.y * bb - b0.y * cc) / den, (b0.x * cc - c0.x * bb) / den};
        center_ = v_[0] + rel;
        // Mean of the three vertex distances; they agree to rounding.
        radius_ = (norm(rel) + distance(center_, v_[1]) + distance(center_, v_[2])) / 3.0;
    }

    const std::array<Point, 3>& vertices() const { return v_; }
    const Point& vertex(int i) const { return v_[static_cast<std::size_t>(i)]; }
    /// side(i) is the length of the side opposite vertex i.
    double side(int i) const { return sides_[static_cast<std::size_t>(i)]; }
    const std::array<double, 3>& sides() const { return sides_; }
    double area() const { return area_; }
    Point circumcenter() const { return center_; }
    double circumradius() const { return radius_; }
    double scale() const { return std::max({sides_[0], sides_[1], sides_[2]}); }
    Point centroid() const { return (v_[0] + v_[1] + v_[2]) / 3.0; }

    /// Interior angle at vertex i.
    double angle(int i) const {
        const Point u = vertex((i + 1) % 3) - vertex(i);
        const Point w = vertex((i + 2) % 3) - vertex(i);
        return std::atan2(std::abs(cross(u, w)), dot(u, w));
    }

    /// Closed-triangle membership with a relative tolerance on barycentric signs.
    bool contains(Point p, double rel_tol = 1e-12) const {
        const double tol = rel_tol * scale() * scale();
        for (int i = 0; i < 3; ++i) {
            if (orient2d(vertex(i), vertex((i + 1) % 3), p) < -tol) return false;
        }
        return true;
    }

    bool circumcenter_in_closure(double rel_tol = 1e-12) const { return contains(center_, rel_tol); }

    /// Largest angle is strictly above pi/2 (beyond a relative tolerance on the law of cosines).
    bool is_obtuse(double rel_tol = 1e-12) const {
        const auto s = sorted_squared_sides();
        return s[2] > (s[0] + s[1]) * (1.0 + rel_tol);
    }

    bool is_right(double rel_tol = 1e-12) const {
        const auto s = sorted_squared_sides();
        return std::abs(s[2] - (s[0] + s[1])) <= rel_tol * (s[0] + s[1]);
    }

    Triangle translated(Point d) const { return {v_[0] + d, v_[1] + d, v_[2] + d}; }
    Triangle scaled(double s) const { return {s * v_[0], s * v_[1], s * v_[2]}; }
    Triangle rotated(double theta) const {
        const double c = std::cos(theta), s = std::sin(theta);
        auto r = [&](Point p) { return Point{c * p.x - s * p.y, s * p.x + c * p.y}; };
        return {r(v_[0]), r(v_[1]), r(v_[2])};
    }

private:
    std::array<double, 3> sorted_squared_sides() const {
        std::array<double, 3> s{sides_[0] * sides_[0], sides_[1] * sides_[1], sides_[2] * sides_[2]};
        std::sort(s.begin(), s.end());
        return s;
    }

    std::array<Point, 3> v_;
    std::array<double, 3> sides_{};
    double area_ = 0.0;
    Point center_;
    double radius_ = 0.0;
};

inline Circle circumcircle(const Triangle& t) { return {t.circumcenter(), t.circumradius()}; }

inline CircleSide in_circumcircle(const Triangle& t, Point p) {
    const double det = incircle_det(t.vertex(0), t.vertex(1), t.vertex(2), p);
    const double band = incircle_band(t.vertex(0), t.vertex(1), t.vertex(2));
    if (det > band) return CircleSide::inside;
    if (det < -band) return CircleSide::outside;
    return CircleSide::on;
}

/// Signed shoelace area; positive for counterclockwise loops.
inline double polygon_area(std::span<const Point> loop) {
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) a += cross(loop[i], loop[(i + 1) % loop.size()]);
    return 0.5 * a;
}

/// Andrew's monotone chain; counterclockwise, collinear points dropped.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Point& p : pts) {
        while (k >= 2 && orient2d(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orient2d(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

/// Keeps the part of a convex polygon where dot(normal, x) <= offset (Sutherland-Hodgman step).
inline std::vector<Point> clip_half_plane(std::span<const Point> poly, Point normal, double offset) {
    std::vector<Point> out;
    out.reserve(poly.size() + 1);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        const double da = dot(normal, a) - offset;
        const double db = dot(normal, b) - offset;
        if (da <= 0.0) out.push_back(a);
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    return out;
}

/// The half-plane of points at least as close to `site` as to `other`, as (normal, offset).
inline std::pair<Point, double> bisector_half_plane(Point site, Point other) {
    const Point normal = other - site;
    const double offset = 0.5 * (dot(other, other) - dot(site, site));
    return {normal, offset};
}

} // namespace torsimax
