#pragma once

#include "torsimax/geometry.hpp"

#include <functional>

namespace torsimax {

namespace detail {

// Dunavant's degree-5 rule, 7 points, as (barycentric a, b, c; weight).
struct RulePoint {
    double a, b, c, w;
};

inline const std::array<RulePoint, 7>& degree5_rule() {
    static const std::array<RulePoint, 7> rule = [] {
        const double r = std::sqrt(15.0);
        const double a1 = (9.0 - 2.0 * r) / 21.0, b1 = (6.0 + r) / 21.0, w1 = (155.0 + r) / 1200.0;
        const double a2 = (9.0 + 2.0 * r) / 21.0, b2 = (6.0 - r) / 21.0, w2 = (155.0 - r) / 1200.0;
        return std::array<RulePoint, 7>{{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 9.0 / 40.0},
                                         {a1, b1, b1, w1},
                                         {b1, a1, b1, w1},
                                         {b1, b1, a1, w1},
                                         {a2, b2, b2, w2},
                                         {b2, a2, b2, w2},
                                         {b2, b2, a2, w2}}};
    }();
    return rule;
}

template <class F>
double rule_estimate(const F& f, Point p, Point q, Point r) {
    const double area = 0.5 * std::abs(orient2d(p, q, r));
    double sum = 0.0;
    for (const auto& g : degree5_rule()) sum += g.w * f(g.a * p + g.b * q + g.c * r);
    return area * sum;
}

template <class F>
double adapt(const F& f, Point p, Point q, Point r, double whole, double tol, int depth, int max_depth) {
    const Point pq = 0.5 * (p + q), qr = 0.5 * (q + r), rp = 0.5 * (r + p);
    const double k0 = rule_estimate(f, p, pq, rp);
    const double k1 = rule_estimate(f, pq, q, qr);
    const double k2 = rule_estimate(f, rp, qr, r);
    const double k3 = rule_estimate(f, pq, qr, rp);
    const double parts = k0 + k1 + k2 + k3;
    const double err = std::abs(parts - whole);
    if (err <= tol) return parts;
    require(depth < max_depth, ErrorKind::ToleranceNotReached, "triangle quadrature exceeded subdivision depth");
    const double t = 0.5 * tol;
    const int d = depth + 1;
    return adapt(f, p, pq, rp, k0, t, d, max_depth) + adapt(f, pq, q, qr, k1, t, d, max_depth) +
           adapt(f, rp, qr, r, k2, t, d, max_depth) + adapt(f, pq, qr, rp, k3, t, d, max_depth);
}

} // namespace detail

inline constexpr int kQuadratureMaxDepth = 14;

/// Adaptive 4-way midpoint subdivision of the triangle (p, q, r) with a degree-5 rule
/// per piece; stops when a piece and its four children agree to `abs_tol`.
template <class F>
double integrate_triangle(const F& f, Point p, Point q, Point r, double abs_tol, int max_depth = kQuadratureMaxDepth) {
    const double whole = detail::rule_estimate(f, p, q, r);
    return detail::adapt(f, p, q, r, whole, abs_tol, 0, max_depth);
}

/// Part of the triangle closer to vertex i than to the other two, as a convex loop
/// starting at that vertex.
inline std::vector<Point> vertex_region(const Triangle& t, int i) {
    std::vector<Point> poly(t.vertices().begin(), t.vertices().end());
    const Point v = t.vertex(i);
    for (int j = 1; j <= 2; ++j) {
        const auto [n, off] = bisector_half_plane(v, t.vertex((i + j) % 3));
        poly = clip_half_plane(poly, n, off);
    }
    const auto it = std::find(poly.begin(), poly.end(), v);
    if (it != poly.end()) std::rotate(poly.begin(), it, poly.end());
    return poly;
}

/// Exact integral of |x - s| over the triangle (s, p, q): in polar coordinates about s
/// the integrand reduces to rho(phi)^3 / 3, with the sector primitive
/// G(phi) = (tan(phi) sec(phi) + ln(sec(phi) + tan(phi))) / 2.
inline double apex_distance_integral(Point s, Point p, Point q) {
    const Point d = q - p;
    const double len = norm(d);
    if (len == 0.0) return 0.0;
    const Point u = d / len;
    const double a = std::abs(cross(u, p - s));
    if (a == 0.0) return 0.0;
    const double tp = dot(p - s, u) / a;
    const double tq = dot(q - s, u) / a;
    auto G = [](double t) {
        const double sec = std::sqrt(1.0 + t * t);
        return 0.5 * (t * sec + std::asinh(t));
    };
    return a * a * a / 3.0 * std::abs(G(tq) - G(tp));
}

/// Exact integral of |x - s| over a simple polygon, as a signed fan of apex sectors
/// from s; s need not lie in the polygon.
inline double polygon_distance_integral(Point s, std::span<const Point> loop) {
    double total = 0.0;
    for (std::size_t k = 0; k < loop.size(); ++k) {
        const Point p = loop[k], q = loop[(k + 1) % loop.size()];
        const double o = orient2d(s, p, q);
        if (o == 0.0) continue;
        total += (o > 0.0 ? 1.0 : -1.0) * apex_distance_integral(s, p, q);
    }
    return total;
}

/// Integral of the distance to the nearest vertex, by clipping into the three vertex
/// regions and summing exact apex sectors. Valid for every triangle shape.
inline double vertex_distance_integral_sectors(const Triangle& t) {
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto region = vertex_region(t, i);
        for (std::size_t k = 1; k + 1 < region.size(); ++k)
            total += apex_distance_integral(region[0], region[k], region[k + 1]);
    }
    return total;
}

/// Numerical integral of the distance to the nearest vertex, to relative accuracy `tol`.
/// The kinks of the integrand lie on the internal Voronoi edges, so each vertex region
/// is fanned from its vertex and integrated with the adaptive rule.
inline double vertex_distance_integral_quadrature(const Triangle& t, double tol) {
    require(tol > 0.0, ErrorKind::InvalidParameters, "quadrature tolerance must be positive");
    struct Piece {
        Point s, p, q;
    };
    std::vector<Piece> pieces;
    double coarse = 0.0;
    for (int i = 0; i < 3; ++i) {
        const auto region = vertex_region(t, i);
        for (std::size_t k = 1; k + 1 < region.size(); ++k) {
            const Piece piece{region[0], region[k], region[k + 1]};
            if (std::abs(orient2d(piece.s, piece.p, piece.q)) == 0.0) continue;
            pieces.push_back(piece);
            const Point s = piece.s;
            coarse += detail::rule_estimate([s](Point x) { return distance(x, s); }, piece.s, piece.p, piece.q);
        }
    }
    // Pieces share the budget in proportion to their coarse share. The local estimate
    // undershoots on thin pieces near the apex, hence the safety factor.
    double total = 0.0;
    const double budget = tol * coarse / 16.0;
    for (const auto& piece : pieces) {
        const Point s = piece.s;
        auto f = [s](Point x) { return distance(x, s); };
        const double part = detail::rule_estimate(f, piece.s, piece.p, piece.q);
        total += integrate_triangle(f, piece.s, piece.p, piece.q, budget * part / coarse);
    }
    return total;
}

/// Closed form for triangles whose circumcenter lies in the closed triangle. Evaluated
/// at unit circumradius and scaled back by r^3.
inline double vertex_distance_integral_closed(const Triangle& t) {
    require(t.circumcenter_in_closure(), ErrorKind::ObtuseTriangle,
            "closed form needs the circumcenter inside the triangle");
    const double r = t.circumradius();
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double l = t.side(i) / r;
        const double s = std::sqrt(std::max(0.0, 4.0 - l * l));
        const double log_term = s < 1e-13 ? 0.0 : std::log((2.0 + s) / (2.0 - s));
        sum += l * s + 0.25 * l * l * l * log_term;
    }
    return sum / 12.0 * r * r * r;
}

/// Exact integral by the cheapest available formula.
inline double vertex_distance_integral(const Triangle& t) {
    return t.circumcenter_in_closure() ? vertex_distance_integral_closed(t) : vertex_distance_integral_sectors(t);
}

} // namespace torsimax
