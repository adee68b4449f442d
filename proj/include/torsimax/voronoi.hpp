#pragma once

#include "torsimax/delaunay.hpp"

namespace torsimax {

/// Voronoi cell of one site. `vertices` run counterclockwise around the site. An
/// unbounded cell is closed by two rays: `first_ray` leaves vertices.front() and
/// `last_ray` leaves vertices.back(), both pointing to infinity.
struct VoronoiCell {
    int site = -1;
    std::vector<Point> vertices;
    bool bounded = true;
    Point first_ray;
    Point last_ray;

    /// Closed-cell membership; `tol` is an absolute distance slack.
    bool contains(Point p, double tol = 1e-9) const {
        auto left_of = [&](Point a, Point dir) {
            const double len = norm(dir);
            if (len == 0.0) return true;
            return cross(dir, p - a) / len >= -tol;
        };
        const std::size_t n = vertices.size();
        if (bounded) {
            for (std::size_t i = 0; i < n; ++i)
                if (!left_of(vertices[i], vertices[(i + 1) % n] - vertices[i])) return false;
            return true;
        }
        if (!left_of(vertices.front(), -1.0 * first_ray)) return false;
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!left_of(vertices[i], vertices[i + 1] - vertices[i])) return false;
        return left_of(vertices.back(), last_ray);
    }
};

namespace detail {

inline Point outward_normal(Point from, Point to) {
    const Point d = to - from;
    const Point n{d.y, -d.x};
    return n / norm(n);
}

} // namespace detail

/// Dual of a Delaunay mesh: one cell per site, vertices at circumcenters of the
/// incident triangles. Hull sites get unbounded cells.
inline std::vector<VoronoiCell> voronoi_dual(const DelaunayMesh& mesh) {
    const std::size_t n = mesh.sites.size();
    std::vector<int> any_triangle(n, -1);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        for (int v : mesh.triangles[t]) any_triangle[static_cast<std::size_t>(v)] = static_cast<int>(t);

    auto slot_of = [&](int t, int site) {
        const auto& v = mesh.triangles[static_cast<std::size_t>(t)];
        for (int k = 0; k < 3; ++k)
            if (v[static_cast<std::size_t>(k)] == site) return k;
        return -1;
    };

    std::vector<Point> centers(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) centers[t] = mesh.triangle(t).circumcenter();

    std::vector<VoronoiCell> cells(n);
    for (std::size_t s = 0; s < n; ++s) {
        VoronoiCell& cell = cells[s];
        cell.site = static_cast<int>(s);
        const int start = any_triangle[s];
        if (start < 0) continue;
        const int site = static_cast<int>(s);

        // Rotate clockwise to the first triangle of the fan (or back to start).
        int first = start;
        bool closed = false;
        for (std::size_t guard = 0; guard <= mesh.triangles.size(); ++guard) {
            const int k = slot_of(first, site);
            const int prev = mesh.neighbors[static_cast<std::size_t>(first)][static_cast<std::size_t>((k + 2) % 3)];
            if (prev < 0) break;
            first = prev;
            if (first == start) {
                closed = true;
                break;
            }
        }
        std::vector<int> fan;
        int t = first;
        for (std::size_t guard = 0; guard <= mesh.triangles.size(); ++guard) {
            fan.push_back(t);
            const int k = slot_of(t, site);
            const int next = mesh.neighbors[static_cast<std::size_t>(t)][static_cast<std::size_t>((k + 1) % 3)];
            if (next < 0 || next == first) break;
            t = next;
        }
        for (int f : fan) cell.vertices.push_back(centers[static_cast<std::size_t>(f)]);
        cell.bounded = closed;
        if (!closed) {
            const auto& tf = mesh.triangles[static_cast<std::size_t>(fan.front())];
            const int kf = slot_of(fan.front(), site);
            const Point a = mesh.sites[static_cast<std::size_t>(tf[static_cast<std::size_t>((kf + 1) % 3)])];
            cell.first_ray = detail::outward_normal(mesh.sites[s], a);
            const auto& tl = mesh.triangles[static_cast<std::size_t>(fan.back())];
            const int kl = slot_of(fan.back(), site);
            const Point c = mesh.sites[static_cast<std::size_t>(tl[static_cast<std::size_t>((kl + 2) % 3)])];
            cell.last_ray = detail::outward_normal(c, mesh.sites[s]);
        }
    }
    return cells;
}

/// Cells for an arbitrary site list. Two sites give two half-planes split by the
/// bisector; three or more go through the Delaunay dual.
inline std::vector<VoronoiCell> voronoi_cells(std::span<const Point> sites) {
    if (sites.size() == 2) {
        require(sites[0] != sites[1], ErrorKind::DuplicateSites, "duplicate sites");
        const Point mid = 0.5 * (sites[0] + sites[1]);
        std::vector<VoronoiCell> cells(2);
        for (int i = 0; i < 2; ++i) {
            const Point own = sites[static_cast<std::size_t>(i)];
            const Point other = sites[static_cast<std::size_t>(1 - i)];
            // Travel direction along the bisector with `own` on the left.
            const Point dir = detail::outward_normal(other, own);
            cells[static_cast<std::size_t>(i)] = {i, {mid}, false, -1.0 * dir, dir};
        }
        return cells;
    }
    return voronoi_dual(delaunay_triangulate(sites));
}

} // namespace torsimax
