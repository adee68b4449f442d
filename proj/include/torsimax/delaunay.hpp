#pragma once

#include "torsimax/geometry.hpp"

#include <map>
#include <numeric>
#include <optional>
#include <utility>

namespace torsimax {

/// Triangulation of a finite point set. Triangles are counterclockwise index triples;
/// neighbors[t][k] is the triangle across the edge opposite vertex k, or -1 on the hull.
struct DelaunayMesh {
    std::vector<Point> sites;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 3>> neighbors;

    std::size_t size() const { return triangles.size(); }

    Triangle triangle(std::size_t t) const {
        const auto& v = triangles[t];
        return {sites[static_cast<std::size_t>(v[0])], sites[static_cast<std::size_t>(v[1])],
                sites[static_cast<std::size_t>(v[2])]};
    }

    /// Undirected edges as (min, max) pairs, sorted.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        out.reserve(3 * triangles.size());
        for (const auto& v : triangles) {
            for (int k = 0; k < 3; ++k) {
                const int a = v[static_cast<std::size_t>((k + 1) % 3)];
                const int b = v[static_cast<std::size_t>((k + 2) % 3)];
                out.emplace_back(std::min(a, b), std::max(a, b));
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    bool has_edge(int a, int b) const {
        const auto e = edges();
        return std::binary_search(e.begin(), e.end(), std::pair{std::min(a, b), std::max(a, b)});
    }

    double total_area() const {
        double a = 0.0;
        for (std::size_t t = 0; t < triangles.size(); ++t) a += triangle(t).area();
        return a;
    }

    /// Largest coordinate extent of the sites; the all-collinear check is relative to it.
    double scale() const {
        if (sites.empty()) return 0.0;
        double xmin = sites[0].x, xmax = sites[0].x, ymin = sites[0].y, ymax = sites[0].y;
        for (const Point& p : sites) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        return std::max(xmax - xmin, ymax - ymin);
    }
};

namespace detail {

inline constexpr int kGhost = -1;

struct BwTriangle {
    std::array<int, 3> v;
    std::array<int, 3> nb{-1, -1, -1};
    bool alive = true;
};

inline int ghost_slot(const BwTriangle& t) {
    for (int k = 0; k < 3; ++k)
        if (t.v[static_cast<std::size_t>(k)] == kGhost) return k;
    return -1;
}

inline void rebuild_neighbors(DelaunayMesh& mesh) {
    std::map<std::pair<int, int>, std::pair<int, int>> open;
    mesh.neighbors.assign(mesh.triangles.size(), {-1, -1, -1});
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& v = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int a = v[static_cast<std::size_t>((k + 1) % 3)];
            const int b = v[static_cast<std::size_t>((k + 2) % 3)];
            const std::pair key{std::min(a, b), std::max(a, b)};
            auto it = open.find(key);
            if (it == open.end()) {
                open.emplace(key, std::pair{static_cast<int>(t), k});
            } else {
                const auto [u, j] = it->second;
                mesh.neighbors[t][static_cast<std::size_t>(k)] = u;
                mesh.neighbors[static_cast<std::size_t>(u)][static_cast<std::size_t>(j)] = static_cast<int>(t);
                open.erase(it);
            }
        }
    }
}

/// Bowyer-Watson with symbolic ghost vertices at infinity in place of a finite
/// super-triangle; the ghost triangle on a hull edge (u, w) stands for the open
/// half-plane left of u->w.
class BowyerWatson {
public:
    explicit BowyerWatson(std::span<const Point> sites) : sites_(sites) {}

    void seed(int a, int b, int c) {
        if (orient2d(pt(a), pt(b), pt(c)) < 0.0) std::swap(b, c);
        tris_.push_back({{a, b, c}, {1, 2, 3}});
        // Ghost across edge opposite vertex k of the seed triangle.
        const std::array<int, 3> v{a, b, c};
        for (int k = 0; k < 3; ++k) {
            const int u = v[static_cast<std::size_t>((k + 1) % 3)];
            const int w = v[static_cast<std::size_t>((k + 2) % 3)];
            tris_.push_back({{w, u, kGhost}, {-1, -1, 0}});
        }
        // Ghost (w, u, G): across (u, G) [slot 0] and (G, w) [slot 1].
        for (int k = 0; k < 3; ++k) {
            auto& g = tris_[static_cast<std::size_t>(1 + k)];
            const int w = g.v[0];
            const int u = g.v[1];
            for (int j = 0; j < 3; ++j) {
                if (j == k) continue;
                const auto& h = tris_[static_cast<std::size_t>(1 + j)];
                if (h.v[1] == w) g.nb[1] = 1 + j; // shares (G, w)
                if (h.v[0] == u) g.nb[0] = 1 + j; // shares (u, G)
            }
        }
        last_ = 0;
    }

    void insert(int p) {
        const int seed_tri = conflicting(locate(pt(p)), pt(p));
        ++stamp_;
        if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
        std::vector<int> cavity{seed_tri};
        mark_[static_cast<std::size_t>(seed_tri)] = stamp_;
        for (std::size_t i = 0; i < cavity.size(); ++i) {
            const auto& t = tris_[static_cast<std::size_t>(cavity[i])];
            for (int n : t.nb) {
                if (n < 0 || mark_[static_cast<std::size_t>(n)] == stamp_) continue;
                if (in_circle(tris_[static_cast<std::size_t>(n)], pt(p))) {
                    mark_[static_cast<std::size_t>(n)] = stamp_;
                    cavity.push_back(n);
                }
            }
        }

        // Grow the cavity until p sees every real boundary edge strictly.
        struct Edge {
            int u, w, outside;
        };
        std::vector<Edge> boundary;
        for (bool grown = true; grown;) {
            grown = false;
            boundary.clear();
            for (int c : cavity) {
                const auto& t = tris_[static_cast<std::size_t>(c)];
                for (int k = 0; k < 3; ++k) {
                    const int n = t.nb[static_cast<std::size_t>(k)];
                    if (n >= 0 && mark_[static_cast<std::size_t>(n)] == stamp_) continue;
                    const int u = t.v[static_cast<std::size_t>((k + 1) % 3)];
                    const int w = t.v[static_cast<std::size_t>((k + 2) % 3)];
                    if (u != kGhost && w != kGhost && orient2d(pt(u), pt(w), pt(p)) <= 0.0 && n >= 0) {
                        mark_[static_cast<std::size_t>(n)] = stamp_;
                        cavity.push_back(n);
                        grown = true;
                        break;
                    }
                    boundary.push_back({u, w, n});
                }
                if (grown) break;
            }
        }

        for (int c : cavity) tris_[static_cast<std::size_t>(c)].alive = false;
        std::vector<int> slots(cavity.begin(), cavity.end());
        while (slots.size() < boundary.size()) {
            tris_.push_back({{0, 0, 0}});
            slots.push_back(static_cast<int>(tris_.size()) - 1);
        }
        if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);

        std::map<std::pair<int, int>, std::pair<int, int>> open;
        for (std::size_t i = 0; i < boundary.size(); ++i) {
            const auto& e = boundary[i];
            const int id = slots[i];
            BwTriangle nt{{e.u, e.w, p}, {-1, -1, e.outside}};
            tris_[static_cast<std::size_t>(id)] = nt;
            mark_[static_cast<std::size_t>(id)] = 0;
            if (e.outside >= 0) {
                auto& o = tris_[static_cast<std::size_t>(e.outside)];
                for (int k = 0; k < 3; ++k) {
                    const int a = o.v[static_cast<std::size_t>((k + 1) % 3)];
                    const int b = o.v[static_cast<std::size_t>((k + 2) % 3)];
                    if (a == e.w && b == e.u) o.nb[static_cast<std::size_t>(k)] = id;
                }
            }
            // Edge (w, p) is opposite slot 0, edge (p, u) opposite slot 1.
            link(open, e.w, p, id, 0);
            link(open, p, e.u, id, 1);
        }
        for (std::size_t i = boundary.size(); i < slots.size(); ++i)
            tris_[static_cast<std::size_t>(slots[i])].alive = false;
        last_ = slots.front();
    }

    DelaunayMesh finish(std::vector<Point> sites) const {
        DelaunayMesh mesh;
        mesh.sites = std::move(sites);
        for (const auto& t : tris_) {
            if (!t.alive || ghost_slot(t) >= 0) continue;
            mesh.triangles.push_back(t.v);
        }
        return mesh;
    }

private:
    Point pt(int i) const { return sites_[static_cast<std::size_t>(i)]; }

    void link(std::map<std::pair<int, int>, std::pair<int, int>>& open, int a, int b, int tri, int slot) {
        const std::pair key{std::min(a, b), std::max(a, b)};
        auto it = open.find(key);
        if (it == open.end()) {
            open.emplace(key, std::pair{tri, slot});
            return;
        }
        const auto [other, other_slot] = it->second;
        tris_[static_cast<std::size_t>(tri)].nb[static_cast<std::size_t>(slot)] = other;
        tris_[static_cast<std::size_t>(other)].nb[static_cast<std::size_t>(other_slot)] = tri;
        open.erase(it);
    }

    bool in_circle(const BwTriangle& t, Point p) const {
        const int g = ghost_slot(t);
        if (g < 0) {
            const Point a = pt(t.v[0]), b = pt(t.v[1]), c = pt(t.v[2]);
            return incircle_det(a, b, c, p) > incircle_band(a, b, c);
        }
        const Point u = pt(t.v[static_cast<std::size_t>((g + 1) % 3)]);
        const Point w = pt(t.v[static_cast<std::size_t>((g + 2) % 3)]);
        const double o = orient2d(u, w, p);
        const double band = kOrientTolerance * std::max(squared_distance(u, w), squared_distance(u, p));
        if (o > band) return true;
        if (o < -band) return false;
        // Collinear with the hull edge: inside only on the open segment.
        const double s = dot(p - u, w - u);
        return s > 0.0 && s < dot(w - u, w - u);
    }

    int locate(Point p) const {
        int t = last_;
        if (!tris_[static_cast<std::size_t>(t)].alive) t = first_alive();
        if (const int g = ghost_slot(tris_[static_cast<std::size_t>(t)]); g >= 0)
            t = tris_[static_cast<std::size_t>(t)].nb[static_cast<std::size_t>(g)];
        const std::size_t cap = 4 * tris_.size() + 16;
        for (std::size_t step = 0; step < cap; ++step) {
            const auto& tri = tris_[static_cast<std::size_t>(t)];
            if (ghost_slot(tri) >= 0) return t;
            bool moved = false;
            for (int j = 0; j < 3; ++j) {
                const int k = static_cast<int>((step + static_cast<std::size_t>(j)) % 3);
                const Point a = pt(tri.v[static_cast<std::size_t>((k + 1) % 3)]);
                const Point b = pt(tri.v[static_cast<std::size_t>((k + 2) % 3)]);
                if (orient2d(a, b, p) < 0.0) {
                    t = tri.nb[static_cast<std::size_t>(k)];
                    moved = true;
                    break;
                }
            }
            if (!moved) return t;
        }
        // Walk did not settle; fall back to a scan.
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            if (tris_[i].alive && in_circle(tris_[i], p)) return static_cast<int>(i);
        }
        return first_alive();
    }

    // The walk can end one step off near collinear hull edges; search outward from
    // it for a triangle whose circle really contains p.
    int conflicting(int start, Point p) {
        if (in_circle(tris_[static_cast<std::size_t>(start)], p)) return start;
        ++stamp_;
        if (mark_.size() < tris_.size()) mark_.resize(tris_.size(), 0);
        std::vector<int> queue{start};
        mark_[static_cast<std::size_t>(start)] = stamp_;
        for (std::size_t i = 0; i < queue.size(); ++i) {
            for (int n : tris_[static_cast<std::size_t>(queue[i])].nb) {
                if (n < 0 || mark_[static_cast<std::size_t>(n)] == stamp_) continue;
                if (in_circle(tris_[static_cast<std::size_t>(n)], p)) return n;
                mark_[static_cast<std::size_t>(n)] = stamp_;
                queue.push_back(n);
            }
        }
        return start;
    }

    int first_alive() const {
        for (std::size_t i = 0; i < tris_.size(); ++i)
            if (tris_[i].alive && ghost_slot(tris_[i]) < 0) return static_cast<int>(i);
        return 0;
    }

    std::span<const Point> sites_;
    std::vector<BwTriangle> tris_;
    std::vector<int> mark_;
    int stamp_ = 0;
    int last_ = 0;
};

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::vector<std::size_t> parent;
};

/// Retriangulates every co-circular face as a fan from its smallest site index. For a
/// quadrilateral this picks the diagonal with the lexicographically smallest index pair.
inline void canonicalize_cocircular(DelaunayMesh& mesh) {
    rebuild_neighbors(mesh);
    const std::size_t n = mesh.triangles.size();
    DisjointSets groups(n);
    bool any = false;
    for (std::size_t t = 0; t < n; ++t) {
        const auto& v = mesh.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const int u = mesh.neighbors[t][static_cast<std::size_t>(k)];
            if (u < 0 || static_cast<std::size_t>(u) < t) continue;
            const auto& w = mesh.triangles[static_cast<std::size_t>(u)];
            int opposite = -1;
            for (int q : w)
                if (q != v[0] && q != v[1] && q != v[2]) opposite = q;
            const Point a = mesh.sites[static_cast<std::size_t>(v[0])];
            const Point b = mesh.sites[static_cast<std::size_t>(v[1])];
            const Point c = mesh.sites[static_cast<std::size_t>(v[2])];
            if (std::abs(incircle_det(a, b, c, mesh.sites[static_cast<std::size_t>(opposite)])) <= incircle_band(a, b, c)) {
                groups.unite(t, static_cast<std::size_t>(u));
                any = true;
            }
        }
    }
    if (!any) return;

    std::map<std::size_t, std::vector<std::size_t>> members;
    for (std::size_t t = 0; t < n; ++t) members[groups.find(t)].push_back(t);

    std::vector<std::array<int, 3>> out;
    out.reserve(n);
    for (const auto& [root, tris] : members) {
        if (tris.size() == 1) {
            out.push_back(mesh.triangles[tris.front()]);
            continue;
        }
        std::vector<int> verts;
        double area = 0.0;
        for (std::size_t t : tris) {
            for (int q : mesh.triangles[t]) verts.push_back(q);
            area += mesh.triangle(t).area();
        }
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        // Chained near-ties can drift off one circle; only refan true co-circular groups.
        const auto& t0 = mesh.triangles[tris.front()];
        const Point a0 = mesh.sites[static_cast<std::size_t>(t0[0])];
        const Point b0 = mesh.sites[static_cast<std::size_t>(t0[1])];
        const Point c0 = mesh.sites[static_cast<std::size_t>(t0[2])];
        bool cocircular = true;
        for (int q : verts)
            if (std::abs(incircle_det(a0, b0, c0, mesh.sites[static_cast<std::size_t>(q)])) > incircle_band(a0, b0, c0))
                cocircular = false;
        Point centre{0.0, 0.0};
        for (int q : verts) centre = centre + mesh.sites[static_cast<std::size_t>(q)];
        centre = centre / static_cast<double>(verts.size());
        std::vector<std::pair<double, int>> ring;
        for (int q : verts) {
            const Point d = mesh.sites[static_cast<std::size_t>(q)] - centre;
            ring.emplace_back(std::atan2(d.y, d.x), q);
        }
        std::sort(ring.begin(), ring.end());
        const auto smallest = std::min_element(ring.begin(), ring.end(),
                                               [](const auto& a, const auto& b) { return a.second < b.second; });
        std::rotate(ring.begin(), smallest, ring.end());

        std::vector<std::array<int, 3>> fan;
        double fan_area = 0.0;
        bool valid = cocircular;
        for (std::size_t i = 1; i + 1 < ring.size(); ++i) {
            const std::array<int, 3> tri{ring[0].second, ring[i].second, ring[i + 1].second};
            const Point a = mesh.sites[static_cast<std::size_t>(tri[0])];
            const Point b = mesh.sites[static_cast<std::size_t>(tri[1])];
            const Point c = mesh.sites[static_cast<std::size_t>(tri[2])];
            const double o = orient2d(a, b, c);
            const double s2 = std::max({squared_distance(a, b), squared_distance(b, c), squared_distance(c, a)});
            if (o <= kOrientTolerance * s2) valid = false;
            fan_area += 0.5 * o;
            fan.push_back(tri);
        }
        if (valid && std::abs(fan_area - area) <= 1e-9 * area) {
            out.insert(out.end(), fan.begin(), fan.end());
        } else {
            for (std::size_t t : tris) out.push_back(mesh.triangles[t]);
        }
    }
    mesh.triangles = std::move(out);
}

} // namespace detail

/// Delaunay triangulation by incremental Bowyer-Watson. Requires at least three
/// distinct, not-all-collinear sites. Co-circular faces are split deterministically.
inline DelaunayMesh delaunay_triangulate(std::span<const Point> sites) {
    require(sites.size() >= 3, ErrorKind::CollinearInput, "need at least three sites");
    for (const Point& p : sites) {
        require(std::isfinite(p.x) && std::isfinite(p.y), ErrorKind::InvalidParameters,
                "site coordinates must be finite");
    }
    {
        std::vector<Point> sorted(sites.begin(), sites.end());
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), ErrorKind::DuplicateSites,
                "duplicate sites");
    }
    DelaunayMesh probe;
    probe.sites.assign(sites.begin(), sites.end());
    const double scale = probe.scale();

    // Seed: first site, the farthest from it, and the one farthest off that line.
    const int a = 0;
    int b = 1;
    for (std::size_t i = 1; i < sites.size(); ++i)
        if (squared_distance(sites[i], sites[0]) > squared_distance(sites[static_cast<std::size_t>(b)], sites[0]))
            b = static_cast<int>(i);
    int c = -1;
    double best = 0.0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const double o = std::abs(orient2d(sites[0], sites[static_cast<std::size_t>(b)], sites[i]));
        if (o > best) {
            best = o;
            c = static_cast<int>(i);
        }
    }
    require(c >= 0 && best > kOrientTolerance * scale * scale, ErrorKind::CollinearInput,
            "all sites are collinear");

    detail::BowyerWatson bw(sites);
    bw.seed(a, b, c);
    for (std::size_t i = 0; i < sites.size(); ++i) {
        const int id = static_cast<int>(i);
        if (id == a || id == b || id == c) continue;
        bw.insert(id);
    }
    DelaunayMesh mesh = bw.finish(std::move(probe.sites));
    detail::canonicalize_cocircular(mesh);
    detail::rebuild_neighbors(mesh);
    return mesh;
}

/// Number of (triangle, site) pairs where the site lies strictly inside the
/// circumcircle beyond the tolerance band. Brute force over all pairs.
inline std::size_t empty_circle_violations(const DelaunayMesh& mesh) {
    std::size_t bad = 0;
    for (const auto& v : mesh.triangles) {
        const Point a = mesh.sites[static_cast<std::size_t>(v[0])];
        const Point b = mesh.sites[static_cast<std::size_t>(v[1])];
        const Point c = mesh.sites[static_cast<std::size_t>(v[2])];
        const double band = incircle_band(a, b, c);
        for (std::size_t i = 0; i < mesh.sites.size(); ++i) {
            if (static_cast<int>(i) == v[0] || static_cast<int>(i) == v[1] || static_cast<int>(i) == v[2]) continue;
            if (incircle_det(a, b, c, mesh.sites[i]) > band) ++bad;
        }
    }
    return bad;
}

} // namespace torsimax
