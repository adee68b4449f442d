#pragma once

#include "torsimax/delaunay.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace torsimax {

/// Integer lattice point (a, b), standing for (eps*a, eps*b).
struct LatticePoint {
    std::int64_t a = 0;
    std::int64_t b = 0;
    friend constexpr auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

/// Cell (i, j) is the closed square eps*[i-1, i] x [j-1, j].
using Cell = std::pair<std::int64_t, std::int64_t>;

/// Unit boundary segment between lattice points `from` and `to` (axis aligned).
struct LatticeSegment {
    LatticePoint from;
    LatticePoint to;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t x, std::int64_t d) {
    std::int64_t q = x / d;
    if ((x % d != 0) && ((x < 0) != (d < 0))) --q;
    return q;
}

/// Cell indices i whose closed interval [i-1, i] contains x/den (one or two of them).
inline std::pair<std::int64_t, std::int64_t> covering_indices(std::int64_t x, std::int64_t den) {
    const std::int64_t f = floor_div(x, den);
    if (f * den == x) return {f, f + 1};
    return {f + 1, f + 1};
}

} // namespace detail

/// Finite union of closed eps-squares. Corner-touching configurations (two cells
/// sharing only a vertex) are rejected so the boundary is a disjoint union of loops.
class LatticeDomain {
public:
    LatticeDomain(double eps, std::vector<Cell> cells) : eps_(eps) {
        require(std::isfinite(eps) && eps > 0.0, ErrorKind::InvalidParameters, "eps must be positive");
        require(!cells.empty(), ErrorKind::EmptyDomain, "lattice domain has no cells");
        std::sort(cells.begin(), cells.end());
        cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
        cells_ = std::move(cells);
        lookup_ = std::set<Cell>(cells_.begin(), cells_.end());
        for (const auto& [i, j] : cells_) {
            // Check the four corners of every cell.
            for (std::int64_t a = i - 1; a <= i; ++a)
                for (std::int64_t b = j - 1; b <= j; ++b) {
                    const auto m = corner_mask({a, b});
                    require(m != 0b1001 && m != 0b0110, ErrorKind::CornerTouching,
                            "cells touch only at lattice point (" + std::to_string(a) + ", " + std::to_string(b) + ")");
                }
        }
        segments_ = boundary_segments();
    }

    double eps() const { return eps_; }
    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    double area() const { return static_cast<double>(cells_.size()) * eps_ * eps_; }
    bool has_cell(std::int64_t i, std::int64_t j) const { return lookup_.count({i, j}) != 0; }

    Point to_point(LatticePoint p) const {
        return {eps_ * static_cast<double>(p.a), eps_ * static_cast<double>(p.b)};
    }

    /// Presence bits of the four cells around a lattice point: bit 0 = lower-left
    /// cell (a, b), bit 1 = (a+1, b), bit 2 = (a, b+1), bit 3 = (a+1, b+1).
    unsigned corner_mask(LatticePoint p) const {
        unsigned m = 0;
        if (has_cell(p.a, p.b)) m |= 1u;
        if (has_cell(p.a + 1, p.b)) m |= 2u;
        if (has_cell(p.a, p.b + 1)) m |= 4u;
        if (has_cell(p.a + 1, p.b + 1)) m |= 8u;
        return m;
    }

    /// Membership of the rational point (x/den, y/den) in lattice units.
    bool contains_rational(std::int64_t x, std::int64_t y, std::int64_t den, bool open) const {
        if (den < 0) {
            x = -x;
            y = -y;
            den = -den;
        }
        const auto [i0, i1] = detail::covering_indices(x, den);
        const auto [j0, j1] = detail::covering_indices(y, den);
        bool any = false, all = true;
        for (std::int64_t i : {i0, i1})
            for (std::int64_t j : {j0, j1}) {
                const bool h = has_cell(i, j);
                any = any || h;
                all = all && h;
            }
        return open ? all : any;
    }

    /// Closed membership of a real point, via floor division on cell indices.
    bool contains(Point p) const { return locate(p, false); }
    /// Interior membership: every cell whose closure holds p is present.
    bool contains_open(Point p) const { return locate(p, true); }

    /// Lattice points on the topological boundary, sorted.
    std::vector<LatticePoint> discrete_boundary_lattice() const {
        std::set<LatticePoint> out;
        for (const auto& [i, j] : cells_)
            for (std::int64_t a = i - 1; a <= i; ++a)
                for (std::int64_t b = j - 1; b <= j; ++b)
                    if (corner_mask({a, b}) != 0b1111) out.insert({a, b});
        return {out.begin(), out.end()};
    }

    std::vector<Point> discrete_boundary() const {
        std::vector<Point> pts;
        for (const auto& p : discrete_boundary_lattice()) pts.push_back(to_point(p));
        return pts;
    }

    /// Unit edges separating a present cell from an absent one.
    std::vector<LatticeSegment> boundary_segments() const {
        std::vector<LatticeSegment> segs;
        for (const auto& [i, j] : cells_) {
            if (!has_cell(i, j - 1)) segs.push_back({{i - 1, j - 1}, {i, j - 1}});
            if (!has_cell(i, j + 1)) segs.push_back({{i - 1, j}, {i, j}});
            if (!has_cell(i - 1, j)) segs.push_back({{i - 1, j - 1}, {i - 1, j}});
            if (!has_cell(i + 1, j)) segs.push_back({{i, j - 1}, {i, j}});
        }
        return segs;
    }

    /// Distance to the topological boundary (all boundary segments).
    double distance_to_boundary(Point p) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& s : segments_)
            best = std::min(best, point_segment_distance(p, to_point(s.from), to_point(s.to)));
        return best;
    }

    struct Bounds {
        std::int64_t imin, imax, jmin, jmax;
    };
    Bounds bounds() const {
        Bounds b{cells_.front().first, cells_.front().first, cells_.front().second, cells_.front().second};
        for (const auto& [i, j] : cells_) {
            b.imin = std::min(b.imin, i);
            b.imax = std::max(b.imax, i);
            b.jmin = std::min(b.jmin, j);
            b.jmax = std::max(b.jmax, j);
        }
        return b;
    }

    nlohmann::json to_json() const {
        nlohmann::json cells = nlohmann::json::array();
        for (const auto& [i, j] : cells_) cells.push_back({i, j});
        return {{"eps", eps_}, {"cells", cells}};
    }

    static LatticeDomain from_json(const nlohmann::json& j) {
        try {
            require(j.is_object(), ErrorKind::ParseError, "lattice domain must be a JSON object");
            require(j.contains("eps") && j.at("eps").is_number(), ErrorKind::ParseError, "missing numeric \"eps\"");
            require(j.contains("cells") && j.at("cells").is_array(), ErrorKind::ParseError, "missing array \"cells\"");
            std::vector<Cell> cells;
            std::size_t k = 0;
            for (const auto& c : j.at("cells")) {
                require(c.is_array() && c.size() == 2 && c[0].is_number_integer() && c[1].is_number_integer(),
                        ErrorKind::ParseError, "cells[" + std::to_string(k) + "] is not an integer pair");
                cells.emplace_back(c[0].get<std::int64_t>(), c[1].get<std::int64_t>());
                ++k;
            }
            return LatticeDomain(j.at("eps").get<double>(), std::move(cells));
        } catch (const nlohmann::json::exception& e) {
            fail(ErrorKind::ParseError, e.what());
        }
    }

private:
    bool locate(Point p, bool open) const {
        const double u = p.x / eps_, v = p.y / eps_;
        // Within 1e-9 lattice units of a grid line counts as on it.
        auto indices = [](double t) {
            const double r = std::round(t);
            if (std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t))) {
                const auto i = static_cast<std::int64_t>(r);
                return std::pair{i, i + 1};
            }
            const auto i = static_cast<std::int64_t>(std::floor(t));
            return std::pair{i + 1, i + 1};
        };
        const auto [i0, i1] = indices(u);
        const auto [j0, j1] = indices(v);
        bool any = false, all = true;
        for (std::int64_t i : {i0, i1})
            for (std::int64_t j : {j0, j1}) {
                const bool h = has_cell(i, j);
                any = any || h;
                all = all && h;
            }
        return open ? all : any;
    }

    double eps_;
    std::vector<Cell> cells_;
    std::set<Cell> lookup_;
    std::vector<LatticeSegment> segments_;
};

inline LatticeDomain lattice_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return LatticeDomain::from_json(j);
}

inline LatticeDomain lattice_from_json_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return lattice_from_json_text(ss.str());
    } catch (const Error& e) {
        fail(e.kind(), path + ": " + e.what());
    }
}

inline std::vector<LatticePoint> discrete_boundary_lattice(const LatticeDomain& q) { return q.discrete_boundary_lattice(); }
inline std::vector<Point> discrete_boundary(const LatticeDomain& q) { return q.discrete_boundary(); }

/// Delaunay mesh of the discrete boundary plus the lattice coordinates of its sites.
struct BoundaryMesh {
    DelaunayMesh mesh;
    std::vector<LatticePoint> lattice;
};

inline BoundaryMesh boundary_mesh(const LatticeDomain& q) {
    BoundaryMesh out;
    out.lattice = q.discrete_boundary_lattice();
    std::vector<Point> pts;
    pts.reserve(out.lattice.size());
    for (const auto& p : out.lattice) pts.push_back(q.to_point(p));
    out.mesh = delaunay_triangulate(pts);
    return out;
}

namespace detail {

inline std::int64_t orient_int(LatticePoint a, LatticePoint b, LatticePoint c) {
    return (b.a - a.a) * (c.b - a.b) - (b.b - a.b) * (c.a - a.a);
}

/// True when the closed segment meets the open triangle (a, b, c) in a piece of
/// positive length. Orientation values are exact integers.
inline bool segment_meets_open_triangle(LatticePoint p0, LatticePoint p1, const std::array<LatticePoint, 3>& t) {
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 3; ++k) {
        const auto& e0 = t[static_cast<std::size_t>(k)];
        const auto& e1 = t[static_cast<std::size_t>((k + 1) % 3)];
        const auto f0 = static_cast<double>(orient_int(e0, e1, p0));
        const auto f1 = static_cast<double>(orient_int(e0, e1, p1));
        if (f0 <= 0.0 && f1 <= 0.0) return false;
        if (f0 > 0.0 && f1 > 0.0) continue;
        const double s = f0 / (f0 - f1);
        if (f0 > 0.0) hi = std::min(hi, s);
        else lo = std::max(lo, s);
    }
    return hi - lo > 1e-12;
}

} // namespace detail

/// Exact circumcenter of a lattice triangle as (x/den, y/den) in lattice units.
struct RationalPoint {
    std::int64_t x, y, den;
};

inline RationalPoint circumcenter_rational(LatticePoint a, LatticePoint b, LatticePoint c) {
    const std::int64_t bx = b.a - a.a, by = b.b - a.b;
    const std::int64_t cx = c.a - a.a, cy = c.b - a.b;
    const std::int64_t bb = bx * bx + by * by, cc = cx * cx + cy * cy;
    const std::int64_t den = 2 * (bx * cy - by * cx);
    return {cy * bb - by * cc + a.a * den, bx * cc - cx * bb + a.b * den, den};
}

struct Classification {
    std::vector<std::size_t> interior;
    std::vector<std::size_t> exterior;
};

/// Splits the boundary mesh into triangles inside q and outside q by exact centroid
/// membership, then confirms that no boundary segment cuts any open triangle.
inline Classification classify_triangles(const BoundaryMesh& bm, const LatticeDomain& q) {
    Classification out;
    const auto segs = q.boundary_segments();
    for (std::size_t t = 0; t < bm.mesh.size(); ++t) {
        const auto& v = bm.mesh.triangles[t];
        const std::array<LatticePoint, 3> tri{bm.lattice[static_cast<std::size_t>(v[0])],
                                              bm.lattice[static_cast<std::size_t>(v[1])],
                                              bm.lattice[static_cast<std::size_t>(v[2])]};
        const std::int64_t sx = tri[0].a + tri[1].a + tri[2].a;
        const std::int64_t sy = tri[0].b + tri[1].b + tri[2].b;
        (q.contains_rational(sx, sy, 3, true) ? out.interior : out.exterior).push_back(t);

        const std::int64_t amin = std::min({tri[0].a, tri[1].a, tri[2].a});
        const std::int64_t amax = std::max({tri[0].a, tri[1].a, tri[2].a});
        const std::int64_t bmin = std::min({tri[0].b, tri[1].b, tri[2].b});
        const std::int64_t bmax = std::max({tri[0].b, tri[1].b, tri[2].b});
        for (const auto& s : segs) {
            if (std::max(s.from.a, s.to.a) < amin || std::min(s.from.a, s.to.a) > amax) continue;
            if (std::max(s.from.b, s.to.b) < bmin || std::min(s.from.b, s.to.b) > bmax) continue;
            require(!detail::segment_meets_open_triangle(s.from, s.to, tri), ErrorKind::ClassificationConflict,
                    "boundary segment crosses Delaunay triangle " + std::to_string(t));
        }
    }
    return out;
}

/// Random polyomino grown cell by cell from (1, 1); growth steps that would create
/// a corner-only contact are skipped.
inline LatticeDomain grow_polyomino(std::size_t n_cells, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::set<Cell> cells{{1, 1}};
    auto mask = [&](std::int64_t a, std::int64_t b) {
        unsigned m = 0;
        if (cells.count({a, b})) m |= 1u;
        if (cells.count({a + 1, b})) m |= 2u;
        if (cells.count({a, b + 1})) m |= 4u;
        if (cells.count({a + 1, b + 1})) m |= 8u;
        return m;
    };
    const std::array<Cell, 4> steps{Cell{1, 0}, Cell{-1, 0}, Cell{0, 1}, Cell{0, -1}};
    std::size_t attempts = 0;
    while (cells.size() < n_cells && attempts < 1000 * n_cells) {
        ++attempts;
        auto it = cells.begin();
        std::advance(it, static_cast<long>(rng() % cells.size()));
        const auto& step = steps[rng() % 4];
        const Cell c{it->first + step.first, it->second + step.second};
        if (cells.count(c)) continue;
        cells.insert(c);
        bool ok = true;
        for (std::int64_t a = c.first - 1; a <= c.first; ++a)
            for (std::int64_t b = c.second - 1; b <= c.second; ++b) {
                const unsigned m = mask(a, b);
                if (m == 0b1001 || m == 0b0110) ok = false;
            }
        if (!ok) cells.erase(c);
    }
    return LatticeDomain(eps, {cells.begin(), cells.end()});
}

} // namespace torsimax
