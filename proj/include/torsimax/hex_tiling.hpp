#pragma once

#include "torsimax/geometry.hpp"

namespace torsimax {

struct BoundingBox {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    bool contains(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
    double area() const { return (xmax - xmin) * (ymax - ymin); }
};

/// Triangular lattice of spacing side*sqrt(3) (hexagon centers, one at the origin) and
/// its honeycomb vertex lattice. Hexagons are pointy-top with circumradius `side`.
class TriangularLattice {
public:
    explicit TriangularLattice(double side)
        : side_(side), e1_{std::sqrt(3.0) * side, 0.0}, e2_{std::sqrt(3.0) * side / 2.0, 1.5 * side} {
        require(std::isfinite(side) && side > 0.0, ErrorKind::InvalidParameters, "side must be positive");
    }

    double side() const { return side_; }
    Point e1() const { return e1_; }
    Point e2() const { return e2_; }
    Point at(long i, long j) const { return static_cast<double>(i) * e1_ + static_cast<double>(j) * e2_; }

    /// Real lattice coordinates (s, t) with p = s*e1 + t*e2.
    std::pair<double, double> coordinates(Point p) const {
        const double t = p.y / e2_.y;
        const double s = (p.x - t * e2_.x) / e1_.x;
        return {s, t};
    }

    /// Nearest lattice point (ties broken by scan order).
    Point nearest(Point p) const {
        const auto [s, t] = coordinates(p);
        const long i0 = std::lround(s), j0 = std::lround(t);
        Point best = at(i0, j0);
        double bd = squared_distance(best, p);
        for (long di = -1; di <= 1; ++di)
            for (long dj = -1; dj <= 1; ++dj) {
                const Point c = at(i0 + di, j0 + dj);
                const double d = squared_distance(c, p);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
        return best;
    }

    /// Calls f(i, j, point) for every lattice point in the box.
    template <class F>
    void for_each_in(const BoundingBox& box, F&& f) const {
        const long jmin = static_cast<long>(std::floor(box.ymin / e2_.y)) - 1;
        const long jmax = static_cast<long>(std::ceil(box.ymax / e2_.y)) + 1;
        for (long j = jmin; j <= jmax; ++j) {
            const double shift = static_cast<double>(j) * e2_.x;
            const long imin = static_cast<long>(std::floor((box.xmin - shift) / e1_.x)) - 1;
            const long imax = static_cast<long>(std::ceil((box.xmax - shift) / e1_.x)) + 1;
            for (long i = imin; i <= imax; ++i) {
                const Point c = at(i, j);
                if (box.contains(c)) f(i, j, c);
            }
        }
    }

private:
    double side_;
    Point e1_;
    Point e2_;
};

struct HexTiling {
    double side = 0.0;
    BoundingBox bbox;
    std::vector<Point> centers;
    std::vector<Point> vertices;
};

/// Hexagon centers and honeycomb vertices inside `bbox`. The vertex set is the union
/// of the two center cosets shifted by (0, +side) and (0, -side).
inline HexTiling hex_tiling(double side, const BoundingBox& bbox) {
    require(bbox.xmax > bbox.xmin && bbox.ymax > bbox.ymin, ErrorKind::InvalidParameters, "empty bounding box");
    const TriangularLattice lat(side);
    HexTiling out{side, bbox, {}, {}};
    lat.for_each_in(bbox, [&](long, long, Point c) { out.centers.push_back(c); });
    const BoundingBox grown{bbox.xmin - side, bbox.ymin - side, bbox.xmax + side, bbox.ymax + side};
    lat.for_each_in(grown, [&](long, long, Point c) {
        for (double dy : {side, -side}) {
            const Point v{c.x, c.y + dy};
            if (bbox.contains(v)) out.vertices.push_back(v);
        }
    });
    std::sort(out.vertices.begin(), out.vertices.end());
    return out;
}

} // namespace torsimax
