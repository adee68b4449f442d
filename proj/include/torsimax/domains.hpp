#pragma once

#include "torsimax/hex_tiling.hpp"
#include "torsimax/lattice.hpp"
#include "torsimax/parallel.hpp"
#include "torsimax/scalar_field.hpp"

#include <variant>

namespace torsimax {

struct Box {
    double xmin, ymin, xmax, ymax;
};

/// Open disc of radius R centered at the origin.
struct Disc {
    double radius = 1.0;

    bool contains(Point p) const { return norm(p) < radius; }
    double distance(Point p) const { return std::max(0.0, radius - norm(p)); }
    Box bbox() const { return {-radius, -radius, radius, radius}; }
    double area() const { return kPi * radius * radius; }
    std::optional<double> inradius() const { return radius; }
    bool holds_square(Point lo, Point hi) const {
        for (const Point c : {lo, hi, Point{lo.x, hi.y}, Point{hi.x, lo.y}})
            if (!(norm(c) < radius)) return false;
        return true;
    }
};

/// Open rectangle (0, a) x (0, b).
struct Rectangle {
    double a = 1.0, b = 1.0;

    bool contains(Point p) const { return p.x > 0.0 && p.x < a && p.y > 0.0 && p.y < b; }
    double distance(Point p) const {
        if (!contains(p)) return 0.0;
        return std::min({p.x, a - p.x, p.y, b - p.y});
    }
    Box bbox() const { return {0.0, 0.0, a, b}; }
    double area() const { return a * b; }
    std::optional<double> inradius() const { return 0.5 * std::min(a, b); }
    bool holds_square(Point lo, Point hi) const { return contains(lo) && contains(hi); }
};

/// Disjoint open intervals of the given radii on the line, separated by gaps of `gap`.
struct IntervalUnion {
    std::vector<double> radii;
    double gap = 1.0;

    std::vector<double> centers() const {
        std::vector<double> c;
        double x = 0.0;
        for (double r : radii) {
            c.push_back(x + r);
            x += 2.0 * r + gap;
        }
        return c;
    }
    double length() const {
        double s = 0.0;
        for (double r : radii) s += 2.0 * r;
        return s;
    }
};

/// Disjoint open discs of radii r_k centered at ((k - 1) * spacing, 0).
struct DiscUnion {
    std::vector<double> radii;
    double spacing = 2.0;

    Point center(std::size_t k) const { return {static_cast<double>(k) * spacing, 0.0}; }
    bool contains(Point p) const { return distance(p) > 0.0; }
    double distance(Point p) const {
        double best = 0.0;
        for (std::size_t k : candidates(p.x)) best = std::max(best, radii[k] - distance_to(p, k));
        return best;
    }
    Box bbox() const {
        double r = 0.0;
        for (double x : radii) r = std::max(r, x);
        return {-r, -r, center(radii.size() - 1).x + r, r};
    }
    double area() const {
        double s = 0.0;
        for (double r : radii) s += kPi * r * r;
        return s;
    }
    std::optional<double> inradius() const { return *std::max_element(radii.begin(), radii.end()); }
    bool holds_square(Point lo, Point hi) const {
        for (std::size_t k : candidates(0.5 * (lo.x + hi.x))) {
            bool inside = true;
            for (const Point c : {lo, hi, Point{lo.x, hi.y}, Point{hi.x, lo.y}})
                inside = inside && distance_to(c, k) < radii[k];
            if (inside) return true;
        }
        return false;
    }

private:
    double distance_to(Point p, std::size_t k) const { return torsimax::distance(p, center(k)); }
    std::vector<std::size_t> candidates(double x) const {
        std::vector<std::size_t> out;
        const long k = std::lround(x / spacing);
        for (long c = k - 1; c <= k + 1; ++c)
            if (c >= 0 && c < static_cast<long>(radii.size())) out.push_back(static_cast<std::size_t>(c));
        return out;
    }
};

/// Which points of the hexagonal tiling of side eps are removed from the disc.
enum class HoneycombVariant { centers, centers_compact, vertices };

inline const char* to_string(HoneycombVariant v) {
    switch (v) {
    case HoneycombVariant::centers: return "centers";
    case HoneycombVariant::centers_compact: return "centers_compact";
    case HoneycombVariant::vertices: return "vertices";
    }
    return "unknown";
}

inline HoneycombVariant honeycomb_variant_from_string(const std::string& s) {
    if (s == "centers") return HoneycombVariant::centers;
    if (s == "centers_compact") return HoneycombVariant::centers_compact;
    if (s == "vertices") return HoneycombVariant::vertices;
    fail(ErrorKind::InvalidParameters, "unknown honeycomb variant '" + s + "'");
}

/// Disc of radius R minus a network of points of the hexagonal tiling with side eps.
/// centers: every hexagon center in the open disc. centers_compact: only centers
/// whose closed hexagon lies in the open disc. vertices: every honeycomb vertex in
/// the open disc.
struct HoneycombPerforated {
    double radius = 1.0;
    double eps = 0.1;
    HoneycombVariant variant = HoneycombVariant::centers;

    TriangularLattice lattice() const { return TriangularLattice(eps); }

    bool removed_center(Point c) const {
        if (variant == HoneycombVariant::centers_compact) {
            for (int k = 0; k < 6; ++k) {
                const double a = kPi / 2.0 + k * kPi / 3.0;
                if (!(norm(c + eps * Point{std::cos(a), std::sin(a)}) < radius)) return false;
            }
            return true;
        }
        return norm(c) < radius;
    }

    std::vector<Point> removed_points() const {
        std::vector<Point> out;
        const BoundingBox box{-radius, -radius, radius, radius};
        if (variant == HoneycombVariant::vertices) {
            for (const Point& v : hex_tiling(eps, box).vertices)
                if (norm(v) < radius) out.push_back(v);
        } else {
            lattice().for_each_in(box, [&](long, long, Point c) {
                if (removed_center(c)) out.push_back(c);
            });
        }
        return out;
    }

    /// Distance to the nearest removed point, capped at `cap`. Removed points farther
    /// than cap never matter because the outer circle is closer.
    double removed_distance(Point p, double cap) const {
        const TriangularLattice lat = lattice();
        if (variant == HoneycombVariant::vertices) {
            const Point up{0.0, eps};
            const double d1 = torsimax::distance(p, lat.nearest(p - up) + up);
            const double d2 = torsimax::distance(p, lat.nearest(p + up) - up);
            return std::min({cap, d1, d2});
        }
        const Point c = lat.nearest(p);
        if (variant == HoneycombVariant::centers || removed_center(c))
            return std::min(cap, torsimax::distance(p, c));
        double best = cap;
        lat.for_each_in({p.x - cap, p.y - cap, p.x + cap, p.y + cap}, [&](long, long, Point q) {
            if (removed_center(q)) best = std::min(best, torsimax::distance(p, q));
        });
        return best;
    }

    bool contains(Point p) const { return distance(p) > 0.0; }
    double distance(Point p) const {
        const double outer = radius - norm(p);
        if (outer <= 0.0) return 0.0;
        return removed_distance(p, outer);
    }
    Box bbox() const { return {-radius, -radius, radius, radius}; }
    double area() const { return kPi * radius * radius; }
    /// The farthest point from the centers (or vertices) of an interior hexagon is at
    /// distance eps; the compact variant leaves larger gaps near the circle.
    std::optional<double> inradius() const {
        if (variant == HoneycombVariant::centers_compact || radius < 4.0 * eps) return std::nullopt;
        return eps;
    }
    bool holds_square(Point lo, Point hi) const {
        if (!Disc{radius}.holds_square(lo, hi)) return false;
        for (const Point& c : removed_points_in({lo.x, lo.y, hi.x, hi.y}))
            if (c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y) return false;
        return true;
    }

private:
    std::vector<Point> removed_points_in(const BoundingBox& box) const {
        std::vector<Point> out;
        const TriangularLattice lat = lattice();
        const BoundingBox grown{box.xmin - eps, box.ymin - eps, box.xmax + eps, box.ymax + eps};
        lat.for_each_in(grown, [&](long, long, Point c) {
            if (variant == HoneycombVariant::vertices) {
                for (double dy : {eps, -eps}) {
                    const Point v{c.x, c.y + dy};
                    if (norm(v) < radius) out.push_back(v);
                }
            } else if (removed_center(c)) {
                out.push_back(c);
            }
        });
        return out;
    }
};

/// Disc of radius R minus closed holes of radius `hole` centered on spacing * Z^2,
/// keeping only holes that lie inside the open disc.
struct PerforatedDisc {
    double radius = 1.0;
    double spacing = 0.1;
    double hole = 0.01;

    bool is_hole(long i, long j) const {
        return norm(center(i, j)) + hole < radius;
    }
    Point center(long i, long j) const { return {static_cast<double>(i) * spacing, static_cast<double>(j) * spacing}; }

    std::vector<Point> hole_centers() const {
        std::vector<Point> out;
        const long n = static_cast<long>(std::ceil(radius / spacing));
        for (long j = -n; j <= n; ++j)
            for (long i = -n; i <= n; ++i)
                if (is_hole(i, j)) out.push_back(center(i, j));
        return out;
    }

    /// Distance from p to the nearest hole boundary (negative inside a hole), capped.
    double hole_distance(Point p, double cap) const {
        const long i0 = std::lround(p.x / spacing), j0 = std::lround(p.y / spacing);
        if (is_hole(i0, j0)) return std::min(cap, torsimax::distance(p, center(i0, j0)) - hole);
        double best = cap;
        const long reach = static_cast<long>(std::ceil((cap + hole) / spacing)) + 1;
        for (long j = j0 - reach; j <= j0 + reach; ++j)
            for (long i = i0 - reach; i <= i0 + reach; ++i)
                if (is_hole(i, j)) best = std::min(best, torsimax::distance(p, center(i, j)) - hole);
        return best;
    }

    bool contains(Point p) const { return distance(p) > 0.0; }
    double distance(Point p) const {
        const double outer = radius - norm(p);
        if (outer <= 0.0) return 0.0;
        return std::max(0.0, hole_distance(p, outer));
    }
    Box bbox() const { return {-radius, -radius, radius, radius}; }
    double area() const { return kPi * (radius * radius - static_cast<double>(hole_centers().size()) * hole * hole); }
    std::optional<double> inradius() const { return std::nullopt; }
    bool holds_square(Point lo, Point hi) const {
        if (!Disc{radius}.holds_square(lo, hi)) return false;
        const Point mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi.x - lo.x);
        const long reach = static_cast<long>(std::ceil((half + hole) / spacing)) + 1;
        const long i0 = std::lround(mid.x / spacing), j0 = std::lround(mid.y / spacing);
        for (long j = j0 - reach; j <= j0 + reach; ++j)
            for (long i = i0 - reach; i <= i0 + reach; ++i) {
                if (!is_hole(i, j)) continue;
                const Point c = center(i, j);
                const double dx = std::max({lo.x - c.x, 0.0, c.x - hi.x});
                const double dy = std::max({lo.y - c.y, 0.0, c.y - hi.y});
                if (std::hypot(dx, dy) <= hole) return false;
            }
        return true;
    }
};

struct LatticeKind {
    LatticeDomain q;

    bool contains(Point p) const { return q.contains_open(p); }
    double distance(Point p) const { return contains(p) ? q.distance_to_boundary(p) : 0.0; }
    Box bbox() const {
        const auto b = q.bounds();
        const double e = q.eps();
        return {e * static_cast<double>(b.imin - 1), e * static_cast<double>(b.jmin - 1), e * static_cast<double>(b.imax),
                e * static_cast<double>(b.jmax)};
    }
    double area() const { return q.area(); }
    std::optional<double> inradius() const { return std::nullopt; }
    /// Closed square inside the open polyomino: center inside and no boundary segment
    /// touches the closed square.
    bool holds_square(Point lo, Point hi) const {
        if (!contains(0.5 * (lo + hi))) return false;
        for (const auto& s : q.boundary_segments()) {
            const Point a = q.to_point(s.from), b = q.to_point(s.to);
            if (std::max(a.x, b.x) >= lo.x && std::min(a.x, b.x) <= hi.x && std::max(a.y, b.y) >= lo.y &&
                std::min(a.y, b.y) <= hi.y)
                return false;
        }
        return true;
    }
};

enum class DomainKind { disc, rectangle, interval_union_1d, disc_union, honeycomb_perforated, perforated_disc, lattice };

inline const char* to_string(DomainKind k) {
    switch (k) {
    case DomainKind::disc: return "disc";
    case DomainKind::rectangle: return "rectangle";
    case DomainKind::interval_union_1d: return "interval_union_1d";
    case DomainKind::disc_union: return "disc_union";
    case DomainKind::honeycomb_perforated: return "honeycomb_perforated";
    case DomainKind::perforated_disc: return "perforated_disc";
    case DomainKind::lattice: return "lattice";
    }
    return "unknown";
}

/// A domain of one of the supported kinds with its parameters.
class DomainDescriptor {
public:
    using Shape = std::variant<Disc, Rectangle, IntervalUnion, DiscUnion, HoneycombPerforated, PerforatedDisc, LatticeKind>;

    explicit DomainDescriptor(Shape s) : shape_(std::move(s)) {}

private:
    template <class F>
    auto visit_planar(F&& f) const {
        require(is_planar(), ErrorKind::InvalidParameters, "interval_union_1d is one-dimensional");
        return std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, IntervalUnion>) {
                    return f(Disc{});
                } else {
                    return f(s);
                }
            },
            shape_);
    }

public:
    DomainKind kind() const { return static_cast<DomainKind>(shape_.index()); }
    const Shape& shape() const { return shape_; }
    bool is_planar() const { return kind() != DomainKind::interval_union_1d; }

    bool contains(Point p) const {
        return visit_planar([&](const auto& s) { return s.contains(p); });
    }
    /// Distance to the complement; zero outside the domain.
    double distance(Point p) const {
        return visit_planar([&](const auto& s) { return s.distance(p); });
    }
    Box bbox() const {
        return visit_planar([](const auto& s) { return s.bbox(); });
    }
    double area() const {
        if (const auto* iu = std::get_if<IntervalUnion>(&shape_)) return iu->length();
        return visit_planar([](const auto& s) { return s.area(); });
    }
    std::optional<double> inradius() const {
        if (const auto* iu = std::get_if<IntervalUnion>(&shape_))
            return *std::max_element(iu->radii.begin(), iu->radii.end());
        return visit_planar([](const auto& s) { return s.inradius(); });
    }
    /// True when the closed square [lo, hi] lies in the open domain.
    bool holds_square(Point lo, Point hi) const {
        return visit_planar([&](const auto& s) { return s.holds_square(lo, hi); });
    }

    nlohmann::json to_json() const;

private:
    Shape shape_;
};

namespace detail {

inline void require_positive(double v, const char* what) {
    require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidParameters, std::string(what) + " must be positive");
}

} // namespace detail

inline DomainDescriptor disc(double radius) {
    detail::require_positive(radius, "radius");
    return DomainDescriptor(Disc{radius});
}

inline DomainDescriptor rectangle(double a, double b) {
    detail::require_positive(a, "side a");
    detail::require_positive(b, "side b");
    return DomainDescriptor(Rectangle{a, b});
}

inline DomainDescriptor interval_union(std::vector<double> radii, double gap = 1.0) {
    require(!radii.empty(), ErrorKind::InvalidParameters, "interval_union needs at least one radius");
    for (double r : radii) detail::require_positive(r, "interval radius");
    detail::require_positive(gap, "gap");
    return DomainDescriptor(IntervalUnion{std::move(radii), gap});
}

inline DomainDescriptor disc_union(std::vector<double> radii, double spacing = 2.0) {
    require(!radii.empty(), ErrorKind::InvalidParameters, "disc_union needs at least one radius");
    for (double r : radii) detail::require_positive(r, "disc radius");
    for (std::size_t k = 0; k + 1 < radii.size(); ++k)
        require(radii[k] + radii[k + 1] < spacing, ErrorKind::InvalidParameters, "discs overlap");
    return DomainDescriptor(DiscUnion{std::move(radii), spacing});
}

/// n discs with r_k = k^(-1/2), the two-dimensional instance of r_k = k^(-1/N).
inline DomainDescriptor harmonic_disc_union(std::size_t n, double spacing = 2.0) {
    require(n > 0, ErrorKind::InvalidParameters, "need at least one disc");
    std::vector<double> r;
    for (std::size_t k = 1; k <= n; ++k) r.push_back(1.0 / std::sqrt(static_cast<double>(k)));
    return disc_union(std::move(r), spacing);
}

inline DomainDescriptor honeycomb_perforated(double radius, double eps,
                                             HoneycombVariant variant = HoneycombVariant::centers) {
    detail::require_positive(radius, "radius");
    detail::require_positive(eps, "eps");
    return DomainDescriptor(HoneycombPerforated{radius, eps, variant});
}

/// Unit-scale perforation: holes of radius s^2 on the lattice s Z^2 unless `hole` is given.
inline DomainDescriptor perforated_disc(double radius, double spacing, std::optional<double> hole = std::nullopt) {
    detail::require_positive(radius, "radius");
    detail::require_positive(spacing, "spacing");
    const double rho = hole.value_or(spacing * spacing);
    detail::require_positive(rho, "hole radius");
    require(rho < 0.5 * spacing, ErrorKind::InvalidParameters, "holes must not overlap");
    return DomainDescriptor(PerforatedDisc{radius, spacing, rho});
}

inline DomainDescriptor lattice(LatticeDomain q) { return DomainDescriptor(LatticeKind{std::move(q)}); }

inline DomainDescriptor lattice_from_json(const std::string& path) { return lattice(lattice_from_json_file(path)); }

inline nlohmann::json DomainDescriptor::to_json() const {
    nlohmann::json params = std::visit(
        [](const auto& s) -> nlohmann::json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Disc>) return {{"radius", s.radius}};
            else if constexpr (std::is_same_v<T, Rectangle>) return {{"a", s.a}, {"b", s.b}};
            else if constexpr (std::is_same_v<T, IntervalUnion>) return {{"radii", s.radii}, {"gap", s.gap}};
            else if constexpr (std::is_same_v<T, DiscUnion>) return {{"radii", s.radii}, {"spacing", s.spacing}};
            else if constexpr (std::is_same_v<T, HoneycombPerforated>)
                return {{"radius", s.radius}, {"eps", s.eps}, {"variant", to_string(s.variant)}};
            else if constexpr (std::is_same_v<T, PerforatedDisc>)
                return {{"radius", s.radius}, {"spacing", s.spacing}, {"hole", s.hole}};
            else return s.q.to_json();
        },
        shape_);
    return {{"kind", to_string(kind())}, {"params", params}};
}

/// Parses {"kind": ..., "params": {...}}.
inline DomainDescriptor domain_from_json(const nlohmann::json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        const auto& p = j.at("params");
        if (kind == "disc") return disc(p.at("radius").get<double>());
        if (kind == "rectangle") return rectangle(p.at("a").get<double>(), p.at("b").get<double>());
        if (kind == "interval_union_1d")
            return interval_union(p.at("radii").get<std::vector<double>>(), p.value("gap", 1.0));
        if (kind == "disc_union") return disc_union(p.at("radii").get<std::vector<double>>(), p.value("spacing", 2.0));
        if (kind == "honeycomb_perforated")
            return honeycomb_perforated(p.at("radius").get<double>(), p.at("eps").get<double>(),
                                        honeycomb_variant_from_string(p.value("variant", std::string("centers"))));
        if (kind == "perforated_disc")
            return perforated_disc(p.at("radius").get<double>(), p.at("spacing").get<double>(),
                                   p.contains("hole") ? std::optional<double>(p.at("hole").get<double>())
                                                      : std::nullopt);
        if (kind == "lattice") return lattice(LatticeDomain::from_json(p));
        fail(ErrorKind::ParseError, "unknown domain kind '" + kind + "'");
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ParseError, std::string("domain JSON: ") + e.what());
    }
}

/// Cell-centered mask of the domain: a cell is inside when its center is in the open domain.
inline ScalarField rasterize(const DomainDescriptor& d, double h) {
    const Box b = d.bbox();
    ScalarField f;
    f.grid = grid_over(b.xmin, b.ymin, b.xmax, b.ymax, h);
    f.values.assign(f.grid.size(), 0.0);
    f.mask.assign(f.grid.size(), 0);
    parallel_for(f.grid.ny, [&](std::size_t j) {
        for (std::size_t i = 0; i < f.grid.nx; ++i) f.mask[f.grid.index(i, j)] = d.contains(f.grid.center(i, j)) ? 1 : 0;
    });
    return f;
}

/// Union of the closed eps-cells compactly contained in the open domain.
inline LatticeDomain approximate_lattice(const DomainDescriptor& d, double eps) {
    detail::require_positive(eps, "eps");
    const Box b = d.bbox();
    const auto i0 = static_cast<std::int64_t>(std::floor(b.xmin / eps)), i1 = static_cast<std::int64_t>(std::ceil(b.xmax / eps)) + 1;
    const auto j0 = static_cast<std::int64_t>(std::floor(b.ymin / eps)), j1 = static_cast<std::int64_t>(std::ceil(b.ymax / eps)) + 1;
    std::vector<Cell> cells;
    for (std::int64_t j = j0; j <= j1; ++j)
        for (std::int64_t i = i0; i <= i1; ++i) {
            const Point lo{eps * static_cast<double>(i - 1), eps * static_cast<double>(j - 1)};
            const Point hi{eps * static_cast<double>(i), eps * static_cast<double>(j)};
            if (d.holds_square(lo, hi)) cells.emplace_back(i, j);
        }
    require(!cells.empty(), ErrorKind::EmptyResult, "no eps-cell fits inside the domain");
    return LatticeDomain(eps, cells);
}

} // namespace torsimax
