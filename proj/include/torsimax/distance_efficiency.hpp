#pragma once

#include "torsimax/domains.hpp"
#include "torsimax/quadrature.hpp"

#include <map>
#include <random>

namespace torsimax {

/// Distance to the complement sampled at cell centers; zero off the mask.
inline ScalarField distance_field(const DomainDescriptor& d, double h) {
    ScalarField f = rasterize(d, h);
    require(f.count() > 0, ErrorKind::EmptyDomain, "no grid cell center lies in the domain");
    parallel_for(f.grid.ny, [&](std::size_t j) {
        for (std::size_t i = 0; i < f.grid.nx; ++i) {
            const std::size_t k = f.grid.index(i, j);
            if (f.mask[k]) f.values[k] = d.distance(f.grid.center(i, j));
        }
    });
    return f;
}

inline ScalarField distance_field(const LatticeDomain& q, double h) { return distance_field(lattice(q), h); }

/// Mean of d(., complement) over the grid mask divided by its maximum; the maximum is
/// the analytic inradius when the kind has one, else the grid maximum.
inline EfficiencyReport phi_infinity(const DomainDescriptor& d, double h) {
    const ScalarField f = distance_field(d, h);
    const auto rho = d.inradius();
    return make_report(f.mean(), rho ? *rho : f.max(), EfficiencyMethod::grid, h);
}

/// Bucket index over a point set for nearest and fixed-radius queries.
class SiteIndex {
public:
    SiteIndex(std::vector<Point> sites, double cell) : sites_(std::move(sites)), cell_(cell) {
        require(!sites_.empty(), ErrorKind::EmptyList, "no sites to index");
        require(cell > 0.0, ErrorKind::InvalidParameters, "bucket size must be positive");
        for (std::size_t i = 0; i < sites_.size(); ++i) buckets_[key(sites_[i])].push_back(i);
    }

    const std::vector<Point>& sites() const { return sites_; }

    /// Index of a nearest site (smallest index on ties) and its distance.
    std::pair<std::size_t, double> nearest(Point p) const {
        const auto [cx, cy] = key(p);
        std::size_t best = sites_.size();
        double bd = std::numeric_limits<double>::infinity();
        for (long ring = 0;; ++ring) {
            for (long dy = -ring; dy <= ring; ++dy)
                for (long dx = -ring; dx <= ring; ++dx) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const auto it = buckets_.find({cx + dx, cy + dy});
                    if (it == buckets_.end()) continue;
                    for (std::size_t i : it->second) {
                        const double d = distance(p, sites_[i]);
                        if (d < bd || (d == bd && i < best)) {
                            bd = d;
                            best = i;
                        }
                    }
                }
            // Anything in a later ring is at least ring * cell away.
            if (best < sites_.size() && bd <= static_cast<double>(ring) * cell_) break;
            if (ring > span_limit()) break;
        }
        return {best, bd};
    }

    /// Indices of sites with |s - p| <= r.
    std::vector<std::size_t> within(Point p, double r) const {
        std::vector<std::size_t> out;
        const auto [x0, y0] = key({p.x - r, p.y - r});
        const auto [x1, y1] = key({p.x + r, p.y + r});
        for (long y = y0; y <= y1; ++y)
            for (long x = x0; x <= x1; ++x) {
                const auto it = buckets_.find({x, y});
                if (it == buckets_.end()) continue;
                for (std::size_t i : it->second)
                    if (distance(p, sites_[i]) <= r) out.push_back(i);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::pair<long, long> key(Point p) const {
        return {static_cast<long>(std::floor(p.x / cell_)), static_cast<long>(std::floor(p.y / cell_))};
    }
    long span_limit() const {
        if (limit_ < 0) {
            double xmin = sites_[0].x, xmax = xmin, ymin = sites_[0].y, ymax = ymin;
            for (const Point& s : sites_) {
                xmin = std::min(xmin, s.x);
                xmax = std::max(xmax, s.x);
                ymin = std::min(ymin, s.y);
                ymax = std::max(ymax, s.y);
            }
            limit_ = static_cast<long>(std::ceil(std::max(xmax - xmin, ymax - ymin) / cell_)) + 2;
        }
        return limit_ * 4;
    }

    std::vector<Point> sites_;
    double cell_;
    std::map<std::pair<long, long>, std::vector<std::size_t>> buckets_;
    mutable long limit_ = -1;
};

/// Largest circle centered in q that is empty of discrete-boundary points.
struct EmptyCircle {
    Point center;
    double radius = 0.0;
    std::size_t triangle = 0;
    bool interior_triangle = false;
};

namespace detail {

inline BoundaryMesh checked_boundary_mesh(const LatticeDomain& q) {
    try {
        return boundary_mesh(q);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::CollinearInput || e.kind() == ErrorKind::DuplicateSites)
            fail(ErrorKind::DegenerateBoundary, e.what());
        throw;
    }
}

/// The maximum of d(., S) over q sits at a Voronoi vertex inside q: on the boundary of q
/// d(., S) is at most eps/2, while every cell center is eps/sqrt(2) from its corners.
/// Voronoi vertices are circumcenters, and the empty-circle property makes the
/// circumradius the distance there.
inline EmptyCircle largest_empty_circle(const BoundaryMesh& bm, const LatticeDomain& q,
                                        const std::vector<std::size_t>& interior) {
    EmptyCircle best;
    bool found = false;
    for (std::size_t t = 0; t < bm.mesh.size(); ++t) {
        const auto& v = bm.mesh.triangles[t];
        const auto cc = circumcenter_rational(bm.lattice[static_cast<std::size_t>(v[0])],
                                              bm.lattice[static_cast<std::size_t>(v[1])],
                                              bm.lattice[static_cast<std::size_t>(v[2])]);
        if (!q.contains_rational(cc.x, cc.y, cc.den, false)) continue;
        const Triangle tri = bm.mesh.triangle(t);
        if (!found || tri.circumradius() > best.radius) {
            found = true;
            best = {tri.circumcenter(), tri.circumradius(), t,
                    std::find(interior.begin(), interior.end(), t) != interior.end()};
        }
    }
    require(found, ErrorKind::DegenerateBoundary, "no circumcenter lies in the domain");
    return best;
}

/// True when every point of the triangle's vertex regions is at least as close to that
/// vertex as to any site. Each region is convex and "closer to v than to s" is a
/// half-plane, so checking the region's corners suffices.
inline bool nearest_is_vertex_certified(const Triangle& t, const SiteIndex& index, double slack) {
    for (int i = 0; i < 3; ++i) {
        const Point v = t.vertex(i);
        for (const Point& c : vertex_region(t, i)) {
            const double dv = distance(c, v);
            const auto [_, ds] = index.nearest(c);
            if (ds < dv - slack) return false;
        }
    }
    return true;
}

/// Exact integral of d(., sites) over the triangle by clipping it with the Voronoi cells
/// of the sites that can be nearest somewhere in it.
inline double voronoi_clipped_integral(const Triangle& t, const SiteIndex& index) {
    const Point g = t.centroid();
    double reach = 0.0;
    for (int i = 0; i < 3; ++i) reach = std::max(reach, distance(g, t.vertex(i)));
    const auto cand = index.within(g, reach + t.scale());
    const auto& sites = index.sites();
    double total = 0.0;
    for (std::size_t s : cand) {
        std::vector<Point> poly(t.vertices().begin(), t.vertices().end());
        for (std::size_t o : cand) {
            if (o == s || poly.size() < 3) continue;
            const auto [n, off] = bisector_half_plane(sites[s], sites[o]);
            poly = clip_half_plane(poly, n, off);
        }
        if (poly.size() >= 3) total += polygon_distance_integral(sites[s], poly);
    }
    return total;
}

} // namespace detail

inline EmptyCircle largest_empty_circle(const LatticeDomain& q) {
    const auto bm = detail::checked_boundary_mesh(q);
    return detail::largest_empty_circle(bm, q, classify_triangles(bm, q).interior);
}

/// Phi_{d,inf}(q) with its certificates. `report.mean` is the exact mean of d(., S)
/// over q. `vertex_sum` is the sum of the nearest-vertex integrals over interior
/// triangles, an upper bound for the exact numerator and equal to it when every
/// triangle is certified.
struct DiscreteEfficiency {
    EfficiencyReport report;
    double numerator = 0.0;
    double vertex_sum = 0.0;
    std::size_t interior_triangles = 0;
    std::size_t uncertified_triangles = 0;
    EmptyCircle circle;
    double grid_h = 0.0;
    double grid_mean = 0.0;
    bool grid_agrees = false;

    nlohmann::json to_json() const {
        nlohmann::json j = report.to_json();
        j["numerator"] = numerator;
        j["vertex_sum"] = vertex_sum;
        j["interior_triangles"] = interior_triangles;
        j["uncertified_triangles"] = uncertified_triangles;
        j["center"] = {circle.center.x, circle.center.y};
        j["grid_h"] = grid_h;
        j["grid_mean"] = grid_mean;
        j["grid_agrees"] = grid_agrees;
        return j;
    }
};

/// Mean over q of the distance to the discrete boundary sampled at cell centers.
inline double discrete_distance_grid_mean(const LatticeDomain& q, const SiteIndex& index, double h) {
    const ScalarField mask = rasterize(lattice(q), h);
    std::vector<double> rows(mask.grid.ny, 0.0);
    std::vector<std::size_t> counts(mask.grid.ny, 0);
    parallel_for(mask.grid.ny, [&](std::size_t j) {
        for (std::size_t i = 0; i < mask.grid.nx; ++i) {
            if (!mask.mask[mask.grid.index(i, j)]) continue;
            rows[j] += index.nearest(mask.grid.center(i, j)).second;
            ++counts[j];
        }
    });
    double s = 0.0;
    std::size_t c = 0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        s += rows[j];
        c += counts[j];
    }
    require(c > 0, ErrorKind::EmptyDomain, "no grid cell center lies in the domain");
    return s / static_cast<double>(c);
}

/// Phi_{d,inf}(q) = integral over q of d(x, S) / (|q| * max d(., S)) with S the discrete
/// boundary. Interior Delaunay triangles whose nearest-vertex property is certified
/// contribute their closed-form vertex integral; the others are clipped by the Voronoi
/// cells of nearby sites and integrated exactly. The grid cross-check samples at
/// h = eps/8 and must agree with the exact mean within 3h.
inline DiscreteEfficiency phi_d_infinity(const LatticeDomain& q, bool grid_check = true) {
    const auto bm = detail::checked_boundary_mesh(q);
    const auto cls = classify_triangles(bm, q);
    const SiteIndex index(bm.mesh.sites, q.eps());
    DiscreteEfficiency out;
    out.interior_triangles = cls.interior.size();
    const double slack = 1e-12 * q.eps();
    for (std::size_t t : cls.interior) {
        const Triangle tri = bm.mesh.triangle(t);
        const double vi = vertex_distance_integral(tri);
        out.vertex_sum += vi;
        if (detail::nearest_is_vertex_certified(tri, index, slack)) {
            out.numerator += vi;
        } else {
            ++out.uncertified_triangles;
            out.numerator += detail::voronoi_clipped_integral(tri, index);
        }
    }
    out.circle = detail::largest_empty_circle(bm, q, cls.interior);
    out.report = make_report(out.numerator / q.area(), out.circle.radius, EfficiencyMethod::delaunay_exact);
    if (grid_check) {
        out.grid_h = q.eps() / 8.0;
        out.grid_mean = discrete_distance_grid_mean(q, index, out.grid_h);
        out.grid_agrees = std::abs(out.grid_mean - out.report.mean) <= 3.0 * out.grid_h;
    }
    return out;
}

/// Outcome of sampling the nearest-vertex property on interior triangles.
struct NearestVertexCheck {
    bool ok = true;
    std::size_t samples = 0;
    struct Counterexample {
        Point x;
        std::size_t triangle = 0;
        std::size_t nearest_site = 0;
        double vertex_distance = 0.0;
        double site_distance = 0.0;
    };
    std::optional<Counterexample> counterexample;
};

/// Samples points uniformly in the interior triangles and compares the brute-force
/// nearest discrete-boundary point with the nearest triangle vertex.
inline NearestVertexCheck nearest_is_vertex_check(const LatticeDomain& q, std::size_t samples, std::uint64_t seed = 0) {
    const auto bm = detail::checked_boundary_mesh(q);
    const auto cls = classify_triangles(bm, q);
    NearestVertexCheck out;
    if (cls.interior.empty()) return out;
    std::vector<double> weights;
    for (std::size_t t : cls.interior) weights.push_back(bm.mesh.triangle(t).area());
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& sites = bm.mesh.sites;
    for (std::size_t k = 0; k < samples; ++k) {
        const std::size_t t = cls.interior[pick(rng)];
        const Triangle tri = bm.mesh.triangle(t);
        double r1 = u(rng), r2 = u(rng);
        if (r1 + r2 > 1.0) {
            r1 = 1.0 - r1;
            r2 = 1.0 - r2;
        }
        const Point x = tri.vertex(0) + r1 * (tri.vertex(1) - tri.vertex(0)) + r2 * (tri.vertex(2) - tri.vertex(0));
        double dv = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) dv = std::min(dv, distance(x, tri.vertex(i)));
        std::size_t best = 0;
        double ds = std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < sites.size(); ++s) {
            const double d = distance(x, sites[s]);
            if (d < ds) {
                ds = d;
                best = s;
            }
        }
        ++out.samples;
        if (ds < dv - 1e-10) {
            out.ok = false;
            out.counterexample = NearestVertexCheck::Counterexample{x, t, best, dv, ds};
            return out;
        }
    }
    return out;
}

/// Phi_inf of the unit-radius-R disc perforated by the hexagonal network of side eps.
/// The mean is the midpoint rule on an h-grid; the maximum is eps for the centers and
/// vertices networks and the grid maximum for the compact variant.
inline EfficiencyReport honeycomb_phi_infinity(double radius, double eps, double h,
                                               HoneycombVariant variant = HoneycombVariant::centers) {
    require(std::isfinite(h) && h > 0.0, ErrorKind::InvalidParameters, "grid spacing must be positive");
    require(h <= eps / 8.0 * (1.0 + 1e-12), ErrorKind::ResolutionTooCoarse, "honeycomb grid needs h <= eps/8");
    return phi_infinity(honeycomb_perforated(radius, eps, variant), h);
}

/// Pointwise check of d(x, boundary) <= d(x, S) and d(x, S)^2 <= d(x, boundary)^2 + eps^2/2
/// on random points of q; returns the number of violations of each.
struct SqueezeCheck {
    std::size_t samples = 0;
    std::size_t lower_violations = 0;
    std::size_t upper_violations = 0;
};

inline SqueezeCheck squeeze_check(const LatticeDomain& q, std::size_t samples, std::uint64_t seed = 0) {
    const SiteIndex index(q.discrete_boundary(), q.eps());
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> cell(0, q.size() - 1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SqueezeCheck out;
    const double e = q.eps();
    for (std::size_t k = 0; k < samples; ++k) {
        const auto [i, j] = q.cells()[cell(rng)];
        const Point x{e * (static_cast<double>(i - 1) + u(rng)), e * (static_cast<double>(j - 1) + u(rng))};
        const double dc = q.distance_to_boundary(x);
        const double dd = index.nearest(x).second;
        ++out.samples;
        if (dc > dd + 1e-12 * e) ++out.lower_violations;
        if (dd * dd > dc * dc + 0.5 * e * e + 1e-12 * e * e) ++out.upper_violations;
    }
    return out;
}

} // namespace torsimax
