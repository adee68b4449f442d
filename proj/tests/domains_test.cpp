#include "torsimax/domains.hpp"
#include "torsimax/torsion.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace torsimax;

namespace {

double hex_cell_area(double side) { return 1.5 * std::sqrt(3.0) * side * side; }

void expect_cells_inside(const DomainDescriptor& d, const LatticeDomain& q) {
    const double e = q.eps();
    for (const auto& [i, j] : q.cells()) {
        for (double fx : {0.0, 0.5, 1.0})
            for (double fy : {0.0, 0.5, 1.0}) {
                const Point p{e * (static_cast<double>(i - 1) + fx), e * (static_cast<double>(j - 1) + fy)};
                EXPECT_TRUE(d.contains(p)) << "cell (" << i << ", " << j << ") point " << p.x << "," << p.y;
            }
    }
}

} // namespace

TEST(Domains, DiscRasterAreaWithinOnePercent) {
    const auto f = rasterize(disc(1.0), 1.0 / 256.0);
    EXPECT_NEAR(f.masked_area(), kPi, 0.01 * kPi);
}

TEST(Domains, RasterAreaConverges) {
    const auto d = rectangle(0.73, 0.41);
    double prev = 1.0;
    for (double h : {0.02, 0.01, 0.005}) {
        const double err = std::abs(rasterize(d, h).masked_area() - d.area());
        EXPECT_LE(err, 2.0 * h * (0.73 + 0.41) + 1e-12);
        EXPECT_LE(err, prev + 1e-12);
        prev = err;
    }
}

TEST(Domains, InvalidParameters) {
    EXPECT_THROW(disc(0.0), Error);
    EXPECT_THROW(rectangle(-1.0, 1.0), Error);
    EXPECT_THROW(interval_union({}), Error);
    EXPECT_THROW(disc_union({1.0, 1.5}, 2.0), Error);
    EXPECT_THROW(honeycomb_perforated(1.0, 0.0), Error);
    EXPECT_THROW(perforated_disc(1.0, 0.1, 0.06), Error);
    try {
        disc(std::nan(""));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidParameters);
    }
}

TEST(Domains, ApproximateLatticeDiscHalfCells) {
    const auto d = disc(1.0);
    const auto q = approximate_lattice(d, 0.5);
    // Brute force: cells of side 1/2 with all four corners strictly inside the unit disc.
    std::size_t expected = 0;
    for (int i = -3; i <= 4; ++i)
        for (int j = -3; j <= 4; ++j) {
            bool in = true;
            for (int a : {i - 1, i})
                for (int b : {j - 1, j}) in = in && (0.25 * (a * a + b * b) < 1.0);
            expected += in;
        }
    EXPECT_EQ(q.size(), expected);
    EXPECT_EQ(q.size(), 4u);
    expect_cells_inside(d, q);
}

TEST(Domains, ApproximateLatticeAreasIncrease) {
    const auto d = disc(1.0);
    double prev = 0.0;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto q = approximate_lattice(d, eps);
        EXPECT_GT(q.area(), prev);
        EXPECT_LT(q.area(), kPi);
        expect_cells_inside(d, q);
        prev = q.area();
    }
}

TEST(Domains, ApproximateLatticeAlignedRectangleLosesBoundaryLayer) {
    const auto q = approximate_lattice(rectangle(1.0, 0.75), 0.25);
    // Closed squares inside the open rectangle: the boundary ring of cells is gone.
    EXPECT_EQ(q.size(), 2u);
    for (const auto& [i, j] : q.cells()) {
        EXPECT_TRUE(i == 2 || i == 3);
        EXPECT_EQ(j, 2);
    }
    expect_cells_inside(rectangle(1.0, 0.75), q);
}

TEST(Domains, ApproximateLatticeTooCoarse) {
    try {
        approximate_lattice(disc(1.0), 1.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyResult);
    }
}

TEST(Domains, HausdorffSurrogateShrinks) {
    const auto d = disc(1.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Point> pts;
    while (pts.size() < 400) {
        const Point p{u(rng), u(rng)};
        if (d.contains(p)) pts.push_back(p);
    }
    double prev = 1e9;
    for (double eps : {0.2, 0.1, 0.05}) {
        const auto q = approximate_lattice(d, eps);
        double worst = 0.0;
        for (const Point& p : pts) {
            if (q.contains(p)) continue;
            // Distance from p to the closed union of cells.
            double best = 1e9;
            for (const auto& [i, j] : q.cells()) {
                const double x0 = eps * static_cast<double>(i - 1), y0 = eps * static_cast<double>(j - 1);
                const double dx = std::max({x0 - p.x, 0.0, p.x - x0 - eps});
                const double dy = std::max({y0 - p.y, 0.0, p.y - y0 - eps});
                best = std::min(best, std::hypot(dx, dy));
            }
            worst = std::max(worst, best);
        }
        EXPECT_LT(worst, prev);
        EXPECT_LE(worst, 3.0 * eps);
        prev = worst;
    }
}

TEST(Domains, HoneycombRemovedCountMatchesDensity) {
    for (double eps : {0.1, 0.05}) {
        const HoneycombPerforated hc{1.0, eps, HoneycombVariant::centers};
        const double n = static_cast<double>(hc.removed_points().size());
        // Hexagons with centers in B(1) cover B(1 - eps) and lie inside B(1 + eps).
        const double a = hex_cell_area(eps);
        EXPECT_GE(n, kPi * (1.0 - eps) * (1.0 - eps) / a);
        EXPECT_LE(n, kPi * (1.0 + eps) * (1.0 + eps) / a);
        const HoneycombPerforated hv{1.0, eps, HoneycombVariant::vertices};
        const double nv = static_cast<double>(hv.removed_points().size());
        EXPECT_NEAR(nv / n, 2.0, 0.3);
    }
}

TEST(Domains, HoneycombDistanceMatchesBruteForce) {
    for (auto v : {HoneycombVariant::centers, HoneycombVariant::centers_compact, HoneycombVariant::vertices}) {
        const HoneycombPerforated hc{1.0, 0.15, v};
        const auto pts = hc.removed_points();
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int k = 0; k < 300; ++k) {
            const Point p{u(rng), u(rng)};
            double expected = std::max(0.0, 1.0 - norm(p));
            if (expected > 0.0)
                for (const Point& c : pts) expected = std::min(expected, distance(p, c));
            EXPECT_NEAR(hc.distance(p), expected, 1e-12) << to_string(v);
        }
    }
}

TEST(Domains, PerforatedDiscGeometry) {
    const auto d = perforated_disc(1.0, 0.2);
    const auto& pd = std::get<PerforatedDisc>(d.shape());
    EXPECT_DOUBLE_EQ(pd.hole, 0.04);
    EXPECT_FALSE(d.contains({0.0, 0.0}));
    EXPECT_FALSE(d.contains({0.2, 0.03}));
    EXPECT_TRUE(d.contains({0.1, 0.1}));
    EXPECT_NEAR(d.distance({0.1, 0.0}), 0.06, 1e-12);
    const auto f = rasterize(d, 1.0 / 512.0);
    EXPECT_NEAR(f.masked_area(), d.area(), 0.01 * d.area());
}

TEST(Domains, DiscUnionDistance) {
    const auto d = harmonic_disc_union(5);
    const auto& du = std::get<DiscUnion>(d.shape());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-1.0, 9.0), uy(-1.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const Point p{ux(rng), uy(rng)};
        double expected = 0.0;
        for (std::size_t i = 0; i < du.radii.size(); ++i)
            expected = std::max(expected, du.radii[i] - distance(p, du.center(i)));
        EXPECT_NEAR(d.distance(p), expected, 1e-14);
    }
}

TEST(Domains, DiscUnionPhi2Decreases) {
    double prev = 1.0;
    for (std::size_t n = 1; n <= 20; ++n) {
        std::vector<double> r;
        for (std::size_t k = 1; k <= n; ++k) r.push_back(1.0 / std::sqrt(static_cast<double>(k)));
        const double phi = disc_union_phi2(r);
        EXPECT_LT(phi, prev);
        prev = phi;
    }
    EXPECT_DOUBLE_EQ(disc_union_phi2({1.0}), 0.5);
    // Solver agrees with the analytic values on small unions.
    SolverConfig cfg;
    cfg.h = 1.0 / 48.0;
    double prev_solved = 1.0;
    for (std::size_t n = 1; n <= 3; ++n) {
        const auto w = solve_torsion(harmonic_disc_union(n), cfg);
        const double phi = phi_p(w);
        std::vector<double> r;
        for (std::size_t k = 1; k <= n; ++k) r.push_back(1.0 / std::sqrt(static_cast<double>(k)));
        EXPECT_NEAR(phi, disc_union_phi2(r), 0.03);
        EXPECT_LT(phi, prev_solved);
        prev_solved = phi;
    }
}

TEST(Domains, JsonRoundTrip) {
    const std::vector<DomainDescriptor> all{
        disc(1.5),
        rectangle(2.0, 0.5),
        interval_union({1.0, 0.5}),
        harmonic_disc_union(4),
        honeycomb_perforated(1.0, 0.1, HoneycombVariant::vertices),
        perforated_disc(1.0, 0.1),
        lattice(LatticeDomain(0.25, {{0, 0}, {1, 0}, {1, 1}})),
    };
    for (const auto& d : all) {
        const auto j = d.to_json();
        const auto back = domain_from_json(nlohmann::json::parse(j.dump()));
        EXPECT_EQ(back.kind(), d.kind());
        EXPECT_EQ(back.to_json(), j);
        EXPECT_DOUBLE_EQ(back.area(), d.area());
    }
}

TEST(Domains, JsonErrors) {
    for (const char* text : {R"({"kind":"blob","params":{}})", R"({"kind":"disc"})", R"({"kind":"disc","params":{"radius":"x"}})"}) {
        try {
            domain_from_json(nlohmann::json::parse(text));
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::ParseError) << text;
        }
    }
}

TEST(Domains, IntervalUnionIsOneDimensional) {
    const auto d = interval_union({1.0, 0.5});
    EXPECT_FALSE(d.is_planar());
    EXPECT_DOUBLE_EQ(d.area(), 3.0);
    EXPECT_THROW(d.contains({0.0, 0.0}), Error);
}
