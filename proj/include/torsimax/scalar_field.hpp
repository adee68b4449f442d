#pragma once

#include "torsimax/geometry.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>

namespace torsimax {

/// Cell-centered uniform grid: cell (i, j) has center origin + ((i + 1/2) h, (j + 1/2) h).
struct Grid {
    Point origin;
    double h = 0.0;
    std::size_t nx = 0;
    std::size_t ny = 0;

    std::size_t size() const { return nx * ny; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
    Point center(std::size_t i, std::size_t j) const {
        return {origin.x + (static_cast<double>(i) + 0.5) * h, origin.y + (static_cast<double>(j) + 0.5) * h};
    }
};

/// Grid covering [xmin, xmax] x [ymin, ymax] padded by one cell on each side.
inline Grid grid_over(double xmin, double ymin, double xmax, double ymax, double h) {
    require(std::isfinite(h) && h > 0.0, ErrorKind::InvalidParameters, "grid spacing must be positive");
    Grid g;
    g.h = h;
    g.nx = static_cast<std::size_t>(std::ceil((xmax - xmin) / h - 1e-9)) + 2;
    g.ny = static_cast<std::size_t>(std::ceil((ymax - ymin) / h - 1e-9)) + 2;
    g.origin = {xmin - h, ymin - h};
    require(g.nx * g.ny < (std::size_t{1} << 31), ErrorKind::InvalidParameters, "grid too large");
    return g;
}

/// Values on a grid with an inside-domain mask; values are zero off the mask.
struct ScalarField {
    Grid grid;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    std::size_t count() const {
        std::size_t c = 0;
        for (auto m : mask) c += m;
        return c;
    }
    double cell_area() const { return grid.h * grid.h; }
    double masked_area() const { return static_cast<double>(count()) * cell_area(); }

    /// Midpoint-rule integral over the mask.
    double integral() const {
        double s = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (mask[k]) s += values[k];
        return s * cell_area();
    }
    double mean() const {
        const std::size_t c = count();
        require(c > 0, ErrorKind::EmptyDomain, "field has an empty mask");
        return integral() / masked_area();
    }
    double max() const {
        double m = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (mask[k]) m = std::max(m, values[k]);
        return m;
    }
    /// Mean of |v|^p over the mask.
    double power_mean(double p) const {
        double s = 0.0;
        for (std::size_t k = 0; k < values.size(); ++k)
            if (mask[k]) s += std::pow(std::abs(values[k]), p);
        return s / static_cast<double>(count());
    }

    nlohmann::json to_json() const {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t j = 0; j < grid.ny; ++j) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t i = 0; i < grid.nx; ++i) row.push_back(values[grid.index(i, j)]);
            rows.push_back(std::move(row));
        }
        nlohmann::json m = nlohmann::json::array();
        for (std::size_t j = 0; j < grid.ny; ++j) {
            std::string row(grid.nx, '0');
            for (std::size_t i = 0; i < grid.nx; ++i) row[i] = mask[grid.index(i, j)] ? '1' : '0';
            m.push_back(row);
        }
        return {{"origin", {grid.origin.x, grid.origin.y}}, {"spacing", grid.h}, {"nx", grid.nx},
                {"ny", grid.ny}, {"values", rows}, {"mask", m}};
    }
};

/// Number of 8-neighbor masked pairs whose values differ by more than h*sqrt(2) + 1e-12.
inline std::size_t lipschitz_violations(const ScalarField& f) {
    const auto& g = f.grid;
    const double bound = g.h * std::sqrt(2.0) + 1e-12;
    std::size_t bad = 0;
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            if (!f.mask[k]) continue;
            for (const auto& [di, dj] : {std::pair{1, 0}, {0, 1}, {1, 1}, {-1, 1}}) {
                const long a = static_cast<long>(i) + di, b = static_cast<long>(j) + dj;
                if (a < 0 || b < 0 || a >= static_cast<long>(g.nx) || b >= static_cast<long>(g.ny)) continue;
                const std::size_t l = g.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
                if (f.mask[l] && std::abs(f.values[k] - f.values[l]) > bound) ++bad;
            }
        }
    return bad;
}

enum class EfficiencyMethod { analytic, grid, delaunay_exact };

inline const char* to_string(EfficiencyMethod m) {
    switch (m) {
    case EfficiencyMethod::analytic: return "analytic";
    case EfficiencyMethod::grid: return "grid";
    case EfficiencyMethod::delaunay_exact: return "delaunay_exact";
    }
    return "unknown";
}

/// Mean-to-max ratio of a nonnegative function, with how it was obtained.
struct EfficiencyReport {
    double mean = 0.0;
    double max = 0.0;
    double ratio = 0.0;
    EfficiencyMethod method = EfficiencyMethod::grid;
    std::optional<double> resolution;

    nlohmann::json to_json() const {
        nlohmann::json j{{"mean", mean}, {"max", max}, {"ratio", ratio}, {"method", to_string(method)}};
        j["resolution"] = resolution ? nlohmann::json(*resolution) : nlohmann::json(nullptr);
        return j;
    }
};

inline EfficiencyReport make_report(double mean, double max, EfficiencyMethod method,
                                    std::optional<double> resolution = std::nullopt) {
    require(max > 0.0, ErrorKind::ZeroField, "maximum is zero");
    return {mean, max, mean / max, method, resolution};
}

} // namespace torsimax
