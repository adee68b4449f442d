#pragma once

#include "torsimax/domains.hpp"

#include <Eigen/CholmodSupport>

#include <random>

namespace torsimax {

enum class StepRule { fixed, backtracking };

/// Newton: direction from the Hessian of the discrete energy. Gradient: direction from
/// the p = 2 stiffness matrix (a fixed metric).
enum class DescentDirection { newton, gradient };

struct SolverConfig {
    double p = 2.0;
    double h = 1.0 / 64.0;
    int max_iterations = 200;
    double tolerance = 1e-10;
    StepRule step_rule = StepRule::backtracking;
    DescentDirection direction = DescentDirection::newton;
    int patience = 10;
    bool direct_p2 = true;

    void validate() const {
        require(std::isfinite(p) && p > 1.0, ErrorKind::InvalidP, "p must exceed 1");
        require(std::isfinite(h) && h > 0.0, ErrorKind::InvalidParameters, "h must be positive");
        require(max_iterations > 0, ErrorKind::InvalidParameters, "max_iterations must be positive");
        require(std::isfinite(tolerance) && tolerance > 0.0, ErrorKind::InvalidParameters, "tolerance must be positive");
        require(patience > 0, ErrorKind::InvalidParameters, "patience must be positive");
    }
};

/// Discrete p-torsion function with solver diagnostics.
struct TorsionField {
    ScalarField field;
    double p = 2.0;
    double energy_value = 0.0;
    int iterations = 0;
    double residual = 0.0;
    double delta = 0.0;
    std::vector<double> energy_history;
    int dims = 2;

    nlohmann::json to_json() const {
        nlohmann::json j = field.to_json();
        j["p"] = p;
        j["energy"] = energy_value;
        j["iterations"] = iterations;
        return j;
    }
};

/// Discrete energy F(u) = h^d sum_c [((|g_c|^2 + delta^2)^(p/2) - delta^p) / p] - h^d sum u
/// with g_c the forward differences at cell c and u = 0 off the mask. Unknowns are the
/// masked cells in grid order. dims = 1 uses x-differences only.
class TorsionEnergy {
public:
    TorsionEnergy(const ScalarField& mask, double p, double delta, int dims = 2)
        : grid_(mask.grid), p_(p), delta_(delta), dims_(dims) {
        require(p > 1.0, ErrorKind::InvalidP, "p must exceed 1");
        require(dims == 1 || dims == 2, ErrorKind::InvalidParameters, "dims must be 1 or 2");
        idx_.assign(grid_.size(), -1);
        for (std::size_t k = 0; k < grid_.size(); ++k)
            if (mask.mask[k]) {
                idx_[k] = static_cast<int>(cells_.size());
                cells_.push_back(k);
            }
        require(!cells_.empty(), ErrorKind::EmptyDomain, "mask has no cells");
        for (std::size_t j = 0; j < grid_.ny; ++j)
            for (std::size_t i = 0; i < grid_.nx; ++i) {
                const std::size_t c = grid_.index(i, j);
                const bool inner_x = i + 1 < grid_.nx, inner_y = dims_ == 2 && j + 1 < grid_.ny;
                const bool any = idx_[c] >= 0 || (inner_x && idx_[c + 1] >= 0) || (inner_y && idx_[c + grid_.nx] >= 0);
                if (!any) continue;
                require((i + 1 < grid_.nx) && (dims_ == 1 || j + 1 < grid_.ny), ErrorKind::InvalidParameters,
                        "mask touches the grid edge");
                stencil_.push_back(c);
            }
    }

    std::size_t size() const { return cells_.size(); }
    const std::vector<std::size_t>& cells() const { return cells_; }
    const Grid& grid() const { return grid_; }
    double p() const { return p_; }
    double delta() const { return delta_; }
    int dims() const { return dims_; }
    double measure() const { return dims_ == 2 ? grid_.h * grid_.h : grid_.h; }

    double value(const Eigen::VectorXd& u) const {
        double s = 0.0;
        const double dp = std::pow(delta_, p_);
        for (std::size_t c : stencil_) {
            const auto [gx, gy] = grad(u, c);
            s += (std::pow(gx * gx + gy * gy + delta_ * delta_, 0.5 * p_) - dp) / p_;
        }
        return measure() * (s - u.sum());
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& u) const {
        Eigen::VectorXd g = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(size()), -measure());
        const double scale = measure() / grid_.h;
        for (std::size_t c : stencil_) {
            const auto [gx, gy] = grad(u, c);
            const double a = std::pow(gx * gx + gy * gy + delta_ * delta_, 0.5 * p_ - 1.0) * scale;
            add(g, c, -a * (gx + gy));
            add(g, c + 1, a * gx);
            if (dims_ == 2) add(g, c + grid_.nx, a * gy);
        }
        return g;
    }

    /// Hessian sum_c D_c^T B_c D_c with D_c the +-1 difference rows, scaled by h^(d-2).
    Eigen::SparseMatrix<double> hessian(const Eigen::VectorXd& u) const {
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(stencil_.size() * 9);
        const double scale = measure() / (grid_.h * grid_.h);
        for (std::size_t c : stencil_) {
            const auto [gx, gy] = grad(u, c);
            const double s2 = gx * gx + gy * gy + delta_ * delta_;
            const double a = std::pow(s2, 0.5 * p_ - 1.0);
            const double b = p_ == 2.0 ? 0.0 : (p_ - 2.0) * std::pow(s2, 0.5 * p_ - 2.0);
            const double bxx = (a + b * gx * gx) * scale, byy = (a + b * gy * gy) * scale, bxy = b * gx * gy * scale;
            // Rows of D_c: x-difference (c -> c+1) and y-difference (c -> c+nx).
            const std::array<int, 3> k{idx_[c], idx_[c + 1], dims_ == 2 ? idx_[c + grid_.nx] : -1};
            const std::array<double, 3> dx{-1.0, 1.0, 0.0}, dy{-1.0, 0.0, 1.0};
            for (int r = 0; r < 3; ++r) {
                if (k[r] < 0) continue;
                for (int s = 0; s < 3; ++s) {
                    if (k[s] < 0) continue;
                    double v = bxx * dx[r] * dx[s];
                    if (dims_ == 2) v += byy * dy[r] * dy[s] + bxy * (dx[r] * dy[s] + dy[r] * dx[s]);
                    trip.emplace_back(k[r], k[s], v); // keep the pattern fixed across iterations
                }
            }
        }
        Eigen::SparseMatrix<double> H(static_cast<Eigen::Index>(size()), static_cast<Eigen::Index>(size()));
        H.setFromTriplets(trip.begin(), trip.end());
        return H;
    }

    /// h^d sum_c |g_c|^p without regularization.
    double gradient_power_integral(const Eigen::VectorXd& u, double q) const {
        double s = 0.0;
        for (std::size_t c : stencil_) {
            const auto [gx, gy] = grad(u, c);
            s += std::pow(gx * gx + gy * gy, 0.5 * q);
        }
        return measure() * s;
    }

    ScalarField to_field(const Eigen::VectorXd& u, const ScalarField& mask) const {
        ScalarField f = mask;
        f.values.assign(grid_.size(), 0.0);
        for (std::size_t k = 0; k < cells_.size(); ++k) f.values[cells_[k]] = std::max(0.0, u[static_cast<Eigen::Index>(k)]);
        return f;
    }

private:
    double at(const Eigen::VectorXd& u, std::size_t c) const {
        const int k = idx_[c];
        return k < 0 ? 0.0 : u[k];
    }
    std::pair<double, double> grad(const Eigen::VectorXd& u, std::size_t c) const {
        const double uc = at(u, c);
        const double gx = (at(u, c + 1) - uc) / grid_.h;
        const double gy = dims_ == 2 ? (at(u, c + grid_.nx) - uc) / grid_.h : 0.0;
        return {gx, gy};
    }
    void add(Eigen::VectorXd& g, std::size_t c, double v) const {
        const int k = idx_[c];
        if (k >= 0) g[k] += v;
    }

    Grid grid_;
    double p_;
    double delta_;
    int dims_;
    std::vector<int> idx_;
    std::vector<std::size_t> cells_;
    std::vector<std::size_t> stencil_;
};

namespace detail {

inline double regularization(const Grid& g, double p) {
    const double extent = std::max(static_cast<double>(g.nx), static_cast<double>(g.ny)) * g.h;
    return 1e-8 * std::pow(extent, 1.0 / (p - 1.0));
}

using Cholesky = Eigen::CholmodSupernodalLLT<Eigen::SparseMatrix<double>>;

/// Direct solve of the 5-point system; the p = 2 minimizer.
inline Eigen::VectorXd solve_p2(const TorsionEnergy& e2) {
    const Eigen::SparseMatrix<double> K = e2.hessian(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(e2.size())));
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(e2.size()), e2.measure());
    Cholesky llt(K);
    require(llt.info() == Eigen::Success, ErrorKind::NotConverged, "stiffness factorization failed");
    return llt.solve(rhs);
}

} // namespace detail

/// Minimizes the discrete p-torsion energy over grid functions vanishing off the mask.
/// The grid spacing is the mask's; config.h is used only when rasterizing a descriptor.
inline TorsionField solve_torsion(const ScalarField& mask, const SolverConfig& cfg, int dims = 2) {
    cfg.validate();
    require(mask.count() > 0, ErrorKind::EmptyDomain, "mask has no cells");
    const double delta = detail::regularization(mask.grid, cfg.p);
    const TorsionEnergy E(mask, cfg.p, delta, dims);
    const TorsionEnergy E2(mask, 2.0, 0.0, dims);
    TorsionField out;
    out.p = cfg.p;
    out.delta = delta;
    out.dims = dims;

    Eigen::VectorXd u = detail::solve_p2(E2);
    if (cfg.p == 2.0 && cfg.direct_p2) {
        out.energy_history = {0.0, E.value(u)};
        out.iterations = 1;
    } else {
        if (cfg.p != 2.0) {
            // Best multiple of the p = 2 solution: F(c w) = c^p A / p - c B.
            const double A = E.gradient_power_integral(u, cfg.p), B = E.measure() * u.sum();
            u *= std::pow(B / A, 1.0 / (cfg.p - 1.0));
        } else {
            u.setZero();
        }
        detail::Cholesky chol;
        bool analyzed = false;
        if (cfg.direction == DescentDirection::gradient) chol.compute(E2.hessian(u));
        double F = E.value(u);
        out.energy_history.push_back(F);
        int small = 0;
        bool converged = false;
        for (int it = 0; it < cfg.max_iterations; ++it) {
            const Eigen::VectorXd g = E.gradient(u);
            Eigen::VectorXd d;
            if (cfg.direction == DescentDirection::newton) {
                const auto H = E.hessian(u);
                if (!analyzed) {
                    chol.analyzePattern(H);
                    analyzed = true;
                }
                chol.factorize(H);
                if (chol.info() == Eigen::Success) d = chol.solve(-g);
            } else {
                d = chol.solve(-g);
            }
            double slope = d.size() ? g.dot(d) : 0.0;
            if (!d.size() || !(slope < 0.0) || !d.allFinite()) {
                d = -g;
                slope = -g.squaredNorm();
            }
            out.iterations = it + 1;
            // Predicted decrease of a full step; nothing left to gain.
            if (-slope <= 1e-3 * cfg.tolerance * std::abs(F)) {
                converged = true;
                break;
            }
            double t = 1.0;
            Eigen::VectorXd trial = u + d;
            double Ft = E.value(trial);
            if (cfg.step_rule == StepRule::backtracking) {
                while (!(Ft <= F + 1e-4 * t * slope) && t > 1e-30) {
                    t *= 0.5;
                    trial = u + t * d;
                    Ft = E.value(trial);
                }
                if (!(Ft <= F)) {
                    converged = small > 0;
                    break;
                }
            }
            const double rel = (F - Ft) / std::max(std::abs(Ft), 1e-300);
            u = std::move(trial);
            F = Ft;
            out.energy_history.push_back(F);
            small = rel < cfg.tolerance ? small + 1 : 0;
            if (small >= cfg.patience) {
                converged = true;
                break;
            }
        }
        require(converged, ErrorKind::NotConverged,
                "no convergence after " + std::to_string(cfg.max_iterations) + " iterations");
    }
    out.energy_value = E.value(u);
    const Eigen::VectorXd g = E.gradient(u);
    out.residual = g.cwiseAbs().maxCoeff() / E.measure();
    out.field = E.to_field(u, mask);
    return out;
}

inline TorsionField solve_torsion(const DomainDescriptor& d, const SolverConfig& cfg) {
    cfg.validate();
    return solve_torsion(rasterize(d, cfg.h), cfg);
}

/// (r^p' - |x|^p') / (p' N^(p'/p)), the p-torsion function of the ball of radius r.
inline double torsion_ball_analytic(double r, int N, double p, double rho) {
    require(p > 1.0, ErrorKind::InvalidP, "p must exceed 1");
    require(r > 0.0 && N >= 1, ErrorKind::InvalidParameters, "radius and dimension must be positive");
    require(std::abs(rho) <= r * (1.0 + 1e-12), ErrorKind::OutsideBall, "point lies outside the ball");
    const double q = p / (p - 1.0);
    const double a = std::min(std::abs(rho), r);
    return (std::pow(r, q) - std::pow(a, q)) / (q * std::pow(static_cast<double>(N), q / p));
}

inline double torsion_ball_analytic(double r, int N, double p, Point x) { return torsion_ball_analytic(r, N, p, norm(x)); }

/// Mean over max.
inline double phi_p(const TorsionField& w) {
    const double m = w.field.max();
    require(m > 0.0, ErrorKind::ZeroField, "field is identically zero");
    return w.field.mean() / m;
}

/// Mean over L^p-mean.
inline double psi_p(const TorsionField& w) {
    const double lp = std::pow(w.field.power_mean(w.p), 1.0 / w.p);
    require(lp > 0.0, ErrorKind::ZeroField, "field is identically zero");
    return w.field.mean() / lp;
}

namespace detail {

inline double cell_measure(const TorsionField& w) {
    return w.dims == 2 ? w.field.cell_area() : w.field.grid.h;
}

inline Eigen::VectorXd unknowns(const TorsionField& w, const TorsionEnergy& E) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(E.size()));
    for (std::size_t k = 0; k < E.size(); ++k) u[static_cast<Eigen::Index>(k)] = w.field.values[E.cells()[k]];
    return u;
}

} // namespace detail

/// Integral of w.
inline double torsion_integral(const TorsionField& w) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.field.values.size(); ++k)
        if (w.field.mask[k]) s += w.field.values[k];
    return s * detail::cell_measure(w);
}

/// Integral of |grad w|^p by the solver's forward differences.
inline double gradient_power_integral(const TorsionField& w) {
    const TorsionEnergy E(w.field, w.p, 0.0, w.dims);
    return E.gradient_power_integral(detail::unknowns(w, E), w.p);
}

/// |integral |grad w|^p - integral w| / integral w; zero for the exact minimizer.
inline double torsion_identity_gap(const TorsionField& w) {
    const double iw = torsion_integral(w);
    require(iw > 0.0, ErrorKind::ZeroField, "field is identically zero");
    return std::abs(gradient_power_integral(w) - iw) / iw;
}

/// T_p = (integral w)^(p-1).
inline double torsional_rigidity(const TorsionField& w) {
    const double iw = torsion_integral(w);
    require(iw > 0.0, ErrorKind::ZeroField, "field is identically zero");
    return std::pow(iw, w.p - 1.0);
}

/// Rayleigh quotient of w: integral |grad w|^p / integral |w|^p >= lambda_p.
inline double lambda_p_upper(const TorsionField& w) {
    const double den = w.field.power_mean(w.p) * static_cast<double>(w.field.count()) * detail::cell_measure(w);
    require(den > 0.0, ErrorKind::ZeroField, "field is identically zero");
    return gradient_power_integral(w) / den;
}

/// lambda_p T_p / |Omega|^(p-1) with the Rayleigh upper bound for lambda_p; `area`
/// defaults to the mask measure.
inline double F_p(const TorsionField& w, std::optional<double> area = std::nullopt) {
    const double a = area.value_or(static_cast<double>(w.field.count()) * detail::cell_measure(w));
    return lambda_p_upper(w) * torsional_rigidity(w) / std::pow(a, w.p - 1.0);
}

struct ShapeFunctionals {
    double phi_p = 0.0;
    double psi_p = 0.0;
    double T_p = 0.0;
    double lambda_p_upper = 0.0;
    double F_p = 0.0;
};

inline ShapeFunctionals shape_functionals(const TorsionField& w, std::optional<double> area = std::nullopt) {
    return {phi_p(w), psi_p(w), torsional_rigidity(w), lambda_p_upper(w), F_p(w, area)};
}

/// First Dirichlet eigenvalue of the 5-point Laplacian on the mask by inverse iteration.
inline double lambda2_power_iteration(const ScalarField& mask, int max_iterations = 500, double tol = 1e-12) {
    const TorsionEnergy E2(mask, 2.0, 0.0);
    const auto K = E2.hessian(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(E2.size())));
    detail::Cholesky chol(K);
    require(chol.info() == Eigen::Success, ErrorKind::NotConverged, "stiffness factorization failed");
    Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(E2.size()));
    double lambda = 0.0;
    const double h2 = mask.grid.h * mask.grid.h;
    for (int it = 0; it < max_iterations; ++it) {
        x.normalize();
        const double next = x.dot(K * x) / h2;
        if (it > 0 && std::abs(next - lambda) <= tol * next) return next;
        lambda = next;
        x = chol.solve(x);
    }
    fail(ErrorKind::NotConverged, "inverse iteration did not converge");
}

/// Phi_p of a union of intervals of half-lengths r_k:
/// (p'/(p'+1)) sum r^(p'+1) / (max r^p' sum r).
inline double phi_p_1d(const std::vector<double>& radii, double p) {
    require(!radii.empty(), ErrorKind::EmptyList, "no intervals");
    require(p > 1.0, ErrorKind::InvalidP, "p must exceed 1");
    const double q = p / (p - 1.0);
    double top = 0.0, sum = 0.0, rmax = 0.0;
    for (double r : radii) {
        require(std::isfinite(r) && r > 0.0, ErrorKind::InvalidParameters, "radii must be positive");
        top += std::pow(r, q + 1.0);
        sum += r;
        rmax = std::max(rmax, r);
    }
    return q / (q + 1.0) * top / (std::pow(rmax, q) * sum);
}

/// Grid solve of the 1-D problem on the union of intervals.
inline TorsionField solve_torsion_1d(const std::vector<double>& radii, const SolverConfig& cfg) {
    require(!radii.empty(), ErrorKind::EmptyList, "no intervals");
    cfg.validate();
    const auto d = interval_union(radii);
    const auto& iu = std::get<IntervalUnion>(d.shape());
    const auto centers = iu.centers();
    const double length = centers.back() + radii.back();
    ScalarField mask;
    mask.grid.h = cfg.h;
    mask.grid.origin = {-cfg.h, -0.5 * cfg.h};
    mask.grid.nx = static_cast<std::size_t>(std::ceil(length / cfg.h)) + 2;
    mask.grid.ny = 1;
    mask.values.assign(mask.grid.nx, 0.0);
    mask.mask.assign(mask.grid.nx, 0);
    for (std::size_t i = 0; i < mask.grid.nx; ++i) {
        const double x = mask.grid.center(i, 0).x;
        for (std::size_t k = 0; k < radii.size(); ++k)
            if (std::abs(x - centers[k]) < radii[k]) mask.mask[i] = 1;
    }
    return solve_torsion(mask, cfg, 1);
}

/// lhs = mean |v|^p, rhs = |mean v|^p + mean |v - mean v|^p / (2^(p-1) - 1).
struct JensenGap {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds() const { return lhs >= rhs - 1e-12 * std::max(1.0, std::abs(lhs)); }
};

inline JensenGap jensen_gap(const std::vector<double>& values, double p) {
    require(!values.empty(), ErrorKind::EmptyList, "no values");
    require(std::isfinite(p) && p >= 2.0, ErrorKind::InvalidP, "the estimate needs p >= 2");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double lhs = 0.0, dev = 0.0;
    for (double v : values) {
        lhs += std::pow(std::abs(v), p);
        dev += std::pow(std::abs(v - mean), p);
    }
    const double n = static_cast<double>(values.size());
    return {lhs / n, std::pow(std::abs(mean), p) + dev / n / (std::pow(2.0, p - 1.0) - 1.0)};
}

struct SweepPoint {
    double param = 0.0;
    ShapeFunctionals functionals;
};

/// Shape functionals of the unit disc perforated by holes of radius s^2 on s Z^2, for
/// each spacing s. Each hole must contain a grid center: h <= sqrt(2) s^2.
inline std::vector<SweepPoint> perforated_sweep(const std::vector<double>& spacings, const SolverConfig& cfg) {
    require(!spacings.empty(), ErrorKind::EmptyList, "no spacings");
    cfg.validate();
    std::vector<SweepPoint> out(spacings.size());
    for (std::size_t k = 0; k < spacings.size(); ++k) {
        const double s = spacings[k];
        const auto d = perforated_disc(1.0, s);
        const double hole = std::get<PerforatedDisc>(d.shape()).hole;
        require(cfg.h <= std::sqrt(2.0) * hole * (1.0 + 1e-12), ErrorKind::ResolutionTooCoarse,
                "grid spacing too coarse for holes of radius " + std::to_string(hole));
        out[k] = {s, shape_functionals(solve_torsion(d, cfg))};
    }
    std::sort(out.begin(), out.end(), [](const SweepPoint& a, const SweepPoint& b) { return a.param > b.param; });
    return out;
}

/// Phi_2 of disjoint discs from the ball formula: (1/2) sum r^4 / (max r^2 sum r^2).
inline double disc_union_phi2(const std::vector<double>& radii) {
    require(!radii.empty(), ErrorKind::EmptyList, "no discs");
    double top = 0.0, sum = 0.0, rmax = 0.0;
    for (double r : radii) {
        top += std::pow(r, 4);
        sum += r * r;
        rmax = std::max(rmax, r);
    }
    return 0.5 * top / (rmax * rmax * sum);
}

} // namespace torsimax
