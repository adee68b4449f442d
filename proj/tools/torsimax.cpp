#include "torsimax/acceptance.hpp"
#include "torsimax/distance_efficiency.hpp"
#include "torsimax/io.hpp"
#include "torsimax/parallel.hpp"
#include "torsimax/torsion.hpp"
#include "torsimax/triangle_energy.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

using namespace torsimax;
using nlohmann::json;

namespace {

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::DegenerateTriangle:
    case ErrorKind::CollinearInput:
    case ErrorKind::DuplicateSites:
    case ErrorKind::DegenerateBoundary:
    case ErrorKind::NotInscribable:
        return 3;
    case ErrorKind::NotConverged:
        return 4;
    case ErrorKind::ResolutionTooCoarse:
    case ErrorKind::EmptyResult:
        return 5;
    default:
        return 2;
    }
}

std::vector<std::string> split(const std::string& s, const std::string& seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(ErrorKind::ParseError, "not a number: '" + s + "'");
    }
    require(used == s.size(), ErrorKind::ParseError, "not a number: '" + s + "'");
    return v;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    for (const auto& t : split(s, ", ")) out.push_back(parse_number(t));
    require(!out.empty(), ErrorKind::ParseError, "empty list");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::ParseError, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Report the line and column of the offending byte.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        fail(ErrorKind::ParseError,
             path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

/// Domain flags shared by phi, phi-d, torsion and the eps-lattice sweep.
struct DomainArgs {
    std::string kind;
    std::string file;
    double radius = 1.0;
    double a = 1.0;
    double b = 1.0;
    double eps = 0.1;
    double spacing = 0.2;
    std::string variant = "centers";
    std::string radii;
    std::size_t n = 0;

    void add(CLI::App* app, bool with_eps = true) {
        app->add_option("--domain", kind,
                        "disc | rectangle | interval_union_1d | disc_union | honeycomb_perforated | perforated_disc");
        app->add_option("--domain-file", file, "domain descriptor JSON");
        app->add_option("--radius,--R", radius, "disc radius");
        app->add_option("--a", a, "rectangle width");
        app->add_option("--b", b, "rectangle height");
        if (with_eps) app->add_option("--eps", eps, "honeycomb side");
        app->add_option("--spacing", spacing, "perforation spacing s");
        app->add_option("--variant", variant, "honeycomb variant: centers | centers_compact | vertices");
        app->add_option("--radii", radii, "comma-separated radii for unions");
        app->add_option("--n", n, "number of discs 1/sqrt(k) in a harmonic union");
    }

    DomainDescriptor build() const {
        if (!file.empty()) {
            require(kind.empty(), ErrorKind::ParseError, "give either --domain or --domain-file");
            try {
                return domain_from_json(parse_json_file(file));
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::ParseError && std::string(e.what()).find(file) == std::string::npos)
                    fail(ErrorKind::ParseError, file + ": " + e.what());
                throw;
            }
        }
        require(!kind.empty(), ErrorKind::ParseError, "a domain is required (--domain or --domain-file)");
        if (kind == "disc") return disc(radius);
        if (kind == "rectangle") return rectangle(a, b);
        if (kind == "interval_union_1d") return interval_union(parse_list(radii));
        if (kind == "disc_union") return n > 0 ? harmonic_disc_union(n) : disc_union(parse_list(radii));
        if (kind == "honeycomb_perforated") return honeycomb_perforated(radius, eps, honeycomb_variant_from_string(variant));
        if (kind == "perforated_disc") return perforated_disc(radius, spacing);
        fail(ErrorKind::ParseError, "unknown domain kind '" + kind + "'");
    }
};

/// Writes text to `out` with a manifest, or to stdout when `out` is empty.
void emit(const std::string& text, const std::string& out, RunManifest manifest) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    write_text(out, text);
    manifest.outputs = {out};
    manifest.write();
}

json energy_json(const EnergyReport& r) {
    json verts = json::array();
    for (int i = 0; i < 3; ++i) verts.push_back({r.triangle.vertex(i).x, r.triangle.vertex(i).y});
    return {{"vertices", verts},           {"vertex_integral", r.vertex_integral}, {"area", r.area},
            {"circumradius", r.circumradius}, {"energy", r.energy},                 {"method", to_string(r.method)}};
}

std::string number_text(double v) { return format_number(v); }

/// Replaces every floating value by its 12-significant-digit rendering.
json rounded(const json& j) {
    if (j.is_number_float()) return json::parse(number_text(j.get<double>()));
    if (j.is_array() || j.is_object()) {
        json out = j;
        for (auto it = out.begin(); it != out.end(); ++it) *it = rounded(*it);
        return out;
    }
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-to-max efficiency of distance and torsion functions"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_flag("--help", "print help and exit");
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "random seed")->default_val(0);
    app.set_version_flag("--version", std::string(kToolVersion));

    // energy
    auto* energy_cmd = app.add_subcommand("energy", "vertex-distance energy of a triangle");
    std::string points, sides;
    bool inscribed = false, oracle = false;
    energy_cmd->add_option("--points", points, "three points \"x,y x,y x,y\"");
    energy_cmd->add_option("--sides", sides, "three side lengths a,b,c");
    energy_cmd->add_flag("--inscribed", inscribed, "scale the sides onto the unit circle");
    energy_cmd->add_flag("--oracle", oracle, "add the quadrature cross-check");

    // phi
    auto* phi_cmd = app.add_subcommand("phi", "mean-to-max ratio of the distance to the boundary");
    DomainArgs phi_dom;
    double phi_h = 0.01;
    phi_dom.add(phi_cmd);
    phi_cmd->add_option("--h", phi_h, "grid spacing");

    // phi-d
    auto* phid_cmd = app.add_subcommand("phi-d", "exact discrete efficiency of a lattice domain");
    DomainArgs phid_dom;
    std::string lattice_file;
    std::size_t poly_n = 0;
    double lattice_eps = 0.1;
    bool no_grid = false;
    phid_dom.add(phid_cmd, false);
    phid_cmd->add_option("--lattice", lattice_file, "lattice domain JSON");
    phid_cmd->add_option("--polyomino", poly_n, "random polyomino with this many cells");
    phid_cmd->add_option("--eps", lattice_eps, "lattice spacing");
    phid_cmd->add_flag("--no-grid-check", no_grid, "skip the grid cross-check");

    // torsion
    auto* torsion_cmd = app.add_subcommand("torsion", "p-torsion function on a grid");
    DomainArgs tor_dom;
    SolverConfig tor_cfg;
    tor_cfg.h = 0.01;
    std::string tor_out;
    tor_dom.add(torsion_cmd);
    torsion_cmd->add_option("--p", tor_cfg.p, "exponent p > 1");
    torsion_cmd->add_option("--h", tor_cfg.h, "grid spacing");
    torsion_cmd->add_option("--tol", tor_cfg.tolerance, "relative energy tolerance");
    torsion_cmd->add_option("--max-iter", tor_cfg.max_iterations, "iteration cap");
    torsion_cmd->add_option("--out", tor_out, "write the field JSON here");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps written as CSV");
    sweep_cmd->require_subcommand(1);
    std::string sweep_out, sweep_h = "auto", sweep_eps = "0.2,0.1,0.05", sweep_spacing = "0.2,0.1,0.05";
    double sweep_R = 1.0, sweep_p = 2.0;
    std::string sweep_variant = "centers";
    std::size_t sweep_n = 10;
    auto* sw_honey = sweep_cmd->add_subcommand("honeycomb", "Phi_inf of honeycomb-perforated discs against eps");
    sw_honey->add_option("--R", sweep_R, "disc radius");
    sw_honey->add_option("--eps", sweep_eps, "comma-separated eps values");
    sw_honey->add_option("--h", sweep_h, "grid spacing or auto (eps/16)");
    sw_honey->add_option("--variant", sweep_variant, "centers | centers_compact | vertices");
    sw_honey->add_option("--out", sweep_out, "CSV path");
    auto* sw_perf = sweep_cmd->add_subcommand("perforated", "torsion functionals of the perforated disc against s");
    sw_perf->add_option("--spacing", sweep_spacing, "comma-separated spacings s");
    sw_perf->add_option("--p", sweep_p, "exponent p");
    sw_perf->add_option("--h", sweep_h, "grid spacing or auto (smallest hole / sqrt 2)");
    sw_perf->add_option("--out", sweep_out, "CSV path");
    auto* sw_lat = sweep_cmd->add_subcommand("eps-lattice", "Phi_d,inf of lattice approximations against eps");
    DomainArgs lat_dom;
    lat_dom.add(sw_lat, false);
    sw_lat->add_option("--eps", sweep_eps, "comma-separated lattice spacings");
    sw_lat->add_option("--out", sweep_out, "CSV path");
    auto* sw_union = sweep_cmd->add_subcommand("disc-union", "torsion functionals of harmonic disc unions");
    sw_union->add_option("--n", sweep_n, "largest number of discs");
    sw_union->add_option("--p", sweep_p, "exponent p");
    sw_union->add_option("--h", sweep_h, "grid spacing or auto (1/32)");
    sw_union->add_option("--out", sweep_out, "CSV path");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
    bool fast = false;
    verify_cmd->add_flag("--fast", fast, "coarser grids and 5% PDE tolerances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    auto auto_h = [&](double fallback) { return sweep_h == "auto" ? fallback : parse_number(sweep_h); };

    try {
        if (*energy_cmd) {
            require(points.empty() != sides.empty(), ErrorKind::ParseError, "give exactly one of --points or --sides");
            json out;
            std::optional<Triangle> t;
            if (!points.empty()) {
                const auto pairs = split(points, " ;");
                require(pairs.size() == 3, ErrorKind::ParseError, "--points needs three x,y pairs");
                std::array<Point, 3> v;
                for (std::size_t i = 0; i < 3; ++i) {
                    const auto xy = split(pairs[i], ",");
                    require(xy.size() == 2, ErrorKind::ParseError, "bad point '" + pairs[i] + "'");
                    v[i] = {parse_number(xy[0]), parse_number(xy[1])};
                }
                require(std::abs(orient2d(v[0], v[1], v[2])) > 0.0, ErrorKind::CollinearInput, "points are collinear");
                t = Triangle(v[0], v[1], v[2]);
            } else {
                const auto l = parse_list(sides);
                require(l.size() == 3, ErrorKind::ParseError, "--sides needs three lengths");
                for (double x : l) require(std::isfinite(x) && x > 0.0, ErrorKind::DegenerateTriangle, "sides must be positive");
                std::array<double, 3> s{l[0], l[1], l[2]};
                std::sort(s.begin(), s.end());
                require(s[0] + s[1] > s[2] * (1.0 + 1e-12), ErrorKind::DegenerateTriangle, "sides violate the triangle inequality");
                if (inscribed) {
                    // Scale onto the unit circle by the circumradius.
                    const double p = 0.5 * (l[0] + l[1] + l[2]);
                    const double area = std::sqrt(std::max(0.0, p * (p - l[0]) * (p - l[1]) * (p - l[2])));
                    const double R = l[0] * l[1] * l[2] / (4.0 * area);
                    t = inscribed_triangle(l[0] / R, l[1] / R, l[2] / R);
                    out["sides_formula"] = energy_from_sides(l[0] / R, l[1] / R, l[2] / R);
                } else {
                    // Place a = |BC|, b = |CA|, c = |AB| with A at the origin and B on the x-axis.
                    const double a = l[0], b = l[1], c = l[2];
                    const double x = (b * b + c * c - a * a) / (2.0 * c);
                    t = Triangle({0.0, 0.0}, {c, 0.0}, {x, std::sqrt(std::max(0.0, b * b - x * x))});
                }
            }
            const auto rep = energy(*t);
            out.update(energy_json(rep));
            if (oracle) {
                const double q = vertex_distance_integral_quadrature(*t, 1e-10);
                out["oracle_vertex_integral"] = q;
                out["oracle_energy"] = q / (rep.area * rep.circumradius);
                out["oracle_relative_difference"] = std::abs(q - rep.vertex_integral) / rep.vertex_integral;
            }
            print_json(rounded(out));
            return 0;
        }

        if (*phi_cmd) {
            const auto d = phi_dom.build();
            EfficiencyReport r;
            if (d.kind() == DomainKind::honeycomb_perforated) {
                const auto& hc = std::get<HoneycombPerforated>(d.shape());
                r = honeycomb_phi_infinity(hc.radius, hc.eps, phi_h, hc.variant);
            } else {
                r = phi_infinity(d, phi_h);
            }
            print_json(rounded({{"domain", d.to_json()}, {"h", phi_h}, {"report", r.to_json()}}));
            return 0;
        }

        if (*phid_cmd) {
            std::optional<LatticeDomain> q;
            if (!lattice_file.empty()) {
                q = lattice_from_json_file(lattice_file);
            } else if (poly_n > 0) {
                q = grow_polyomino(poly_n, lattice_eps, seed);
            } else {
                q = approximate_lattice(phid_dom.build(), lattice_eps);
            }
            const auto e = phi_d_infinity(*q, !no_grid);
            print_json(rounded({{"cells", q->size()}, {"eps", q->eps()}, {"result", e.to_json()}}));
            return 0;
        }

        if (*torsion_cmd) {
            const auto d = tor_dom.build();
            const TorsionField w = d.kind() == DomainKind::interval_union_1d
                                       ? solve_torsion_1d(std::get<IntervalUnion>(d.shape()).radii, tor_cfg)
                                       : solve_torsion(d, tor_cfg);
            const auto f = shape_functionals(w, d.area());
            json out{{"domain", d.to_json()},
                     {"p", w.p},
                     {"h", tor_cfg.h},
                     {"iterations", w.iterations},
                     {"residual", w.residual},
                     {"energy", w.energy_value},
                     {"w_max", w.field.max()},
                     {"phi_p", f.phi_p},
                     {"psi_p", f.psi_p},
                     {"T_p", f.T_p},
                     {"lambda_p_upper", f.lambda_p_upper},
                     {"F_p", f.F_p}};
            if (!tor_out.empty()) {
                RunManifest m;
                m.command = "torsion";
                m.parameters = {{"domain", d.to_json().dump()}, {"p", format_number(tor_cfg.p)},
                                {"h", format_number(tor_cfg.h)}, {"tol", format_number(tor_cfg.tolerance)}};
                emit(w.to_json().dump() + "\n", tor_out, m);
                out["field_file"] = tor_out;
            }
            print_json(rounded(out));
            return 0;
        }

        if (*sweep_cmd) {
            RunManifest m;
            m.parameters["seed"] = std::to_string(seed);
            std::string csv;
            if (*sw_honey) {
                auto eps = parse_list(sweep_eps);
                std::sort(eps.begin(), eps.end(), std::greater<>());
                const auto variant = honeycomb_variant_from_string(sweep_variant);
                std::vector<std::vector<double>> rows(eps.size());
                parallel_for(eps.size(), [&](std::size_t k) {
                    const double h = auto_h(eps[k] / 16.0);
                    const auto r = honeycomb_phi_infinity(sweep_R, eps[k], h, variant);
                    rows[k] = {eps[k], h, r.ratio, kHoneycombConstant - r.ratio};
                });
                CsvTable t({"eps", "h", "ratio", "limit_gap"});
                for (const auto& r : rows) t.add_row(r);
                csv = t.str();
                m.command = "sweep honeycomb";
                m.parameters.insert({{"R", format_number(sweep_R)}, {"eps", sweep_eps}, {"h", sweep_h}, {"variant", sweep_variant}});
            } else if (*sw_perf) {
                const auto s = parse_list(sweep_spacing);
                SolverConfig cfg;
                cfg.p = sweep_p;
                const double smin = *std::min_element(s.begin(), s.end());
                cfg.h = auto_h(std::sqrt(2.0) * smin * smin);
                CsvTable t({"param", "phi", "psi", "Tp", "lambda_upper", "Fp"});
                for (const auto& pt : perforated_sweep(s, cfg)) {
                    const auto& f = pt.functionals;
                    t.add_row(std::vector<double>{pt.param, f.phi_p, f.psi_p, f.T_p, f.lambda_p_upper, f.F_p});
                }
                csv = t.str();
                m.command = "sweep perforated";
                m.parameters.insert({{"spacing", sweep_spacing}, {"p", format_number(sweep_p)}, {"h", format_number(cfg.h)}});
            } else if (*sw_lat) {
                auto eps = parse_list(sweep_eps);
                std::sort(eps.begin(), eps.end(), std::greater<>());
                const auto d = lat_dom.build();
                std::vector<std::vector<double>> rows(eps.size());
                std::vector<std::optional<Error>> errors(eps.size());
                parallel_for(eps.size(), [&](std::size_t k) {
                    try {
                        const auto q = approximate_lattice(d, eps[k]);
                        const auto e = phi_d_infinity(q, false);
                        rows[k] = {eps[k], static_cast<double>(q.size()), e.report.mean, e.report.max, e.report.ratio,
                                   kHoneycombConstant - e.report.ratio};
                    } catch (const Error& err) {
                        errors[k] = err;
                    }
                });
                for (const auto& e : errors)
                    if (e) throw *e;
                CsvTable t({"eps", "cells", "mean", "max", "ratio", "limit_gap"});
                for (const auto& r : rows) t.add_row(r);
                csv = t.str();
                m.command = "sweep eps-lattice";
                m.parameters.insert({{"domain", d.to_json().dump()}, {"eps", sweep_eps}});
            } else {
                require(sweep_n >= 1, ErrorKind::InvalidParameters, "--n must be at least 1");
                SolverConfig cfg;
                cfg.p = sweep_p;
                cfg.h = auto_h(1.0 / 32.0);
                CsvTable t({"n", "phi_analytic", "phi", "psi", "Tp", "lambda_upper", "Fp"});
                for (std::size_t n = 1; n <= sweep_n; ++n) {
                    const auto d = harmonic_disc_union(n);
                    const auto f = shape_functionals(solve_torsion(d, cfg), d.area());
                    std::vector<double> r;
                    for (std::size_t k = 1; k <= n; ++k) r.push_back(1.0 / std::sqrt(static_cast<double>(k)));
                    const std::string analytic = sweep_p == 2.0 ? format_number(disc_union_phi2(r)) : "";
                    t.add_row(std::vector<std::string>{std::to_string(n), analytic, format_number(f.phi_p),
                                                       format_number(f.psi_p), format_number(f.T_p),
                                                       format_number(f.lambda_p_upper), format_number(f.F_p)});
                }
                csv = t.str();
                m.command = "sweep disc-union";
                m.parameters.insert({{"n", std::to_string(sweep_n)}, {"p", format_number(sweep_p)}, {"h", format_number(cfg.h)}});
            }
            emit(csv, sweep_out, m);
            return 0;
        }

        if (*verify_cmd) {
            std::setvbuf(stdout, nullptr, _IONBF, 0);
            std::puts(kConstantNote);
            int failed = 0;
            run_acceptance({fast, seed}, [&](const CriterionResult& r) {
                std::puts(r.line().c_str());
                failed += r.pass ? 0 : 1;
            });
            std::printf("%d of 14 criteria passed\n", 14 - failed);
            return failed == 0 ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code(e.kind());
    }
    return 0;
}
