#pragma once

#include "torsimax/quadrature.hpp"

#include <sstream>
#include <string>

namespace torsimax {

enum class EnergyMethod { closed_form, quadrature };

inline const char* to_string(EnergyMethod m) { return m == EnergyMethod::closed_form ? "closed_form" : "quadrature"; }

inline constexpr double kEnergyQuadratureTolerance = 1e-7;

/// E(t) = (integral of the distance to the nearest vertex) / (area * circumradius).
struct EnergyReport {
    Triangle triangle;
    double vertex_integral = 0.0;
    double area = 0.0;
    double circumradius = 0.0;
    double energy = 0.0;
    EnergyMethod method = EnergyMethod::closed_form;
};

inline EnergyReport energy(const Triangle& t) {
    const bool closed = t.circumcenter_in_closure();
    const double integral = closed ? vertex_distance_integral_closed(t)
                                   : vertex_distance_integral_quadrature(t, kEnergyQuadratureTolerance);
    return {t, integral, t.area(), t.circumradius(), integral / (t.area() * t.circumradius()),
            closed ? EnergyMethod::closed_form : EnergyMethod::quadrature};
}

/// Energy of the acute or right triangle inscribed in the unit circle with the given
/// sides. Sides are chords 2 sin(theta_i) whose half-arcs theta_i must add up to pi.
inline double energy_from_sides(double l1, double l2, double l3) {
    const std::array<double, 3> l{l1, l2, l3};
    double arcs = 0.0;
    for (double x : l) {
        require(std::isfinite(x) && x > 0.0 && x <= 2.0 + 1e-12, ErrorKind::NotInscribable,
                "sides must lie in (0, 2] for the unit circle");
        arcs += std::asin(std::min(1.0, x / 2.0));
    }
    require(std::abs(arcs - kPi) <= 1e-6, ErrorKind::NotInscribable,
            "sides do not form an acute or right triangle inscribed in the unit circle");
    double num = 0.0, den = 0.0;
    for (double x : l) {
        const double s = std::sqrt(std::max(0.0, 4.0 - x * x));
        if (s >= 1e-13) num += x * x * x * std::log((2.0 + s) / (2.0 - s));
        den += x * s;
    }
    return 1.0 / 3.0 + num / (12.0 * den);
}

/// Triangle inscribed in the unit circle with the given chord lengths.
inline Triangle inscribed_triangle(double l1, double l2, double l3) {
    const double a1 = 2.0 * std::asin(std::min(1.0, l1 / 2.0));
    const double a2 = 2.0 * std::asin(std::min(1.0, l2 / 2.0));
    const double a3 = 2.0 * std::asin(std::min(1.0, l3 / 2.0));
    require(std::abs(a1 + a2 + a3 - 2.0 * kPi) <= 2e-6, ErrorKind::NotInscribable,
            "sides do not close around the unit circle");
    // Chord l1 spans the arc a1 from angle 0, chord l2 the next arc; l3 closes the loop.
    return {{1.0, 0.0}, {std::cos(a1), std::sin(a1)}, {std::cos(a1 + a2), std::sin(a1 + a2)}};
}

/// Reflects the obtuse vertex A across the opposite side BC and returns the isosceles
/// triangles (A, B, A') and (A, C, A'). Both have circumradius at most r(t).
inline std::pair<Triangle, Triangle> reflect_obtuse(const Triangle& t) {
    require(t.is_obtuse(), ErrorKind::NotObtuse, "triangle is not strictly obtuse");
    int ia = 0;
    for (int i = 1; i < 3; ++i)
        if (t.side(i) > t.side(ia)) ia = i;
    const Point a = t.vertex(ia), b = t.vertex((ia + 1) % 3), c = t.vertex((ia + 2) % 3);
    const Point bc = c - b;
    const Point foot = b + (dot(a - b, bc) / dot(bc, bc)) * bc;
    const Point a2 = 2.0 * foot - a;
    Triangle t1(a, b, a2), t2(a, c, a2);
    const double r = t.circumradius();
    require(t1.circumradius() <= r * (1.0 + 1e-12) && t2.circumradius() <= r * (1.0 + 1e-12),
            ErrorKind::DomainError, "reflected triangle has a larger circumradius");
    return {t1, t2};
}

/// L(t) = 2cos^2 t - (3 ln3 / 2) cos 2t - 3 cos^2 t sin t ln((1 + sin t)/(1 - sin t)).
inline double profile_L(double t) {
    require(t > 0.0 && t < kPi / 2.0, ErrorKind::DomainError, "profile_L is defined on (0, pi/2)");
    const double c = std::cos(t), s = std::sin(t);
    return 2.0 * c * c - 1.5 * std::log(3.0) * std::cos(2.0 * t) - 3.0 * c * c * s * std::log((1.0 + s) / (1.0 - s));
}

/// f(xi) = (1/3)(1 - (xi^2/4) ln(xi^2/(4 - xi^2)) + ln((2 + xi)/(2 - xi)) / (2 xi)).
inline double profile_f(double xi) {
    require(xi > 0.0 && xi < std::sqrt(2.0), ErrorKind::DomainError, "profile_f is defined on (0, sqrt 2)");
    const double x2 = xi * xi;
    return (1.0 - 0.25 * x2 * std::log(x2 / (4.0 - x2)) + std::log((2.0 + xi) / (2.0 - xi)) / (2.0 * xi)) / 3.0;
}

/// Number of sign changes of a central-difference derivative of L sampled at n midpoints
/// of (0, pi/2), with the sign sequence's first and last signs.
struct SignChangeReport {
    int changes = 0;
    int first_sign = 0;
    int last_sign = 0;
    double crossing = 0.0;
};

inline SignChangeReport profile_L_derivative_signs(int n) {
    SignChangeReport rep;
    const double step = (kPi / 2.0) / n;
    int prev = 0;
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) * step;
        const double h = std::min(1e-6, 0.25 * std::min(t, kPi / 2.0 - t));
        const double d = (profile_L(t + h) - profile_L(t - h)) / (2.0 * h);
        const int sign = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (sign == 0) continue;
        if (prev == 0) rep.first_sign = sign;
        else if (sign != prev) {
            ++rep.changes;
            rep.crossing = t;
        }
        prev = sign;
    }
    rep.last_sign = prev;
    return rep;
}

/// Golden-section search for the maximizer of a unimodal f on [lo, hi].
template <class F>
double golden_section_argmax(const F& f, double lo, double hi, double tol = 1e-10) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

/// Vertices of the regular hexagon of circumradius `radius` centered at the origin.
inline std::array<Point, 6> regular_hexagon(double radius = 1.0) {
    std::array<Point, 6> h;
    for (int k = 0; k < 6; ++k) {
        const double a = kPi / 2.0 + k * kPi / 3.0;
        h[static_cast<std::size_t>(k)] = {radius * std::cos(a), radius * std::sin(a)};
    }
    return h;
}

/// Mean of |x| over the unit-circumradius hexagon from its six central triangles,
/// integrated numerically.
inline double hexagon_mean_norm_quadrature(double tol) {
    const auto h = regular_hexagon();
    const Point o{0.0, 0.0};
    auto f = [](Point x) { return norm(x); };
    const double piece = 0.5 * std::abs(orient2d(o, h[0], h[1]));
    double total = 0.0;
    for (std::size_t k = 0; k < 6; ++k) total += integrate_triangle(f, o, h[k], h[(k + 1) % 6], tol * piece);
    return total / (6.0 * piece);
}

/// Same mean from the exact apex-sector integral over each central triangle.
inline double hexagon_mean_norm_closed() {
    const auto h = regular_hexagon();
    const Point o{0.0, 0.0};
    double total = 0.0, area = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
        total += apex_distance_integral(o, h[k], h[(k + 1) % 6]);
        area += 0.5 * orient2d(o, h[k], h[(k + 1) % 6]);
    }
    return total / area;
}

inline std::string energy_csv_header() { return "l1,l2,l3,area,circumradius,energy,method"; }

inline std::string energy_csv_row(const EnergyReport& r) {
    std::ostringstream os;
    os.precision(12);
    os << r.triangle.side(0) << ',' << r.triangle.side(1) << ',' << r.triangle.side(2) << ',' << r.area << ','
       << r.circumradius << ',' << r.energy << ',' << to_string(r.method);
    return os.str();
}

} // namespace torsimax
