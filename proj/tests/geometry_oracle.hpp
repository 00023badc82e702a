#pragma once
// Direct half-plane constructions for two finite horoballs, used only by tests.
// Works in the vertical plane through both centers: the balls become circles
// tangent to the real axis at 0 and L with diameters d1, d2.
#include <cmath>
#include <complex>
#include <utility>

namespace oracle {

struct TangentPicture {
    double l1, l2;
};

// Hyperbolic length along a geodesic semicircle between angles t1, t2 (from the axis).
inline double arc_length_on_geodesic(double t1, double t2) {
    return std::abs(std::log(std::tan(t1 / 2) / std::tan(t2 / 2)));
}

// Hyperbolic length along the horocycle tangent at 0 with diameter d, between
// two of its points: invert to a horizontal line at height 1/d.
inline double horocycle_length(double d, std::complex<double> p, std::complex<double> q) {
    return d * std::abs(std::real(-1.0 / p) - std::real(-1.0 / q));
}

inline TangentPicture tangent_picture(double L, double d1, double d2) {
    const double r1 = d1 / 2, r2 = d2 / 2;
    // Semicircle centered at m with radius R, externally tangent to both circles.
    auto m_of = [&](double R) { return (L * L + R * (d1 - d2)) / (2 * L); };
    // Tangency to the first circle: m^2 = R^2 + R d1, a quadratic a R^2 + b R + c = 0.
    const double a = (d1 - d2) * (d1 - d2) / (4 * L * L) - 1, b = -(d1 + d2) / 2, c = L * L / 4;
    double R;
    if (std::abs(a) < 1e-14) {
        R = -c / b;
    } else {
        double disc = std::sqrt(b * b - 4 * a * c);
        double s1 = (-b + disc) / (2 * a), s2 = (-b - disc) / (2 * a);
        R = s1 > 0 && (s2 <= 0 || s1 < s2) ? s1 : s2;
    }
    const double m = m_of(R);
    auto touch = [&](double cx, double r) {
        std::complex<double> dir(cx - m, r);
        return std::complex<double>(m, 0) + dir / std::abs(dir) * R;
    };
    auto p1 = touch(0, r1), p2 = touch(L, r2);
    auto angle = [&](std::complex<double> p) { return std::arg(p - std::complex<double>(m, 0)); };
    double l1 = arc_length_on_geodesic(angle(p1), angle(p2));
    // Common perpendicular: the semicircle over [0, L]; it meets the first horocycle here.
    double x = L * d1 * d1 / (d1 * d1 + L * L);
    std::complex<double> foot(x, L * x / d1);
    return {l1, horocycle_length(d1, p1, foot)};
}

} // namespace oracle
