#pragma once
// Upper half-space horoballs and closed-form cusp estimates.
#include <cmath>
#include <complex>
#include <numbers>

#include "cusplab/error.hpp"

namespace cusplab::geometry {

using cplx = std::complex<double>;

inline const double WAIST = std::pow(2.0, 0.25);
inline constexpr double PACKING = 2.0 * std::numbers::sqrt3 / std::numbers::pi;
inline const double TANGENT_MIN = std::log(3.0 + 2.0 * std::numbers::sqrt2);

// A finite center carries the Euclidean diameter of the ball; the center at
// infinity carries the height of the horizontal plane bounding it.
struct Horoball {
    cplx center{0.0, 0.0};
    bool at_infinity = false;
    double diameter = 1.0;

    static Horoball finite(cplx c, double d) { return {c, false, d}; }
    static Horoball infinity(double height) { return {{0.0, 0.0}, true, height}; }
};

// Signed distance between the boundaries; negative when the balls overlap.
double horoball_distance(const Horoball& a, const Horoball& b);

struct TangentLengths {
    double l1;  // along the common tangent geodesic, between its tangency points
    double l2;  // along the first horosphere, tangency point to the common perpendicular
};
TangentLengths tangent_lengths(const Horoball& a, const Horoball& b);

struct ConeCuspParams {
    double base_area = 1.0;
    double cone_excess = 0.0;  // theta - 2 pi
    double x_v = 0.0;
};
double cone_cusp_area(const ConeCuspParams& p, double x);

double max_cusp_area_bound(int chi, bool singular);
double shortest_arc_length_bound(int chi, double cusp_area, bool singular);
double drift_bound(double arc_length);
double shadow_radius(int chi);
double packing_area_lower(long num_disks, double radius);

} // namespace cusplab::geometry
