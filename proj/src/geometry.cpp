#include "cusplab/geometry.hpp"

#include <string>

namespace cusplab::geometry {

namespace {

void require_negative(int chi) {
    if (chi >= 0) throw Error(Errc::NonNegativeChi, "chi = " + std::to_string(chi));
}

void require_diameter(const Horoball& h) {
    if (!(h.diameter > 0) || !std::isfinite(h.diameter)) throw Error(Errc::BadInput, "horoball size must be positive");
}

} // namespace

double horoball_distance(const Horoball& a, const Horoball& b) {
    require_diameter(a);
    require_diameter(b);
    if (a.at_infinity && b.at_infinity) throw Error(Errc::CoincidentCenters, "both horoballs are centered at infinity");
    if (a.at_infinity) return std::log(a.diameter / b.diameter);
    if (b.at_infinity) return std::log(b.diameter / a.diameter);
    double gap = std::norm(a.center - b.center);
    if (gap == 0) throw Error(Errc::CoincidentCenters, "horoballs share a center");
    return std::log(gap / (a.diameter * b.diameter));
}

// Up to isometry a pair is determined by its distance. Put the first ball above
// height 1 and the second at 0 with diameter D = e^-distance <= 1; the tangent
// geodesic is the unit semicircle centered at sqrt(1 + D).
TangentLengths tangent_lengths(const Horoball& a, const Horoball& b) {
    double delta = horoball_distance(a, b);
    if (delta < -1e-12) throw Error(Errc::OverlappingHoroballs, "horoballs overlap");
    double D = std::exp(-std::max(delta, 0.0));
    double c = std::sqrt(1.0 + D);
    return {2.0 * std::log1p(c) + std::max(delta, 0.0), c};
}

double cone_cusp_area(const ConeCuspParams& p, double x) {
    if (x < 0) throw Error(Errc::NegativeDistance, "x must be nonnegative");
    if (!(p.base_area > 0)) throw Error(Errc::NonPositiveArea, "base area must be positive");
    if (p.cone_excess < 0 || p.x_v < 0) throw Error(Errc::BadInput, "cone excess and x_v must be nonnegative");
    double area = std::exp(x) * p.base_area;
    if (x >= p.x_v) {
        double s = std::sinh((x - p.x_v) / 2);
        area += 2 * p.cone_excess * s * s;
    }
    return area;
}

double max_cusp_area_bound(int chi, bool singular) {
    require_negative(chi);
    return singular ? -2 * std::numbers::pi * chi : -6.0 * chi;
}

double shortest_arc_length_bound(int chi, double cusp_area, bool singular) {
    require_negative(chi);
    if (!(cusp_area > 0)) throw Error(Errc::NonPositiveArea, "cusp area must be positive");
    return 2 * std::log(std::abs(max_cusp_area_bound(chi, singular) / cusp_area));
}

double drift_bound(double arc_length) {
    if (!(arc_length > 0)) throw Error(Errc::BadInput, "arc length must be positive");
    return std::max(std::numbers::sqrt2, (arc_length - TANGENT_MIN + 2 * std::numbers::sqrt2) / 2);
}

double shadow_radius(int chi) {
    require_negative(chi);
    return std::numbers::sqrt2 / (8 * std::numbers::pi * std::numbers::pi * double(chi) * chi);
}

double packing_area_lower(long num_disks, double radius) {
    if (num_disks <= 0 || !(radius > 0)) throw Error(Errc::BadInput, "disk count and radius must be positive");
    return PACKING * num_disks * std::numbers::pi * radius * radius;
}

} // namespace cusplab::geometry
