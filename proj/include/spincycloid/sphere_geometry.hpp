#pragma once

// Length and enclosed area of sampled curves on the unit sphere, plus the
// closed forms for one arc of a spherical cycloid rolled along a great circle.

#include <span>

#include "spincycloid/exact_propagator.hpp"

namespace spincycloid {

// Largest first-to-last gap for a curve to count as closed.
inline constexpr double kClosureTolerance = 1e-6;

struct CurveMetrics {
    double length = 0.0;         // great-circle metric
    double enclosed_area = 0.0;  // signed, counterclockwise seen from +z is positive, in (-4pi, 4pi)
    bool closed = false;
};

double great_circle_distance(const BlochVector& a, const BlochVector& b);

// Sum of great-circle distances between consecutive points. Throws DomainError
// with fewer than two points.
double path_length(std::span<const BlochVector> path);
double path_length(const Trajectory& traj);

// Signed area from the line integral of (1 - cos theta) dphi, trapezoidal in z,
// with each azimuth increment wrapped into (-pi, pi]. Points on a pole take the
// azimuth of their neighbours on either side; the pole itself contributes
// (1 - z) times the azimuth jump. Reduced mod 4pi keeping the sign.
// Throws DomainError naming the endpoint gap when the curve is open.
double enclosed_solid_angle(std::span<const BlochVector> path);
double enclosed_solid_angle(const Trajectory& traj);

CurveMetrics curve_metrics(std::span<const BlochVector> path);

// Rolling-circle radius a in (0, 1), cos(alpha) = sqrt(1 - a^2):
//   length = 4 a cos(alpha) [1 + (1 - a^2)/(2a) ln((1 + a)/(1 - a))]
//   area   = 2 pi a^2 [1 + cos^2(alpha) / (1 + cos(alpha))]
// Both throw DomainError outside (0, 1). As a -> 0 they approach the plane
// cycloid values 8a and 3 pi a^2.
double cycloid_arc_length(double a);
double cycloid_arc_area(double a);

// L^2 - A (4 pi - A). Nonnegative for every closed curve, zero for circles.
double isoperimetric_defect(double length, double area);

// Signed area mapped into [0, 4pi), the range isoperimetric_defect expects.
double unsigned_area(double signed_area);

}  // namespace spincycloid
