#include "spincycloid/sphere_geometry.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "spincycloid/errors.hpp"

namespace spincycloid {

namespace {

constexpr double kFourPi = 4.0 * kPi;
// Points this close to the z axis have no usable azimuth.
constexpr double kPoleRadius = 1e-12;

double wrap_pi(double x) {
    x = std::remainder(x, kTwoPi);
    return x <= -kPi ? x + kTwoPi : x;
}

bool on_pole(const BlochVector& p) { return std::hypot(p.x, p.y) < kPoleRadius; }

}  // namespace

double great_circle_distance(const BlochVector& a, const BlochVector& b) {
    return angle_between(a.vec(), b.vec());
}

double path_length(std::span<const BlochVector> path) {
    if (path.size() < 2) throw DomainError("path_length: need at least two samples");
    double total = 0.0;
    for (std::size_t i = 1; i < path.size(); ++i) total += great_circle_distance(path[i - 1], path[i]);
    return total;
}

double path_length(const Trajectory& traj) { return path_length(traj.bloch_path()); }

double enclosed_solid_angle(std::span<const BlochVector> path) {
    if (path.empty()) throw DomainError("enclosed_solid_angle: empty curve");
    const double gap = great_circle_distance(path.front(), path.back());
    if (gap > kClosureTolerance) {
        std::ostringstream msg;
        msg << "enclosed_solid_angle: curve is open, endpoint gap " << gap;
        throw DomainError(msg.str());
    }

    // Drop the duplicated endpoint; the loop below closes the curve itself.
    std::size_t n = path.size();
    if (n > 1) --n;

    std::vector<double> az(n);
    std::vector<bool> pole(n);
    std::size_t regular = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pole[i] = on_pole(path[i]);
        if (!pole[i]) {
            az[i] = std::atan2(path[i].y, path[i].x);
            ++regular;
        }
    }
    if (regular == 0) return 0.0;

    // Azimuth with which the curve arrives at (in) and leaves (out) each point.
    std::vector<double> in(n), out(n);
    auto prev_regular = [&](std::size_t i) {
        do { i = (i + n - 1) % n; } while (pole[i]);
        return i;
    };
    auto next_regular = [&](std::size_t i) {
        do { i = (i + 1) % n; } while (pole[i]);
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        in[i] = pole[i] ? az[prev_regular(i)] : az[i];
        out[i] = pole[i] ? az[next_regular(i)] : az[i];
    }

    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        const double weight = 1.0 - 0.5 * (path[i].z + path[j].z);
        area += weight * wrap_pi(in[j] - out[i]);
        if (pole[i]) area += (1.0 - path[i].z) * wrap_pi(out[i] - in[i]);
    }
    return std::fmod(area, kFourPi);
}

double enclosed_solid_angle(const Trajectory& traj) { return enclosed_solid_angle(traj.bloch_path()); }

CurveMetrics curve_metrics(std::span<const BlochVector> path) {
    CurveMetrics m;
    m.length = path_length(path);
    m.closed = great_circle_distance(path.front(), path.back()) <= kClosureTolerance;
    if (m.closed) m.enclosed_area = enclosed_solid_angle(path);
    return m;
}

double cycloid_arc_length(double a) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("cycloid_arc_length: radius must lie in (0, 1)");
    const double cos_alpha = std::sqrt(1.0 - a * a);
    // ln((1+a)/(1-a)) = 2 atanh(a)
    return 4.0 * a * cos_alpha * (1.0 + (1.0 - a * a) / (2.0 * a) * 2.0 * std::atanh(a));
}

double cycloid_arc_area(double a) {
    if (!(a > 0.0 && a < 1.0)) throw DomainError("cycloid_arc_area: radius must lie in (0, 1)");
    const double cos_alpha = std::sqrt(1.0 - a * a);
    return kTwoPi * a * a * (1.0 + cos_alpha * cos_alpha / (1.0 + cos_alpha));
}

double isoperimetric_defect(double length, double area) {
    return length * length - area * (kFourPi - area);
}

double unsigned_area(double signed_area) {
    double a = std::fmod(signed_area, kFourPi);
    if (a < 0.0) a += kFourPi;
    return a;
}

}  // namespace spincycloid
