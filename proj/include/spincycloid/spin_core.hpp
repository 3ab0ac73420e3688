#pragma once

// Spin-1/2 in a field of constant magnitude whose direction sweeps uniformly
// along a latitude or a meridian of the unit sphere.
//
// Units: hbar = 1, frequencies in the same units as omega0 (usually omega0 = 1),
// times in 1/omega0. The drive parameter lambda = omega / omega0.

#include <complex>
#include <numbers>
#include <utility>

#include <Eigen/Dense>

namespace spincycloid {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;
using Vector3 = Eigen::Vector3d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Normalization slack accepted at API boundaries. Internally produced states
// stay within ~1e-15 of unit norm.
inline constexpr double kNormTolerance = 1e-9;

struct BlochVector {
    double x = 0.0;
    double y = 0.0;
    double z = 1.0;

    static BlochVector from(const Vector3& v) { return {v.x(), v.y(), v.z()}; }
    Vector3 vec() const { return {x, y, z}; }
    double norm() const { return vec().norm(); }
};

class SpinState {
public:
    // |0>, the spin-up state along +z.
    SpinState() : amp_(Complex{1.0, 0.0}, Complex{0.0, 0.0}) {}

    // Throws ContractViolation unless |c0|^2 + |c1|^2 = 1 within kNormTolerance.
    SpinState(Complex c0, Complex c1);

    // Rescales to unit norm; throws ContractViolation for the zero vector.
    static SpinState normalized(Complex c0, Complex c1);
    // No norm check; used by integrators whose drift is tracked separately.
    static SpinState unchecked(const Vector2c& amplitudes);
    // cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> for the direction of r.
    static SpinState from_bloch(const BlochVector& r);

    static SpinState up() { return {}; }
    static SpinState down() { return unchecked(Vector2c(0.0, 1.0)); }

    Complex c0() const { return amp_(0); }
    Complex c1() const { return amp_(1); }
    const Vector2c& amplitudes() const { return amp_; }
    double norm() const { return amp_.norm(); }

    // <this|other>
    Complex overlap(const SpinState& other) const { return amp_.dot(other.amp_); }
    // e^{i chi} |this>
    SpinState with_phase(double chi) const;

private:
    explicit SpinState(const Vector2c& amp) : amp_(amp) {}
    Vector2c amp_;
};

enum class SweepMode { Latitude, Meridian };

// Uniformly rotating field direction.
//   Latitude: polar angle theta fixed, azimuth = direction * omega * t.
//   Meridian: azimuth phi fixed, polar angle = direction * omega * t.
// The sweep lasts T = beta / omega. A static field (omega = 0) has no natural
// duration, so it uses hold_time instead.
struct FieldSchedule {
    SweepMode mode = SweepMode::Latitude;
    double theta = kPi / 3.0;
    double phi = 0.0;
    double omega0 = 1.0;
    double omega = 0.5;
    double beta = kTwoPi;
    int direction = +1;
    double hold_time = 0.0;

    static FieldSchedule latitude(double theta, double lambda, double beta = kTwoPi);
    static FieldSchedule meridian(double phi, double lambda, double beta = kPi);

    // Throws DomainError when an invariant fails.
    void validate() const;

    double duration() const;
    double lambda() const { return omega / omega0; }

    double polar_angle(double t) const;
    double azimuth(double t) const;
    double polar_rate() const;
    double azimuth_rate() const;
};

// Unit field direction together with the continuous angles that produced it.
// The angles fix the eigenstate gauge, including at the poles and for polar
// angles outside [0, pi] reached during a full meridian loop.
struct FieldDirection {
    Vector3 n = Vector3::UnitZ();
    double polar = 0.0;
    double azimuth = 0.0;

    static FieldDirection from_angles(double polar, double azimuth);
    // Angles recovered as (acos z, atan2(y, x)); azimuth 0 on the poles.
    static FieldDirection from_vector(const Vector3& n);
};

// sigma . v
Matrix2c pauli_dot(const Vector3& v);
const Matrix2c& pauli_x();
const Matrix2c& pauli_y();
const Matrix2c& pauli_z();

// Throws DomainError for t outside [0, T].
FieldDirection field_direction(const FieldSchedule& schedule, double t);

// -(omega0/2) n . sigma
Matrix2c hamiltonian(double omega0, const Vector3& n);
Matrix2c hamiltonian(const FieldSchedule& schedule, double t);

// (|n+>, |n->) with
//   |n+> =  cos(polar/2)|0> + e^{i azimuth} sin(polar/2)|1>
//   |n-> = -sin(polar/2)|0> + e^{i azimuth} cos(polar/2)|1>
std::pair<SpinState, SpinState> instantaneous_eigenstates(const FieldDirection& n);

// r = <psi|sigma|psi>. Throws ContractViolation for unnormalized input.
BlochVector bloch_from_state(const SpinState& psi);

// Angle between two directions, robust near 0 and pi.
double angle_between(const Vector3& a, const Vector3& b);

}  // namespace spincycloid
