#include "spincycloid/spin_core.hpp"

#include <cmath>
#include <sstream>

#include "spincycloid/errors.hpp"

namespace spincycloid {

namespace {

constexpr Complex kI{0.0, 1.0};

}  // namespace

SpinState::SpinState(Complex c0, Complex c1) : amp_(c0, c1) {
    const double deviation = std::abs(amp_.norm() - 1.0);
    if (deviation > kNormTolerance) {
        std::ostringstream msg;
        msg << "SpinState: norm deviates from 1 by " << deviation;
        throw ContractViolation(msg.str());
    }
}

SpinState SpinState::normalized(Complex c0, Complex c1) {
    Vector2c v(c0, c1);
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw ContractViolation("SpinState: cannot normalize a zero or non-finite vector");
    }
    return SpinState(Vector2c(v / n));
}

SpinState SpinState::unchecked(const Vector2c& amplitudes) { return SpinState(amplitudes); }

SpinState SpinState::from_bloch(const BlochVector& r) {
    const Vector3 v = r.vec();
    const double len = v.norm();
    if (!(len > 0.0)) {
        throw ContractViolation("SpinState::from_bloch: zero Bloch vector");
    }
    const double polar = std::atan2(std::hypot(v.x(), v.y()), v.z());
    const double azimuth = std::atan2(v.y(), v.x());
    return SpinState(Vector2c(std::cos(polar / 2.0),
                              std::polar(std::sin(polar / 2.0), azimuth)));
}

SpinState SpinState::with_phase(double chi) const {
    return SpinState(Vector2c(std::polar(1.0, chi) * amp_));
}

FieldSchedule FieldSchedule::latitude(double theta, double lambda, double beta) {
    FieldSchedule s;
    s.mode = SweepMode::Latitude;
    s.theta = theta;
    s.omega0 = 1.0;
    s.omega = lambda;
    s.beta = beta;
    return s;
}

FieldSchedule FieldSchedule::meridian(double phi, double lambda, double beta) {
    FieldSchedule s;
    s.mode = SweepMode::Meridian;
    s.phi = phi;
    s.omega0 = 1.0;
    s.omega = lambda;
    s.beta = beta;
    return s;
}

void FieldSchedule::validate() const {
    auto fail = [](const std::string& what) { throw DomainError("FieldSchedule: " + what); };
    if (!std::isfinite(omega0) || omega0 < 0.0) fail("omega0 must be finite and >= 0");
    if (!std::isfinite(omega) || omega < 0.0) fail("omega must be finite and >= 0");
    if (!std::isfinite(beta) || !(beta > 0.0)) fail("beta must be > 0");
    if (direction != 1 && direction != -1) fail("direction must be +1 or -1");
    if (mode == SweepMode::Latitude && !(theta > 0.0 && theta < kPi)) {
        fail("latitude polar angle must lie in (0, pi)");
    }
    if (mode == SweepMode::Meridian && !std::isfinite(phi)) fail("meridian azimuth must be finite");
    if (omega == 0.0 && !(hold_time > 0.0)) fail("a static field (omega = 0) needs hold_time > 0");
}

double FieldSchedule::duration() const { return omega > 0.0 ? beta / omega : hold_time; }

double FieldSchedule::polar_angle(double t) const {
    return mode == SweepMode::Latitude ? theta : direction * omega * t;
}

double FieldSchedule::azimuth(double t) const {
    return mode == SweepMode::Latitude ? direction * omega * t : phi;
}

double FieldSchedule::polar_rate() const {
    return mode == SweepMode::Meridian ? direction * omega : 0.0;
}

double FieldSchedule::azimuth_rate() const {
    return mode == SweepMode::Latitude ? direction * omega : 0.0;
}

FieldDirection FieldDirection::from_angles(double polar, double azimuth) {
    FieldDirection f;
    f.polar = polar;
    f.azimuth = azimuth;
    f.n = Vector3(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                  std::cos(polar));
    return f;
}

FieldDirection FieldDirection::from_vector(const Vector3& n) {
    if (std::abs(n.norm() - 1.0) > 1e-10) {
        throw ContractViolation("FieldDirection: direction must be a unit vector");
    }
    FieldDirection f;
    f.n = n;
    f.polar = std::atan2(std::hypot(n.x(), n.y()), n.z());
    f.azimuth = (n.x() == 0.0 && n.y() == 0.0) ? 0.0 : std::atan2(n.y(), n.x());
    return f;
}

const Matrix2c& pauli_x() {
    static const Matrix2c m = (Matrix2c() << 0.0, 1.0, 1.0, 0.0).finished();
    return m;
}

const Matrix2c& pauli_y() {
    static const Matrix2c m = (Matrix2c() << 0.0, -kI, kI, 0.0).finished();
    return m;
}

const Matrix2c& pauli_z() {
    static const Matrix2c m = (Matrix2c() << 1.0, 0.0, 0.0, -1.0).finished();
    return m;
}

Matrix2c pauli_dot(const Vector3& v) {
    Matrix2c m;
    m << v.z(), Complex(v.x(), -v.y()), Complex(v.x(), v.y()), -v.z();
    return m;
}

FieldDirection field_direction(const FieldSchedule& schedule, double t) {
    const double T = schedule.duration();
    const double slack = 1e-10 * std::max(1.0, T);
    if (!(t >= -slack && t <= T + slack)) {
        std::ostringstream msg;
        msg << "field_direction: t = " << t << " outside [0, " << T << "]";
        throw DomainError(msg.str());
    }
    return FieldDirection::from_angles(schedule.polar_angle(t), schedule.azimuth(t));
}

Matrix2c hamiltonian(double omega0, const Vector3& n) { return -0.5 * omega0 * pauli_dot(n); }

Matrix2c hamiltonian(const FieldSchedule& schedule, double t) {
    return hamiltonian(schedule.omega0, field_direction(schedule, t).n);
}

std::pair<SpinState, SpinState> instantaneous_eigenstates(const FieldDirection& n) {
    const double c = std::cos(n.polar / 2.0);
    const double s = std::sin(n.polar / 2.0);
    const Complex e = std::polar(1.0, n.azimuth);
    return {SpinState::unchecked(Vector2c(c, e * s)), SpinState::unchecked(Vector2c(-s, e * c))};
}

BlochVector bloch_from_state(const SpinState& psi) {
    const double deviation = std::abs(psi.norm() - 1.0);
    if (deviation > kNormTolerance) {
        std::ostringstream msg;
        msg << "bloch_from_state: state norm deviates from 1 by " << deviation;
        throw ContractViolation(msg.str());
    }
    const Complex c0 = psi.c0();
    const Complex c1 = psi.c1();
    const Complex cross = std::conj(c0) * c1;
    return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(c0) - std::norm(c1)};
}

double angle_between(const Vector3& a, const Vector3& b) {
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace spincycloid
