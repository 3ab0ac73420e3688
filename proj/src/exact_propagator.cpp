#include "spincycloid/exact_propagator.hpp"

#include <cmath>
#include <sstream>

#include "spincycloid/errors.hpp"

namespace spincycloid {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_normalized(const SpinState& psi, const char* where) {
    const double deviation = std::abs(psi.norm() - 1.0);
    if (deviation > kNormTolerance) {
        std::ostringstream msg;
        msg << where << ": initial state norm deviates from 1 by " << deviation;
        throw ContractViolation(msg.str());
    }
}

}  // namespace

EffectiveRotation effective_rotation(const FieldSchedule& schedule) {
    schedule.validate();
    const double theta_dot = schedule.polar_rate();
    const double phi_dot = schedule.azimuth_rate();
    // Only the latitude sweep has phi_dot != 0, and its polar angle is constant.
    const double theta = schedule.mode == SweepMode::Latitude ? schedule.theta : 0.0;

    const Vector3 h(-phi_dot * std::sin(theta), theta_dot,
                    schedule.omega0 + phi_dot * std::cos(theta));
    EffectiveRotation rot;
    rot.Omega = h.norm();
    rot.m = rot.Omega > 0.0 ? Vector3(h / rot.Omega) : Vector3::UnitZ();
    rot.alpha = std::atan2(std::hypot(h.x(), h.y()), h.z());
    rot.a = std::sin(rot.alpha);
    rot.phase_rate = 0.5 * phi_dot;
    return rot;
}

AdiabaticFrame::AdiabaticFrame(FieldSchedule schedule) : schedule_(schedule) {
    schedule_.validate();
}

Matrix2c AdiabaticFrame::operator()(double t) const {
    const FieldDirection f = field_direction(schedule_, t);
    const auto [plus, minus] = instantaneous_eigenstates(f);
    Matrix2c A;
    A.col(0) = plus.amplitudes();
    A.col(1) = minus.amplitudes();
    return A;
}

Matrix2c AdiabaticFrame::derivative(double t) const {
    const FieldDirection f = field_direction(schedule_, t);
    const double c = std::cos(f.polar / 2.0);
    const double s = std::sin(f.polar / 2.0);
    const Complex e = std::polar(1.0, f.azimuth);
    const double half_theta_dot = 0.5 * schedule_.polar_rate();
    const Complex de = kI * schedule_.azimuth_rate() * e;
    const double dc = -half_theta_dot * s;
    const double ds = half_theta_dot * c;
    Matrix2c dA;
    dA << dc, -ds, de * s + e * ds, de * c + e * dc;
    return dA;
}

SpinState AdiabaticFrame::to_frame(double t, const SpinState& lab) const {
    return SpinState::unchecked((*this)(t).adjoint() * lab.amplitudes());
}

SpinState AdiabaticFrame::to_lab(double t, const SpinState& frame) const {
    return SpinState::unchecked((*this)(t) * frame.amplitudes());
}

AdiabaticFrame adiabatic_frame(const FieldSchedule& schedule) { return AdiabaticFrame(schedule); }

Matrix2c su2_rotation(const Vector3& m, double theta) {
    return std::cos(theta / 2.0) * Matrix2c::Identity() + kI * std::sin(theta / 2.0) * pauli_dot(m);
}

Matrix2c frame_propagator(const EffectiveRotation& rot, double t) {
    return std::polar(1.0, -rot.phase_rate * t) * su2_rotation(rot.m, rot.Omega * t);
}

SpinState propagate_exact(const FieldSchedule& schedule, const SpinState& psi0, double t) {
    require_normalized(psi0, "propagate_exact");
    const AdiabaticFrame frame(schedule);
    const EffectiveRotation rot = effective_rotation(schedule);
    const Vector2c out = frame(t) * frame_propagator(rot, t) * frame(0.0).adjoint() * psi0.amplitudes();
    return SpinState::unchecked(out);
}

std::vector<BlochVector> Trajectory::bloch_path() const {
    std::vector<BlochVector> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(s.bloch);
    return out;
}

std::vector<BlochVector> Trajectory::field_path() const {
    std::vector<BlochVector> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(BlochVector::from(s.field.n));
    return out;
}

Trajectory trajectory(const FieldSchedule& schedule, const SpinState& psi0,
                      std::size_t num_samples) {
    if (num_samples < 2) throw DomainError("trajectory: num_samples must be >= 2");
    require_normalized(psi0, "trajectory");

    const AdiabaticFrame frame(schedule);
    const EffectiveRotation rot = effective_rotation(schedule);
    const double T = schedule.duration();
    const Vector2c phi0 = frame(0.0).adjoint() * psi0.amplitudes();

    Trajectory traj;
    traj.schedule = schedule;
    traj.samples.reserve(num_samples);
    for (std::size_t k = 0; k < num_samples; ++k) {
        const double t = k + 1 == num_samples
                             ? T
                             : T * static_cast<double>(k) / static_cast<double>(num_samples - 1);
        TrajectorySample s;
        s.t = t;
        s.field = field_direction(schedule, t);
        s.state = k == 0 ? psi0 : SpinState::unchecked(frame(t) * frame_propagator(rot, t) * phi0);
        s.bloch = bloch_from_state(s.state);
        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(s.state.norm() - 1.0));
        traj.samples.push_back(std::move(s));
    }
    return traj;
}

SpinState cycloid_family_initial_state(const FieldSchedule& schedule, CycloidKind kind, double b) {
    const EffectiveRotation rot = effective_rotation(schedule);
    const AdiabaticFrame frame(schedule);
    const FieldDirection n0 = field_direction(schedule, 0.0);

    Vector3 u = rot.m;
    switch (kind) {
        case CycloidKind::Rim:
            return instantaneous_eigenstates(n0).first;
        case CycloidKind::Axis:
            break;
        case CycloidKind::Curtate:
        case CycloidKind::Prolate: {
            if (!std::isfinite(b) || b < 0.0) {
                throw DomainError("cycloid_family_initial_state: b must be a finite angle >= 0");
            }
            if (kind == CycloidKind::Curtate && !(b < rot.alpha)) {
                throw DomainError("cycloid_family_initial_state: curtate requires b < alpha");
            }
            if (kind == CycloidKind::Prolate && !(b > rot.alpha)) {
                throw DomainError("cycloid_family_initial_state: prolate requires b > alpha");
            }
            // Unit vector perpendicular to m in the (m, z) plane, pointing toward z.
            const Vector3 z = Vector3::UnitZ();
            Vector3 e = z - std::cos(rot.alpha) * rot.m;
            e = e.norm() > 1e-14 ? Vector3(e.normalized()) : Vector3::UnitX();
            u = std::cos(b) * rot.m + std::sin(b) * e;
            break;
        }
    }
    const SpinState in_frame = SpinState::from_bloch(BlochVector::from(u));
    return frame.to_lab(0.0, in_frame);
}

BlochVector frame_bloch(const FieldSchedule& schedule, double t, const SpinState& lab) {
    return bloch_from_state(AdiabaticFrame(schedule).to_frame(t, lab));
}

}  // namespace spincycloid
