#pragma once

// Closed-form evolution through the adiabatic frame.
//
// With A(t) = [ |n+(t)> |n-(t)> ] and |psi(t)> = A(t)|phi(t)>, the frame state
// obeys i d|phi>/dt = H_eff |phi> where, for both sweep modes,
//
//   H_eff = (phidot/2) I - (Omega/2) m . sigma,
//   Omega m = (-phidot sin(theta), thetadot, omega0 + phidot cos(theta)).
//
// H_eff is constant, so
//
//   |psi(t)> = A(t) e^{-i phidot t/2} exp(+i Omega t m.sigma / 2) A(0)^dagger |psi(0)>.
//
// The adjoint sits on A(0): the frame map is applied to the initial state and
// undone at time t. This ordering is the one that satisfies the Schrodinger
// equation (checked against the RK4 oracle in the test suite).

#include <cstddef>
#include <vector>

#include "spincycloid/spin_core.hpp"

namespace spincycloid {

struct EffectiveRotation {
    double Omega = 1.0;       // rolling frequency
    double alpha = 0.0;       // tilt of m away from the frame z axis
    double a = 0.0;           // rolling-circle radius, sin(alpha)
    Vector3 m = Vector3::UnitZ();
    double phase_rate = 0.0;  // coefficient of the identity term, phidot / 2
};

EffectiveRotation effective_rotation(const FieldSchedule& schedule);

// A(t) for one schedule. Columns follow the instantaneous_eigenstates gauge, so
// A(t) stays continuous along the whole sweep.
class AdiabaticFrame {
public:
    explicit AdiabaticFrame(FieldSchedule schedule);

    Matrix2c operator()(double t) const;
    // dA/dt, analytic.
    Matrix2c derivative(double t) const;

    SpinState to_frame(double t, const SpinState& lab) const;
    SpinState to_lab(double t, const SpinState& frame) const;

    const FieldSchedule& schedule() const { return schedule_; }

private:
    FieldSchedule schedule_;
};

AdiabaticFrame adiabatic_frame(const FieldSchedule& schedule);

// exp(i theta m.sigma / 2) for a unit axis m.
Matrix2c su2_rotation(const Vector3& m, double theta);

// Frame propagator U(t) = exp(-i H_eff t).
Matrix2c frame_propagator(const EffectiveRotation& rot, double t);

// Throws DomainError for t outside [0, T], ContractViolation for an
// unnormalized initial state.
SpinState propagate_exact(const FieldSchedule& schedule, const SpinState& psi0, double t);

struct TrajectorySample {
    double t = 0.0;
    SpinState state;
    BlochVector bloch;
    FieldDirection field;
};

struct Trajectory {
    FieldSchedule schedule;
    std::vector<TrajectorySample> samples;
    // Largest |<psi|psi> - 1| met while producing the samples (0 for closed form).
    double max_norm_drift = 0.0;

    std::vector<BlochVector> bloch_path() const;
    std::vector<BlochVector> field_path() const;
};

// Uniform grid t_k = T k / (num_samples - 1). Throws DomainError when
// num_samples < 2.
Trajectory trajectory(const FieldSchedule& schedule, const SpinState& psi0,
                      std::size_t num_samples);

enum class CycloidKind { Rim, Curtate, Prolate, Axis };

// Initial states for the cycloid family. b is the angular distance from the
// rolling axis m measured in the adiabatic frame, in the plane of m and z;
// Curtate requires b < alpha, Prolate b > alpha. Rim sits at exactly alpha
// (the instantaneous eigenstate |n+(0)>), Axis at 0.
SpinState cycloid_family_initial_state(const FieldSchedule& schedule, CycloidKind kind,
                                       double b = 0.0);

// Frame-space Bloch vector of a lab state at time t.
BlochVector frame_bloch(const FieldSchedule& schedule, double t, const SpinState& lab);

}  // namespace spincycloid
