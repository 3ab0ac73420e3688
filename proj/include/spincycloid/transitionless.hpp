#pragma once

// Counterdiabatic (transitionless) driving for the rotating field.
//
// H_D(t) = (1/2) (n x dn/dt) . sigma cancels the off-diagonal part of the
// adiabatic-frame Hamiltonian, so H + H_D carries |n+(0)> along |n+(t)> at any
// sweep speed.

#include <cstddef>

#include "spincycloid/numeric_oracle.hpp"

namespace spincycloid {

Vector3 field_velocity(const FieldSchedule& schedule, double t);

Matrix2c driving_hamiltonian(const FieldSchedule& schedule, double t);

// A^dagger (H [+ H_D]) A - i A^dagger dA/dt
Matrix2c frame_hamiltonian(const FieldSchedule& schedule, double t, bool with_driving);

// Default number of RK4 steps over the sweep.
inline constexpr std::size_t kTransitionlessSteps = 100000;

// RK4 under H + H_D from an instantaneous eigenstate of H(0); the step count is
// the smallest multiple of (num_samples - 1) that reaches min_steps. Throws
// ContractViolation when psi0 is not an eigenstate, DomainError when
// num_samples < 2.
Trajectory propagate_transitionless(const FieldSchedule& schedule, const SpinState& psi0,
                                    std::size_t num_samples,
                                    std::size_t min_steps = kTransitionlessSteps);

}  // namespace spincycloid
