#pragma once

// Brute-force fixed-step integrators used to validate the closed forms.

#include <cstddef>
#include <functional>
#include <vector>

#include "spincycloid/exact_propagator.hpp"

namespace spincycloid {

enum class IntegrationMethod { RK4 };

struct IntegratorConfig {
    double dt = 1e-3;
    IntegrationMethod method = IntegrationMethod::RK4;
    bool renormalize = false;
    // Keep every sample_stride-th step (the final step is always kept).
    std::size_t sample_stride = 1;
    // Largest tolerated |norm - 1| over the run before AccuracyError.
    double max_drift = 1e-6;

    // dt = T / steps.
    static IntegratorConfig with_steps(const FieldSchedule& schedule, std::size_t steps);
};

using HamiltonianFn = std::function<Matrix2c(double)>;

// Classic RK4 on i dpsi/dt = H(t) psi. The step is shrunk to T / ceil(T / dt) so
// the grid ends exactly on T. Throws DomainError unless 0 < dt <= T/100, and
// AccuracyError when the norm drifts more than config.max_drift.
Trajectory rk4_evolve(const FieldSchedule& schedule, const HamiltonianFn& H,
                      const SpinState& psi0, const IntegratorConfig& config);

Trajectory rk4_schrodinger(const FieldSchedule& schedule, const SpinState& psi0,
                           const IntegratorConfig& config);

struct BlochTrajectory {
    std::vector<double> t;
    std::vector<BlochVector> r;
    double max_norm_drift = 0.0;
};

// RK4 on dr/dt = -omega0 n x r.
BlochTrajectory rk4_bloch(const FieldSchedule& schedule, const BlochVector& r0,
                          const IntegratorConfig& config);

}  // namespace spincycloid
