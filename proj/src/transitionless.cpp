#include "spincycloid/transitionless.hpp"

#include <cmath>

#include "spincycloid/errors.hpp"

namespace spincycloid {

namespace {

constexpr Complex kI{0.0, 1.0};

Vector3 field_at(const FieldSchedule& s, double t) {
    return FieldDirection::from_angles(s.polar_angle(t), s.azimuth(t)).n;
}

}  // namespace

Vector3 field_velocity(const FieldSchedule& schedule, double t) {
    const double th = schedule.polar_angle(t);
    const double ph = schedule.azimuth(t);
    const Vector3 d_theta(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
    const Vector3 d_phi(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0.0);
    return schedule.polar_rate() * d_theta + schedule.azimuth_rate() * d_phi;
}

Matrix2c driving_hamiltonian(const FieldSchedule& schedule, double t) {
    const Vector3 n = field_direction(schedule, t).n;
    return 0.5 * pauli_dot(n.cross(field_velocity(schedule, t)));
}

Matrix2c frame_hamiltonian(const FieldSchedule& schedule, double t, bool with_driving) {
    const AdiabaticFrame frame(schedule);
    const Matrix2c A = frame(t);
    Matrix2c H = hamiltonian(schedule, t);
    if (with_driving) H += driving_hamiltonian(schedule, t);
    return A.adjoint() * H * A - kI * A.adjoint() * frame.derivative(t);
}

Trajectory propagate_transitionless(const FieldSchedule& schedule, const SpinState& psi0,
                                    std::size_t num_samples, std::size_t min_steps) {
    if (num_samples < 2) throw DomainError("propagate_transitionless: num_samples must be >= 2");
    schedule.validate();
    const auto [plus, minus] = instantaneous_eigenstates(field_direction(schedule, 0.0));
    const double weight = std::max(std::norm(plus.overlap(psi0)), std::norm(minus.overlap(psi0)));
    if (std::abs(psi0.norm() - 1.0) > kNormTolerance || weight < 1.0 - 1e-9) {
        throw ContractViolation("propagate_transitionless: psi0 must be an instantaneous eigenstate of H(0)");
    }

    const std::size_t intervals = num_samples - 1;
    const std::size_t stride = std::max<std::size_t>(100 / intervals + 1, (min_steps + intervals - 1) / intervals);
    IntegratorConfig config = IntegratorConfig::with_steps(schedule, stride * intervals);
    config.sample_stride = stride;

    const double omega0 = schedule.omega0;
    return rk4_evolve(
        schedule,
        [&](double t) {
            const Vector3 n = field_at(schedule, t);
            return Matrix2c(hamiltonian(omega0, n) + 0.5 * pauli_dot(n.cross(field_velocity(schedule, t))));
        },
        psi0, config);
}

}  // namespace spincycloid
