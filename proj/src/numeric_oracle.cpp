#include "spincycloid/numeric_oracle.hpp"

#include <cmath>
#include <sstream>

#include "spincycloid/errors.hpp"

namespace spincycloid {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

std::size_t step_count(const FieldSchedule& schedule, const IntegratorConfig& config) {
    schedule.validate();
    const double T = schedule.duration();
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
        throw DomainError("IntegratorConfig: dt must be > 0");
    }
    if (config.dt > T / 100.0 * (1.0 + 1e-12)) {
        std::ostringstream msg;
        msg << "IntegratorConfig: dt = " << config.dt << " exceeds T/100 = " << T / 100.0;
        throw DomainError(msg.str());
    }
    if (config.sample_stride == 0) throw DomainError("IntegratorConfig: sample_stride must be >= 1");
    return static_cast<std::size_t>(std::ceil(T / config.dt - 1e-9));
}

void check_drift(double drift, double limit, const char* where) {
    if (drift > limit) {
        std::ostringstream msg;
        msg << where << ": norm drift " << drift << " exceeds " << limit << "; use a smaller dt";
        throw AccuracyError(msg.str(), drift);
    }
}

}  // namespace

IntegratorConfig IntegratorConfig::with_steps(const FieldSchedule& schedule, std::size_t steps) {
    IntegratorConfig c;
    c.dt = schedule.duration() / static_cast<double>(steps);
    return c;
}

Trajectory rk4_evolve(const FieldSchedule& schedule, const HamiltonianFn& H,
                      const SpinState& psi0, const IntegratorConfig& config) {
    if (std::abs(psi0.norm() - 1.0) > kNormTolerance) {
        throw ContractViolation("rk4_evolve: initial state is not normalized");
    }
    const std::size_t steps = step_count(schedule, config);
    const double T = schedule.duration();
    const double h = T / static_cast<double>(steps);

    Trajectory traj;
    traj.schedule = schedule;
    traj.samples.reserve(steps / config.sample_stride + 2);

    auto record = [&](double t, const Vector2c& psi) {
        TrajectorySample s;
        s.t = t;
        s.field = field_direction(schedule, t);
        s.state = SpinState::unchecked(psi);
        const double norm = psi.norm();
        // Bloch vector of the normalized ray; the drift itself is tracked separately.
        s.bloch = bloch_from_state(SpinState::unchecked(psi / norm));
        traj.samples.push_back(std::move(s));
    };

    auto rhs = [&](double t, const Vector2c& psi) -> Vector2c { return kMinusI * (H(t) * psi); };

    Vector2c psi = psi0.amplitudes();
    record(0.0, psi);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const Vector2c k1 = rhs(t, psi);
        const Vector2c k2 = rhs(t + 0.5 * h, psi + 0.5 * h * k1);
        const Vector2c k3 = rhs(t + 0.5 * h, psi + 0.5 * h * k2);
        const Vector2c k4 = rhs(t + h, psi + h * k3);
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(psi.norm() - 1.0));
        if (config.renormalize) psi.normalize();

        const bool last = k + 1 == steps;
        if (last || (k + 1) % config.sample_stride == 0) {
            record(last ? T : h * static_cast<double>(k + 1), psi);
        }
    }
    check_drift(traj.max_norm_drift, config.max_drift, "rk4_evolve");
    return traj;
}

Trajectory rk4_schrodinger(const FieldSchedule& schedule, const SpinState& psi0,
                           const IntegratorConfig& config) {
    const double omega0 = schedule.omega0;
    return rk4_evolve(
        schedule,
        [&](double t) {
            return hamiltonian(omega0,
                               FieldDirection::from_angles(schedule.polar_angle(t), schedule.azimuth(t)).n);
        },
        psi0, config);
}

BlochTrajectory rk4_bloch(const FieldSchedule& schedule, const BlochVector& r0,
                          const IntegratorConfig& config) {
    if (std::abs(r0.norm() - 1.0) > kNormTolerance) {
        throw ContractViolation("rk4_bloch: initial Bloch vector is not a unit vector");
    }
    const std::size_t steps = step_count(schedule, config);
    const double T = schedule.duration();
    const double h = T / static_cast<double>(steps);
    const double omega0 = schedule.omega0;

    auto field = [&](double t) {
        return FieldDirection::from_angles(schedule.polar_angle(t), schedule.azimuth(t)).n;
    };
    auto rhs = [&](double t, const Vector3& r) -> Vector3 { return -omega0 * field(t).cross(r); };

    BlochTrajectory out;
    out.t.reserve(steps / config.sample_stride + 2);
    out.r.reserve(steps / config.sample_stride + 2);
    Vector3 r = r0.vec();
    out.t.push_back(0.0);
    out.r.push_back(r0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        const Vector3 k1 = rhs(t, r);
        const Vector3 k2 = rhs(t + 0.5 * h, r + 0.5 * h * k1);
        const Vector3 k3 = rhs(t + 0.5 * h, r + 0.5 * h * k2);
        const Vector3 k4 = rhs(t + h, r + h * k3);
        r += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        out.max_norm_drift = std::max(out.max_norm_drift, std::abs(r.norm() - 1.0));
        if (config.renormalize) r.normalize();

        const bool last = k + 1 == steps;
        if (last || (k + 1) % config.sample_stride == 0) {
            out.t.push_back(last ? T : h * static_cast<double>(k + 1));
            out.r.push_back(BlochVector::from(r));
        }
    }
    check_drift(out.max_norm_drift, config.max_drift, "rk4_bloch");
    return out;
}

}  // namespace spincycloid
