#include "spincycloid/phases_uncertainty.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "spincycloid/errors.hpp"
#include "spincycloid/quadrature.hpp"
#include "spincycloid/sphere_geometry.hpp"

namespace spincycloid {

namespace {

constexpr double kLengthTolerance = 1e-8;
constexpr double kClosedFormTolerance = 1e-6;

double energy_expectation(double omega0, const Vector3& n, const SpinState& psi) {
    return (psi.amplitudes().adjoint() * hamiltonian(omega0, n) * psi.amplitudes())(0, 0).real();
}

// Even panel count for Simpson over [0, T]: at least 10^4, and at least 200
// panels per rotation of either the frame or the field.
std::size_t simpson_panels(const FieldSchedule& schedule, double T) {
    const EffectiveRotation rot = effective_rotation(schedule);
    const double turns = (rot.Omega + schedule.omega + schedule.omega0) * T / kTwoPi;
    std::size_t panels = std::max<std::size_t>(10000, static_cast<std::size_t>(std::ceil(200.0 * turns)));
    return panels + panels % 2;
}

}  // namespace

double mod_two_pi(double x) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r >= kTwoPi ? 0.0 : r;
}

double fold_pi(double x) {
    double r = std::remainder(x, kTwoPi);
    return r <= -kPi ? r + kTwoPi : r;
}

double energy_uncertainty(double omega0, const Vector3& n, const SpinState& psi) {
    const Matrix2c H = hamiltonian(omega0, n);
    const Vector2c& v = psi.amplitudes();
    const double mean = (v.adjoint() * H * v)(0, 0).real();
    const double second = (v.adjoint() * H * H * v)(0, 0).real();
    return std::sqrt(std::max(0.0, second - mean * mean));
}

double energy_uncertainty(const FieldSchedule& schedule, const SpinState& psi0, double t) {
    const SpinState psi = propagate_exact(schedule, psi0, t);
    return energy_uncertainty(schedule.omega0, field_direction(schedule, t).n, psi);
}

double meridian_energy_uncertainty(double lambda, double t, double omega0) {
    const double Omega = omega0 * std::sqrt(1.0 + lambda * lambda);
    const double c = std::cos(0.5 * Omega * t);
    const double s = std::sin(0.5 * Omega * t);
    const double bracket = c * c + (1.0 - lambda * lambda) / (1.0 + lambda * lambda) * s * s;
    return 0.5 * omega0 * std::sqrt(std::max(0.0, 1.0 - bracket * bracket));
}

double length_functional(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("length_functional: lambda must be > 0");
    }
    const double root = std::sqrt(1.0 + lambda * lambda);
    const double prefactor = 2.0 / root;
    const double upper = 0.5 * kPi * root / lambda;
    // 1 - c = 2 lambda^2/(1+lambda^2); written this way the integrand keeps full
    // relative precision for small lambda.
    const double d = 2.0 * lambda * lambda / (1.0 + lambda * lambda);
    auto integrand = [d](double x) {
        const double s = std::sin(x);
        // 1 - (1 - d s^2)^2 = d s^2 (2 - d s^2)
        return std::abs(s) * std::sqrt(std::max(0.0, d * (2.0 - d * s * s)));
    };

    const double quarter = 0.5 * kPi;
    const auto full = static_cast<std::size_t>(std::floor(upper / quarter));
    const double panel_tol = kLengthTolerance / prefactor / static_cast<double>(full + 1);
    double integral = 0.0;
    for (std::size_t k = 0; k < full; ++k) {
        integral += adaptive_simpson(integrand, quarter * k, quarter * (k + 1), panel_tol);
    }
    const double tail_start = quarter * static_cast<double>(full);
    if (upper > tail_start) integral += adaptive_simpson(integrand, tail_start, upper, panel_tol);
    return prefactor * integral;
}

UncertaintyReport uncertainty_report(double lambda) {
    UncertaintyReport r;
    r.lambda = lambda;
    r.length = length_functional(lambda);
    r.mean_uncertainty_times_T = 0.5 * r.length;
    return r;
}

double dynamical_phase(const FieldSchedule& schedule, const SpinState& psi0, double T) {
    const double full = schedule.duration();
    if (!(T >= 0.0 && T <= full * (1.0 + 1e-12))) {
        throw DomainError("dynamical_phase: T must lie in [0, duration]");
    }
    if (T == 0.0) return 0.0;
    if (std::abs(psi0.norm() - 1.0) > kNormTolerance) {
        throw ContractViolation("dynamical_phase: initial state is not normalized");
    }
    const std::size_t panels = simpson_panels(schedule, T);
    const AdiabaticFrame frame(schedule);
    const EffectiveRotation rot = effective_rotation(schedule);
    const Vector2c phi0 = frame(0.0).adjoint() * psi0.amplitudes();
    const double h = T / static_cast<double>(panels);

    std::vector<double> energy(panels + 1);
    for (std::size_t k = 0; k <= panels; ++k) {
        const double t = std::min(T, h * static_cast<double>(k));
        const SpinState psi = SpinState::unchecked(frame(t) * frame_propagator(rot, t) * phi0);
        energy[k] = energy_expectation(schedule.omega0, field_direction(schedule, t).n, psi);
    }
    return composite_simpson(energy, h);
}

double berry_phase(double theta) {
    if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("berry_phase: theta must lie in [0, pi]");
    return kPi * (1.0 - std::cos(theta));
}

PhaseSummary aa_phase(const FieldSchedule& schedule, const SpinState& psi0) {
    const double T = schedule.duration();
    const EffectiveRotation rot = effective_rotation(schedule);
    const std::size_t panels = simpson_panels(schedule, T);
    const Trajectory traj = trajectory(schedule, psi0, panels + 1);
    const auto& samples = traj.samples;

    PhaseSummary out;
    out.endpoint_gap = great_circle_distance(samples.front().bloch, samples.back().bloch);
    if (out.endpoint_gap > kClosureTolerance) {
        std::ostringstream msg;
        msg << "closure violated: endpoint gap " << out.endpoint_gap << " exceeds " << kClosureTolerance;
        throw ClosureError(msg.str(), out.endpoint_gap);
    }

    // Total phase, tracked continuously for the winding count.
    Complex previous = psi0.overlap(samples.front().state);
    double unfolded = std::arg(previous);
    std::vector<double> energy(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const Complex current = psi0.overlap(samples[k].state);
        if (k > 0) unfolded += std::arg(current * std::conj(previous));
        previous = current;
        energy[k] = energy_expectation(schedule.omega0, samples[k].field.n, samples[k].state);
    }
    out.total_phase = mod_two_pi(std::arg(psi0.overlap(samples.back().state)));
    out.total_phase_unfolded = unfolded;
    out.dynamical_phase = composite_simpson(energy, T / static_cast<double>(panels));
    out.geometric_phase = mod_two_pi(out.total_phase + out.dynamical_phase);
    out.geometric_phase_unfolded = out.total_phase_unfolded + out.dynamical_phase;
    out.winding = static_cast<long>(std::floor(out.geometric_phase_unfolded / kTwoPi));

    // Adiabatic reference loop.
    const auto field = traj.field_path();
    const bool field_closed = great_circle_distance(field.front(), field.back()) <= kClosureTolerance;
    if (field_closed) {
        const double s_field = enclosed_solid_angle(field);
        out.berry_phase = schedule.mode == SweepMode::Latitude ? berry_phase(schedule.theta)
                                                               : 0.5 * std::abs(s_field);
        out.berry_phase_signed = mod_two_pi(-0.5 * s_field);
    } else {
        out.berry_phase = std::numeric_limits<double>::quiet_NaN();
        out.berry_phase_signed = std::numeric_limits<double>::quiet_NaN();
    }

    out.solid_angle = enclosed_solid_angle(traj);
    out.solid_angle_phase = mod_two_pi(-0.5 * out.solid_angle);
    out.solid_angle_residual = std::abs(fold_pi(out.geometric_phase - out.solid_angle_phase));

    out.arc_count = rot.Omega * T / kTwoPi;
    out.aa_berry_gap = std::abs(std::abs(fold_pi(out.geometric_phase)) - std::abs(fold_pi(out.berry_phase)));
    out.predicted_gap = (rot.a > 0.0 && rot.a < 1.0) ? 0.5 * out.arc_count * cycloid_arc_area(rot.a) : 0.0;

    const SpinState rim = instantaneous_eigenstates(field_direction(schedule, 0.0)).first;
    out.closed_form_applies = std::norm(rim.overlap(psi0)) > 1.0 - 1e-12;
    const double arcs = std::round(out.arc_count);
    const double cos_alpha = std::cos(rot.alpha);
    out.closed_form_geometric =
        mod_two_pi(kPi * (arcs + 1.0) - 0.5 * schedule.omega0 * T * cos_alpha * cos_alpha);
    out.closed_form_residual = std::abs(fold_pi(out.geometric_phase - out.closed_form_geometric));
    if (out.closed_form_applies && out.closed_form_residual > kClosedFormTolerance) {
        std::ostringstream msg;
        msg << "aa_phase: numerical AA phase disagrees with the closed form by " << out.closed_form_residual;
        throw ContractViolation(msg.str());
    }
    return out;
}

PhaseSummary aa_phase(const FieldSchedule& schedule) {
    return aa_phase(schedule, instantaneous_eigenstates(field_direction(schedule, 0.0)).first);
}

}  // namespace spincycloid
