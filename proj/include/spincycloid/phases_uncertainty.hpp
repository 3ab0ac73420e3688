#pragma once

// Geometric phases of cyclic evolutions and the energy-uncertainty length.
//
// Sign conventions. The dynamical phase is reported as the energy integral
//   gamma_d = int_0^T <psi|H|psi> dt,
// so the Aharonov-Anandan phase of a closed evolution is
//   gamma_AA = arg<psi(0)|psi(T)> + gamma_d   (mod 2pi).
// For the rim state at a resonance with an even number of arcs this is
// pi + gamma_d. The Berry phase is reported as the magnitude pi (1 - cos theta)
// together with the signed value -S/2 carried by |n+>; the AA sequence
// converges to the signed one, so comparisons fold both to (-pi, pi] and
// compare magnitudes.

#include "spincycloid/exact_propagator.hpp"

namespace spincycloid {

// Into [0, 2pi).
double mod_two_pi(double x);
// Into (-pi, pi].
double fold_pi(double x);

// sqrt(<H^2> - <H>^2) for H = -(omega0/2) n.sigma, in units of hbar.
double energy_uncertainty(double omega0, const Vector3& n, const SpinState& psi);
// Same for the exactly propagated state at time t.
double energy_uncertainty(const FieldSchedule& schedule, const SpinState& psi0, double t);

// Closed form for the meridian sweep from |0>:
//   (omega0/2) sqrt(1 - [cos^2(Omega t/2) + (1-lambda^2)/(1+lambda^2) sin^2(Omega t/2)]^2)
double meridian_energy_uncertainty(double lambda, double t, double omega0 = 1.0);

// Fubini-Study length 2 int_0^T dE dt of the pole-to-pole meridian sweep from
// |0>, as a function of lambda (omega0 = 1):
//   L = 2/sqrt(1+lambda^2) int_0^X sqrt(1 - [cos^2 x + c sin^2 x]^2) dx,
//   X = (pi/2) sqrt(1+lambda^2)/lambda,  c = (1-lambda^2)/(1+lambda^2).
// Adaptive Simpson on quarter periods (the integrand has kinks at multiples of
// pi), total absolute tolerance 1e-8. Throws DomainError for lambda <= 0.
double length_functional(double lambda);

struct UncertaintyReport {
    double lambda = 0.0;
    double length = 0.0;
    // <dE> T / hbar = L / 2
    double mean_uncertainty_times_T = 0.0;
};

UncertaintyReport uncertainty_report(double lambda);

// int_0^T <psi(t)|H(t)|psi(t)> dt by composite Simpson on the exact solution,
// at least 10^4 panels.
double dynamical_phase(const FieldSchedule& schedule, const SpinState& psi0, double T);

// pi (1 - cos theta); throws DomainError outside [0, pi].
double berry_phase(double theta);

struct PhaseSummary {
    double total_phase = 0.0;               // arg<psi(0)|psi(T)>, [0, 2pi)
    double total_phase_unfolded = 0.0;      // continuous along the samples
    double dynamical_phase = 0.0;           // gamma_d, unfolded
    double geometric_phase = 0.0;           // gamma_AA, [0, 2pi)
    double geometric_phase_unfolded = 0.0;  // total_phase_unfolded + gamma_d
    long winding = 0;                       // floor(unfolded / 2pi)
    double berry_phase = 0.0;               // magnitude, half the adiabatic solid angle
    double berry_phase_signed = 0.0;        // -S_adiabatic / 2, [0, 2pi)

    bool closed_form_applies = false;       // rim initial state
    double closed_form_geometric = 0.0;     // pi (arcs + 1) - (omega0/2) T cos^2(alpha), [0, 2pi)
    double closed_form_residual = 0.0;

    double endpoint_gap = 0.0;              // Bloch-sphere angle between r(0) and r(T)
    double solid_angle = 0.0;               // signed area enclosed by r(t)
    double solid_angle_phase = 0.0;         // -S/2, [0, 2pi)
    double solid_angle_residual = 0.0;      // |fold(geometric - solid_angle_phase)|

    double arc_count = 0.0;                 // Omega T / 2pi
    double aa_berry_gap = 0.0;              // ||fold(gamma_AA)| - |fold(gamma_Berry)||
    double predicted_gap = 0.0;             // arc_count * cycloid_arc_area(a) / 2
};

// Phase bookkeeping for a cyclic evolution over the schedule's full duration.
// Throws ClosureError when the Bloch curve does not close within 1e-6, and
// ContractViolation when the rim state disagrees with the closed form by more
// than 1e-6.
PhaseSummary aa_phase(const FieldSchedule& schedule, const SpinState& psi0);
// Rim state |n+(0)>.
PhaseSummary aa_phase(const FieldSchedule& schedule);

}  // namespace spincycloid
