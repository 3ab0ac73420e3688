#pragma once

// Non-adiabatic resonances and lambda sweeps of the transfer infidelity.

#include <cstddef>
#include <span>
#include <vector>

#include "spincycloid/exact_propagator.hpp"

namespace spincycloid {

// Omega / omega = 4 pi n / beta. Throws DomainError for n < 1 or beta <= 0.
double resonance_ratio(double beta, int n);

// lambda at which the adiabatic-frame rotation completes exactly `arcs` turns
// during the sweep, i.e. Omega T = 2 pi arcs. The template supplies mode, angles,
// beta and direction; omega0 is taken as 1. Throws DomainError when no positive
// lambda reaches that ratio.
double lambda_for_arcs(const FieldSchedule& tmpl, int arcs);
// lambda solving Omega / omega = ratio for the template.
double lambda_for_ratio(const FieldSchedule& tmpl, double ratio);

// Pole-to-pole meridian resonance with n arcs: omega0/omega = sqrt(4 n^2 - 1).
double meridian_resonance_lambda(int n);

// 1 - |<target|psi(T)>|^2 for the exactly propagated psi0.
double infidelity(const FieldSchedule& schedule, const SpinState& psi0, const SpinState& target);
// Pole-to-pole meridian sweep from |0> against |1>: a^2 sin^2(Omega T / 2).
double meridian_infidelity(double lambda);

// The template with omega0 = 1 and omega = lambda.
FieldSchedule schedule_at(const FieldSchedule& tmpl, double lambda);

// Infidelity threshold below which a sweep row counts as a resonance.
inline constexpr double kResonanceThreshold = 1e-8;

struct SweepRow {
    double lambda = 0.0;
    double inv_two_lambda = 0.0;  // 1/(2 lambda), the abscissa used for plotting
    double infidelity = 0.0;      // against the adiabatic target |n+(T)>
    double length = 0.0;
    long nearest_resonance_n = 0; // nearest whole number of arcs, round(Omega T / 2pi)
    bool at_resonance = false;
};

// Starting from |n+(0)> for every lambda on the grid. Lengths come from
// length_functional for pole-to-pole meridian templates and from the sampled
// exact trajectory otherwise. Rows keep grid order; with threads > 1 they are
// computed concurrently with identical results. Throws DomainError for an empty
// grid or a non-positive grid value.
std::vector<SweepRow> sweep(std::span<const double> lambda_grid, const FieldSchedule& tmpl,
                            unsigned threads = 1, std::size_t trajectory_samples = 20001);

// Bisection on the signed leakage amplitude <n-(T)|psi(T)> between two lambdas
// bracketing a single resonance; converges to |hi - lo| <= tol.
double refine_resonance(const FieldSchedule& tmpl, double lo, double hi, double tol = 1e-12);

// Every resonance on the grid: local infidelity minima below
// kResonanceThreshold after refinement.
std::vector<double> find_resonances(const FieldSchedule& tmpl, std::span<const double> lambda_grid);

// Times at which r(t) touches the adiabatic path, located by golden-section
// minimization of the angle between r(t) and n(t) around sampled minima.
std::vector<double> arc_touch_times(const FieldSchedule& schedule, const SpinState& psi0,
                                    std::size_t samples = 20001);

// Log-spaced grid of `points` values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

}  // namespace spincycloid
