#include "spincycloid/resonance_sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "spincycloid/errors.hpp"
#include "spincycloid/phases_uncertainty.hpp"
#include "spincycloid/sphere_geometry.hpp"

namespace spincycloid {

namespace {

bool is_pole_to_pole(const FieldSchedule& s) {
    return s.mode == SweepMode::Meridian && std::abs(s.beta - kPi) < 1e-12;
}

SpinState rim_state(const FieldSchedule& s) {
    return instantaneous_eigenstates(field_direction(s, 0.0)).first;
}

// <n-(T)|psi(T)> for the rim start.
Complex leakage_amplitude(const FieldSchedule& tmpl, double lambda) {
    const FieldSchedule s = schedule_at(tmpl, lambda);
    const SpinState psi = propagate_exact(s, rim_state(s), s.duration());
    return instantaneous_eigenstates(field_direction(s, s.duration())).second.overlap(psi);
}

double rim_infidelity(const FieldSchedule& tmpl, double lambda) {
    const FieldSchedule s = schedule_at(tmpl, lambda);
    return infidelity(s, rim_state(s), instantaneous_eigenstates(field_direction(s, s.duration())).first);
}

template <class F>
double golden_section_min(F f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double resonance_ratio(double beta, int n) {
    if (n < 1) throw DomainError("resonance_ratio: n must be >= 1");
    if (!(beta > 0.0)) throw DomainError("resonance_ratio: beta must be > 0");
    return 4.0 * kPi * n / beta;
}

double lambda_for_ratio(const FieldSchedule& tmpl, double ratio) {
    double inv_lambda = 0.0;  // omega0 / omega
    if (tmpl.mode == SweepMode::Meridian) {
        if (!(ratio > 1.0)) throw DomainError("lambda_for_ratio: meridian sweeps need Omega/omega > 1");
        inv_lambda = std::sqrt(ratio * ratio - 1.0);
    } else {
        // k^2 + 2 s cos(theta) k + 1 = ratio^2
        const double b = tmpl.direction * std::cos(tmpl.theta);
        const double disc = b * b - 1.0 + ratio * ratio;
        if (disc < 0.0) throw DomainError("lambda_for_ratio: ratio not reachable");
        inv_lambda = -b + std::sqrt(disc);
        if (!(inv_lambda > 0.0)) throw DomainError("lambda_for_ratio: ratio not reachable");
    }
    return 1.0 / inv_lambda;
}

double lambda_for_arcs(const FieldSchedule& tmpl, int arcs) {
    if (arcs < 1) throw DomainError("lambda_for_arcs: arcs must be >= 1");
    return lambda_for_ratio(tmpl, kTwoPi * arcs / tmpl.beta);
}

double meridian_resonance_lambda(int n) {
    if (n < 1) throw DomainError("meridian_resonance_lambda: n must be >= 1");
    return 1.0 / std::sqrt(4.0 * n * n - 1.0);
}

double infidelity(const FieldSchedule& schedule, const SpinState& psi0, const SpinState& target) {
    const SpinState psi = propagate_exact(schedule, psi0, schedule.duration());
    return std::clamp(1.0 - std::norm(target.overlap(psi)), 0.0, 1.0);
}

double meridian_infidelity(double lambda) {
    const double a2 = lambda * lambda / (1.0 + lambda * lambda);
    const double half_angle = 0.5 * kPi * std::sqrt(1.0 + lambda * lambda) / lambda;
    const double s = std::sin(half_angle);
    return a2 * s * s;
}

FieldSchedule schedule_at(const FieldSchedule& tmpl, double lambda) {
    FieldSchedule s = tmpl;
    s.omega0 = 1.0;
    s.omega = lambda;
    s.validate();
    return s;
}

std::vector<SweepRow> sweep(std::span<const double> lambda_grid, const FieldSchedule& tmpl,
                            unsigned threads, std::size_t trajectory_samples) {
    if (lambda_grid.empty()) throw DomainError("sweep: empty lambda grid");
    for (double l : lambda_grid) {
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("sweep: grid values must be > 0");
    }

    std::vector<SweepRow> rows(lambda_grid.size());
    auto compute = [&](std::size_t i) {
        const double lambda = lambda_grid[i];
        const FieldSchedule s = schedule_at(tmpl, lambda);
        const SpinState psi0 = rim_state(s);
        SweepRow& row = rows[i];
        row.lambda = lambda;
        row.inv_two_lambda = 1.0 / (2.0 * lambda);
        row.infidelity = infidelity(s, psi0, instantaneous_eigenstates(field_direction(s, s.duration())).first);
        row.length = is_pole_to_pole(s) ? length_functional(lambda)
                                        : path_length(trajectory(s, psi0, trajectory_samples));
        row.nearest_resonance_n = std::lround(effective_rotation(s).Omega * s.duration() / kTwoPi);
        row.at_resonance = row.infidelity < kResonanceThreshold;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < rows.size(); ++i) compute(i);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < rows.size(); i = next++) {
                try {
                    compute(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

double refine_resonance(const FieldSchedule& tmpl, double lo, double hi, double tol) {
    if (!(lo > 0.0 && hi > lo)) throw DomainError("refine_resonance: need 0 < lo < hi");
    const Complex reference = leakage_amplitude(tmpl, lo);
    const Complex unit = std::abs(reference) > 0.0 ? reference / std::abs(reference) : Complex{1.0, 0.0};
    auto signed_leak = [&](double lambda) { return (std::conj(unit) * leakage_amplitude(tmpl, lambda)).real(); };

    double f_lo = signed_leak(lo);
    const double f_hi = signed_leak(hi);
    if (f_lo == 0.0) return lo;
    if (f_hi == 0.0) return hi;
    if ((f_lo > 0.0) == (f_hi > 0.0)) {
        // No sign change: the zero is a touch point; fall back to minimizing.
        return golden_section_min([&](double l) { return rim_infidelity(tmpl, l); }, lo, hi, tol);
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f_mid = signed_leak(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> find_resonances(const FieldSchedule& tmpl, std::span<const double> lambda_grid) {
    if (lambda_grid.size() < 3) throw DomainError("find_resonances: need at least three grid points");
    std::vector<double> f(lambda_grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = rim_infidelity(tmpl, lambda_grid[i]);

    std::vector<double> found;
    for (std::size_t i = 1; i + 1 < f.size(); ++i) {
        if (!(f[i] <= f[i - 1] && f[i] < f[i + 1])) continue;
        const double lo = std::min(lambda_grid[i - 1], lambda_grid[i + 1]);
        const double hi = std::max(lambda_grid[i - 1], lambda_grid[i + 1]);
        const double lambda = refine_resonance(tmpl, lo, hi);
        if (rim_infidelity(tmpl, lambda) < kResonanceThreshold) found.push_back(lambda);
    }
    std::sort(found.begin(), found.end());
    return found;
}

std::vector<double> arc_touch_times(const FieldSchedule& schedule, const SpinState& psi0,
                                    std::size_t samples) {
    const Trajectory traj = trajectory(schedule, psi0, samples);
    const auto& s = traj.samples;
    std::vector<double> angle(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) angle[i] = angle_between(s[i].bloch.vec(), s[i].field.n);

    auto deviation = [&](double t) {
        const SpinState psi = propagate_exact(schedule, psi0, t);
        return angle_between(bloch_from_state(psi).vec(), field_direction(schedule, t).n);
    };
    constexpr double kTouch = 1e-6;
    const double T = schedule.duration();

    std::vector<double> touches;
    if (angle.front() < kTouch) touches.push_back(0.0);
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (!(angle[i] <= angle[i - 1] && angle[i] < angle[i + 1])) continue;
        const double t = golden_section_min(deviation, s[i - 1].t, s[i + 1].t, 1e-13 * std::max(1.0, T));
        if (deviation(t) < kTouch) touches.push_back(t);
    }
    if (angle.back() < kTouch) touches.push_back(T);
    return touches;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0 && hi >= lo) || points == 0) throw DomainError("log_grid: need 0 < lo <= hi, points >= 1");
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    const double step = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
    if (!(hi >= lo) || points == 0) throw DomainError("linear_grid: need lo <= hi, points >= 1");
    std::vector<double> g(points);
    if (points == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < points; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

}  // namespace spincycloid
