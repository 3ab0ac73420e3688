#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spincycloid/errors.hpp"
#include "spincycloid/transitionless.hpp"

using namespace spincycloid;
using doctest::Approx;

TEST_CASE("field velocity agrees with finite differences") {
    for (const FieldSchedule& s : {FieldSchedule::latitude(1.1, 0.7), FieldSchedule::meridian(0.4, 1.9, kTwoPi)}) {
        const double eps = 1e-6;
        for (double t : {0.2, 1.0, 2.3}) {
            const Vector3 fd = (field_direction(s, t + eps).n - field_direction(s, t - eps).n) / (2 * eps);
            CHECK((fd - field_velocity(s, t)).norm() < 1e-8);
        }
    }
}

TEST_CASE("driving Hamiltonian") {
    FieldSchedule still = FieldSchedule::latitude(kPi / 3, 0.0);
    still.hold_time = 1.0;
    CHECK(driving_hamiltonian(still, 0.5).norm() == 0.0);

    const FieldSchedule mer = FieldSchedule::meridian(0.6, 0.8);
    for (double t : {0.0, 1.0, 2.5, mer.duration()}) {
        const Matrix2c HD = driving_hamiltonian(mer, t);
        CHECK((HD - HD.adjoint()).norm() < 1e-15);
        CHECK(std::abs(HD.trace()) < 1e-15);
        // (omega/2) sigma along the meridian normal.
        CHECK((HD - 0.4 * pauli_dot(oracle::meridian_axis(0.6, 1))).norm() < 1e-14);
    }

    const FieldSchedule lat = FieldSchedule::latitude(kPi / 3, 0.5);
    const Matrix2c HD = driving_hamiltonian(lat, 1.0);
    Eigen::SelfAdjointEigenSolver<Matrix2c> es(HD);
    CHECK(es.eigenvalues()(1) == Approx(0.5 * 0.5 * std::sin(kPi / 3)));
}

TEST_CASE("counterdiabatic term makes the frame Hamiltonian diagonal") {
    auto g = oracle::rng(8);
    for (int k = 0; k < 20; ++k) {
        const FieldSchedule s = k % 2 ? FieldSchedule::latitude(oracle::uniform(g, 0.2, 2.9), oracle::uniform(g, 0.1, 5))
                                      : FieldSchedule::meridian(oracle::uniform(g, -3, 3), oracle::uniform(g, 0.1, 5), kTwoPi);
        const double t = oracle::uniform(g, 0, s.duration());
        const Matrix2c with = frame_hamiltonian(s, t, true);
        const Matrix2c without = frame_hamiltonian(s, t, false);
        CHECK(std::abs(with(0, 1)) < 1e-12);
        CHECK(std::abs(with(1, 0)) < 1e-12);
        CHECK(std::abs(without(0, 1)) > 1e-3);
        // Without H_D this is H_eff = (phidot/2) I - (Omega/2) m.sigma.
        const EffectiveRotation rot = effective_rotation(s);
        const Matrix2c heff = rot.phase_rate * Matrix2c::Identity() - 0.5 * rot.Omega * pauli_dot(rot.m);
        CHECK((without - heff).norm() < 1e-12);
    }
}

TEST_CASE("transitionless propagation follows the field at any speed") {
    for (double lambda : {0.5, 1.0, 5.0}) {
        const FieldSchedule s = FieldSchedule::meridian(0.0, lambda);
        const Trajectory tr = propagate_transitionless(s, SpinState::up(), 1001);
        double worst_angle = 0.0;
        double worst_fidelity = 0.0;
        for (const auto& p : tr.samples) {
            worst_angle = std::max(worst_angle, angle_between(p.bloch.vec(), p.field.n));
            const SpinState plus = instantaneous_eigenstates(p.field).first;
            worst_fidelity = std::max(worst_fidelity, 1.0 - std::norm(plus.overlap(p.state)));
        }
        CHECK(worst_angle < 1e-8);
        CHECK(worst_fidelity < 1e-10);
    }
}

TEST_CASE("transitionless propagation needs an eigenstate") {
    const FieldSchedule s = FieldSchedule::latitude(kPi / 3, 0.5);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(propagate_transitionless(s, SpinState(h, h), 11), ContractViolation);
    CHECK_THROWS_AS(propagate_transitionless(s, cycloid_family_initial_state(s, CycloidKind::Rim), 1), DomainError);
    const SpinState minus = instantaneous_eigenstates(field_direction(s, 0.0)).second;
    CHECK_NOTHROW(propagate_transitionless(s, minus, 11, 2000));
}
