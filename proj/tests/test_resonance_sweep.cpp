#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "spincycloid/errors.hpp"
#include "spincycloid/phases_uncertainty.hpp"
#include "spincycloid/resonance_sweep.hpp"
#include "spincycloid/sphere_geometry.hpp"

using namespace spincycloid;
using doctest::Approx;

TEST_CASE("resonance ratio") {
    CHECK(resonance_ratio(kPi, 1) == Approx(4.0));
    CHECK(resonance_ratio(kTwoPi, 1) == Approx(2.0));
    CHECK(resonance_ratio(kTwoPi, 3) == Approx(6.0));
    CHECK_THROWS_AS(resonance_ratio(kPi, 0), DomainError);
    CHECK_THROWS_AS(resonance_ratio(0.0, 1), DomainError);
}

TEST_CASE("meridian resonances") {
    CHECK(1.0 / meridian_resonance_lambda(1) == Approx(1.73205).epsilon(1e-5));
    CHECK(1.0 / meridian_resonance_lambda(2) == Approx(3.87298).epsilon(1e-5));
    for (int n = 1; n <= 6; ++n) {
        const double lambda = meridian_resonance_lambda(n);
        CHECK(effective_rotation(FieldSchedule::meridian(0.0, lambda)).a == Approx(0.5 / n).epsilon(1e-14));
        CHECK(lambda_for_arcs(FieldSchedule::meridian(0.0, 1.0), n) == Approx(lambda).epsilon(1e-14));
    }
}

TEST_CASE("lambda_for_ratio reproduces the latitude resonances") {
    const FieldSchedule tmpl = FieldSchedule::latitude(kPi / 3, 1.0);
    for (int n : {1, 5, 10}) {
        const double l = lambda_for_ratio(tmpl, resonance_ratio(kTwoPi, n));
        CHECK(l == Approx(oracle::latitude_resonance_lambda(kPi / 3, n)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(lambda_for_ratio(tmpl, 0.5), DomainError);
}

TEST_CASE("infidelity at resonances and in the free sweep") {
    for (int n = 1; n <= 5; ++n) CHECK(meridian_infidelity(meridian_resonance_lambda(n)) < 1e-12);

    FieldSchedule free_sweep = FieldSchedule::meridian(0.0, 0.5);
    free_sweep.omega0 = 0.0;
    CHECK(infidelity(free_sweep, SpinState::up(), SpinState::down()) == Approx(1.0).epsilon(1e-14));

    const double l = 0.5;
    const double a = l / std::sqrt(1 + l * l);
    const double Omega = std::sqrt(1 + l * l);
    const double closed = a * a * std::pow(std::sin(Omega * (kPi / l) / 2), 2);
    CHECK(std::abs(infidelity(FieldSchedule::meridian(0.0, l), SpinState::up(), SpinState::down()) - closed) < 1e-10);
    CHECK(std::abs(meridian_infidelity(l) - closed) < 1e-14);
}

TEST_CASE("sweep over resonance points") {
    const FieldSchedule tmpl = FieldSchedule::meridian(0.0, 1.0);
    std::vector<double> grid;
    for (int n = 1; n <= 5; ++n) grid.push_back(meridian_resonance_lambda(n));
    const auto rows = sweep(grid, tmpl);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].at_resonance);
        CHECK(rows[i].nearest_resonance_n == long(i + 1));
        CHECK(rows[i].inv_two_lambda == Approx(0.5 / grid[i]));
        if (i > 0) CHECK(rows[i].length > rows[i - 1].length);
        CHECK(rows[i].length < 4.0);
    }
    CHECK(rows[0].length == Approx(3.1592).epsilon(1e-4));
}

TEST_CASE("sweep invariants on a dense grid") {
    const FieldSchedule tmpl = FieldSchedule::meridian(0.0, 1.0);
    const auto grid = log_grid(0.05, 5.0, 300);
    const auto rows = sweep(grid, tmpl, 1);
    const auto rows4 = sweep(grid, tmpl, 4);
    REQUIRE(rows.size() == grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].lambda == grid[i]);
        const double a2 = 1.0 / (1.0 + 1.0 / (grid[i] * grid[i]));
        CHECK(rows[i].infidelity >= 0.0);
        CHECK(rows[i].infidelity <= a2 + 1e-14);
        CHECK(rows[i].length >= 0.0);
        CHECK(rows[i].infidelity == rows4[i].infidelity);
        CHECK(rows[i].length == rows4[i].length);
    }
    CHECK_THROWS_AS(sweep(std::vector<double>{}, tmpl), DomainError);
    CHECK_THROWS_AS(sweep(std::vector<double>{0.5, -1.0}, tmpl), DomainError);
}

TEST_CASE("latitude sweeps use the sampled trajectory length") {
    const FieldSchedule tmpl = FieldSchedule::latitude(kPi / 3, 1.0);
    const double l = oracle::latitude_resonance_lambda(kPi / 3, 3);
    const auto rows = sweep(std::vector<double>{l}, tmpl, 1, 20001);
    CHECK(rows[0].at_resonance);
    const FieldSchedule s = schedule_at(tmpl, l);
    CHECK(rows[0].length ==
          Approx(path_length(trajectory(s, cycloid_family_initial_state(s, CycloidKind::Rim), 20001))));
}

TEST_CASE("resonance search finds exactly the sqrt(4n^2 - 1) zeros") {
    const FieldSchedule tmpl = FieldSchedule::meridian(0.0, 1.0);
    const auto found = find_resonances(tmpl, log_grid(0.09, 2.0, 600));
    REQUIRE(found.size() == 5);
    for (int n = 1; n <= 5; ++n) {
        CHECK(found[5 - n] == Approx(meridian_resonance_lambda(n)).epsilon(1e-10));
    }
}

TEST_CASE("refine_resonance converges by bisection") {
    const FieldSchedule tmpl = FieldSchedule::meridian(0.0, 1.0);
    const double exact = meridian_resonance_lambda(2);
    CHECK(refine_resonance(tmpl, exact * 0.95, exact * 1.05) == Approx(exact).epsilon(1e-11));
}

TEST_CASE("resonant trajectories split into congruent arcs") {
    for (int n : {1, 3, 6}) {
        const FieldSchedule s = FieldSchedule::meridian(0.0, meridian_resonance_lambda(n));
        const auto touches = arc_touch_times(s, SpinState::up());
        REQUIRE(touches.size() == std::size_t(n + 1));
        const double T = s.duration();
        for (std::size_t i = 0; i < touches.size(); ++i) {
            CHECK(std::abs(touches[i] - T * double(i) / n) < 1e-6 * T);
        }
    }
    const FieldSchedule lat = FieldSchedule::latitude(kPi / 3, oracle::latitude_resonance_lambda(kPi / 3, 2));
    const auto touches = arc_touch_times(lat, cycloid_family_initial_state(lat, CycloidKind::Rim));
    REQUIRE(touches.size() == 5);
    for (std::size_t i = 0; i < touches.size(); ++i) {
        CHECK(std::abs(touches[i] - lat.duration() * double(i) / 4) < 1e-6 * lat.duration());
    }
}

TEST_CASE("product law n * arc_length(1/2n) approaches 4") {
    double prev = 0.0;
    for (int n = 1; n <= 50; ++n) {
        const double total = n * cycloid_arc_length(0.5 / n);
        CHECK(total > prev);
        CHECK(total < 4.0);
        prev = total;
    }
    CHECK(std::abs(prev - 4.0) < 0.02);
}

TEST_CASE("grids") {
    const auto g = log_grid(1e-3, 1e2, 6);
    REQUIRE(g.size() == 6);
    CHECK(g.front() == Approx(1e-3));
    CHECK(g[1] == Approx(1e-2));
    CHECK(g.back() == Approx(1e2));
    const auto l = linear_grid(1.0, 2.0, 5);
    CHECK(l[2] == Approx(1.5));
    CHECK(log_grid(0.5, 0.5, 1).size() == 1);
    CHECK_THROWS_AS(log_grid(-1.0, 1.0, 4), DomainError);
}
