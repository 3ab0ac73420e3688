#pragma once

// Scenario files: `key = value` lines grouped under [field], [initial] and
// [run]. '#' starts a comment. Angles accept simple products/quotients with
// `pi`, e.g. `theta = pi/3`, `beta = 2*pi`.

#include <cstddef>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spincycloid/exact_propagator.hpp"

namespace spincycloid::cli {

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& what);
    int line() const noexcept { return line_; }

private:
    int line_;
};

enum class InitialKind { Rim, Curtate, Prolate, Axis, Custom };
enum class Propagator { Exact, Rk4, Transitionless };
enum class GridKind { Log, Linear, Resonances, List };

struct ScenarioConfig {
    // [field]
    FieldSchedule schedule;            // omega resolved from lambda / arcs / resonance
    std::optional<double> lambda;
    std::optional<int> arcs;           // Omega T = 2 pi arcs
    std::optional<int> resonance;      // Omega / omega = 4 pi n / beta

    // [initial]
    InitialKind initial_kind = InitialKind::Rim;
    double b = 0.0;
    Complex c0{1.0, 0.0};
    Complex c1{0.0, 0.0};

    // [run]
    std::size_t samples = 2001;
    std::optional<double> dt;
    Propagator propagator = Propagator::Exact;
    GridKind grid = GridKind::Log;
    double lambda_min = 1e-2;
    double lambda_max = 2.0;
    std::size_t points = 200;
    int n_min = 1;
    int n_max = 5;
    std::vector<double> lambdas;
    unsigned threads = 1;
    std::optional<double> a;           // cycloid radius for `geometry`

    // Schedule with omega fixed by lambda / arcs / resonance. Throws ConfigError
    // when none (or more than one) is given, or the result is invalid.
    FieldSchedule resolved_schedule() const;
    // Initial state for the resolved schedule.
    SpinState initial_state() const;
    // Lambda grid for sweeps.
    std::vector<double> lambda_grid() const;

    std::string source = "<defaults>";
};

ScenarioConfig parse_config(std::istream& in, const std::string& source);
ScenarioConfig load_config(const std::string& path);

// Parses "1.5", "pi", "2*pi/3", "-pi/2". Throws std::invalid_argument.
double parse_real(const std::string& text);

}  // namespace spincycloid::cli
