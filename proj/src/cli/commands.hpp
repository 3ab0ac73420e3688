#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "cli/config.hpp"

namespace spincycloid::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kContractError = 3, kClosureError = 4 };

// Command-line overrides applied on top of a scenario file.
struct Overrides {
    std::optional<std::size_t> samples;
    std::optional<unsigned> threads;
    std::optional<double> a;
};

void apply_overrides(ScenarioConfig& cfg, const Overrides& o);

// Each command writes its table or JSON document to `out` and throws on error.
void cmd_evolve(const ScenarioConfig& cfg, std::ostream& out);
void cmd_sweep(const ScenarioConfig& cfg, std::ostream& out);
void cmd_phases(const ScenarioConfig& cfg, std::ostream& out);
void cmd_geometry(double a, std::ostream& out);
void cmd_resonances(const ScenarioConfig& cfg, std::ostream& out);

// Full CLI: parses arguments, dispatches, maps exceptions to exit codes.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace spincycloid::cli
