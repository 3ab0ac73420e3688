#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spincycloid/errors.hpp"
#include "spincycloid/numeric_oracle.hpp"
#include "spincycloid/phases_uncertainty.hpp"
#include "spincycloid/resonance_sweep.hpp"
#include "spincycloid/sphere_geometry.hpp"
#include "spincycloid/transitionless.hpp"

namespace spincycloid::cli {

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<const char*> names) {
        bool first = true;
        for (const char* n : names) {
            if (!first) out_ << ',';
            out_ << n;
            first = false;
        }
        out_ << '\n';
    }

    CsvWriter& cell(double x) { return raw(fmt(x)); }
    CsvWriter& cell(long x) { return raw(std::to_string(x)); }

    void end() {
        out_ << '\n';
        first_ = true;
    }

private:
    CsvWriter& raw(const std::string& s) {
        if (!first_) out_ << ',';
        out_ << s;
        first_ = false;
        return *this;
    }

    std::ostream& out_;
    bool first_ = true;
};

// JSON numbers printed with 17 significant digits; NaN becomes null.
nlohmann::ordered_json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return nlohmann::ordered_json::parse(fmt(x));
}

Trajectory run_rk4(const ScenarioConfig& cfg, const FieldSchedule& s, const SpinState& psi0) {
    const double T = s.duration();
    const std::size_t intervals = cfg.samples - 1;
    const double dt = cfg.dt.value_or(T / 1e5);
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    steps = std::max(steps, std::size_t{100});
    steps = (steps + intervals - 1) / intervals * intervals;
    IntegratorConfig ic = IntegratorConfig::with_steps(s, steps);
    ic.sample_stride = steps / intervals;
    return rk4_schrodinger(s, psi0, ic);
}

std::ostream& target(const std::optional<std::string>& path, std::ofstream& file, std::ostream& fallback) {
    if (!path) return fallback;
    file.open(*path, std::ios::binary);
    if (!file) throw ConfigError(*path, 0, "cannot open output file");
    return file;
}

}  // namespace

void apply_overrides(ScenarioConfig& cfg, const Overrides& o) {
    if (o.samples) cfg.samples = *o.samples;
    if (o.threads) cfg.threads = *o.threads;
    if (o.a) cfg.a = *o.a;
}

void cmd_evolve(const ScenarioConfig& cfg, std::ostream& out) {
    const FieldSchedule s = cfg.resolved_schedule();
    const SpinState psi0 = cfg.initial_state();
    if (cfg.samples < 2) throw ConfigError(cfg.source, 0, "samples must be >= 2");

    Trajectory traj;
    switch (cfg.propagator) {
        case Propagator::Exact: traj = trajectory(s, psi0, cfg.samples); break;
        case Propagator::Rk4: traj = run_rk4(cfg, s, psi0); break;
        case Propagator::Transitionless: traj = propagate_transitionless(s, psi0, cfg.samples); break;
    }

    CsvWriter csv(out);
    csv.header({"t", "c0_re", "c0_im", "c1_re", "c1_im", "rx", "ry", "rz", "nx", "ny", "nz", "dE",
                "cumulative_length", "fidelity_to_adiabatic"});
    double length = 0.0;
    const BlochVector* prev = nullptr;
    for (const TrajectorySample& p : traj.samples) {
        if (prev) length += great_circle_distance(*prev, p.bloch);
        prev = &p.bloch;
        const SpinState plus = instantaneous_eigenstates(p.field).first;
        const double fidelity = std::norm(plus.overlap(p.state));
        csv.cell(p.t)
            .cell(p.state.c0().real())
            .cell(p.state.c0().imag())
            .cell(p.state.c1().real())
            .cell(p.state.c1().imag())
            .cell(p.bloch.x)
            .cell(p.bloch.y)
            .cell(p.bloch.z)
            .cell(p.field.n.x())
            .cell(p.field.n.y())
            .cell(p.field.n.z())
            .cell(energy_uncertainty(s.omega0, p.field.n, p.state))
            .cell(length)
            .cell(fidelity)
            .end();
    }
}

void cmd_sweep(const ScenarioConfig& cfg, std::ostream& out) {
    const std::vector<double> grid = cfg.lambda_grid();
    if (grid.empty()) throw ConfigError(cfg.source, 0, "empty lambda grid");
    std::vector<SweepRow> rows;
    try {
        rows = sweep(grid, cfg.schedule, cfg.threads, std::max<std::size_t>(cfg.samples, 2));
    } catch (const DomainError& e) {
        throw ConfigError(cfg.source, 0, e.what());
    }
    CsvWriter csv(out);
    csv.header({"lambda", "inv_two_lambda", "infidelity", "length", "at_resonance"});
    for (const SweepRow& r : rows) {
        csv.cell(r.lambda).cell(r.inv_two_lambda).cell(r.infidelity).cell(r.length).cell(long{r.at_resonance}).end();
    }
}

void cmd_phases(const ScenarioConfig& cfg, std::ostream& out) {
    const FieldSchedule s = cfg.resolved_schedule();
    const SpinState psi0 = cfg.initial_state();
    const PhaseSummary p = aa_phase(s, psi0);
    const EffectiveRotation rot = effective_rotation(s);

    nlohmann::ordered_json j;
    j["mode"] = s.mode == SweepMode::Latitude ? "latitude" : "meridian";
    j["lambda"] = num(s.lambda());
    j["Omega"] = num(rot.Omega);
    j["a"] = num(rot.a);
    j["duration"] = num(s.duration());
    j["total_phase"] = num(p.total_phase);
    j["total_phase_unfolded"] = num(p.total_phase_unfolded);
    j["dynamical_phase"] = num(p.dynamical_phase);
    j["geometric_phase"] = num(p.geometric_phase);
    j["geometric_phase_unfolded"] = num(p.geometric_phase_unfolded);
    j["winding"] = p.winding;
    j["berry_phase"] = num(p.berry_phase);
    j["berry_phase_signed"] = num(p.berry_phase_signed);
    j["closed_form_applies"] = p.closed_form_applies;
    j["closed_form_geometric"] = num(p.closed_form_geometric);
    j["closed_form_residual"] = num(p.closed_form_residual);
    j["endpoint_gap"] = num(p.endpoint_gap);
    j["solid_angle"] = num(p.solid_angle);
    j["solid_angle_phase"] = num(p.solid_angle_phase);
    j["solid_angle_residual"] = num(p.solid_angle_residual);
    j["arc_count"] = num(p.arc_count);
    j["aa_berry_gap"] = num(p.aa_berry_gap);
    j["predicted_gap"] = num(p.predicted_gap);
    out << j.dump(2) << '\n';
}

void cmd_geometry(double a, std::ostream& out) {
    const double length = cycloid_arc_length(a);
    const double area = cycloid_arc_area(a);
    nlohmann::ordered_json j;
    j["a"] = num(a);
    j["arc_length"] = num(length);
    j["arc_area"] = num(area);
    j["plane_limit_ratios"] = {{"length_over_8a", num(length / (8.0 * a))},
                               {"area_over_3pi_a2", num(area / (3.0 * kPi * a * a))}};
    out << j.dump(2) << '\n';
}

void cmd_resonances(const ScenarioConfig& cfg, std::ostream& out) {
    std::vector<double> lambdas = cfg.lambda_grid();
    if (cfg.grid != GridKind::Resonances) {
        try {
            lambdas = find_resonances(cfg.schedule, lambdas);
        } catch (const DomainError& e) {
            throw ConfigError(cfg.source, 0, e.what());
        }
    }
    CsvWriter csv(out);
    csv.header({"arcs", "lambda", "inv_two_lambda", "omega0_over_omega", "Omega_over_omega", "infidelity"});
    for (const double l : lambdas) {
        const FieldSchedule s = schedule_at(cfg.schedule, l);
        const EffectiveRotation rot = effective_rotation(s);
        const SpinState psi0 = cycloid_family_initial_state(s, CycloidKind::Rim);
        const SpinState target = instantaneous_eigenstates(field_direction(s, s.duration())).first;
        const long arcs = std::lround(rot.Omega * s.duration() / kTwoPi);
        csv.cell(arcs)
            .cell(l)
            .cell(0.5 / l)
            .cell(1.0 / l)
            .cell(rot.Omega / s.omega)
            .cell(infidelity(s, psi0, target))
            .end();
    }
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spin-1/2 in a rotating magnetic field: trajectories, phases and resonances"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_path;
    Overrides overrides;
    long seed = 0;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "scenario file");
        if (needs_config) opt->required();
        sub->add_option("--out", out_path, "output path (default stdout)");
        sub->add_option("--samples", overrides.samples, "number of samples");
        sub->add_option("--threads", overrides.threads, "worker threads for sweeps");
        sub->add_option("--seed", seed, "reserved; all runs are deterministic");
    };

    auto* evolve = app.add_subcommand("evolve", "trajectory CSV");
    auto* sweep_cmd = app.add_subcommand("sweep", "infidelity and length over a lambda grid");
    auto* phases = app.add_subcommand("phases", "phase summary JSON for a closed evolution");
    auto* geometry = app.add_subcommand("geometry", "spherical cycloid arc length and area JSON");
    auto* resonances = app.add_subcommand("resonances", "resonant lambdas CSV");
    add_common(evolve, true);
    add_common(sweep_cmd, true);
    add_common(phases, true);
    add_common(resonances, true);
    add_common(geometry, false);
    geometry->add_option("--a", overrides.a, "rolling-circle radius in (0, 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    try {
        ScenarioConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        apply_overrides(cfg, overrides);

        // Render into a buffer so a failing command leaves no partial output.
        std::ostringstream buffer;
        if (evolve->parsed()) cmd_evolve(cfg, buffer);
        else if (sweep_cmd->parsed()) cmd_sweep(cfg, buffer);
        else if (phases->parsed()) cmd_phases(cfg, buffer);
        else if (resonances->parsed()) cmd_resonances(cfg, buffer);
        else {
            if (!cfg.a) throw ConfigError(cfg.source, 0, "geometry needs --a or [run] a");
            cmd_geometry(*cfg.a, buffer);
        }
        std::ofstream file;
        target(out_path, file, out) << buffer.str();
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kConfigError;
    } catch (const ClosureError& e) {
        err << "closure violated: endpoint gap " << fmt(e.gap()) << '\n';
        return kClosureError;
    } catch (const AccuracyError& e) {
        err << "numerical contract violated: " << e.what() << '\n';
        return kContractError;
    } catch (const ContractViolation& e) {
        err << "numerical contract violated: " << e.what() << '\n';
        return kContractError;
    }
}

}  // namespace spincycloid::cli
