#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "spincycloid/phases_uncertainty.hpp"
#include "spincycloid/resonance_sweep.hpp"
#include "spincycloid/sphere_geometry.hpp"

using namespace spincycloid;
using namespace spincycloid::cli;
using doctest::Approx;

namespace {

const std::filesystem::path kConfigDir = SPINCYCLOID_CONFIG_DIR;

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "spincycloid");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("spincycloid_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::vector<std::string>* header = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (header) {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header->push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::istringstream l(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(l, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

std::string config(const std::string& name) { return (kConfigDir / name).string(); }

}  // namespace

TEST_CASE("parse_real accepts pi expressions") {
    CHECK(parse_real("1.5") == 1.5);
    CHECK(parse_real("pi") == Approx(kPi));
    CHECK(parse_real("2*pi/3") == Approx(2 * kPi / 3));
    CHECK(parse_real("-pi/2") == Approx(-kPi / 2));
    CHECK(parse_real("-pi") == Approx(-kPi));
    CHECK(parse_real(" 1e-3 ") == 1e-3);
    CHECK_THROWS_AS(parse_real("abc"), std::invalid_argument);
    CHECK_THROWS_AS(parse_real("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_real(""), std::invalid_argument);
}

TEST_CASE("config parsing") {
    std::istringstream in(R"(# demo
[field]
mode = meridian
phi = pi/4
lambda = 0.5   # trailing comment
direction = -1

[initial]
initial_kind = prolate
b = 1.2

[run]
samples = 11
propagator = rk4
dt = 0.01
lambdas = 0.1, 0.2, pi
grid = list
)");
    const ScenarioConfig cfg = parse_config(in, "inline");
    CHECK(cfg.schedule.mode == SweepMode::Meridian);
    CHECK(cfg.schedule.phi == Approx(kPi / 4));
    CHECK(cfg.schedule.direction == -1);
    CHECK(cfg.initial_kind == InitialKind::Prolate);
    CHECK(cfg.samples == 11);
    CHECK(cfg.propagator == Propagator::Rk4);
    REQUIRE(cfg.dt.has_value());
    CHECK(*cfg.dt == 0.01);
    CHECK(cfg.lambda_grid() == std::vector<double>{0.1, 0.2, kPi});
    const FieldSchedule s = cfg.resolved_schedule();
    CHECK(s.omega == Approx(0.5));
    CHECK(std::abs(cfg.initial_state().norm() - 1.0) < 1e-14);
}

TEST_CASE("config errors carry line numbers") {
    auto line_of = [](const std::string& text) {
        std::istringstream in(text);
        try {
            parse_config(in, "cfg");
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("[field]\nmode = latitude\nbogus = 1\n") == 3);
    CHECK(line_of("[field]\ntheta = abc\n") == 2);
    CHECK(line_of("theta = 1\n") == 1);
    CHECK(line_of("[nowhere]\n") == 1);
    CHECK(line_of("[field]\nmode latitude\n") == 2);
    CHECK(line_of("[field]\nmode = spiral\n") == 2);
    CHECK(line_of("[run]\nsamples = -3\n") == 2);
    CHECK(line_of("[field]\ndirection = 2\n") == 2);
}

TEST_CASE("schedule resolution needs exactly one of lambda, arcs, resonance") {
    std::istringstream none("[field]\nmode = latitude\n");
    CHECK_THROWS_AS(parse_config(none, "x").resolved_schedule(), ConfigError);
    std::istringstream both("[field]\nlambda = 0.5\narcs = 2\n");
    CHECK_THROWS_AS(parse_config(both, "x").resolved_schedule(), ConfigError);
    std::istringstream arcs("[field]\nmode = meridian\nbeta = pi\narcs = 2\n");
    CHECK(parse_config(arcs, "x").resolved_schedule().lambda() == Approx(meridian_resonance_lambda(2)));
    std::istringstream res("[field]\nmode = latitude\ntheta = pi/3\nresonance = 10\n");
    CHECK(1.0 / parse_config(res, "x").resolved_schedule().lambda() == Approx(19.48123).epsilon(1e-6));
}

TEST_CASE("every shipped config parses") {
    int count = 0;
    for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
        if (entry.path().extension() != ".ini") continue;
        CHECK_NOTHROW(load_config(entry.path().string()));
        ++count;
    }
    CHECK(count >= 10);
}

TEST_CASE("evolve writes unit-norm rows") {
    const Run r = run({"evolve", "--config", config("cycloid_rim.ini")});
    REQUIRE(r.code == 0);
    std::vector<std::string> header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == std::vector<std::string>{"t", "c0_re", "c0_im", "c1_re", "c1_im", "rx", "ry", "rz", "nx", "ny",
                                             "nz", "dE", "cumulative_length", "fidelity_to_adiabatic"});
    CHECK(rows.size() == 2001);
    for (const auto& row : rows) {
        REQUIRE(row.size() == 14);
        CHECK(std::abs(std::hypot(row[5], row[6], row[7]) - 1.0) < 1e-9);
    }
    CHECK(rows.front()[13] == Approx(1.0));
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("evolve under a static field keeps rz constant") {
    const Run r = run({"evolve", "--config", config("static_field.ini")});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    for (const auto& row : rows) CHECK(row[7] == Approx(rows.front()[7]).epsilon(1e-12));
}

TEST_CASE("cumulative length matches path_length") {
    const Run r = run({"evolve", "--config", config("cycloid_prolate.ini"), "--samples", "10000"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10000);
    const ScenarioConfig cfg = load_config(config("cycloid_prolate.ini"));
    const double expect = path_length(trajectory(cfg.resolved_schedule(), cfg.initial_state(), 10000));
    CHECK(std::abs(rows.back()[12] - expect) < 1e-9);
}

TEST_CASE("evolve with rk4 and transitionless propagators") {
    const std::string rk4 = write_temp("rk4.ini", "[field]\nmode = meridian\nlambda = 0.5\n[run]\nsamples = 101\npropagator = rk4\n");
    const Run a = run({"evolve", "--config", rk4});
    REQUIRE(a.code == 0);
    const auto rows = parse_csv(a.out);
    REQUIRE(rows.size() == 101);
    const ScenarioConfig cfg = load_config(rk4);
    const auto exact = trajectory(cfg.resolved_schedule(), cfg.initial_state(), 101);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(std::abs(rows[i][7] - exact.samples[i].bloch.z) < 1e-6);
        CHECK(rows[i][0] == Approx(exact.samples[i].t));
    }

    const Run t = run({"evolve", "--config", config("transitionless.ini")});
    REQUIRE(t.code == 0);
    for (const auto& row : parse_csv(t.out)) CHECK(row[13] > 1.0 - 1e-10);
}

TEST_CASE("output is deterministic and can go to a file") {
    const Run a = run({"evolve", "--config", config("cycloid_curtate.ini")});
    const Run b = run({"evolve", "--config", config("cycloid_curtate.ini")});
    CHECK(a.out == b.out);

    const auto path = std::filesystem::temp_directory_path() / "spincycloid_test_out.csv";
    const Run c = run({"evolve", "--config", config("cycloid_curtate.ini"), "--out", path.string()});
    CHECK(c.code == 0);
    CHECK(c.out.empty());
    std::ifstream f(path);
    std::stringstream content;
    content << f.rdbuf();
    CHECK(content.str() == a.out);
}

TEST_CASE("sweep on the resonance grid") {
    const Run r = run({"sweep", "--config", config("meridian_resonances.ini")});
    REQUIRE(r.code == 0);
    std::vector<std::string> header;
    const auto rows = parse_csv(r.out, &header);
    CHECK(header == std::vector<std::string>{"lambda", "inv_two_lambda", "infidelity", "length", "at_resonance"});
    CHECK(rows.size() == 10);
    for (const auto& row : rows) {
        CHECK(row[2] < 1e-10);
        CHECK(row[4] == 1.0);
        CHECK(row[3] >= kPi);
        CHECK(row[3] <= 4.0);
    }
}

TEST_CASE("sweep output does not depend on the thread count") {
    const Run one = run({"sweep", "--config", config("meridian_sweep.ini"), "--threads", "1"});
    const Run four = run({"sweep", "--config", config("meridian_sweep.ini"), "--threads", "4"});
    REQUIRE(one.code == 0);
    CHECK(one.out == four.out);
}

TEST_CASE("sweep on an empty grid is a config error") {
    const std::string empty = write_temp("empty.ini", "[field]\nmode = meridian\nbeta = pi\n[run]\ngrid = list\n");
    CHECK(run({"sweep", "--config", empty}).code == 2);
}

TEST_CASE("phases report") {
    const Run r = run({"phases", "--config", config("phases_latitude_n10.ini")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["geometric_phase"].get<double>() == Approx(4.8865).epsilon(1e-3 / 4.8865));
    CHECK(j.contains("geometric_phase_unfolded"));
    CHECK(j["closed_form_residual"].get<double>() < 1e-6);

    const Run eq = run({"phases", "--config", config("phases_equator_adiabatic.ini")});
    REQUIRE(eq.code == 0);
    CHECK(std::abs(fold_pi(nlohmann::json::parse(eq.out)["berry_phase"].get<double>())) == Approx(kPi));
}

TEST_CASE("phases on an open loop exits with a closure error") {
    const Run r = run({"phases", "--config", config("cycloid_rim.ini")});
    CHECK(r.code == 4);
    CHECK(r.err.find("closure violated") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("closed-form residual is small for every closed demo") {
    for (const char* name : {"phases_latitude_n10.ini", "phases_equator_adiabatic.ini", "great_circle_loop.ini"}) {
        const Run r = run({"phases", "--config", config(name)});
        REQUIRE(r.code == 0);
        CHECK(nlohmann::json::parse(r.out)["closed_form_residual"].get<double>() < 1e-6);
    }
}

TEST_CASE("geometry command") {
    const Run r = run({"geometry", "--a", "0.5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["arc_length"].get<double>() == Approx(3.15921).epsilon(1e-5));
    CHECK(j["arc_area"].get<double>() == Approx(2.20212).epsilon(1e-5));

    const auto small = nlohmann::json::parse(run({"geometry", "--a", "0.01"}).out);
    CHECK(small["plane_limit_ratios"]["length_over_8a"].get<double>() == Approx(1.0).epsilon(1e-3));
    CHECK(small["plane_limit_ratios"]["area_over_3pi_a2"].get<double>() == Approx(1.0).epsilon(1e-3));

    CHECK(run({"geometry", "--a", "1"}).code == 2);
    CHECK(run({"geometry"}).code == 2);
    CHECK(run({"geometry", "--config", config("geometry.ini")}).code == 0);
}

TEST_CASE("resonances command lists the meridian zeros") {
    const Run r = run({"resonances", "--config", config("meridian_resonances.ini")});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 10);
    for (const auto& row : rows) {
        const int n = static_cast<int>(row[0]);
        CHECK(row[3] == Approx(std::sqrt(4.0 * n * n - 1)).epsilon(1e-12));
        CHECK(row[5] < 1e-10);
    }

    const std::string dense = write_temp("dense.ini", "[field]\nmode = meridian\nbeta = pi\n[run]\ngrid = log\nlambda_min = 0.09\nlambda_max = 2\npoints = 400\n");
    const auto found = parse_csv(run({"resonances", "--config", dense}).out);
    CHECK(found.size() == 5);
}

TEST_CASE("bad invocations") {
    CHECK(run({}).code == 2);
    CHECK(run({"evolve"}).code == 2);
    CHECK(run({"evolve", "--config", "/nonexistent.ini"}).code == 2);
    const std::string bad = write_temp("bad.ini", "[field]\nmode = latitude\ntheta = 1\nlambda = 0.5\nwhat = 1\n");
    const Run r = run({"evolve", "--config", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find(":5:") != std::string::npos);
    const std::string curtate = write_temp("curtate.ini", "[field]\nlambda = 0.5\n[initial]\ninitial_kind = curtate\nb = 2\n");
    CHECK(run({"evolve", "--config", curtate}).code == 2);
    const std::string unnorm = write_temp("unnorm.ini", "[field]\nlambda = 0.5\n[initial]\ninitial_kind = custom\nc0_re = 0\nc1_re = 0\n");
    CHECK(run({"evolve", "--config", unnorm}).code == 2);
}
