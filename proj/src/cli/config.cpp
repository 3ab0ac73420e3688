#include "cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "spincycloid/errors.hpp"
#include "spincycloid/resonance_sweep.hpp"

namespace spincycloid::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double parse_factor(const std::string& token) {
    const std::string t = lower(trim(token));
    if (t == "pi") return kPi;
    double value = 0.0;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (t.empty() || ec != std::errc{} || ptr != end) throw std::invalid_argument("not a number: '" + token + "'");
    return value;
}

long parse_integer(const std::string& text) {
    const std::string t = trim(text);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
        throw std::invalid_argument("not an integer: '" + text + "'");
    }
    return value;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

double parse_real(const std::string& text) {
    std::string s = trim(text);
    double sign = 1.0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+') && s.find_first_of("*/") != std::string::npos) {
        sign = s[0] == '-' ? -1.0 : 1.0;
        s = s.substr(1);
    } else if (lower(s) == "-pi") {
        return -kPi;
    }
    double value = 1.0;
    char op = '*';
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find_first_of("*/", pos);
        const double f = parse_factor(s.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
        value = op == '*' ? value * f : value / f;
        if (next == std::string::npos) break;
        op = s[next];
        pos = next + 1;
    }
    if (!std::isfinite(value)) throw std::invalid_argument("not a finite number: '" + text + "'");
    return sign * value;
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
    ScenarioConfig cfg;
    cfg.source = source;
    std::string section;
    std::string raw;
    int line_no = 0;

    using Setter = std::function<void(const std::string&)>;
    auto real = [](double& dst) -> Setter { return [&dst](const std::string& v) { dst = parse_real(v); }; };
    auto count = [](std::size_t& dst) -> Setter {
        return [&dst](const std::string& v) {
            const long n = parse_integer(v);
            if (n < 0) throw std::invalid_argument("must be >= 0");
            dst = static_cast<std::size_t>(n);
        };
    };

    const std::map<std::string, std::map<std::string, Setter>> keys = {
        {"field",
         {{"mode",
           [&](const std::string& v) {
               const std::string m = lower(v);
               if (m == "latitude") cfg.schedule.mode = SweepMode::Latitude;
               else if (m == "meridian") cfg.schedule.mode = SweepMode::Meridian;
               else throw std::invalid_argument("mode must be latitude or meridian");
           }},
          {"theta", real(cfg.schedule.theta)},
          {"phi", real(cfg.schedule.phi)},
          {"beta", real(cfg.schedule.beta)},
          {"omega0", real(cfg.schedule.omega0)},
          {"hold_time", real(cfg.schedule.hold_time)},
          {"lambda", [&](const std::string& v) { cfg.lambda = parse_real(v); }},
          {"arcs", [&](const std::string& v) { cfg.arcs = static_cast<int>(parse_integer(v)); }},
          {"resonance", [&](const std::string& v) { cfg.resonance = static_cast<int>(parse_integer(v)); }},
          {"direction",
           [&](const std::string& v) {
               const long d = parse_integer(v);
               if (d != 1 && d != -1) throw std::invalid_argument("direction must be 1 or -1");
               cfg.schedule.direction = static_cast<int>(d);
           }}}},
        {"initial",
         {{"initial_kind",
           [&](const std::string& v) {
               const std::string k = lower(v);
               if (k == "rim") cfg.initial_kind = InitialKind::Rim;
               else if (k == "curtate") cfg.initial_kind = InitialKind::Curtate;
               else if (k == "prolate") cfg.initial_kind = InitialKind::Prolate;
               else if (k == "axis") cfg.initial_kind = InitialKind::Axis;
               else if (k == "custom") cfg.initial_kind = InitialKind::Custom;
               else throw std::invalid_argument("initial_kind must be rim, curtate, prolate, axis or custom");
           }},
          {"b", real(cfg.b)},
          {"c0_re", [&](const std::string& v) { cfg.c0.real(parse_real(v)); }},
          {"c0_im", [&](const std::string& v) { cfg.c0.imag(parse_real(v)); }},
          {"c1_re", [&](const std::string& v) { cfg.c1.real(parse_real(v)); }},
          {"c1_im", [&](const std::string& v) { cfg.c1.imag(parse_real(v)); }}}},
        {"run",
         {{"samples", count(cfg.samples)},
          {"dt", [&](const std::string& v) { cfg.dt = parse_real(v); }},
          {"propagator",
           [&](const std::string& v) {
               const std::string p = lower(v);
               if (p == "exact") cfg.propagator = Propagator::Exact;
               else if (p == "rk4") cfg.propagator = Propagator::Rk4;
               else if (p == "transitionless") cfg.propagator = Propagator::Transitionless;
               else throw std::invalid_argument("propagator must be exact, rk4 or transitionless");
           }},
          {"grid",
           [&](const std::string& v) {
               const std::string g = lower(v);
               if (g == "log") cfg.grid = GridKind::Log;
               else if (g == "linear") cfg.grid = GridKind::Linear;
               else if (g == "resonances") cfg.grid = GridKind::Resonances;
               else if (g == "list") cfg.grid = GridKind::List;
               else throw std::invalid_argument("grid must be log, linear, resonances or list");
           }},
          {"lambda_min", real(cfg.lambda_min)},
          {"lambda_max", real(cfg.lambda_max)},
          {"points", count(cfg.points)},
          {"n_min", [&](const std::string& v) { cfg.n_min = static_cast<int>(parse_integer(v)); }},
          {"n_max", [&](const std::string& v) { cfg.n_max = static_cast<int>(parse_integer(v)); }},
          {"threads",
           [&](const std::string& v) {
               const long n = parse_integer(v);
               if (n < 1) throw std::invalid_argument("threads must be >= 1");
               cfg.threads = static_cast<unsigned>(n);
           }},
          {"a", [&](const std::string& v) { cfg.a = parse_real(v); }},
          {"lambdas",
           [&](const std::string& v) {
               cfg.lambdas.clear();
               std::stringstream ss(v);
               std::string item;
               while (std::getline(ss, item, ',')) {
                   if (!trim(item).empty()) cfg.lambdas.push_back(parse_real(item));
               }
           }}}},
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(source, line_no, "unterminated section header");
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!keys.contains(section)) throw ConfigError(source, line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source, line_no, "expected 'key = value'");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(source, line_no, "key '" + key + "' outside a section");
        const auto& table = keys.at(section);
        const auto it = table.find(key);
        if (it == table.end()) throw ConfigError(source, line_no, "unknown key '" + key + "' in [" + section + "]");
        try {
            it->second(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(source, line_no, key + ": " + e.what());
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open file");
    return parse_config(in, path);
}

FieldSchedule ScenarioConfig::resolved_schedule() const {
    const int given = int(lambda.has_value()) + int(arcs.has_value()) + int(resonance.has_value());
    if (given != 1) throw ConfigError(source, 0, "[field] needs exactly one of lambda, arcs, resonance");
    FieldSchedule s = schedule;
    try {
        if (lambda) {
            if (*lambda < 0.0) throw DomainError("lambda must be >= 0");
            s.omega = *lambda * s.omega0;
        } else {
            FieldSchedule unit = s;
            unit.omega0 = 1.0;
            unit.omega = 1.0;
            const double l = arcs ? lambda_for_arcs(unit, *arcs) : lambda_for_ratio(unit, resonance_ratio(s.beta, *resonance));
            s.omega = l * s.omega0;
        }
        s.validate();
    } catch (const DomainError& e) {
        throw ConfigError(source, 0, e.what());
    }
    return s;
}

SpinState ScenarioConfig::initial_state() const {
    const FieldSchedule s = resolved_schedule();
    try {
        switch (initial_kind) {
            case InitialKind::Rim: return cycloid_family_initial_state(s, CycloidKind::Rim);
            case InitialKind::Axis: return cycloid_family_initial_state(s, CycloidKind::Axis);
            case InitialKind::Curtate: return cycloid_family_initial_state(s, CycloidKind::Curtate, b);
            case InitialKind::Prolate: return cycloid_family_initial_state(s, CycloidKind::Prolate, b);
            case InitialKind::Custom: return SpinState::normalized(c0, c1);
        }
    } catch (const DomainError& e) {
        throw ConfigError(source, 0, e.what());
    } catch (const ContractViolation& e) {
        throw ConfigError(source, 0, e.what());
    }
    return {};
}

std::vector<double> ScenarioConfig::lambda_grid() const {
    try {
        switch (grid) {
            case GridKind::Log: return log_grid(lambda_min, lambda_max, points);
            case GridKind::Linear: return linear_grid(lambda_min, lambda_max, points);
            case GridKind::List: return lambdas;
            case GridKind::Resonances: {
                if (n_min < 1 || n_max < n_min) throw DomainError("need 1 <= n_min <= n_max");
                FieldSchedule unit = schedule;
                unit.omega0 = 1.0;
                std::vector<double> g;
                for (int n = n_min; n <= n_max; ++n) g.push_back(lambda_for_arcs(unit, n));
                std::sort(g.begin(), g.end());
                return g;
            }
        }
    } catch (const DomainError& e) {
        throw ConfigError(source, 0, e.what());
    }
    return {};
}

}  // namespace spincycloid::cli
