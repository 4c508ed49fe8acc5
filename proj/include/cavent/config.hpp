// Line-oriented run configuration: `[section]` headers and `key = value`
// lines, '#' comments. Every default is made explicit in the JSON echo.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavent/scenario.hpp"
#include "cavent/sweep.hpp"

namespace cavent {

/// Malformed or inconsistent configuration. `line` is 0 when the problem is
/// not tied to one line.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(int line, const std::string& msg)
        : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    [[nodiscard]] int line() const { return line_; }

private:
    int line_;
};

/// Optional `[sweep]` section.
struct SweepSection {
    std::string name = "custom";
    SweepVariable variable = SweepVariable::time;
    SweepRange range;
    bool symmetric_placement = true;
    LayerTarget lambda_target = LayerTarget::both;
    std::vector<std::pair<std::string, std::string>> material_pairs;
};

struct RunConfig {
    Scenario scenario;
    std::optional<SweepSection> sweep;
    std::optional<double> transverse_area; // set when mode_volume was derived from it

    [[nodiscard]] SweepSpec sweep_spec() const {
        SweepSpec spec;
        const SweepSection s = sweep.value_or(SweepSection{});
        spec.name = s.name;
        spec.variable = s.variable;
        spec.range = s.range;
        spec.fixed = scenario;
        spec.symmetric_placement = s.symmetric_placement;
        spec.lambda_target = s.lambda_target;
        spec.material_pairs = s.material_pairs;
        return spec;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
};

class Section {
public:
    Section(std::string name, std::map<std::string, Entry> entries) : name_(std::move(name)), e_(std::move(entries)) {}

    [[nodiscard]] bool has(const std::string& k) const { return e_.count(k) > 0; }
    [[nodiscard]] int line(const std::string& k) const { return has(k) ? e_.at(k).line : 0; }

    std::optional<double> number(const std::string& k) const {
        if (!has(k))
            return std::nullopt;
        const auto& [v, line] = e_.at(k);
        char* end = nullptr;
        const double x = std::strtod(v.c_str(), &end);
        if (v.empty() || *end != '\0' || !std::isfinite(x))
            throw ConfigError(line, name_ + "." + k + ": expected a finite number, got '" + v + "'");
        return x;
    }

    std::optional<int> integer(const std::string& k) const {
        const auto x = number(k);
        if (!x)
            return std::nullopt;
        if (*x != std::floor(*x) || std::abs(*x) > 1e9)
            throw ConfigError(line(k), name_ + "." + k + ": expected an integer");
        return static_cast<int>(*x);
    }

    std::optional<bool> boolean(const std::string& k) const {
        if (!has(k))
            return std::nullopt;
        const auto& [v, line] = e_.at(k);
        if (v == "true")
            return true;
        if (v == "false")
            return false;
        throw ConfigError(line, name_ + "." + k + ": expected true or false, got '" + v + "'");
    }

    std::optional<std::string> text(const std::string& k) const {
        if (!has(k))
            return std::nullopt;
        return unquote(e_.at(k).value);
    }

private:
    std::string name_;
    std::map<std::string, Entry> e_;
};

inline const std::map<std::string, std::vector<std::string>>& allowed_keys() {
    static const std::map<std::string, std::vector<std::string>> keys = {
        {"cavity", {"length", "z1", "z2", "n_max", "light_speed", "mode_volume", "transverse_area", "normalized"}},
        {"layer1", {"material", "fermi_velocity", "soi_strength", "energy", "angle", "spin", "valley", "band"}},
        {"layer2", {"material", "fermi_velocity", "soi_strength", "energy", "angle", "spin", "valley", "band"}},
        {"propagator", {"q", "q11", "q22", "q12"}},
        {"time", {"t", "t_max"}},
        {"units", {"system"}},
        {"constants", {"elementary_charge", "hbar", "vacuum_permittivity", "electron_volt"}},
        {"options", {"diagonal_approximation"}},
        {"sweep",
         {"name", "variable", "start", "stop", "count", "log", "values", "symmetric_placement", "lambda_target",
          "material_pairs"}},
    };
    return keys;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(t);
    return out;
}

inline void require(bool ok, int line, const std::string& field, const std::string& msg) {
    if (!ok)
        throw ConfigError(line, field + " " + msg);
}

inline LayerConfig parse_layer(const Section& s, const std::string& tag, const LayerConfig& fallback) {
    LayerConfig l = fallback;
    if (auto m = s.text("material")) {
        try {
            l.material = preset(*m);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(s.line("material"), tag + ".material: " + e.what());
        }
    } else if (s.has("fermi_velocity") || s.has("soi_strength")) {
        l.material.name = "custom";
    }
    if (auto x = s.number("fermi_velocity"))
        l.material.fermi_velocity = *x;
    if (auto x = s.number("soi_strength"))
        l.material.soi_strength = *x;
    if (auto x = s.number("energy"))
        l.electron.energy = *x;
    if (auto x = s.number("angle"))
        l.electron.angle = *x;
    if (auto x = s.integer("spin"))
        l.electron.spin = *x;
    if (auto x = s.integer("valley"))
        l.electron.valley = *x;
    if (auto x = s.integer("band"))
        l.electron.band = *x;

    require(l.material.fermi_velocity > 0.0, s.line("fermi_velocity"), tag + ".fermi_velocity", "must be > 0");
    require(l.material.soi_strength >= 0.0, s.line("soi_strength"), tag + ".soi_strength", "must be >= 0");
    require(l.electron.energy > 0.0, s.line("energy"), tag + ".energy", "must be > 0");
    for (const char* k : {"spin", "valley", "band"}) {
        const int v = std::string(k) == "spin" ? l.electron.spin
                      : std::string(k) == "valley" ? l.electron.valley
                                                   : l.electron.band;
        require(v == 1 || v == -1, s.line(k), tag + "." + k, "must be +1 or -1");
    }
    return l;
}

} // namespace detail

/// Parses and validates a run configuration. Unspecified values fall back to
/// the reference scenario, except t_max, which defaults to the flight time.
inline RunConfig parse_config(const std::string& text) {
    std::map<std::string, std::map<std::string, detail::Entry>> raw;
    std::map<std::string, int> section_line;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"')
                quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = detail::trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(lineno, "malformed section header '" + line + "'");
            current = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::allowed_keys().count(current))
                throw ConfigError(lineno, "unknown section [" + current + "]");
            if (section_line.count(current))
                throw ConfigError(lineno, "duplicate section [" + current + "]");
            section_line[current] = lineno;
            raw[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, "expected key = value, got '" + line + "'");
        if (current.empty())
            throw ConfigError(lineno, "key outside any section");
        const std::string key = detail::trim(line.substr(0, eq));
        const auto& allowed = detail::allowed_keys().at(current);
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(lineno, "unknown key '" + key + "' in [" + current + "]");
        if (raw[current].count(key))
            throw ConfigError(lineno, "duplicate key '" + key + "' in [" + current + "]");
        raw[current][key] = {detail::trim(line.substr(eq + 1)), lineno};
    }
    auto sec = [&](const std::string& name) { return detail::Section(name, raw[name]); };

    RunConfig cfg;
    Scenario& s = cfg.scenario;
    s = reference_scenario();
    s.t_max.reset();

    // units and constants
    const auto units = sec("units");
    const auto cav = sec("cavity");
    bool normalized = false;
    if (auto sys = units.text("system")) {
        if (*sys == "normalized")
            normalized = true;
        else if (*sys != "SI")
            throw ConfigError(units.line("system"), "units.system must be SI or normalized, got '" + *sys + "'");
    }
    if (auto flag = cav.boolean("normalized")) {
        if (units.has("system") && *flag != normalized)
            throw ConfigError(cav.line("normalized"), "cavity.normalized conflicts with units.system");
        normalized = *flag;
    }
    if (normalized && cav.has("mode_volume"))
        throw ConfigError(cav.line("mode_volume"), "cavity.mode_volume conflicts with normalized units");
    if (normalized && cav.has("transverse_area"))
        throw ConfigError(cav.line("transverse_area"), "cavity.transverse_area conflicts with normalized units");
    if (cav.has("mode_volume") && cav.has("transverse_area"))
        throw ConfigError(cav.line("transverse_area"), "cavity.transverse_area conflicts with cavity.mode_volume");
    s.coupling.normalized = normalized;
    const auto consts = sec("constants");
    auto& pc = s.coupling.constants;
    for (auto [key, field] : {std::pair{"elementary_charge", &pc.elementary_charge}, std::pair{"hbar", &pc.hbar},
                              std::pair{"vacuum_permittivity", &pc.vacuum_permittivity},
                              std::pair{"electron_volt", &pc.electron_volt}}) {
        if (auto x = consts.number(key)) {
            detail::require(*x > 0.0, consts.line(key), std::string("constants.") + key, "must be > 0");
            *field = *x;
        }
    }

    // cavity
    if (auto x = cav.number("length"))
        s.cavity.length = *x;
    detail::require(s.cavity.length > 0.0, cav.line("length"), "cavity.length", "must be > 0");
    s.cavity.z1 = 0.4 * s.cavity.length;
    s.cavity.z2 = 0.6 * s.cavity.length;
    if (auto x = cav.number("z1"))
        s.cavity.z1 = *x;
    if (auto x = cav.number("z2"))
        s.cavity.z2 = *x;
    for (auto [key, z] : {std::pair{"z1", s.cavity.z1}, std::pair{"z2", s.cavity.z2}})
        detail::require(z > 0.0 && z < s.cavity.length, cav.line(key), std::string("cavity.") + key,
                        "= " + detail::fmt12(z) + " must lie strictly inside (0, length = " +
                            detail::fmt12(s.cavity.length) + ")");
    if (auto x = cav.integer("n_max"))
        s.cavity.n_max = *x;
    detail::require(s.cavity.n_max >= 1, cav.line("n_max"), "cavity.n_max", "must be >= 1");
    if (auto x = cav.number("light_speed"))
        s.cavity.light_speed = *x;
    detail::require(s.cavity.light_speed > 0.0, cav.line("light_speed"), "cavity.light_speed", "must be > 0");
    double area = kDefaultTransverseArea;
    if (auto x = cav.number("transverse_area"))
        area = *x;
    detail::require(area > 0.0, cav.line("transverse_area"), "cavity.transverse_area", "must be > 0");
    s.cavity.mode_volume = area * s.cavity.length;
    if (!cav.has("mode_volume"))
        cfg.transverse_area = area;
    if (auto x = cav.number("mode_volume"))
        s.cavity.mode_volume = *x;
    detail::require(s.cavity.mode_volume > 0.0, cav.line("mode_volume"), "cavity.mode_volume", "must be > 0");

    // layers
    s.layer1 = detail::parse_layer(sec("layer1"), "layer1", s.layer1);
    s.layer2 = detail::parse_layer(sec("layer2"), "layer2", s.layer2);

    // propagator momenta
    const auto prop = sec("propagator");
    if (prop.has("q") && (prop.has("q11") || prop.has("q22") || prop.has("q12")))
        throw ConfigError(prop.line("q"), "propagator.q conflicts with per-propagator q11/q22/q12");
    if (auto x = prop.number("q"))
        s.q = PropagatorMomenta::uniform(*x);
    for (auto [key, field] : {std::pair{"q11", &s.q.q11}, std::pair{"q22", &s.q.q22}, std::pair{"q12", &s.q.q12}})
        if (auto x = prop.number(key))
            *field = *x;
    for (auto [key, v] : {std::pair{"q", s.q.q11}, std::pair{"q11", s.q.q11}, std::pair{"q22", s.q.q22},
                          std::pair{"q12", s.q.q12}})
        detail::require(v >= 0.0, prop.line(key), std::string("propagator.") + key, "must be >= 0");

    // time
    const auto tm = sec("time");
    if (auto x = tm.number("t_max")) {
        detail::require(*x > 0.0, tm.line("t_max"), "time.t_max", "must be > 0");
        s.t_max = *x;
    } else {
        detail::require(s.cavity.z1 != s.cavity.z2, cav.line("z2"), "cavity.z2",
                        "must differ from z1 unless time.t_max is given");
    }
    if (auto x = tm.number("t")) {
        detail::require(*x >= 0.0, tm.line("t"), "time.t", "must be >= 0");
        s.t = *x;
    }

    if (auto x = sec("options").boolean("diagonal_approximation"))
        s.rho.diagonal_approximation = *x;

    // sweep
    if (section_line.count("sweep")) {
        const auto sw = sec("sweep");
        SweepSection out;
        if (auto x = sw.text("name"))
            out.name = *x;
        if (auto x = sw.text("variable")) {
            try {
                out.variable = parse_sweep_variable(*x);
            } catch (const SpecError& e) {
                throw ConfigError(sw.line("variable"), std::string("sweep.variable: ") + e.what());
            }
        }
        if (auto x = sw.number("start"))
            out.range.start = *x;
        if (auto x = sw.number("stop"))
            out.range.stop = *x;
        if (auto x = sw.integer("count"))
            out.range.count = *x;
        if (auto x = sw.boolean("log"))
            out.range.log_spacing = *x;
        if (auto x = sw.text("values")) {
            for (const auto& item : detail::split_list(*x)) {
                char* end = nullptr;
                const double v = std::strtod(item.c_str(), &end);
                if (*end != '\0' || !std::isfinite(v))
                    throw ConfigError(sw.line("values"), "sweep.values: '" + item + "' is not a number");
                out.range.values.push_back(v);
            }
            if (out.range.values.empty())
                throw ConfigError(sw.line("values"), "sweep.values must not be empty");
        }
        if (auto x = sw.boolean("symmetric_placement"))
            out.symmetric_placement = *x;
        if (auto x = sw.text("lambda_target")) {
            if (*x == "layer1")
                out.lambda_target = LayerTarget::layer1;
            else if (*x == "layer2")
                out.lambda_target = LayerTarget::layer2;
            else if (*x == "both")
                out.lambda_target = LayerTarget::both;
            else
                throw ConfigError(sw.line("lambda_target"), "sweep.lambda_target must be layer1, layer2 or both");
        }
        if (auto x = sw.text("material_pairs")) {
            for (const auto& item : detail::split_list(*x)) {
                const auto colon = item.find(':');
                if (colon == std::string::npos)
                    throw ConfigError(sw.line("material_pairs"), "sweep.material_pairs entries look like a:b");
                out.material_pairs.emplace_back(detail::trim(item.substr(0, colon)),
                                                detail::trim(item.substr(colon + 1)));
            }
            if (!out.range.values.empty() || !sw.has("start")) {
                // default to one point per pair
                if (out.range.values.empty())
                    for (std::size_t i = 0; i < out.material_pairs.size(); ++i)
                        out.range.values.push_back(static_cast<double>(i));
            }
        }
        try {
            SweepSpec probe;
            probe.variable = out.variable;
            probe.range = out.range;
            probe.material_pairs = out.material_pairs;
            validate(probe);
            for (const auto& [a, b] : out.material_pairs) {
                preset(a);
                preset(b);
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError(section_line["sweep"], std::string("[sweep] ") + e.what());
        }
        cfg.sweep = out;
    }
    return cfg;
}

// ── Echo ────────────────────────────────────────────────────────────────────

inline nlohmann::ordered_json to_json(const LayerConfig& l) {
    return {{"material", l.material.name},
            {"fermi_velocity", l.material.fermi_velocity},
            {"soi_strength", l.material.soi_strength},
            {"energy", l.electron.energy},
            {"angle", l.electron.angle},
            {"spin", l.electron.spin},
            {"valley", l.electron.valley},
            {"band", l.electron.band},
            {"mass", l.mass()}};
}

inline nlohmann::ordered_json to_json(const Scenario& s) {
    nlohmann::ordered_json j;
    j["cavity"] = {{"length", s.cavity.length},
                   {"z1", s.cavity.z1},
                   {"z2", s.cavity.z2},
                   {"n_max", s.cavity.n_max},
                   {"light_speed", s.cavity.light_speed},
                   {"mode_volume", s.cavity.mode_volume}};
    j["layer1"] = to_json(s.layer1);
    j["layer2"] = to_json(s.layer2);
    j["propagator"] = {{"q11", s.q.q11}, {"q22", s.q.q22}, {"q12", s.q.q12}};
    const auto& c = s.coupling.constants;
    j["units"] = {{"system", s.coupling.normalized ? "normalized" : "SI"}};
    j["constants"] = {{"elementary_charge", c.elementary_charge},
                      {"hbar", c.hbar},
                      {"vacuum_permittivity", c.vacuum_permittivity},
                      {"electron_volt", c.electron_volt}};
    nlohmann::ordered_json tj;
    if (s.t_max)
        tj["t_max"] = *s.t_max;
    else
        tj["t_max"] = nullptr;
    tj["t_max_source"] = s.t_max ? "override" : "flight time |z2 - z1| / c";
    try {
        tj["t_max_resolved"] = s.resolved_t_max();
        tj["t"] = s.resolved_t();
    } catch (const DomainError&) {
        tj["t_max_resolved"] = nullptr;
        tj["t"] = s.t ? nlohmann::ordered_json(*s.t) : nlohmann::ordered_json(nullptr);
    }
    tj["t_source"] = s.t ? "explicit" : "t_max";
    j["time"] = tj;
    j["options"] = {{"diagonal_approximation", s.rho.diagonal_approximation}};
    return j;
}

inline nlohmann::ordered_json to_json(const RunConfig& cfg) {
    nlohmann::ordered_json j = to_json(cfg.scenario);
    if (cfg.transverse_area)
        j["cavity"]["transverse_area"] = *cfg.transverse_area;
    if (cfg.sweep) {
        const auto& sw = *cfg.sweep;
        nlohmann::ordered_json sj = {{"name", sw.name},
                                     {"variable", to_string(sw.variable)},
                                     {"start", sw.range.start},
                                     {"stop", sw.range.stop},
                                     {"count", sw.range.count},
                                     {"log", sw.range.log_spacing},
                                     {"values", sw.range.values},
                                     {"symmetric_placement", sw.symmetric_placement}};
        sj["lambda_target"] = sw.lambda_target == LayerTarget::layer1   ? "layer1"
                              : sw.lambda_target == LayerTarget::layer2 ? "layer2"
                                                                        : "both";
        auto pairs = nlohmann::ordered_json::array();
        for (const auto& [a, b] : sw.material_pairs)
            pairs.push_back(a + ":" + b);
        sj["material_pairs"] = pairs;
        j["sweep"] = sj;
    }
    return j;
}

} // namespace cavent
