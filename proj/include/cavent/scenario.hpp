// A fully specified evaluation point and the built-in material presets.
#pragma once

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavent/density_matrix.hpp"
#include "cavent/propagator.hpp"
#include "cavent/types.hpp"

namespace cavent {

/// Everything needed to evaluate the density matrix at one time.
struct Scenario {
    LayerConfig layer1;
    LayerConfig layer2;
    CavityGeometry cavity;
    PropagatorMomenta q;
    Coupling coupling;
    RhoOptions rho;
    std::optional<double> t;     // evaluation time; defaults to t_max
    std::optional<double> t_max; // defaults to the photon flight time

    [[nodiscard]] double resolved_t_max() const { return t_max ? *t_max : time_of_flight(cavity); }
    [[nodiscard]] double resolved_t() const { return t ? *t : resolved_t_max(); }
};

/// Transverse area used for the default mode volume V = A * L (m^2).
/// The only free scale of the SI coupling; this value puts L_2 for the
/// reference graphene configuration near 2e17 s^-2.
inline constexpr double kDefaultTransverseArea = 6.25e-8;

struct MaterialPreset {
    Material material;
    bool from_literature_placeholder = false;
    std::string source;
};

/// Built-in presets. Silicene and germanene values (and every Fermi
/// velocity other than graphene's) are literature placeholders.
inline std::vector<MaterialPreset> builtin_presets() {
    return {
        {{"graphene", 1.0e6, 1.0e-6}, false, "lambda_so = 1e-3 meV; v_f = 1e6 m/s (standard)"},
        {{"silicene", 5.52e5, 3.9e-3}, true, "literature placeholder"},
        {{"germanene", 5.66e5, 43.0e-3}, true, "literature placeholder"},
        {{"stanene", 4.85e5, 0.1}, true, "lambda_so ~ 100 meV; v_f literature placeholder"},
    };
}

/// Environment variable naming a preset override file.
inline constexpr const char* kPresetEnvVar = "CAVENT_PRESETS";

/// Parses `[material.<name>]` sections with `fermi_velocity` and
/// `soi_strength` keys. Entries replace or extend the built-ins.
inline std::vector<MaterialPreset> parse_preset_text(const std::string& text, std::vector<MaterialPreset> base) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    MaterialPreset* current = nullptr;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        line = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (line.empty())
            continue;
        const std::string where = "preset file line " + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']' || line.rfind("[material.", 0) != 0)
                throw std::invalid_argument(where + "expected [material.<name>]");
            const std::string name = trim(line.substr(10, line.size() - 11));
            if (name.empty())
                throw std::invalid_argument(where + "empty material name");
            current = nullptr;
            for (auto& p : base)
                if (p.material.name == name)
                    current = &p;
            if (!current) {
                base.push_back({{name, 1.0e6, 0.0}, true, "preset file"});
                current = &base.back();
            }
            current->source = "preset file";
            current->from_literature_placeholder = true;
            continue;
        }
        if (!current)
            throw std::invalid_argument(where + "key outside a [material.<name>] section");
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(where + "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        char* end = nullptr;
        const double x = std::strtod(val.c_str(), &end);
        if (val.empty() || *end != '\0')
            throw std::invalid_argument(where + "'" + key + "' expects a number");
        if (key == "fermi_velocity")
            current->material.fermi_velocity = x;
        else if (key == "soi_strength")
            current->material.soi_strength = x;
        else
            throw std::invalid_argument(where + "unknown key '" + key + "'");
        current->material.validate();
    }
    return base;
}

/// Built-ins, overridden by the file named in $CAVENT_PRESETS when set.
inline std::vector<MaterialPreset> presets() {
    auto base = builtin_presets();
    if (const char* path = std::getenv(kPresetEnvVar); path && *path) {
        std::ifstream f(path);
        if (!f)
            throw std::invalid_argument(std::string("cannot open preset file '") + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        base = parse_preset_text(ss.str(), std::move(base));
    }
    return base;
}

inline Material preset(const std::string& name) {
    for (const auto& p : presets())
        if (p.material.name == name)
            return p.material;
    std::string known;
    for (const auto& p : presets())
        known += (known.empty() ? "" : ", ") + p.material.name;
    throw std::invalid_argument("unknown material preset '" + name + "' (available: " + known + ")");
}

/// The reference configuration: graphene on both layers, eps = 1 meV,
/// n_max = 1, L = 1 um, d1/L = 0.4, d2/L = 0.6, t_max = 6.6e-10 s.
inline Scenario reference_scenario() {
    Scenario s;
    s.layer1.material = preset("graphene");
    s.layer2.material = preset("graphene");
    s.layer1.electron.energy = s.layer2.electron.energy = 1.0e-3;
    s.cavity.length = 1.0e-6;
    s.cavity.z1 = 0.4e-6;
    s.cavity.z2 = 0.6e-6;
    s.cavity.n_max = 1;
    s.cavity.mode_volume = kDefaultTransverseArea * s.cavity.length;
    s.t_max = 6.6e-10;
    return s;
}

} // namespace cavent
