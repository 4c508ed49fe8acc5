// Parameter sweeps over a base scenario, the figure recipes, CSV output and
// the soft verdicts that compare sweep shapes with the published trends.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cavent/concurrence.hpp"
#include "cavent/density_matrix.hpp"
#include "cavent/entropy.hpp"
#include "cavent/scenario.hpp"

namespace cavent {

/// Malformed sweep specification or unknown recipe.
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class SweepVariable { time, d2_over_L, lambda_so, delta_phi, n_max, material_pair, d_separation };

inline const char* to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::time: return "time";
    case SweepVariable::d2_over_L: return "d2_over_L";
    case SweepVariable::lambda_so: return "lambda_so";
    case SweepVariable::delta_phi: return "delta_phi";
    case SweepVariable::n_max: return "n_max";
    case SweepVariable::material_pair: return "material_pair";
    case SweepVariable::d_separation: return "d_separation";
    }
    return "?";
}

inline SweepVariable parse_sweep_variable(const std::string& s) {
    for (auto v : {SweepVariable::time, SweepVariable::d2_over_L, SweepVariable::lambda_so, SweepVariable::delta_phi,
                   SweepVariable::n_max, SweepVariable::material_pair, SweepVariable::d_separation})
        if (s == to_string(v))
            return v;
    throw SpecError("unknown sweep variable '" + s + "'");
}

enum class SweepOutput { entropy1, entropy2, concurrence, purity, mutual_information, propagators };

inline std::set<SweepOutput> all_outputs() {
    return {SweepOutput::entropy1, SweepOutput::entropy2, SweepOutput::concurrence,
            SweepOutput::purity, SweepOutput::mutual_information, SweepOutput::propagators};
}

/// Continuous (start, stop, count) range or an explicit list of values.
struct SweepRange {
    double start = 0.0;
    double stop = 1.0;
    int count = 200;
    bool log_spacing = false;
    std::vector<double> values; // non-empty: discrete list, overrides the range

    [[nodiscard]] std::vector<double> points() const {
        if (!values.empty())
            return values;
        std::vector<double> out(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / (count - 1);
            out[i] = log_spacing ? start * std::pow(stop / start, f) : start + (stop - start) * f;
        }
        out.back() = stop;
        return out;
    }
};

/// Which layer(s) a lambda_so sweep modifies.
enum class LayerTarget { layer1, layer2, both };

/// A named modification of the base scenario producing one curve.
struct SweepSeries {
    std::string label;
    std::function<void(Scenario&)> apply;
};

struct SweepSpec {
    std::string name;
    SweepVariable variable = SweepVariable::time;
    SweepRange range;
    Scenario fixed;
    std::set<SweepOutput> outputs = all_outputs();
    bool symmetric_placement = true; // d2_over_L: d1/L = 1 - d2/L
    LayerTarget lambda_target = LayerTarget::both;
    std::vector<std::pair<std::string, std::string>> material_pairs;
    std::vector<SweepSeries> series;
};

struct SweepRow {
    std::string sweep_var;
    double value = 0.0;
    std::optional<double> s1, s2, concurrence, purity, mutual_info;
    std::optional<double> delta11, delta22, delta12;
    std::string status;
};

struct SweepTable {
    std::string name;
    std::vector<SweepRow> rows;
    std::vector<std::string> metadata; // "key = value" lines recorded in the CSV preamble
};

inline void validate(const SweepSpec& spec) {
    const auto& r = spec.range;
    if (r.values.empty()) {
        if (r.count < 2)
            throw SpecError("sweep range count must be >= 2");
        if (!std::isfinite(r.start) || !std::isfinite(r.stop) || r.start == r.stop)
            throw SpecError("sweep range must have finite, distinct start and stop");
        if (r.log_spacing && !(r.start > 0.0 && r.stop > 0.0))
            throw SpecError("log-spaced sweep range must be positive");
    }
    if (spec.variable == SweepVariable::material_pair) {
        if (spec.material_pairs.empty())
            throw SpecError("material_pair sweep needs at least one pair");
        for (double v : r.points())
            if (v < 0.0 || v != std::floor(v) || v >= static_cast<double>(spec.material_pairs.size()))
                throw SpecError("material_pair sweep values must index the pair list");
    }
    if (spec.variable == SweepVariable::n_max)
        for (double v : r.points())
            if (v < 1.0 || v != std::floor(v))
                throw SpecError("n_max sweep values must be positive integers");
}

/// Applies one sweep value to a copy of the scenario.
inline Scenario apply_sweep_value(const SweepSpec& spec, Scenario s, double value) {
    const double len = s.cavity.length;
    switch (spec.variable) {
    case SweepVariable::time:
        s.t = value * s.resolved_t_max();
        break;
    case SweepVariable::d2_over_L:
        s.cavity.z2 = value * len;
        if (spec.symmetric_placement)
            s.cavity.z1 = (1.0 - value) * len;
        break;
    case SweepVariable::lambda_so:
        if (spec.lambda_target != LayerTarget::layer2)
            s.layer1.material.soi_strength = value;
        if (spec.lambda_target != LayerTarget::layer1)
            s.layer2.material.soi_strength = value;
        break;
    case SweepVariable::delta_phi:
        s.layer1.electron.angle = s.layer2.electron.angle + value;
        break;
    case SweepVariable::n_max:
        s.cavity.n_max = static_cast<int>(value);
        break;
    case SweepVariable::material_pair: {
        const auto& [a, b] = spec.material_pairs.at(static_cast<std::size_t>(value));
        s.layer1.material = preset(a);
        s.layer2.material = preset(b);
        break;
    }
    case SweepVariable::d_separation:
        s.cavity.z1 = 0.5 * len * (1.0 - value);
        s.cavity.z2 = 0.5 * len * (1.0 + value);
        break;
    }
    return s;
}

/// Evaluates every requested measure at one scenario.
inline SweepRow evaluate_row(const Scenario& s, const std::set<SweepOutput>& outputs) {
    SweepRow row;
    auto wants = [&](SweepOutput o) { return outputs.count(o) > 0; };
    try {
        const RhoCoefficients c = compute_coefficients(s.layer1, s.layer2, s.cavity, s.q, s.coupling);
        if (wants(SweepOutput::propagators)) {
            row.delta11 = c.delta.delta11;
            row.delta22 = c.delta.delta22;
            row.delta12 = c.delta.delta12;
        }
        const double t = s.resolved_t();
        const Admissibility adm = admissibility(c, t);
        row.status = to_string(adm);
        if (adm == Admissibility::inadmissible)
            return row;
        const DensityMatrix rho = rho_total(c, t, s.rho);
        const double s1 = entropy_exact(reduce(rho, 1));
        const double s2 = entropy_exact(reduce(rho, 2));
        if (wants(SweepOutput::entropy1))
            row.s1 = s1;
        if (wants(SweepOutput::entropy2))
            row.s2 = s2;
        if (wants(SweepOutput::concurrence))
            row.concurrence = selection_rule_allows(s.layer1, s.layer2) ? concurrence_from_coefficients(c, t) : 0.0;
        if (wants(SweepOutput::purity))
            row.purity = purity(rho);
        if (wants(SweepOutput::mutual_information))
            row.mutual_info = mutual_information(s1, s2);
    } catch (const DomainError& e) {
        row.s1 = row.s2 = row.concurrence = row.purity = row.mutual_info = std::nullopt;
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

namespace detail {
inline std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline void describe_layer(std::vector<std::string>& out, const std::string& tag, const LayerConfig& l) {
    out.push_back(tag + ".material = " + l.material.name);
    out.push_back(tag + ".fermi_velocity = " + fmt12(l.material.fermi_velocity));
    out.push_back(tag + ".soi_strength = " + fmt12(l.material.soi_strength));
    out.push_back(tag + ".energy = " + fmt12(l.electron.energy));
    out.push_back(tag + ".angle = " + fmt12(l.electron.angle));
    out.push_back(tag + ".spin/valley/band = " + std::to_string(l.electron.spin) + "/" +
                  std::to_string(l.electron.valley) + "/" + std::to_string(l.electron.band));
}
} // namespace detail

inline std::vector<std::string> describe(const Scenario& s) {
    std::vector<std::string> out;
    detail::describe_layer(out, "layer1", s.layer1);
    detail::describe_layer(out, "layer2", s.layer2);
    out.push_back("cavity.length = " + detail::fmt12(s.cavity.length));
    out.push_back("cavity.z1 = " + detail::fmt12(s.cavity.z1));
    out.push_back("cavity.z2 = " + detail::fmt12(s.cavity.z2));
    out.push_back("cavity.n_max = " + std::to_string(s.cavity.n_max));
    out.push_back("cavity.light_speed = " + detail::fmt12(s.cavity.light_speed));
    out.push_back("cavity.mode_volume = " + detail::fmt12(s.cavity.mode_volume));
    out.push_back(std::string("units.system = ") + (s.coupling.normalized ? "normalized" : "SI"));
    out.push_back("propagator.q11/q22/q12 = " + detail::fmt12(s.q.q11) + "/" + detail::fmt12(s.q.q22) + "/" +
                  detail::fmt12(s.q.q12));
    out.push_back(std::string("options.diagonal_approximation = ") + (s.rho.diagonal_approximation ? "true" : "false"));
    if (s.t_max)
        out.push_back("time.t_max = " + detail::fmt12(*s.t_max));
    else
        out.push_back("time.t_max = flight time");
    if (s.t)
        out.push_back("time.t = " + detail::fmt12(*s.t));
    return out;
}

/// One row per (series, value), series-major, in index order.
inline SweepTable run_sweep(const SweepSpec& spec) {
    validate(spec);
    SweepTable table;
    table.name = spec.name;
    table.metadata.push_back("recipe = " + (spec.name.empty() ? std::string("custom") : spec.name));
    table.metadata.push_back(std::string("variable = ") + to_string(spec.variable));
    for (auto& line : describe(spec.fixed))
        table.metadata.push_back("base." + line);
    for (const auto& p : presets())
        table.metadata.push_back("preset." + p.material.name + " = v_f " + detail::fmt12(p.material.fermi_velocity) +
                                 " m/s, lambda_so " + detail::fmt12(p.material.soi_strength) + " eV (" + p.source + ")");

    std::vector<SweepSeries> series = spec.series;
    if (series.empty())
        series.push_back({"", [](Scenario&) {}});
    const auto pts = spec.range.points();
    for (const auto& ser : series) {
        Scenario base = spec.fixed;
        ser.apply(base);
        std::string var = to_string(spec.variable);
        if (!ser.label.empty())
            var += "|" + ser.label;
        for (double v : pts) {
            Scenario s;
            try {
                s = apply_sweep_value(spec, base, v);
            } catch (const std::exception& e) {
                SweepRow row;
                row.sweep_var = var;
                row.value = v;
                row.status = std::string("error: ") + e.what();
                table.rows.push_back(row);
                continue;
            }
            SweepRow row = evaluate_row(s, spec.outputs);
            row.sweep_var = var;
            row.value = v;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

inline constexpr const char* kCsvHeader =
    "sweep_var,value,S1_nats,S2_nats,concurrence,purity,mutual_info,delta11,delta22,delta12,status";

/// CSV with '#'-prefixed metadata lines, one header row, LF line endings,
/// 12 significant digits.
inline std::string to_csv(const SweepTable& table) {
    std::string out;
    for (const auto& m : table.metadata)
        out += "# " + m + "\n";
    out += kCsvHeader;
    out += "\n";
    auto opt = [](const std::optional<double>& x) { return x ? detail::fmt12(*x) : std::string(); };
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos)
            return s;
        std::string q = "\"";
        for (char c : s)
            q += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
        return q + "\"";
    };
    for (const auto& r : table.rows) {
        out += quote(r.sweep_var) + "," + detail::fmt12(r.value) + "," + opt(r.s1) + "," + opt(r.s2) + "," +
               opt(r.concurrence) + "," + opt(r.purity) + "," + opt(r.mutual_info) + "," + opt(r.delta11) + "," +
               opt(r.delta22) + "," + opt(r.delta12) + "," + quote(r.status) + "\n";
    }
    return out;
}

// ── Verdicts ────────────────────────────────────────────────────────────────

struct Verdict {
    std::string name;
    std::string claim;
    bool passed = false;
    std::string detail;
};

enum class Metric { s1, s2, concurrence, purity, mutual_info };

inline std::optional<double> metric_of(const SweepRow& r, Metric m) {
    switch (m) {
    case Metric::s1: return r.s1;
    case Metric::s2: return r.s2;
    case Metric::concurrence: return r.concurrence;
    case Metric::purity: return r.purity;
    case Metric::mutual_info: return r.mutual_info;
    }
    return std::nullopt;
}

/// Rows grouped by sweep_var, preserving order.
inline std::vector<std::pair<std::string, std::vector<const SweepRow*>>> by_series(const SweepTable& t) {
    std::vector<std::pair<std::string, std::vector<const SweepRow*>>> out;
    for (const auto& r : t.rows) {
        if (out.empty() || out.back().first != r.sweep_var)
            out.push_back({r.sweep_var, {}});
        out.back().second.push_back(&r);
    }
    return out;
}

/// Every series peaks within one grid step of `target`.
inline Verdict verdict_peak_at(const SweepTable& t, Metric m, double target, const std::string& name,
                               const std::string& claim) {
    Verdict v{name, claim, true, ""};
    for (const auto& [label, rows] : by_series(t)) {
        double best = -1.0, at = 0.0, step = 0.0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i > 0)
                step = std::max(step, std::abs(rows[i]->value - rows[i - 1]->value));
            const auto x = metric_of(*rows[i], m);
            if (x && *x > best) {
                best = *x;
                at = rows[i]->value;
            }
        }
        const bool ok = best >= 0.0 && std::abs(at - target) <= step * (1.0 + 1e-9);
        v.passed = v.passed && ok;
        v.detail += label + ": peak at " + detail::fmt12(at) + (ok ? " ok; " : " off; ");
    }
    return v;
}

/// At every sweep value, the metric is non-decreasing along the series order.
inline Verdict verdict_increasing_across_series(const SweepTable& t, Metric m, const std::string& name,
                                                const std::string& claim, double rel_tol = 1e-12) {
    Verdict v{name, claim, true, ""};
    const auto groups = by_series(t);
    std::size_t violations = 0, compared = 0;
    for (std::size_t g = 1; g < groups.size(); ++g) {
        const auto& lo = groups[g - 1].second;
        const auto& hi = groups[g].second;
        for (std::size_t i = 0; i < std::min(lo.size(), hi.size()); ++i) {
            const auto a = metric_of(*lo[i], m);
            const auto b = metric_of(*hi[i], m);
            if (!a || !b)
                continue;
            ++compared;
            if (*b < *a - rel_tol * std::abs(*a))
                ++violations;
        }
    }
    v.passed = violations == 0 && compared > 0;
    v.detail = std::to_string(violations) + " violations in " + std::to_string(compared) + " comparisons";
    return v;
}

/// Within each series the metric is non-decreasing in the sweep value.
inline Verdict verdict_increasing_in_value(const SweepTable& t, Metric m, const std::string& name,
                                           const std::string& claim, double rel_tol = 1e-12) {
    Verdict v{name, claim, true, ""};
    std::size_t violations = 0, compared = 0;
    for (const auto& [label, rows] : by_series(t)) {
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const auto a = metric_of(*rows[i - 1], m);
            const auto b = metric_of(*rows[i], m);
            if (!a || !b)
                continue;
            ++compared;
            if (*b < *a - rel_tol * std::abs(*a))
                ++violations;
        }
    }
    v.passed = violations == 0 && compared > 0;
    v.detail = std::to_string(violations) + " violations in " + std::to_string(compared) + " comparisons";
    return v;
}

/// Series are strictly ordered (first largest) at the last sweep value.
inline Verdict verdict_series_ordering(const SweepTable& t, Metric m, const std::string& name,
                                       const std::string& claim) {
    Verdict v{name, claim, true, ""};
    std::optional<double> prev;
    for (const auto& [label, rows] : by_series(t)) {
        const auto x = rows.empty() ? std::nullopt : metric_of(*rows.back(), m);
        v.detail += label + "=" + (x ? detail::fmt12(*x) : std::string("n/a")) + "; ";
        if (!x || (prev && !(*x < *prev)))
            v.passed = false;
        prev = x;
    }
    return v;
}

/// Onset of saturation: the first sweep value from which the metric stays
/// within `rel_tol` of its final value. Returns the last value if the series
/// never settles.
inline double knee_location(const std::vector<const SweepRow*>& rows, Metric m, double rel_tol = 1e-9) {
    if (rows.empty())
        return 0.0;
    const auto last = metric_of(*rows.back(), m);
    if (!last)
        return rows.back()->value;
    std::size_t onset = rows.size() - 1;
    for (std::size_t i = rows.size(); i-- > 0;) {
        const auto x = metric_of(*rows[i], m);
        if (!x || std::abs(*x - *last) > rel_tol * std::abs(*last))
            break;
        onset = i;
    }
    return rows[onset]->value;
}

/// Each series' knee lies within +-10% of its expected threshold.
inline Verdict verdict_knee(const SweepTable& t, Metric m, const std::vector<double>& thresholds,
                            const std::string& name, const std::string& claim) {
    Verdict v{name, claim, true, ""};
    const auto groups = by_series(t);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double expect = thresholds.at(std::min(g, thresholds.size() - 1));
        const double knee = knee_location(groups[g].second, m);
        const bool ok = std::abs(knee - expect) <= 0.10 * expect;
        v.passed = v.passed && ok;
        v.detail += groups[g].first + ": knee " + detail::fmt12(knee) + " vs " + detail::fmt12(expect) +
                    (ok ? " ok; " : " off; ");
    }
    return v;
}

// ── Figure recipes ──────────────────────────────────────────────────────────

inline std::vector<std::string> recipe_names() {
    return {"fig2", "fig3a", "fig3b", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

namespace detail {

inline SweepSeries n_max_series(int n) {
    return {"n_max=" + std::to_string(n), [n](Scenario& s) { s.cavity.n_max = n; }};
}

inline SweepSeries identical_material_series(const std::string& name) {
    return {name, [name](Scenario& s) {
                s.layer1.material = preset(name);
                s.layer2.material = preset(name);
            }};
}

inline void use_materials(Scenario& s, const std::string& a, const std::string& b) {
    s.layer1.material = preset(a);
    s.layer2.material = preset(b);
}

} // namespace detail

inline SweepSpec figure_recipe(const std::string& name, int grid = 200) {
    SweepSpec spec;
    spec.name = name;
    spec.fixed = reference_scenario();
    spec.range.count = grid;
    Scenario& s = spec.fixed;

    if (name == "fig2") {
        spec.variable = SweepVariable::time;
        spec.range.start = 0.0;
        spec.range.stop = 1.0;
        for (const char* m : {"graphene", "silicene"})
            for (int n : {1, 2, 3})
                spec.series.push_back({std::string(m) + ",n_max=" + std::to_string(n), [m, n](Scenario& x) {
                                           detail::use_materials(x, m, m);
                                           x.cavity.n_max = n;
                                       }});
    } else if (name == "fig3a") {
        detail::use_materials(s, "silicene", "silicene");
        spec.variable = SweepVariable::d2_over_L;
        spec.range.start = 0.01;
        spec.range.stop = 0.99;
        spec.symmetric_placement = true;
        for (int n : {1, 2, 3})
            spec.series.push_back(detail::n_max_series(n));
    } else if (name == "fig3b") {
        detail::use_materials(s, "silicene", "silicene");
        spec.variable = SweepVariable::time;
        spec.range.start = 0.0;
        spec.range.stop = 1.0;
        // widest separation first, so entropy should grow along the series
        for (double d : {0.6, 0.4, 0.2, 0.1})
            spec.series.push_back({"d/L=" + detail::fmt12(d), [d](Scenario& x) {
                                       x.cavity.z1 = 0.5 * x.cavity.length * (1.0 - d);
                                       x.cavity.z2 = 0.5 * x.cavity.length * (1.0 + d);
                                   }});
    } else if (name == "fig4") {
        spec.variable = SweepVariable::lambda_so;
        spec.lambda_target = LayerTarget::both;
        spec.range.start = 1.0e-6;
        spec.range.stop = 0.1;
        spec.range.log_spacing = true;
        for (const char* m : {"graphene", "silicene", "germanene", "stanene"})
            spec.series.push_back(detail::identical_material_series(m));
    } else if (name == "fig5") {
        spec.variable = SweepVariable::time;
        spec.range.start = 0.0;
        spec.range.stop = 1.0;
        for (const char* m : {"graphene", "silicene", "germanene", "stanene"})
            spec.series.push_back(detail::identical_material_series(m));
    } else if (name == "fig6") {
        detail::use_materials(s, "graphene", "silicene");
        spec.variable = SweepVariable::delta_phi;
        spec.range.start = 0.0;
        spec.range.stop = kPi;
        for (int n : {1, 2, 3})
            spec.series.push_back(detail::n_max_series(n));
    } else if (name == "fig7") {
        detail::use_materials(s, "graphene", "silicene");
        s.layer1.electron.angle = 0.5 * kPi;
        spec.variable = SweepVariable::lambda_so;
        spec.lambda_target = LayerTarget::layer1;
        spec.range.start = 0.0;
        spec.range.stop = 3.0 * saturation_threshold(s.layer1, s.layer2);
    } else if (name == "fig8") {
        detail::use_materials(s, "graphene", "germanene");
        s.layer1.electron.angle = 0.5 * kPi;
        spec.variable = SweepVariable::lambda_so;
        spec.lambda_target = LayerTarget::layer1;
        spec.range.start = 0.0;
        spec.range.stop = 3.0 * preset("stanene").soi_strength;
        for (const char* m : {"germanene", "stanene"})
            spec.series.push_back({std::string("graphene-") + m, [m](Scenario& x) { x.layer2.material = preset(m); }});
    } else if (name == "fig9") {
        detail::use_materials(s, "graphene", "silicene");
        s.layer1.electron.angle = 0.5 * kPi;
        spec.variable = SweepVariable::d2_over_L;
        spec.symmetric_placement = true;
        spec.range.start = 0.01;
        spec.range.stop = 0.99;
        for (int n : {1, 2, 3})
            spec.series.push_back(detail::n_max_series(n));
    } else {
        std::string known;
        for (const auto& n : recipe_names())
            known += (known.empty() ? "" : ", ") + n;
        throw SpecError("unknown recipe '" + name + "' (available: " + known + ")");
    }
    return spec;
}

/// Soft checks of the published trends for a recipe's table. Failures are
/// reported, never thrown.
inline std::vector<Verdict> figure_verdicts(const SweepSpec& spec, const SweepTable& t) {
    const std::string& n = spec.name;
    std::vector<Verdict> out;
    if (n == "fig2")
        out.push_back(verdict_increasing_in_value(t, Metric::s2, "fig2.entropy_grows_in_time",
                                                  "entropy grows with t/t_max"));
    if (n == "fig3a")
        out.push_back(verdict_increasing_across_series(t, Metric::s2, "fig3a.entropy_increases_with_n_max",
                                                       "entropy increases with the cutoff mode n_max"));
    if (n == "fig3b")
        out.push_back(verdict_increasing_across_series(t, Metric::s2, "fig3b.entropy_increases_as_distance_decreases",
                                                       "entropy increases as the interlayer distance decreases"));
    if (n == "fig4")
        out.push_back(verdict_increasing_in_value(t, Metric::s2, "fig4.entropy_increases_with_soi",
                                                  "entropy increases with SOI strength for every material"));
    if (n == "fig5")
        out.push_back(verdict_series_ordering(t, Metric::s2, "fig5.material_ordering",
                                              "graphene > silicene > germanene > stanene"));
    if (n == "fig6")
        out.push_back(verdict_peak_at(t, Metric::concurrence, 0.5 * kPi, "fig6.peak_at_half_pi",
                                      "concurrence is maximal at delta_phi = pi/2"));
    if (n == "fig7" || n == "fig8") {
        std::vector<double> thresholds;
        std::vector<SweepSeries> series = spec.series;
        if (series.empty())
            series.push_back({"", [](Scenario&) {}});
        for (const auto& ser : series) {
            Scenario s = spec.fixed;
            ser.apply(s);
            thresholds.push_back(saturation_threshold(s.layer1, s.layer2));
        }
        out.push_back(verdict_knee(t, Metric::concurrence, thresholds, n + ".saturation_knee",
                                   "concurrence saturates at lambda_i = eps_i lambda_j / eps_j (+-10%)"));
    }
    if (n == "fig9") {
        SweepTable first = t;
        const auto groups = by_series(t);
        if (!groups.empty())
            std::erase_if(first.rows, [&](const SweepRow& r) { return r.sweep_var != groups.front().first; });
        out.push_back(verdict_peak_at(first, Metric::concurrence, 0.5, "fig9.peak_at_midplane",
                                      "n_max = 1 concurrence is maximal for layers near L/2"));
        out.push_back(verdict_increasing_across_series(t, Metric::concurrence, "fig9.grows_with_n_max",
                                                       "concurrence increases with the cutoff mode n_max"));
    }
    return out;
}

} // namespace cavent
