// Command-line front end. Exit codes: 0 success, 1 usage or configuration
// error, 2 domain error, 3 verification failure.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cavent/cavent.hpp"

namespace {

using cavent::json;

enum Exit { kOk = 0, kUsage = 1, kDomain = 2, kVerify = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw UsageError("cannot write '" + path + "'");
    f << text;
    if (!f)
        throw UsageError("write to '" + path + "' failed");
}

struct PointOptions {
    std::string config;
    std::optional<double> t;
    bool diagonal = false;
};

cavent::RunConfig load(const PointOptions& o) {
    cavent::RunConfig cfg = cavent::parse_config(o.config.empty() ? std::string() : read_file(o.config));
    if (o.t)
        cfg.scenario.t = *o.t;
    if (o.diagonal)
        cfg.scenario.rho.diagonal_approximation = true;
    if (cfg.scenario.t && !(*cfg.scenario.t >= 0.0))
        throw UsageError("--t must be >= 0");
    return cfg;
}

void print(const json& config, const std::string& key, const json& result) {
    json out;
    out["config"] = config;
    out[key] = result;
    std::cout << out.dump(2) << "\n";
}

int cmd_propagator(const PointOptions& o) {
    const auto cfg = load(o);
    const auto& s = cfg.scenario;
    const auto p = cavent::propagators(s.cavity, s.q);
    json r = {{"delta11", p.delta11}, {"delta22", p.delta22}, {"delta12", p.delta12}};
    if (s.cavity.z1 != s.cavity.z2)
        r["time_of_flight"] = cavent::time_of_flight(s.cavity);
    print(cavent::to_json(cfg), "propagator", r);
    return kOk;
}

int cmd_rho(const PointOptions& o, int reduced) {
    const auto cfg = load(o);
    const auto& s = cfg.scenario;
    const auto c = cavent::compute_coefficients(s.layer1, s.layer2, s.cavity, s.q, s.coupling);
    const double t = s.resolved_t();
    const auto rho = cavent::rho_total(c, t, s.rho);
    json params = {{"t", t}, {"coefficients", cavent::to_json(c)}};
    json r;
    r["admissibility"] = cavent::to_string(cavent::admissibility(c, t));
    r["t2_max_L"] = t * t * std::max(c.l1, c.l2);
    if (reduced == 0) {
        r["density_matrix"] = cavent::to_json(rho, params);
    } else {
        params["reduced_to_layer"] = reduced;
        r["density_matrix"] = cavent::to_json(cavent::reduce(rho, reduced), params);
    }
    r["purity"] = cavent::purity(rho);
    print(cavent::to_json(cfg), "rho", r);
    return kOk;
}

int cmd_entropy(const PointOptions& o, bool base2, bool csv) {
    const auto cfg = load(o);
    const auto& s = cfg.scenario;
    const auto c = cavent::compute_coefficients(s.layer1, s.layer2, s.cavity, s.q, s.coupling);
    const double t = s.resolved_t();
    const auto r1 = cavent::entropy_report(c, t, 1, s.rho);
    const auto r2 = cavent::entropy_report(c, t, 2, s.rho);
    if (csv) {
        std::cout << "layer," << cavent::kEntropyCsvHeader << "\n";
        std::cout << "1," << cavent::to_csv_row(r1, base2) << "\n";
        std::cout << "2," << cavent::to_csv_row(r2, base2) << "\n";
        return kOk;
    }
    const double mi = cavent::mutual_information(r1.exact, r2.exact);
    json r = {{"t", t},
              {"admissibility", cavent::to_string(cavent::admissibility(c, t))},
              {"layer1", cavent::to_json(r1, base2)},
              {"layer2", cavent::to_json(r2, base2)},
              {"mutual_information", cavent::entropy_units(mi, base2)}};
    print(cavent::to_json(cfg), "entropy", r);
    return kOk;
}

int cmd_concurrence(const PointOptions& o, bool csv) {
    const auto cfg = load(o);
    const auto& s = cfg.scenario;
    const double t = s.resolved_t();
    std::string note;
    const double closed = cavent::concurrence_closed_form(s.layer1, s.layer2, s.cavity, t, s.q, s.coupling, &note);
    cavent::ConcurrenceReport rep = cavent::concurrence_report(s.layer1, s.layer2, s.cavity, t, s.q, s.coupling);
    rep.closed_form = closed;
    if (csv) {
        std::cout << cavent::kConcurrenceCsvHeader << "\n" << cavent::to_csv_row(rep) << "\n";
        return kOk;
    }
    const auto c = cavent::compute_coefficients(s.layer1, s.layer2, s.cavity, s.q, s.coupling);
    json r = cavent::to_json(rep);
    r["t"] = t;
    if (!note.empty())
        r["note"] = note;
    r["saturation_threshold_layer1"] = cavent::saturation_threshold(s.layer1, s.layer2);
    r["saturation_threshold_layer2"] = cavent::saturation_threshold(s.layer2, s.layer1);
    const auto ev = cavent::spin_flip_eigenvalues(c, t);
    r["spin_flip_eigenvalues_closed_form"] = ev.values;
    r["closed_form_ordering_valid"] = ev.closed_form_valid;
    print(cavent::to_json(cfg), "concurrence", r);
    return kOk;
}

int cmd_sweep(const std::string& recipe, const std::string& config, const std::string& out, int grid,
              const std::string& verdict_path) {
    if (recipe.empty() == config.empty())
        throw UsageError("sweep needs exactly one of --recipe or --config");
    cavent::SweepSpec spec;
    json echo;
    if (!recipe.empty()) {
        spec = cavent::figure_recipe(recipe, grid);
        echo = cavent::to_json(spec.fixed);
        echo["recipe"] = recipe;
    } else {
        const auto cfg = cavent::parse_config(read_file(config));
        spec = cfg.sweep_spec();
        if (grid != 200 && spec.range.values.empty())
            spec.range.count = grid;
        echo = cavent::to_json(cfg);
    }
    echo["sweep_variable"] = cavent::to_string(spec.variable);
    const auto table = cavent::run_sweep(spec);
    const std::string csv = cavent::to_csv(table);
    if (out.empty() || out == "-")
        std::cout << csv;
    else
        write_file(out, csv);

    long flagged = 0;
    for (const auto& r : table.rows)
        flagged += r.status != "ok";
    json summary = {{"rows", table.rows.size()}, {"non_ok_rows", flagged}, {"out", out.empty() ? "-" : out}};
    auto verdicts = json::array();
    for (const auto& v : cavent::figure_verdicts(spec, table))
        verdicts.push_back({{"name", v.name}, {"claim", v.claim}, {"passed", v.passed}, {"detail", v.detail}});
    summary["verdicts"] = verdicts;
    if (!verdict_path.empty())
        write_file(verdict_path, verdicts.dump(2) + "\n");
    json all;
    all["config"] = echo;
    all["sweep"] = summary;
    // keep stdout clean for the CSV when it goes there
    (out.empty() || out == "-" ? std::cerr : std::cout) << all.dump(2) << "\n";
    return kOk;
}

int cmd_verify(std::uint64_t seed, long cases, const std::string& report) {
    const auto r = cavent::run_verification(seed, cases);
    const auto j = cavent::to_json(r);
    if (!report.empty())
        write_file(report, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return r.passed() ? kOk : kVerify;
}

int cmd_presets() {
    json arr = json::array();
    for (const auto& p : cavent::presets())
        arr.push_back({{"name", p.material.name},
                       {"fermi_velocity", p.material.fermi_velocity},
                       {"soi_strength", p.material.soi_strength},
                       {"placeholder", p.from_literature_placeholder},
                       {"source", p.source}});
    std::cout << json{{"presets", arr}, {"override_env", cavent::kPresetEnvVar}}.dump(2) << "\n";
    return kOk;
}

int cmd_recipes() {
    json arr = json::array();
    for (const auto& n : cavent::recipe_names()) {
        const auto spec = cavent::figure_recipe(n);
        arr.push_back({{"name", n},
                       {"variable", cavent::to_string(spec.variable)},
                       {"start", spec.range.start},
                       {"stop", spec.range.stop},
                       {"count", spec.range.count},
                       {"series", spec.series.size()}});
    }
    std::cout << json{{"recipes", arr}}.dump(2) << "\n";
    return kOk;
}

void add_point_options(CLI::App* sub, PointOptions& o) {
    sub->add_option("--config", o.config, "Run configuration file");
    sub->add_option("--t", o.t, "Evaluation time in seconds (default: t_max)");
    sub->add_flag("--diagonal", o.diagonal, "Drop the local coherences B_i");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity-mediated entanglement between two Dirac layers"};
    app.require_subcommand(1);

    PointOptions o;
    auto* prop = app.add_subcommand("propagator", "Photon propagators D11, D22, D12");
    add_point_options(prop, o);

    auto* rho = app.add_subcommand("rho", "Second-order density matrix");
    add_point_options(rho, o);
    int reduced = 0;
    rho->add_option("--reduce", reduced, "Trace out the other layer (1 or 2)")->check(CLI::IsMember({0, 1, 2}));

    auto* ent = app.add_subcommand("entropy", "Entanglement entropy of each layer");
    add_point_options(ent, o);
    bool base2 = false, csv = false;
    ent->add_flag("--base2", base2, "Report entropies in bits");
    ent->add_flag("--csv", csv, "Flat CSV rows instead of JSON");

    auto* con = app.add_subcommand("concurrence", "Concurrence, closed form and Wootters oracle");
    add_point_options(con, o);
    con->add_flag("--csv", csv, "Flat CSV row instead of JSON");

    auto* sw = app.add_subcommand("sweep", "Parameter sweep to CSV");
    std::string recipe, sweep_config, out, verdicts;
    int grid = 200;
    sw->add_option("--recipe", recipe, "Figure recipe name");
    sw->add_option("--config", sweep_config, "Run configuration with a [sweep] section");
    sw->add_option("--out", out, "CSV output path (default: stdout)");
    sw->add_option("--grid", grid, "Points per continuous range")->check(CLI::Range(2, 100000));
    sw->add_option("--verdicts", verdicts, "Write figure-shape verdicts as JSON");

    auto* ver = app.add_subcommand("verify", "Randomized oracle suites");
    std::uint64_t seed = 42;
    long cases = 500;
    std::string report;
    ver->add_option("--seed", seed, "Generator seed");
    ver->add_option("--cases", cases, "Random configurations per suite")->check(CLI::PositiveNumber);
    ver->add_option("--report", report, "Also write the report to this path");

    auto* pre = app.add_subcommand("presets", "List material presets");
    auto* rec = app.add_subcommand("recipes", "List figure recipes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*prop)
            return cmd_propagator(o);
        if (*rho)
            return cmd_rho(o, reduced);
        if (*ent)
            return cmd_entropy(o, base2, csv);
        if (*con)
            return cmd_concurrence(o, csv);
        if (*sw)
            return cmd_sweep(recipe, sweep_config, out, grid, verdicts);
        if (*ver)
            return cmd_verify(seed, cases, report);
        if (*pre)
            return cmd_presets();
        if (*rec)
            return cmd_recipes();
    } catch (const cavent::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kDomain;
    } catch (const cavent::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
