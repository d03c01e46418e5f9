#include "qengine/cli.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qengine/errors.hpp"
#include "qengine/report.hpp"

namespace qengine {

namespace {

// Flag values are kept as text so a config file can fill in whatever the
// command line left unset.
struct Settings {
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    std::vector<std::string> axes;
    CLI::Option* axis_opt = nullptr;
    std::string config;
};

const std::map<std::string, std::string>& param_flags()
{
    static const std::map<std::string, std::string> flags = {
        {"gamma0", "bath coupling gamma0"},
        {"wh", "hot transition frequency omega_h"},
        {"wc", "cold transition frequency omega_c"},
        {"bh", "hot inverse temperature beta_h"},
        {"bc", "cold inverse temperature beta_c"},
        {"alpha", "drive strength alpha"},
    };
    return flags;
}

void add_common(CLI::App* sub, Settings& s, const std::string& default_kind)
{
    s.values["kind"] = default_kind;
    s.options["kind"] = sub->add_option("--kind", s.values["kind"], "coherent|incoherent|both");
    for (const auto& [name, help] : param_flags())
        s.options[name] = sub->add_option("--" + name, s.values[name], help);
    s.options["out"] = sub->add_option("--out", s.values["out"], "output path");
    s.options["seed"] = sub->add_option("--seed", s.values["seed"], "random seed");
    sub->add_option("--config", s.config, "flat key = value file; command-line flags take precedence");
}

std::string trim(const std::string& t)
{
    const auto b = t.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = t.find_last_not_of(" \t\r");
    return t.substr(b, e - b + 1);
}

void apply_config(Settings& s)
{
    if (s.config.empty())
        return;
    std::ifstream in(s.config);
    if (!in)
        throw InvalidArgument("cannot read config file " + s.config);
    std::string raw;
    int lineno = 0;
    bool axes_from_flags = s.axis_opt && s.axis_opt->count() > 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string l = trim(raw.substr(0, raw.find('#')));
        if (l.empty())
            continue;
        const auto eq = l.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(l.substr(0, eq)), value = trim(l.substr(eq + 1));
        if (key == "axis" && s.axis_opt) {
            if (!axes_from_flags)
                s.axes.push_back(value);
            continue;
        }
        auto opt = s.options.find(key);
        if (opt == s.options.end())
            throw InvalidArgument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (opt->second->count() == 0)
            s.values[key] = value;
    }
}

double to_number(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::logic_error&) {
    }
    throw InvalidArgument(key + " must be a number, got '" + text + "'");
}

long long to_integer(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used == text.size())
            return v;
    } catch (const std::logic_error&) {
    }
    throw InvalidArgument(key + " must be an integer, got '" + text + "'");
}

EngineParams params_from(const Settings& s)
{
    EngineParams p;
    auto get = [&](const char* key, double& field) {
        const std::string& v = s.values.at(key);
        if (!v.empty())
            field = to_number(key, v);
    };
    get("gamma0", p.gamma0);
    get("wh", p.omega_h);
    get("wc", p.omega_c);
    get("bh", p.beta_h);
    get("bc", p.beta_c);
    get("alpha", p.alpha);
    return p;
}

std::vector<EngineKind> kinds_from(const Settings& s)
{
    const std::string& k = s.values.at("kind");
    if (k == "coherent")
        return {EngineKind::Coherent};
    if (k == "incoherent")
        return {EngineKind::Incoherent};
    if (k == "both")
        return {EngineKind::Coherent, EngineKind::Incoherent};
    throw InvalidArgument("kind must be coherent, incoherent or both, got '" + k + "'");
}

// Writes to --out when given, otherwise to the fallback stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_)
                throw InvalidArgument("cannot open output file " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

int cmd_point(Settings& s, std::ostream& out)
{
    const EngineParams base = params_from(s);
    const std::vector<EngineKind> kinds = kinds_from(s);
    std::vector<std::string> docs;
    for (EngineKind k : kinds) {
        EngineParams p = base;
        p.kind = k;
        docs.push_back(point_json(p));
    }
    Sink sink(s.values.at("out"), out);
    if (docs.size() == 1) {
        sink.stream() << docs[0];
    } else {
        sink.stream() << "[\n";
        for (std::size_t i = 0; i < docs.size(); ++i) {
            std::string d = docs[i];
            d.pop_back(); // trailing newline
            sink.stream() << d << (i + 1 < docs.size() ? ",\n" : "\n");
        }
        sink.stream() << "]\n";
    }
    return 0;
}

int cmd_sweep(Settings& s, const std::string& method, std::ostream& out)
{
    SweepSpec spec;
    for (const auto& a : s.axes)
        spec.axes.push_back(parse_axis(a));
    spec.fixed = params_from(s);
    spec.kinds = kinds_from(s);
    if (method == "numeric")
        spec.method = Method::Numeric;
    else if (method == "closed")
        spec.method = Method::Closed;
    else
        throw InvalidArgument("method must be numeric or closed");
    check_sweep(spec);

    std::vector<std::string> meta;
    for (const auto& a : spec.axes)
        meta.push_back("axis " + a.name + (a.log ? " log " : " lin ") + format_double(a.start) + " " +
                       format_double(a.stop) + " " + std::to_string(a.count));
    meta.push_back("method " + method);
    Sink sink(s.values.at("out"), out);
    run_sweep(spec, sink.stream(), meta);
    return 0;
}

int cmd_figure(Settings& s, const std::string& name, std::ostream& out)
{
    const auto preset = parse_preset(name);
    if (!preset)
        throw InvalidArgument("unknown figure preset '" + name +
                              "' (fig2a fig2b fig3a fig3b fig3c fig4a fig4b alpha-crit)");
    std::string path = s.values.at("out");
    if (path.empty())
        path = preset_name(*preset) + ".csv";
    std::string stem = path;
    if (stem.size() > 4 && stem.compare(stem.size() - 4, 4, ".csv") == 0)
        stem.resize(stem.size() - 4);
    const std::string ratio_path = stem + "_ratio.csv";

    std::ofstream csv(path, std::ios::binary);
    if (!csv)
        throw InvalidArgument("cannot open output file " + path);
    std::ofstream ratio;
    const bool two_d = *preset == FigurePreset::Fig2b || *preset == FigurePreset::Fig3a;
    if (two_d) {
        ratio.open(ratio_path, std::ios::binary);
        if (!ratio)
            throw InvalidArgument("cannot open output file " + ratio_path);
    }
    const FigureOutput fo = run_figure(*preset, csv, two_d ? &ratio : nullptr);
    out << "preset " << preset_name(*preset) << "\n";
    for (const auto& h : fo.headline)
        out << h << "\n";
    out << "wrote " << path << "\n";
    if (fo.has_ratio_table)
        out << "wrote " << ratio_path << "\n";
    return 0;
}

int cmd_validate(Settings& s, const std::string& samples, std::ostream& out)
{
    const std::string& seed_text = s.values.at("seed");
    const long long seed = seed_text.empty() ? 42 : to_integer("seed", seed_text);
    const long long n = to_integer("samples", samples);
    if (n < 1)
        throw InvalidArgument("samples >= 1 violated");
    if (seed < 0)
        throw InvalidArgument("seed >= 0 violated");
    const ValidationSummary v = run_validation(static_cast<std::uint64_t>(seed), static_cast<int>(n));
    Sink sink(s.values.at("out"), out);
    auto& o = sink.stream();
    o << "checked " << v.checked << "\n";
    o << "not_an_engine " << v.not_an_engine << "\n";
    o << "failures " << v.failures.size() << "\n";
    for (const auto& f : v.failures)
        o << "FAIL " << f << "\n";
    return v.failures.empty() ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Continuous quantum heat engine toolkit", "qengine"};
    app.require_subcommand(1);

    Settings point_s, sweep_s, figure_s, validate_s;

    auto* point = app.add_subcommand("point", "JSON report for one parameter point");
    add_common(point, point_s, "coherent");

    auto* sweep = app.add_subcommand("sweep", "CSV over a one- or two-axis grid");
    add_common(sweep, sweep_s, "both");
    sweep_s.axis_opt = sweep->add_option("--axis", sweep_s.axes, "name:start:stop:count[:log|:lin], name in alpha|beta_c|beta_h");
    sweep_s.values["method"] = "numeric";
    sweep_s.options["method"] = sweep->add_option("--method", sweep_s.values["method"], "numeric|closed");

    auto* figure = app.add_subcommand("figure", "dataset and headline numbers for a figure preset");
    add_common(figure, figure_s, "both");
    std::string preset;
    figure->add_option("preset", preset, "fig2a fig2b fig3a fig3b fig3c fig4a fig4b alpha-crit")->required();

    auto* validate = app.add_subcommand("validate", "invariant checks on seeded random parameters");
    add_common(validate, validate_s, "both");
    validate_s.values["samples"] = "200";
    validate_s.options["samples"] =
        validate->add_option("--samples", validate_s.values["samples"], "number of samples per kind");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        if (point->parsed()) {
            apply_config(point_s);
            return cmd_point(point_s, out);
        }
        if (sweep->parsed()) {
            apply_config(sweep_s);
            return cmd_sweep(sweep_s, sweep_s.values.at("method"), out);
        }
        if (figure->parsed()) {
            apply_config(figure_s);
            return cmd_figure(figure_s, preset, out);
        }
        apply_config(validate_s);
        return cmd_validate(validate_s, validate_s.values.at("samples"), out);
    } catch (const NotAnEngine& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qengine
