// report.hpp - CSV rows, JSON point reports, figure presets and the
// validation runner shared by the CLI and the tests.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qengine/engine.hpp"

namespace qengine {

inline constexpr const char* kCsvSchema = "qengine-csv 1";

enum class Method { Numeric, Closed };

struct Row {
    EngineParams p;
    double n_h = 0, n_c = 0;
    bool valid = false;
    double coherence, power, j_hot, j_cold, efficiency, entropy_rate;
    double var_power, nsr, F_p, fano, q_ctur, upsilon, psi, f_qtur, slack;
};

Row evaluate_row(const EngineParams& p, Method m);

std::string format_double(double x); // %.17e
std::string csv_header();
std::string csv_line(const Row& r);

// Deterministic JSON with a fixed key order.
std::string point_json(const EngineParams& p);

struct Axis {
    std::string name; // alpha | beta_c | beta_h
    double start = 0, stop = 0;
    int count = 0;
    bool log = false;
    std::vector<double> values() const;
};

Axis parse_axis(const std::string& text); // name:start:stop:count[:log|:lin]

struct SweepSpec {
    std::vector<Axis> axes; // one or two
    EngineParams fixed;
    std::vector<EngineKind> kinds;
    Method method = Method::Numeric;
};

void check_sweep(const SweepSpec& s);
// rows ordered by kind, then first axis, then second axis
void run_sweep(const SweepSpec& s, std::ostream& csv, const std::vector<std::string>& metadata = {});

enum class FigurePreset { Fig2a, Fig2b, Fig3a, Fig3b, Fig3c, Fig4a, Fig4b, AlphaCrit };

std::optional<FigurePreset> parse_preset(const std::string& name);
std::string preset_name(FigurePreset f);

struct FigureOutput {
    std::vector<std::string> headline; // one "key value" line each
    bool has_ratio_table = false;
};

// Writes the dataset to csv (and ratio table, for the 2-D presets).
FigureOutput run_figure(FigurePreset f, std::ostream& csv, std::ostream* ratio_csv);

struct ValidationSummary {
    int checked = 0;
    int not_an_engine = 0;
    std::vector<std::string> failures;
};

ValidationSummary run_validation(std::uint64_t seed, int samples);

} // namespace qengine
