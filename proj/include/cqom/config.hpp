// config.hpp: run configuration document (JSON) parsing and rendering

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cqom/model.hpp"
#include "cqom/occupation.hpp"

namespace cqom {

enum class ScenarioKind { Empty, SingleField, TwoFields, Custom };

const char* scenario_name(ScenarioKind kind) noexcept;

// Scenario as written in the document: wavenumbers as k*a, counts either
// given directly or (single field) derived from a pump power.
struct ScenarioSpec {
    ScenarioKind kind{ScenarioKind::Empty};
    double k_a{2.0}; // subject photon mode for empty/custom runs
    double k0_a{2.0};
    std::optional<double> N0;
    std::optional<double> power_w;
    double k1_a{0.0};
    double N1{0.0};
    double k2_a{0.0};
    double N2{0.0};
    std::vector<std::pair<double, double>> modes; // (k*a, N)
    double background_N{0.0};
    bool thermal_phonons{true};
};

// Unset fields are chosen per command.
struct GridSpec {
    std::optional<double> half_width; // rad/s
    std::optional<std::size_t> num_points;
    std::optional<int> n_max;
    bool allow_coarse{false};
};

struct RunConfig {
    WaveguideModel model;
    ScenarioSpec scenario;
    GridSpec grid;
    std::string output_dir{"out"};
};

// Default silicon model, empty cavity at k*a = 2, command-chosen grids.
RunConfig default_run_config();

// Parses a JSON document. Frequencies are read in Hz and stored as rad/s.
// Missing sections fall back to default_run_config(); missing keys inside a
// present section, wrong types, non-physical values and unknown scenario
// names are collected into one ValidationError.
RunConfig parse_config(const std::string& document);
RunConfig load_config(const std::string& path);

// Full document; parse_config(render_config(c)) reproduces c bit-exactly.
std::string render_config(const RunConfig& config);

// Single-field photon count: N0 if given, else from power (flux times
// transit time). Throws ValidationError unless exactly one is given.
double resolve_N0(const ScenarioSpec& spec, const WaveguideModel& model);

// Wavenumber of k*a for the configured waveguide radius.
double wavenumber_from_ka(double k_a, const WaveguideModel& model);

Scenario to_scenario(const ScenarioSpec& spec, const WaveguideModel& model);

} // namespace cqom
