// commands.hpp: scenario runs that write CSV tables and a run manifest

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cqom/config.hpp"

namespace cqom::cli {

enum ExitCode : int { exit_ok = 0, exit_validation = 1, exit_check_failed = 2, exit_io = 3 };

inline constexpr const char* tool_version = "cqom 0.1.0";

struct PeakRecord {
    std::string source; // which curve the peak came from
    double center{0.0};
    double shift{0.0};
    double fwhm{0.0};
    double height{0.0};
    std::string channel;
    bool low_confidence{false};
};

struct CommandResult {
    bool passed{true}; // false when a numerical check failed
    std::vector<std::string> files;
    std::vector<PeakRecord> peaks;
    std::optional<std::string> classification; // two-field runs
    std::optional<double> lambda_res;          // two-field runs [rad/s]
    std::vector<std::string> warnings;
    std::string manifest_path;
};

// Each command creates out_dir, writes its tables plus manifest.json (the
// resolved configuration, reusable as --config, with a "manifest" section).
// Subject parameters come from config.scenario.

// Photon line of mode k*a in the empty waveguide, or with the photon
// occupations of a custom scenario: channels.csv (single
// channel Delta^M, Lambda^M versus omega - omega_{k+q} for |q| <= 1),
// selfenergy.csv (grid sums on the main grid and channel segments),
// sf.csv (dressed and bare), peaks.csv.
CommandResult cmd_empty(const RunConfig& config, const std::string& out_dir);

// Photon line at k = k0 with N0 pumped photons: Delta/Lambda (M, EM and
// the closed form), phonon line curves for q = 1 of each branch, peaks.
CommandResult cmd_single_field(const RunConfig& config, const std::string& out_dir);

// Phonon line q0 = k1 - k2: resonant and general self-energy, dressed SF,
// cooling/heating classification.
CommandResult cmd_two_field(const RunConfig& config, const std::string& out_dir);

struct OracleOptions {
    double dt_scale{1.0};
    int default_n_max{8};
};

// Time-domain versus closed-form spectral functions for the configured
// scenario; passed is false when any check exceeds 1% L2 error, misses the
// peak center by more than one grid spacing, or the integration fails.
CommandResult cmd_oracle_check(const RunConfig& config, const std::string& out_dir, OracleOptions options = {});

// Axis names accepted by cmd_sweep.
const std::vector<std::string>& sweep_axes();

// Applies one sweep value to a copy of the configuration.
RunConfig apply_sweep_value(const RunConfig& base, const std::string& axis, double value);

// One sub-run per value (concurrently, in out_dir/<axis>_<i>) of the command
// matching the configured scenario, then summary.csv.
CommandResult cmd_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values,
                        const std::string& out_dir);

} // namespace cqom::cli
