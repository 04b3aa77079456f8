#include "cqom/cli/commands.hpp"
#include "cqom/config.hpp"
#include "cqom/dispersion.hpp"
#include "cqom/model.hpp"
#include "cqom/oracle.hpp"
#include "cqom/units.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <ios>
#include <optional>
#include <string>
#include <vector>

using namespace cqom;
using namespace cqom::cli;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> grid_points;
    std::optional<double> grid_halfwidth_hz;
    std::optional<int> n_max;
    bool allow_coarse{false};
};

RunConfig base_config(const GlobalOptions& g) {
    RunConfig c = g.config_path.empty() ? default_run_config() : load_config(g.config_path);
    if (g.out_dir) c.output_dir = *g.out_dir;
    if (g.grid_points) c.grid.num_points = *g.grid_points;
    if (g.grid_halfwidth_hz) c.grid.half_width = hz_to_angular(*g.grid_halfwidth_hz);
    if (g.n_max) c.grid.n_max = *g.n_max;
    if (g.allow_coarse) c.grid.allow_coarse = true;
    return c;
}

int report(const CommandResult& r) {
    for (const auto& f : r.files) std::printf("wrote %s\n", f.c_str());
    if (!r.manifest_path.empty()) std::printf("wrote %s\n", r.manifest_path.c_str());
    if (r.classification) std::printf("classification: %s\n", r.classification->c_str());
    if (!r.passed) {
        std::fprintf(stderr, "error: numerical check failed (see the report)\n");
        return exit_check_failed;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field self-energies and spectral functions of a photon/phonon waveguide"};
    app.set_version_flag("--version", tool_version);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--config", g.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", g.out_dir, "Output directory (default: output.dir of the configuration)");
    app.add_option("--grid-points", g.grid_points, "Frequency grid points (odd)");
    app.add_option("--grid-halfwidth-hz", g.grid_halfwidth_hz, "Frequency grid half width [Hz]");
    app.add_option("--n-max", g.n_max, "Phonon modes q = -n_max..n_max in grid sums");
    app.add_flag("--allow-coarse", g.allow_coarse, "Accept grids coarser than linewidth/10");
    app.fallthrough();

    auto* empty = app.add_subcommand("empty", "Photon line in the empty waveguide (or a custom scenario)");
    std::optional<double> empty_ka;
    empty->add_option("--k-a", empty_ka, "Photon wavenumber times radius");

    auto* single = app.add_subcommand("single-field", "Photon and phonon lines with one pumped photon mode");
    std::optional<double> k0_a, N0, power_w;
    single->add_option("--k0-a", k0_a, "Pumped wavenumber times radius");
    auto* n0_opt = single->add_option("--N0", N0, "Pumped photon number");
    single->add_option("--power-w", power_w, "Pump power [W]; N0 = flux times transit time")->excludes(n0_opt);

    auto* two = app.add_subcommand("two-field", "Phonon line q0 = k1 - k2 with two pumped photon modes");
    std::optional<double> k1_a, N1, k2_a, N2;
    two->add_option("--k1-a", k1_a, "First pumped wavenumber times radius");
    two->add_option("--N1", N1, "Photons in the first mode");
    two->add_option("--k2-a", k2_a, "Second pumped wavenumber times radius");
    two->add_option("--N2", N2, "Photons in the second mode");

    auto* oracle = app.add_subcommand("oracle-check", "Compare closed-form and time-domain spectral functions");
    std::optional<std::string> scenario;
    OracleOptions oracle_options;
    oracle->add_option("--scenario", scenario, "empty, single_field, two_fields or custom")
        ->check(CLI::IsMember({"empty", "single_field", "two_fields", "custom"}));
    oracle->add_option("--dt-scale", oracle_options.dt_scale, "Multiplier on the planned time step")
        ->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "Repeat the configured scenario over one parameter");
    std::string axis;
    std::vector<double> values;
    sweep->add_option("--axis", axis, "T, N0, N1, N2, k_a, f_hz, Gamma_hz or gamma_hz")->required();
    sweep->add_option("--values", values, "Values (comma or space separated)")->required()->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_validation;
    }

    try {
        RunConfig c = base_config(g);
        const std::string& out = c.output_dir;
        if (empty->parsed()) {
            if (c.scenario.kind != ScenarioKind::Custom) c.scenario.kind = ScenarioKind::Empty;
            if (empty_ka) c.scenario.k_a = *empty_ka;
            return report(cmd_empty(c, out));
        }
        if (single->parsed()) {
            c.scenario.kind = ScenarioKind::SingleField;
            if (k0_a) c.scenario.k0_a = *k0_a;
            if (N0) {
                c.scenario.N0 = *N0;
                c.scenario.power_w.reset();
            }
            if (power_w) {
                c.scenario.power_w = *power_w;
                c.scenario.N0.reset();
            }
            return report(cmd_single_field(c, out));
        }
        if (two->parsed()) {
            c.scenario.kind = ScenarioKind::TwoFields;
            if (k1_a) c.scenario.k1_a = *k1_a;
            if (N1) c.scenario.N1 = *N1;
            if (k2_a) c.scenario.k2_a = *k2_a;
            if (N2) c.scenario.N2 = *N2;
            return report(cmd_two_field(c, out));
        }
        if (oracle->parsed()) {
            if (scenario && *scenario != scenario_name(c.scenario.kind))
                throw ValidationError({"--scenario " + *scenario + " differs from the configured scenario " +
                                       scenario_name(c.scenario.kind)});
            return report(cmd_oracle_check(c, out, oracle_options));
        }
        if (sweep->parsed()) return report(cmd_sweep(c, axis, values, out));
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    } catch (const OutOfModelRange& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    } catch (const IntegrationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_check_failed;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_io;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_io;
    }
    return exit_validation;
}
