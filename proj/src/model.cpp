#include "cqom/model.hpp"

#include "cqom/diagnostics.hpp"
#include "cqom/units.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cqom {

namespace {

std::string join(const std::vector<std::string>& issues) {
    std::string out;
    for (const auto& s : issues) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

} // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

PhononBranch PhononBranch::acoustic(double sound_velocity, double Gamma, double f, std::string id) {
    return PhononBranch{Acoustic{sound_velocity}, Gamma, f, std::move(id)};
}

PhononBranch PhononBranch::vibrational(double omega, double Gamma, double f, std::string id) {
    return PhononBranch{Vibrational{omega}, Gamma, f, std::move(id)};
}

double WaveguideModel::min_linewidth() const {
    double w = photon.gamma;
    for (const auto& b : phonons) w = std::min(w, b.Gamma);
    return w;
}

void validate(const WaveguideModel& model) {
    std::vector<std::string> issues;
    const auto& g = model.geometry;
    if (!positive(g.radius_m)) issues.push_back("waveguide.radius_m must be > 0");
    if (!positive(g.length_m)) issues.push_back("waveguide.length_m must be > 0");

    const auto& p = model.photon;
    if (!positive(p.omega0)) issues.push_back("photon.omega0 must be > 0");
    if (!positive(p.group_velocity) || p.group_velocity >= constants::speed_of_light)
        issues.push_back("photon.group_velocity must satisfy 0 < v_g < c");
    if (!non_negative(p.gamma)) issues.push_back("photon.gamma must be >= 0");
    if (!positive(p.k_cutoff)) issues.push_back("photon.k_cutoff must be > 0");

    if (model.phonons.empty()) issues.push_back("at least one phonon branch is required");
    for (std::size_t i = 0; i < model.phonons.size(); ++i) {
        const auto& b = model.phonons[i];
        const std::string tag = "phonons[" + std::to_string(i) + "]";
        if (const auto* a = std::get_if<Acoustic>(&b.kind)) {
            if (!positive(a->sound_velocity)) issues.push_back(tag + ".sound_velocity must be > 0");
        } else if (!positive(std::get<Vibrational>(b.kind).omega)) {
            issues.push_back(tag + ".omega must be > 0");
        }
        if (!non_negative(b.Gamma)) issues.push_back(tag + ".Gamma must be >= 0");
        if (!non_negative(b.coupling_f)) issues.push_back(tag + ".coupling_f must be >= 0");
    }
    if (!non_negative(model.temperature_k)) issues.push_back("temperature must be >= 0");

    if (!issues.empty()) throw ValidationError(std::move(issues));

    if (g.length_m < 100.0 * g.radius_m) {
        std::ostringstream os;
        os << "waveguide length " << g.length_m << " m is not much larger than radius " << g.radius_m << " m";
        diag::warn(os.str());
    }
}

WaveguideModel default_silicon_model() {
    WaveguideModel m;
    m.geometry = {250e-9, 1e-2};
    m.photon.omega0 = hz_to_angular(1e14);
    m.photon.group_velocity = constants::speed_of_light / 5.0;
    m.photon.gamma = hz_to_angular(0.1e6);
    m.photon.k_cutoff = 20.0 / m.geometry.radius_m;
    m.phonons = {
        PhononBranch::acoustic(8433.0, hz_to_angular(10e6), hz_to_angular(1e6)),
        PhononBranch::vibrational(hz_to_angular(10e9), hz_to_angular(1e6), hz_to_angular(1e6)),
    };
    m.temperature_k = 4.0;
    return m;
}

WaveguideModel desk_scale_model() {
    WaveguideModel m;
    m.geometry = {250e-9, 1.0};
    m.photon.omega0 = hz_to_angular(1e14);
    // v * (2pi / L) = 2pi * nu  =>  v = nu * L
    m.photon.group_velocity = 50e6 * m.geometry.length_m;
    m.photon.gamma = hz_to_angular(0.5e6);
    m.photon.k_cutoff = 1e6;
    m.phonons = {
        PhononBranch::acoustic(4e6 * m.geometry.length_m, hz_to_angular(2e6), hz_to_angular(0.5e6)),
        PhononBranch::vibrational(hz_to_angular(100e6), hz_to_angular(1e6), hz_to_angular(0.5e6)),
    };
    m.temperature_k = 0.04;
    return m;
}

FrequencyGrid FrequencyGrid::with_spacing(double center, double spacing, std::size_t half_points) {
    return FrequencyGrid{center, spacing * static_cast<double>(half_points), 2 * half_points + 1};
}

void validate(const FrequencyGrid& grid) {
    std::vector<std::string> issues;
    if (grid.num_points < 3) issues.push_back("grid.num_points must be >= 3");
    if (grid.num_points % 2 == 0) issues.push_back("grid.num_points must be odd so the center is sampled");
    if (!positive(grid.half_width)) issues.push_back("grid.half_width must be > 0");
    if (!std::isfinite(grid.center)) issues.push_back("grid.center must be finite");
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

void check_resolution(const FrequencyGrid& grid, double min_linewidth, bool allow_coarse) {
    const double limit = min_linewidth / 10.0;
    if (grid.spacing() <= limit * (1.0 + 1e-9)) return;
    std::ostringstream os;
    os << "grid spacing " << angular_to_hz(grid.spacing()) << " Hz exceeds min linewidth/10 = "
       << angular_to_hz(limit) << " Hz";
    if (!allow_coarse) throw ValidationError({os.str()});
    diag::warn(os.str() + " (allowed by override)");
}

} // namespace cqom
