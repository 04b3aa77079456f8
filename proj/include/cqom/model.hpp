// model.hpp: physical parameterization of a waveguide and the frequency grid

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace cqom {

// Aggregated validation failure; what() joins all issues with "; ".
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> issues);
    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    std::vector<std::string> issues_;
};

struct WaveguideGeometry {
    double radius_m{0.0};
    double length_m{0.0};
};

// Lowest photon branch, linear in the wavenumber up to |k| <= k_cutoff.
struct PhotonBranch {
    double omega0{0.0};          // rad/s, transverse-confinement offset
    double group_velocity{0.0};  // m/s
    double gamma{0.0};           // rad/s, phenomenological damping
    double k_cutoff{0.0};        // 1/m, edge of the linear zone
    std::string branch_id{"mu0"};
};

struct Acoustic {
    double sound_velocity{0.0}; // m/s
};

struct Vibrational {
    double omega{0.0}; // rad/s, dispersionless
};

struct PhononBranch {
    std::variant<Acoustic, Vibrational> kind;
    double Gamma{0.0};      // rad/s
    double coupling_f{0.0}; // rad/s, wavenumber independent
    std::string branch_id;

    bool is_acoustic() const noexcept { return std::holds_alternative<Acoustic>(kind); }

    static PhononBranch acoustic(double sound_velocity, double Gamma, double f, std::string id = "acoustic");
    static PhononBranch vibrational(double omega, double Gamma, double f, std::string id = "vibrational");
};

struct WaveguideModel {
    WaveguideGeometry geometry;
    PhotonBranch photon;
    std::vector<PhononBranch> phonons;
    double temperature_k{0.0};

    // Smallest of gamma and all Gamma_alpha.
    double min_linewidth() const;
};

// Throws ValidationError listing every violated constraint. Warns (does not
// throw) when the waveguide is not much longer than its radius.
void validate(const WaveguideModel& model);

// Parameters typical of a silicon nanowire: a = 250 nm, L = 1 cm,
// omega0/2pi = 1e14 Hz, v_g = c/5, gamma/2pi = 0.1 MHz, acoustic branch
// (v_a = 8433 m/s, Gamma/2pi = 10 MHz, f/2pi = 1 MHz), vibrational branch
// (Omega/2pi = 10 GHz, Gamma/2pi = 1 MHz, f/2pi = 1 MHz), T = 4 K.
WaveguideModel default_silicon_model();

// A compressed parameter set for the time-domain cross-check: mode spacing
// and branch frequencies sit within ~3 decades of the linewidths so a
// fixed-step integrator resolves every channel in seconds. Not physical.
//   L = 1 m, v_g*2pi/L = 2pi*50 MHz, v_a*2pi/L = 2pi*4 MHz,
//   Omega_v/2pi = 100 MHz, gamma/2pi = 0.5 MHz, Gamma_a/2pi = 2 MHz,
//   Gamma_v/2pi = 1 MHz, f/2pi = 0.5 MHz, T = 0.04 K (n_v ~ 7.8).
WaveguideModel desk_scale_model();

// Uniform sampling omega_i = center + (i - (n-1)/2) * spacing.
struct FrequencyGrid {
    double center{0.0};     // rad/s
    double half_width{0.0}; // rad/s
    std::size_t num_points{0};

    std::size_t size() const noexcept { return num_points; }
    double spacing() const noexcept { return 2.0 * half_width / static_cast<double>(num_points - 1); }
    std::ptrdiff_t mid() const noexcept { return static_cast<std::ptrdiff_t>(num_points / 2); }
    // Offset from the center; exactly antisymmetric about the middle sample.
    double offset(std::size_t i) const noexcept {
        return static_cast<double>(static_cast<std::ptrdiff_t>(i) - mid()) * spacing();
    }
    double value(std::size_t i) const noexcept { return center + offset(i); }

    static FrequencyGrid with_spacing(double center, double spacing, std::size_t half_points);
};

// Throws ValidationError unless num_points >= 3, odd, and half_width > 0.
void validate(const FrequencyGrid& grid);

// Enforces spacing <= min_linewidth/10. With allow_coarse the violation is a
// warning instead of a ValidationError.
void check_resolution(const FrequencyGrid& grid, double min_linewidth, bool allow_coarse);

} // namespace cqom
