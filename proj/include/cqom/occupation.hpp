// occupation.hpp: steady-state photon and phonon mean occupations

#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "cqom/model.hpp"

namespace cqom {

struct EmptyCavity {};

struct SingleField {
    double k0{0.0}; // 1/m
    double N0{0.0};
};

struct TwoFields {
    double k1{0.0};
    double N1{0.0};
    double k2{0.0};
    double N2{0.0};
};

struct PumpedMode {
    double k{0.0};
    double N{0.0};
};

struct Custom {
    std::vector<PumpedMode> modes;
    // Occupation of every photon mode not listed; nonzero only for
    // uniform-occupation studies.
    double background_N{0.0};
};

using Scenario = std::variant<EmptyCavity, SingleField, TwoFields, Custom>;

// Throws ValidationError for negative counts or coincident two-field modes.
void validate(const Scenario& scenario);

// Raised by bose_einstein for Omega -> 0 at finite temperature.
class DivergentOccupation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// 1 / (exp(hbar Omega / k_B T) - 1); zero at T = 0.
double bose_einstein(double omega, double temperature_k);

// Photon flux P / (hbar omega) [1/s].
double photon_flux(double power_w, double omega);

// Mean photon number in the waveguide: flux times transit time L / v_g.
double photons_from_power(double power_w, double omega, double length_m, double group_velocity);

// Photon counts per mode index (sparse over a uniform background) and
// thermal phonon counts per (mode index, branch).
class OccupationState {
public:
    OccupationState(std::map<int, double> pumped, double background, const WaveguideModel& model, bool thermal_phonons);

    double photon_N(int n) const;
    const std::map<int, double>& pumped() const noexcept { return pumped_; }
    double background() const noexcept { return background_; }

    // Bose-Einstein count of mode (n, alpha); the acoustic n = 0 mode is
    // excluded from interaction sums and reports 0.
    double phonon_n(int n, std::size_t alpha) const;
    bool thermal_phonons() const noexcept { return thermal_; }

    // Same photon counts with every phonon count set to zero.
    OccupationState without_thermal_phonons() const;

private:
    std::map<int, double> pumped_;
    double background_;
    std::vector<PhononBranch> branches_;
    double mode_spacing_;
    double temperature_k_;
    bool thermal_;
};

// Photon counts from the scenario (wavenumbers snapped to the 2pi/L grid),
// phonon counts thermal at model.temperature_k.
OccupationState build_occupation(const Scenario& scenario, const WaveguideModel& model, bool thermal_phonons = true);

} // namespace cqom
