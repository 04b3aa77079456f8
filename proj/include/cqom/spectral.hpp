// spectral.hpp: bare and dressed spectral functions and line analysis

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cqom/model.hpp"
#include "cqom/occupation.hpp"
#include "cqom/selfenergy.hpp"

namespace cqom {

enum class CurveKind { Bare, Dressed, TimeDomain };

const char* to_string(CurveKind kind) noexcept;

struct SpectralCurve {
    FrequencyGrid grid;
    double bare_line{0.0}; // subject bare frequency [rad/s]
    std::vector<double> samples; // S(omega) [s]
    CurveKind kind{CurveKind::Bare};
    std::string subject;
    // Index ranges [first, last] where the total damping is negative.
    std::vector<std::pair<std::size_t, std::size_t>> gain_regions;

    bool has_gain() const noexcept { return !gain_regions.empty(); }
    double detuning(std::size_t i) const noexcept { return grid.offset(i) + (grid.center - bare_line); }
};

// damping / ((omega - center)^2 + damping^2/4).
SpectralCurve bare_sf(double center, double damping, const FrequencyGrid& grid);

// (gamma + Lambda) / ((omega - omega_k - Delta)^2 + (gamma + Lambda)^2/4) on
// the self-energy's grid. Negative total damping is annotated, not rejected.
SpectralCurve dressed_photon_sf(int k, const SelfEnergyCurve& selfenergy, const WaveguideModel& model);
SpectralCurve dressed_phonon_sf(int q, std::size_t alpha, const SelfEnergyCurve& selfenergy,
                                const WaveguideModel& model);

// Single M (or EM) channel of photon mode k through phonon (q, alpha) as a
// function of delta = omega - omega_{k+q}; `grid` is a detuning grid.
SelfEnergyCurve channel_detuning_curve(int k, int q, std::size_t alpha, Process process, const OccupationState& occ,
                                       const WaveguideModel& model, const FrequencyGrid& grid,
                                       Component component = Component::PhotonM);

// Integral of S d(omega)/2pi: trapezoid rule plus the 1/x^2 tail beyond each
// edge, S_edge * |omega_edge - omega_peak|. Warns when the edges are still
// above 1e-6 of the peak (window narrower than ~1e3 linewidths).
double sum_rule(const SpectralCurve& curve);

struct KKResult {
    double max_deviation{0.0}; // max |Delta_rec - Delta| on the interior half
    double reference{0.0};     // max |Delta| on the interior half
    double relative{0.0};      // max_deviation / reference (0 when both vanish)
};

// Reconstructs Delta = -(1/pi) P int (Lambda/2) / (omega' - omega) with the
// odd-offset rule (the singular bin and every even offset are skipped, the
// rest paired symmetrically), then compares with the stored Delta.
std::vector<double> kk_reconstruct_delta(const SelfEnergyCurve& selfenergy);
KKResult kk_consistency(const SelfEnergyCurve& selfenergy);

// L2 norm of (a - b) over L2 norm of b.
double l2_relative(const std::vector<double>& a, const std::vector<double>& b);

} // namespace cqom
