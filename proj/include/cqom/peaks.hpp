// peaks.hpp: peak extraction (center, FWHM, shift, channel) from sampled lines

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqom/model.hpp"
#include "cqom/selfenergy.hpp"
#include "cqom/spectral.hpp"

namespace cqom {

// A resonance the caller expects, for channel assignment.
struct PredictedResonance {
    double detuning{0.0}; // rad/s from the bare line
    std::size_t branch{0};
    Process process{Process::Stokes};
    std::string label;
};

struct Peak {
    double center{0.0};        // rad/s (absolute)
    double shift_vs_bare{0.0}; // rad/s, center - bare line
    double fwhm{0.0};          // rad/s
    double height{0.0};
    std::optional<PredictedResonance> channel;
    bool low_confidence{false}; // fewer than 3 samples above half maximum, or a crossing outside the grid
};

struct PeakReport {
    std::vector<Peak> peaks; // sorted by center

    // Highest peak; throws std::out_of_range when empty.
    const Peak& dominant() const;
};

struct PeakOptions {
    // Maxima lower than this fraction of the global maximum are ignored.
    double min_relative_height{0.0};
};

// Interior local maxima with positive height. The center and height come
// from a 3-point parabola through 1/y (exact for a Lorentzian line; a
// parabola through y is used when a neighbour is not positive). Each
// half-maximum crossing is bracketed on the grid and then placed by the
// same reciprocal-quadratic interpolation, falling back to linear.
PeakReport find_peaks(std::span<const double> samples, const FrequencyGrid& grid, double bare_line,
                      std::span<const PredictedResonance> predicted = {}, PeakOptions options = {});
PeakReport find_peaks(const SpectralCurve& curve, std::span<const PredictedResonance> predicted = {},
                      PeakOptions options = {});
// Peaks of Lambda.
PeakReport find_peaks(const SelfEnergyCurve& curve, std::span<const PredictedResonance> predicted = {},
                      PeakOptions options = {});

// Channel centers of a pole list as predictions (one per Stokes/anti-Stokes
// channel, relative to the same bare line as the terms).
std::vector<PredictedResonance> predictions_from(std::span<const PoleTerm> terms, const WaveguideModel& model);

} // namespace cqom
