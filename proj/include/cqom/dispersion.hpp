// dispersion.hpp: photon/phonon dispersion relations and the discrete mode grid

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cqom/model.hpp"

namespace cqom {

// Raised when a wavenumber leaves the linear zone of the photon branch.
class OutOfModelRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Wavenumbers k_n = n * 2pi/L for n = -n_max..n_max. Modes are addressed by
// their integer index n everywhere; wavenumber() converts.
struct ModeGrid {
    double spacing{0.0}; // 1/m
    int n_max{0};

    std::size_t size() const noexcept { return static_cast<std::size_t>(2 * n_max + 1); }
    bool contains(int n) const noexcept { return n >= -n_max && n <= n_max; }
    double wavenumber(int n) const noexcept { return spacing * static_cast<double>(n); }
    std::vector<double> wavenumbers() const;
};

// n_max >= 0; n_max = 0 yields the single mode k = 0.
ModeGrid build_mode_grid(double length_m, int n_max);

// omega_k = omega0 + v_g k; throws OutOfModelRange when |k| > k_cutoff.
double photon_omega(const PhotonBranch& branch, double k);

// omega_{k + dk} - omega_k = v_g dk, formed without the absolute frequencies
// so that the difference keeps full relative precision. Both wavenumbers
// must be inside the linear zone.
double photon_detuning(const PhotonBranch& branch, double k, double dk);

// Acoustic: v_a |q|; vibrational: Omega_v for every q.
double phonon_omega(const PhononBranch& branch, double q) noexcept;

// f_k^{q alpha}; wavenumber independent, so f_{k+q}^{-q alpha} = f_k^{q alpha}.
double coupling(const PhononBranch& branch, double k, double q) noexcept;

// Mode count for grid sums: the acoustic band v_a * q_max covers at least
// 3 * max_abs_detuning (with no acoustic branch the photon band v_g * q_max
// is used instead), clamped so that |k_subject| + q_max stays in the linear
// zone. Never below 1.
int default_n_max(const WaveguideModel& model, double max_abs_detuning, double k_subject);

// Nearest mode index to k for a grid of the given spacing; warns when k is
// off-grid by more than 1e-9 of the spacing.
int snap_to_mode(double k, double spacing, const char* what);

} // namespace cqom
