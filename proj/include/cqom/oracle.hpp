// oracle.hpp: time-domain Green's-function integration and transform to S(omega)

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqom/dispersion.hpp"
#include "cqom/model.hpp"
#include "cqom/occupation.hpp"
#include "cqom/spectral.hpp"

namespace cqom {

using cplx = std::complex<double>;

// One auxiliary amplitude P of the factorized equations, in the frame
// rotating at the subject's bare frequency:
//   i dP/dt = (offset - i width/2) P + source * G,
//   i dG/dt = delta(t) - i (damping/2) G + sum coupling * P.
struct OracleChannel {
    double offset{0.0};   // rad/s
    double width{0.0};    // rad/s
    double coupling{0.0}; // rad/s
    double source{0.0};   // rad/s
    std::string label;
};

// Subject line plus its auxiliary channels.
struct OracleSystem {
    double frame{0.0};   // subject bare frequency [rad/s]
    double damping{0.0}; // gamma (photon) or Gamma_a (phonon)
    std::vector<OracleChannel> channels;
    std::string subject;

    // Largest of damping/2, |offset| + width/2 over coupled channels and the
    // collective exchange rate sqrt(sum |coupling * source|).
    double max_rate() const;
    // True when some coupling * source < 0.
    bool has_gain() const;
};

// Photon mode k: P1 (offset omega_{k+q} - omega_k - Omega, source f(n - N_{k+q}))
// and P2 (offset omega_{k+q} - omega_k + Omega, source f(1 + n + N_{k+q})) for every
// q in `modes` and every branch, width Gamma_a + gamma.
OracleSystem photon_oracle_system(int k, const OccupationState& occ, const WaveguideModel& model,
                                  const ModeGrid& modes);
// Phonon mode (q, alpha): one P3 per photon mode index in `photon_modes`,
// offset omega_k - omega_{k-q} - Omega_q, source f(N_{k-q} - N_k), width 2 gamma.
OracleSystem phonon_oracle_system(int q, std::size_t alpha, const OccupationState& occ, const WaveguideModel& model,
                                  std::span<const int> photon_modes);

// Samples g_n = G(n dt) e^{i frame n dt}, n = 0..steps.
struct Trajectory {
    double dt{0.0};
    double frame{0.0};
    std::vector<cplx> g;
    std::string subject;
    bool has_gain{false};
};

class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fixed-step RK4 from G(0+) = -i, P(0+) = 0.
// Preconditions (std::invalid_argument): dt <= 1/(50 max_rate) and
// t_max >= 10/(smallest decay rate); lifted with check_preconditions = false.
// Throws IntegrationError when |G| exceeds 1 + 1e-6 without gain channels or
// 1e6 with them.
Trajectory evolve(const OracleSystem& system, double t_max, double dt, bool check_preconditions = true);

Trajectory evolve_photon_gf(int k, const OccupationState& occ, const WaveguideModel& model, const ModeGrid& modes,
                            double t_max, double dt);
Trajectory evolve_phonon_gf(int q, std::size_t alpha, const OccupationState& occ, const WaveguideModel& model,
                            std::span<const int> photon_modes, double t_max, double dt);

// G(omega) = int_0^inf e^{i omega t} G(t) dt on the grid (trapezoid with
// end correction; FFT when the grid spacing divides 2pi/(dt n) for a
// zero-padded length n, direct summation otherwise); S = -2 Im G.
// Warns when |g| at the end exceeds 1e-6 of |g(0)|.
std::vector<cplx> transform_to_gf(const Trajectory& trajectory, const FrequencyGrid& grid);
SpectralCurve transform_to_sf(const Trajectory& trajectory, const FrequencyGrid& grid);

// Time step and length for which transform_to_sf lands every grid point on
// an FFT bin: dt <= 1/(50 max_rate), t_max >= 1.5 ln(1e8) / (smallest decay
// rate) and t_max * spacing / 2pi an integer.
struct Schedule {
    double dt{0.0};
    double t_max{0.0};
    std::size_t steps{0};
};
Schedule plan_schedule(const OracleSystem& system, const FrequencyGrid& grid, double dt_scale = 1.0);

// Plan, integrate and transform; t_max is doubled (up to 3 times) until the
// trajectory has decayed.
SpectralCurve oracle_sf(const OracleSystem& system, const FrequencyGrid& grid, double dt_scale = 1.0);

} // namespace cqom
