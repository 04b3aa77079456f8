// selfenergy.hpp: mean-field photon and phonon self-energies M = Delta - i Lambda/2

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqom/dispersion.hpp"
#include "cqom/model.hpp"
#include "cqom/occupation.hpp"

namespace cqom {

enum class Component {
    PhotonM,  // photon line dressed by phonons (weights n, 1+n)
    PhotonEM, // photon line dressed by other photons (weight N)
    Phonon,   // phonon line (weight N_{k-q} - N_k)
};

enum class Process { AntiStokes, Stokes, Scattering };

const char* to_string(Component c) noexcept;
const char* to_string(Process p) noexcept;

struct ChannelId {
    Component component{Component::PhotonM};
    Process process{Process::Stokes};
    std::size_t branch{0};
    int q{0}; // phonon mode index
    int k{0}; // partner photon mode index: k+q (photon lines) or k (phonon line)

    std::string label(const WaveguideModel& model) const;
};

// One complex pole  weight / (omega - center + i width/2):
//   Delta  += weight * x / (x^2 + width^2/4)
//   Lambda += weight * width / (x^2 + width^2/4),   x = omega - center.
// Centers are measured from the subject's bare line so that optical-scale
// absolute frequencies never enter the differences.
struct PoleTerm {
    double weight{0.0}; // rad^2/s^2, may be negative (gain)
    double center{0.0}; // rad/s relative to the bare line
    double width{0.0};  // rad/s, full width
    ChannelId id;
};

struct PhotonSplit {
    std::vector<double> delta_m, lambda_m;
    std::vector<double> delta_em, lambda_em;
};

struct SelfEnergyCurve {
    FrequencyGrid grid;
    double bare_line{0.0}; // subject bare frequency [rad/s]
    std::vector<double> delta;
    std::vector<double> lambda;
    std::optional<PhotonSplit> components;

    // omega_i - bare_line without forming omega_i.
    double detuning(std::size_t i) const noexcept { return grid.offset(i) + (grid.center - bare_line); }
};

// Channel lists of the printed sums. `modes` is the phonon q grid of the
// photon sums; k+q leaving the photon linear zone throws OutOfModelRange.
// The acoustic q = 0 mode is excluded throughout.
std::vector<PoleTerm> photon_channels_M(int k, const OccupationState& occ, const WaveguideModel& model,
                                        const ModeGrid& modes);
std::vector<PoleTerm> photon_channels_EM(int k, const OccupationState& occ, const WaveguideModel& model,
                                         const ModeGrid& modes);
// Sum over every photon mode of the linear zone; only modes with
// N_{k-q} != N_k contribute, so the sum runs over pumped modes and their
// q-shifted partners.
std::vector<PoleTerm> phonon_channels(int q, std::size_t alpha, const OccupationState& occ,
                                      const WaveguideModel& model);

// Evaluates a pole sum on the grid (parallel over grid points). Terms of zero
// width contribute only to Delta; hitting one exactly throws std::domain_error.
SelfEnergyCurve evaluate_poles(std::span<const PoleTerm> terms, const FrequencyGrid& grid, double bare_line);

// Bare lines: omega_k for photon mode index k, Omega_{q alpha} for phonons.
double photon_bare_line(int k, const WaveguideModel& model);
double phonon_bare_line(int q, std::size_t alpha, const WaveguideModel& model);

SelfEnergyCurve photon_selfenergy_M(int k, const OccupationState& occ, const WaveguideModel& model,
                                    const ModeGrid& modes, const FrequencyGrid& grid);
SelfEnergyCurve photon_selfenergy_EM(int k, const OccupationState& occ, const WaveguideModel& model,
                                     const ModeGrid& modes, const FrequencyGrid& grid);
// M + EM with the split kept in `components`.
SelfEnergyCurve photon_selfenergy(int k, const OccupationState& occ, const WaveguideModel& model,
                                  const ModeGrid& modes, const FrequencyGrid& grid);
SelfEnergyCurve phonon_selfenergy(int q, std::size_t alpha, const OccupationState& occ, const WaveguideModel& model,
                                  const FrequencyGrid& grid);

// Pumped-field closed forms with thermal terms dropped, evaluated directly
// from the printed Lorentzians (independent of the channel machinery).
// Photon line at mode k:
//   Lambda^EM = sum_i sum_a f^2 N_i [Gamma_a/((w - w_i - W)^2 + Gamma_a^2/4)
//                                   - Gamma_a/((w - w_i + W)^2 + Gamma_a^2/4)],
// with W = Omega_a(k_i - k); phonon line (q, a):
//   Lambda = sum_i f^2 N_i [2g/((w - w_{i+q} + w_i)^2 + g^2) - 2g/((w - w_i + w_{i-q})^2 + g^2)].
SelfEnergyCurve pumped_photon_em_closed_form(int k, const OccupationState& occ, const WaveguideModel& model,
                                             const FrequencyGrid& grid);
SelfEnergyCurve pumped_phonon_closed_form(int q, std::size_t alpha, const OccupationState& occ,
                                          const WaveguideModel& model, const FrequencyGrid& grid);

struct SingleFieldCurves {
    SelfEnergyCurve photon_em; // photon line at k = k0
    SelfEnergyCurve phonon;    // phonon line (q, alpha)
};

// Single pumped mode k0 (index) with N0 photons. Warns when some
// Gamma_a < 10 gamma (outside the limit the closed form assumes).
SingleFieldCurves single_field_closed_forms(int k0, double N0, int q, std::size_t alpha, const WaveguideModel& model,
                                            const FrequencyGrid& photon_grid, const FrequencyGrid& phonon_grid);

class OffResonance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Mismatch v_g q dk - Omega_a(q dk) [rad/s] of the two-field resonance for
// phonon mode index q.
double resonance_mismatch(int q, std::size_t alpha, const WaveguideModel& model);

// Phonon mode index whose resonance mismatch is smallest in |q| <= q_limit.
int nearest_resonant_mode(std::size_t alpha, const WaveguideModel& model, int q_limit);

// Default tolerance for calling a configuration resonant: 1e-3 gamma.
double resonance_tolerance(const WaveguideModel& model);

// 2 f^2 (N2 - N1) / gamma.
double resonant_phonon_damping(double N1, double N2, double f, double gamma);

// Dominant-channel Lorentzian of the phonon line q0 = k1 - k2 (mode indices):
//   Lambda = f^2 (N2 - N1) 2g / ((w - W)^2 + g^2),  Delta = f^2 (N2 - N1)(w - W) / ((w - W)^2 + g^2).
// Throws OffResonance unless |resonance_mismatch(q0)| <= tolerance.
SelfEnergyCurve two_field_resonant_phonon(int k1, double N1, int k2, double N2, std::size_t alpha,
                                          const WaveguideModel& model, const FrequencyGrid& grid,
                                          std::optional<double> tolerance = std::nullopt);

} // namespace cqom
