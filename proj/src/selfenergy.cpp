#include "cqom/selfenergy.hpp"

#include "cqom/diagnostics.hpp"
#include "cqom/parallel.hpp"
#include "cqom/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace cqom {

const char* to_string(Component c) noexcept {
    switch (c) {
    case Component::PhotonM: return "M";
    case Component::PhotonEM: return "EM";
    case Component::Phonon: return "phon";
    }
    return "?";
}

const char* to_string(Process p) noexcept {
    switch (p) {
    case Process::AntiStokes: return "anti-stokes";
    case Process::Stokes: return "stokes";
    case Process::Scattering: return "scattering";
    }
    return "?";
}

std::string ChannelId::label(const WaveguideModel& model) const {
    std::ostringstream os;
    os << to_string(component) << ':' << model.phonons.at(branch).branch_id << ":q=" << q;
    if (component == Component::Phonon) os << ":k=" << k;
    else os << ':' << to_string(process);
    return os.str();
}

namespace {

double mode_spacing(const WaveguideModel& model) { return two_pi / model.geometry.length_m; }

// omega_{k+q} - omega_k for mode indices.
double photon_shift(int k, int q, const WaveguideModel& model) {
    const double dk = mode_spacing(model);
    return photon_detuning(model.photon, dk * k, dk * q);
}

void warn_resolution(const FrequencyGrid& grid, const WaveguideModel& model) {
    check_resolution(grid, model.min_linewidth(), true);
}

} // namespace

double photon_bare_line(int k, const WaveguideModel& model) {
    return photon_omega(model.photon, mode_spacing(model) * k);
}

double phonon_bare_line(int q, std::size_t alpha, const WaveguideModel& model) {
    return phonon_omega(model.phonons.at(alpha), mode_spacing(model) * q);
}

std::vector<PoleTerm> photon_channels_M(int k, const OccupationState& occ, const WaveguideModel& model,
                                        const ModeGrid& modes) {
    std::vector<PoleTerm> out;
    const double dk = mode_spacing(model);
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        const PhononBranch& b = model.phonons[a];
        const double width = b.Gamma + model.photon.gamma;
        for (int q = -modes.n_max; q <= modes.n_max; ++q) {
            if (b.is_acoustic() && q == 0) continue;
            const double Omega = phonon_omega(b, dk * q);
            const double f = coupling(b, dk * k, dk * q);
            const double n = occ.phonon_n(q, a);
            const double shift = photon_shift(k, q, model);
            out.push_back({f * f * n, shift - Omega, width, {Component::PhotonM, Process::AntiStokes, a, q, k + q}});
            out.push_back({f * f * (1.0 + n), shift + Omega, width, {Component::PhotonM, Process::Stokes, a, q, k + q}});
        }
    }
    return out;
}

std::vector<PoleTerm> photon_channels_EM(int k, const OccupationState& occ, const WaveguideModel& model,
                                         const ModeGrid& modes) {
    std::vector<int> qs;
    if (occ.background() != 0.0) {
        for (int q = -modes.n_max; q <= modes.n_max; ++q) qs.push_back(q);
    } else {
        for (const auto& [n, N] : occ.pumped()) {
            const int q = n - k;
            if (modes.contains(q)) {
                qs.push_back(q);
            } else if (N != 0.0) {
                std::ostringstream os;
                os << "pumped photon mode n = " << n << " lies outside the phonon mode grid (|q| <= " << modes.n_max
                   << ") of photon mode " << k << "; its terms are not in the sum";
                diag::warn(os.str());
            }
        }
    }

    std::vector<PoleTerm> out;
    const double dk = mode_spacing(model);
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        const PhononBranch& b = model.phonons[a];
        const double width = b.Gamma + model.photon.gamma;
        for (int q : qs) {
            if (b.is_acoustic() && q == 0) continue;
            const double N = occ.photon_N(k + q);
            const double Omega = phonon_omega(b, dk * q);
            const double f = coupling(b, dk * k, dk * q);
            const double shift = photon_shift(k, q, model);
            out.push_back({f * f * N, shift + Omega, width, {Component::PhotonEM, Process::Stokes, a, q, k + q}});
            out.push_back({-f * f * N, shift - Omega, width, {Component::PhotonEM, Process::AntiStokes, a, q, k + q}});
        }
    }
    return out;
}

std::vector<PoleTerm> phonon_channels(int q, std::size_t alpha, const OccupationState& occ,
                                      const WaveguideModel& model) {
    const PhononBranch& b = model.phonons.at(alpha);
    if (b.is_acoustic() && q == 0)
        throw std::invalid_argument("the acoustic q = 0 mode is excluded from the interaction sums");
    const double dk = mode_spacing(model);
    const double Omega = phonon_omega(b, dk * q);

    std::set<int> ks;
    for (const auto& [n, N] : occ.pumped()) {
        ks.insert(n);
        ks.insert(n + q);
    }
    std::vector<PoleTerm> out;
    for (int k : ks) {
        const double weight_n = occ.photon_N(k - q) - occ.photon_N(k);
        if (weight_n == 0.0) continue;
        const double f = coupling(b, dk * k, -dk * q);
        // omega_k - omega_{k-q}, relative to Omega_q
        const double center = photon_shift(k - q, q, model) - Omega;
        out.push_back({f * f * weight_n, center, 2.0 * model.photon.gamma,
                       {Component::Phonon, Process::Scattering, alpha, q, k}});
    }
    return out;
}

SelfEnergyCurve evaluate_poles(std::span<const PoleTerm> terms, const FrequencyGrid& grid, double bare_line) {
    validate(grid);
    SelfEnergyCurve c{grid, bare_line, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0),
                      std::nullopt};
    parallel_for(grid.size(), [&](std::size_t i) {
        const double w = c.detuning(i);
        double delta = 0.0;
        double lambda = 0.0;
        for (const PoleTerm& t : terms) {
            if (t.weight == 0.0) continue;
            const double x = w - t.center;
            if (t.width == 0.0) {
                if (x == 0.0) throw std::domain_error("undamped pole sits exactly on a grid point");
                delta += t.weight / x;
                continue;
            }
            const double d = x * x + 0.25 * t.width * t.width;
            delta += t.weight * x / d;
            lambda += t.weight * t.width / d;
        }
        c.delta[i] = delta;
        c.lambda[i] = lambda;
    });
    return c;
}

SelfEnergyCurve photon_selfenergy_M(int k, const OccupationState& occ, const WaveguideModel& model,
                                    const ModeGrid& modes, const FrequencyGrid& grid) {
    warn_resolution(grid, model);
    const auto terms = photon_channels_M(k, occ, model, modes);
    return evaluate_poles(terms, grid, photon_bare_line(k, model));
}

SelfEnergyCurve photon_selfenergy_EM(int k, const OccupationState& occ, const WaveguideModel& model,
                                     const ModeGrid& modes, const FrequencyGrid& grid) {
    warn_resolution(grid, model);
    const auto terms = photon_channels_EM(k, occ, model, modes);
    return evaluate_poles(terms, grid, photon_bare_line(k, model));
}

SelfEnergyCurve photon_selfenergy(int k, const OccupationState& occ, const WaveguideModel& model,
                                  const ModeGrid& modes, const FrequencyGrid& grid) {
    SelfEnergyCurve m = photon_selfenergy_M(k, occ, model, modes, grid);
    SelfEnergyCurve em = evaluate_poles(photon_channels_EM(k, occ, model, modes), grid, m.bare_line);
    SelfEnergyCurve total{grid, m.bare_line, m.delta, m.lambda, std::nullopt};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        total.delta[i] = m.delta[i] + em.delta[i];
        total.lambda[i] = m.lambda[i] + em.lambda[i];
    }
    total.components = PhotonSplit{std::move(m.delta), std::move(m.lambda), std::move(em.delta), std::move(em.lambda)};
    return total;
}

SelfEnergyCurve phonon_selfenergy(int q, std::size_t alpha, const OccupationState& occ, const WaveguideModel& model,
                                  const FrequencyGrid& grid) {
    warn_resolution(grid, model);
    const auto terms = phonon_channels(q, alpha, occ, model);
    return evaluate_poles(terms, grid, phonon_bare_line(q, alpha, model));
}

namespace {

// Lorentzian pair of one complex pole of full width `width` at detuning x.
struct Lorentz {
    double re;
    double im;
};

Lorentz pole(double x, double width) {
    const double d = x * x + 0.25 * width * width;
    return {x / d, width / d};
}

SelfEnergyCurve zero_curve(const FrequencyGrid& grid, double bare_line) {
    validate(grid);
    return {grid, bare_line, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0),
            std::nullopt};
}

} // namespace

SelfEnergyCurve pumped_photon_em_closed_form(int k, const OccupationState& occ, const WaveguideModel& model,
                                             const FrequencyGrid& grid) {
    SelfEnergyCurve c = zero_curve(grid, photon_bare_line(k, model));
    const double dk = mode_spacing(model);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = c.detuning(i);
        for (const auto& [n, N] : occ.pumped()) {
            const double wi = photon_shift(k, n - k, model); // omega_{k_i} - omega_k
            for (const PhononBranch& b : model.phonons) {
                const double Omega = phonon_omega(b, dk * (n - k));
                const double f2N = b.coupling_f * b.coupling_f * N;
                const Lorentz s = pole(w - wi - Omega, b.Gamma);
                const Lorentz as = pole(w - wi + Omega, b.Gamma);
                c.delta[i] += f2N * (s.re - as.re);
                c.lambda[i] += f2N * (s.im - as.im);
            }
        }
    }
    return c;
}

SelfEnergyCurve pumped_phonon_closed_form(int q, std::size_t alpha, const OccupationState& occ,
                                          const WaveguideModel& model, const FrequencyGrid& grid) {
    const PhononBranch& b = model.phonons.at(alpha);
    SelfEnergyCurve c = zero_curve(grid, phonon_bare_line(q, alpha, model));
    const double g = model.photon.gamma;
    const double Omega = c.bare_line;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = c.detuning(i); // omega - Omega_q
        for (const auto& [n, N] : occ.pumped()) {
            const double f2N = b.coupling_f * b.coupling_f * N;
            const double up = photon_shift(n, q, model) - Omega;       // omega_{i+q} - omega_i - Omega
            const double down = photon_shift(n - q, q, model) - Omega; // omega_i - omega_{i-q} - Omega
            const double x1 = w - up;
            const double x2 = w - down;
            const double d1 = x1 * x1 + g * g;
            const double d2 = x2 * x2 + g * g;
            c.delta[i] += f2N * (x1 / d1 - x2 / d2);
            c.lambda[i] += f2N * (2.0 * g / d1 - 2.0 * g / d2);
        }
    }
    return c;
}

SingleFieldCurves single_field_closed_forms(int k0, double N0, int q, std::size_t alpha, const WaveguideModel& model,
                                            const FrequencyGrid& photon_grid, const FrequencyGrid& phonon_grid) {
    for (const PhononBranch& b : model.phonons) {
        if (b.Gamma < 10.0 * model.photon.gamma) {
            diag::warn("branch " + b.branch_id +
                       ": Gamma < 10 gamma, outside the Gamma >> gamma limit of the single-field closed form");
        }
    }
    const OccupationState occ({{k0, N0}}, 0.0, model, false);
    return {pumped_photon_em_closed_form(k0, occ, model, photon_grid),
            pumped_phonon_closed_form(q, alpha, occ, model, phonon_grid)};
}

double resonance_mismatch(int q, std::size_t alpha, const WaveguideModel& model) {
    const double dk = mode_spacing(model);
    return model.photon.group_velocity * (dk * q) - phonon_omega(model.phonons.at(alpha), dk * q);
}

int nearest_resonant_mode(std::size_t alpha, const WaveguideModel& model, int q_limit) {
    int best = 0;
    double best_mismatch = std::numeric_limits<double>::infinity();
    const bool acoustic = model.phonons.at(alpha).is_acoustic();
    for (int q = -q_limit; q <= q_limit; ++q) {
        if (acoustic && q == 0) continue;
        const double m = std::abs(resonance_mismatch(q, alpha, model));
        if (m < best_mismatch) {
            best_mismatch = m;
            best = q;
        }
    }
    return best;
}

double resonance_tolerance(const WaveguideModel& model) { return 1e-3 * model.photon.gamma; }

double resonant_phonon_damping(double N1, double N2, double f, double gamma) {
    return 2.0 * f * f * (N2 - N1) / gamma;
}

SelfEnergyCurve two_field_resonant_phonon(int k1, double N1, int k2, double N2, std::size_t alpha,
                                          const WaveguideModel& model, const FrequencyGrid& grid,
                                          std::optional<double> tolerance) {
    const int q0 = k1 - k2;
    const double mismatch = resonance_mismatch(q0, alpha, model);
    const double tol = tolerance.value_or(resonance_tolerance(model));
    if (!(std::abs(mismatch) <= tol)) {
        std::ostringstream os;
        os << "two-field configuration is off resonance for phonon mode q = " << q0 << ": v_g q - Omega = "
           << angular_to_hz(mismatch) << " Hz exceeds tolerance " << angular_to_hz(tol)
           << " Hz; use the general phonon self-energy";
        throw OffResonance(os.str());
    }
    const PhononBranch& b = model.phonons.at(alpha);
    SelfEnergyCurve c = zero_curve(grid, phonon_bare_line(q0, alpha, model));
    const double g = model.photon.gamma;
    const double w2 = b.coupling_f * b.coupling_f * (N2 - N1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = c.detuning(i);
        const double d = x * x + g * g;
        c.delta[i] = w2 * x / d;
        c.lambda[i] = w2 * 2.0 * g / d;
    }
    return c;
}

} // namespace cqom
