#include "cqom/oracle.hpp"

#include "cqom/diagnostics.hpp"
#include "cqom/parallel.hpp"
#include "cqom/units.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <sstream>

namespace cqom {

namespace {

constexpr double max_steps = 2e8;
constexpr double decay_target = 1e-6;
constexpr double plan_decay = 1e-8; // margin below decay_target

bool coupled(const OracleChannel& c) { return c.coupling * c.source != 0.0; }

double mode_spacing(const WaveguideModel& model) { return two_pi / model.geometry.length_m; }

// Smallest amplitude decay rate among the subject and its coupled channels.
double slowest_decay(const OracleSystem& s) {
    double kappa = 0.5 * s.damping;
    for (const auto& c : s.channels)
        if (coupled(c)) kappa = std::min(kappa, 0.5 * c.width);
    return kappa;
}

bool seven_smooth(std::size_t n) {
    for (std::size_t p : {2u, 3u, 5u, 7u})
        while (n % p == 0) n /= p;
    return n == 1;
}

std::size_t next_smooth(std::size_t n) {
    while (!seven_smooth(n)) ++n;
    return n;
}

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

double OracleSystem::max_rate() const {
    double r = 0.5 * damping;
    double rabi2 = 0.0; // collective exchange rate squared
    for (const auto& c : channels) {
        if (!coupled(c)) continue;
        r = std::max(r, std::abs(c.offset) + 0.5 * c.width);
        rabi2 += std::abs(c.coupling * c.source);
    }
    return std::max(r, std::sqrt(rabi2));
}

bool OracleSystem::has_gain() const {
    return std::any_of(channels.begin(), channels.end(),
                       [](const OracleChannel& c) { return c.coupling * c.source < 0.0; });
}

OracleSystem photon_oracle_system(int k, const OccupationState& occ, const WaveguideModel& model,
                                  const ModeGrid& modes) {
    const double dk = mode_spacing(model);
    OracleSystem s;
    s.frame = photon_omega(model.photon, dk * k);
    s.damping = model.photon.gamma;
    s.subject = "photon k=" + std::to_string(k);
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        const PhononBranch& b = model.phonons[a];
        for (int q = -modes.n_max; q <= modes.n_max; ++q) {
            if (b.is_acoustic() && q == 0) continue;
            const double Omega = phonon_omega(b, dk * q);
            const double shift = photon_detuning(model.photon, dk * k, dk * q);
            const double f = coupling(b, dk * k, dk * q);
            const double n = occ.phonon_n(q, a);
            const double N = occ.photon_N(k + q);
            const double width = b.Gamma + model.photon.gamma;
            const std::string tag = b.branch_id + " q=" + std::to_string(q);
            s.channels.push_back({shift - Omega, width, f, f * (n - N), "P1 " + tag});
            s.channels.push_back({shift + Omega, width, f, f * (1.0 + n + N), "P2 " + tag});
        }
    }
    return s;
}

OracleSystem phonon_oracle_system(int q, std::size_t alpha, const OccupationState& occ, const WaveguideModel& model,
                                  std::span<const int> photon_modes) {
    const PhononBranch& b = model.phonons.at(alpha);
    if (b.is_acoustic() && q == 0) throw std::invalid_argument("the acoustic q = 0 mode is excluded");
    const double dk = mode_spacing(model);
    OracleSystem s;
    s.frame = phonon_omega(b, dk * q);
    s.damping = b.Gamma;
    s.subject = "phonon " + b.branch_id + " q=" + std::to_string(q);
    for (int k : photon_modes) {
        const double offset = photon_detuning(model.photon, dk * (k - q), dk * q) - s.frame;
        const double f = coupling(b, dk * k, -dk * q);
        const double source = f * (occ.photon_N(k - q) - occ.photon_N(k));
        s.channels.push_back({offset, 2.0 * model.photon.gamma, f, source, "P3 k=" + std::to_string(k)});
    }
    return s;
}

Trajectory evolve(const OracleSystem& system, double t_max, double dt, bool check_preconditions) {
    if (!(dt > 0.0) || !(t_max > 0.0)) throw std::invalid_argument("dt and t_max must be > 0");
    const double rate = system.max_rate();
    const double kappa = slowest_decay(system);
    if (check_preconditions) {
        if (dt > 1.0 / (50.0 * rate)) {
            std::ostringstream os;
            os << "time step " << dt << " s exceeds 1/(50 * max channel rate) = " << 1.0 / (50.0 * rate) << " s";
            throw std::invalid_argument(os.str());
        }
        if (!(kappa > 0.0) || t_max < 10.0 / (2.0 * kappa)) {
            std::ostringstream os;
            os << "t_max " << t_max << " s is shorter than 10 / (smallest total damping)";
            throw std::invalid_argument(os.str());
        }
    }
    const double steps_d = std::ceil(t_max / dt - 1e-9);
    if (steps_d > max_steps) {
        std::ostringstream os;
        os << "integration would need " << steps_d << " steps (limit " << max_steps << ")";
        throw IntegrationError(os.str());
    }
    const auto steps = static_cast<std::size_t>(steps_d);

    // Active channels only; decoupled ones stay at zero.
    struct Lane {
        cplx lambda; // -i offset - width/2
        cplx to_g;   // -i coupling
        cplx from_g; // -i source
    };
    std::vector<Lane> lanes;
    for (const auto& c : system.channels)
        if (coupled(c)) lanes.push_back({cplx(-0.5 * c.width, -c.offset), cplx(0.0, -c.coupling), cplx(0.0, -c.source)});
    const std::size_t m = lanes.size();
    const double g_decay = -0.5 * system.damping;

    std::vector<cplx> y(m + 1), k1(m + 1), k2(m + 1), k3(m + 1), k4(m + 1), tmp(m + 1);
    auto deriv = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        cplx acc = g_decay * in[0];
        for (std::size_t c = 0; c < m; ++c) {
            acc += lanes[c].to_g * in[c + 1];
            out[c + 1] = lanes[c].lambda * in[c + 1] + lanes[c].from_g * in[0];
        }
        out[0] = acc;
    };

    Trajectory tr;
    tr.dt = dt;
    tr.frame = system.frame;
    tr.subject = system.subject;
    tr.has_gain = system.has_gain();
    tr.g.reserve(steps + 1);
    y[0] = cplx(0.0, -1.0);
    tr.g.push_back(y[0]);
    const double bound = tr.has_gain ? 1e6 : 1.0 + 1e-6;

    for (std::size_t n = 0; n < steps; ++n) {
        deriv(y, k1);
        for (std::size_t i = 0; i <= m; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
        deriv(tmp, k2);
        for (std::size_t i = 0; i <= m; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
        deriv(tmp, k3);
        for (std::size_t i = 0; i <= m; ++i) tmp[i] = y[i] + dt * k3[i];
        deriv(tmp, k4);
        for (std::size_t i = 0; i <= m; ++i) y[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        const double mag = std::abs(y[0]);
        if (!(mag <= bound)) {
            std::ostringstream os;
            os << system.subject << ": |G| = " << mag << " at t = " << (n + 1) * dt << " s exceeds the "
               << (tr.has_gain ? "gain" : "gain-free") << " bound " << bound;
            throw IntegrationError(os.str());
        }
        tr.g.push_back(y[0]);
    }
    return tr;
}

Trajectory evolve_photon_gf(int k, const OccupationState& occ, const WaveguideModel& model, const ModeGrid& modes,
                            double t_max, double dt) {
    return evolve(photon_oracle_system(k, occ, model, modes), t_max, dt);
}

Trajectory evolve_phonon_gf(int q, std::size_t alpha, const OccupationState& occ, const WaveguideModel& model,
                            std::span<const int> photon_modes, double t_max, double dt) {
    return evolve(phonon_oracle_system(q, alpha, occ, model, photon_modes), t_max, dt);
}

std::vector<cplx> transform_to_gf(const Trajectory& tr, const FrequencyGrid& grid) {
    validate(grid);
    const std::size_t count = tr.g.size();
    if (count < 2) throw std::invalid_argument("trajectory too short to transform");
    const double g0 = std::abs(tr.g.front());
    if (std::abs(tr.g.back()) > decay_target * g0) {
        std::ostringstream os;
        os << tr.subject << ": trajectory has decayed only to " << std::abs(tr.g.back()) / g0
           << " of its initial amplitude; the transform carries a windowing bias";
        diag::warn(os.str());
    }
    const double tau = tr.dt;
    const double h = grid.spacing();
    const double nu_c = grid.center - tr.frame;
    const auto mid = grid.mid();
    // Derivative of the rotating-frame amplitude at 0+, from the first samples.
    const cplx dg0 = (-3.0 * tr.g[0] + 4.0 * tr.g[1] - tr.g[2 < count ? 2 : 1]) / (2.0 * tau);
    auto end_correction = [&](double nu) { return tau * tau / 12.0 * (cplx(0.0, nu) * tr.g[0] + dg0); };

    std::vector<cplx> out(grid.size());
    const double ratio = two_pi / (h * tau); // FFT length per unit of bin refinement
    std::size_t n_fft = 0;
    std::size_t refine = 0;
    const auto m0 = static_cast<std::size_t>(std::max(1.0, std::ceil((static_cast<double>(count) - 1.0) / ratio - 1e-9)));
    for (std::size_t m = m0; m < m0 + 64; ++m) {
        const double len = ratio * static_cast<double>(m);
        const double rounded = std::round(len);
        if (std::abs(len - rounded) <= 1e-6 * len && rounded >= static_cast<double>(count) - 1.0 &&
            rounded < 1e9) {
            n_fft = static_cast<std::size_t>(rounded);
            refine = m;
            break;
        }
    }
    const auto half_span = static_cast<double>(mid) * static_cast<double>(refine);
    if (n_fft != 0 && 2.0 * half_span < static_cast<double>(n_fft)) {
        auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n_fft));
        if (!buf) throw std::bad_alloc();
        std::unique_ptr<fftw_complex, decltype(&fftw_free)> guard(buf, &fftw_free);
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            plan = fftw_plan_dft_1d(static_cast<int>(n_fft), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
        }
        const std::size_t used = std::min(count, n_fft);
        for (std::size_t n = 0; n < n_fft; ++n) {
            cplx v(0.0, 0.0);
            if (n < used) {
                const double t = static_cast<double>(n) * tau;
                v = tr.g[n] * std::polar(1.0, nu_c * t) * (n == 0 ? 0.5 : 1.0);
            }
            buf[n][0] = v.real();
            buf[n][1] = v.imag();
        }
        fftw_execute(plan);
        {
            std::lock_guard<std::mutex> lock(fftw_planner_mutex());
            fftw_destroy_plan(plan);
        }
        for (std::size_t j = 0; j < grid.size(); ++j) {
            const auto jj = static_cast<std::ptrdiff_t>(j) - mid;
            auto bin = jj * static_cast<std::ptrdiff_t>(refine);
            if (bin < 0) bin += static_cast<std::ptrdiff_t>(n_fft);
            const auto& x = buf[static_cast<std::size_t>(bin)];
            out[j] = tau * cplx(x[0], x[1]) + end_correction(nu_c + grid.offset(j));
        }
        return out;
    }

    // Direct summation with a re-synchronised phase recurrence.
    parallel_for(grid.size(), [&](std::size_t j) {
        const double nu = nu_c + grid.offset(j);
        const cplx step = std::polar(1.0, nu * tau);
        cplx phase(1.0, 0.0);
        cplx acc = 0.5 * tr.g[0];
        for (std::size_t n = 1; n < count; ++n) {
            phase = (n % 1024 == 0) ? std::polar(1.0, nu * tau * static_cast<double>(n)) : phase * step;
            acc += tr.g[n] * phase;
        }
        out[j] = tau * acc + end_correction(nu);
    });
    return out;
}

SpectralCurve transform_to_sf(const Trajectory& tr, const FrequencyGrid& grid) {
    const auto G = transform_to_gf(tr, grid);
    SpectralCurve c{grid, tr.frame, std::vector<double>(grid.size()), CurveKind::TimeDomain, tr.subject, {}};
    for (std::size_t j = 0; j < grid.size(); ++j) c.samples[j] = -2.0 * G[j].imag();
    return c;
}

Schedule plan_schedule(const OracleSystem& system, const FrequencyGrid& grid, double dt_scale) {
    validate(grid);
    const double kappa = slowest_decay(system);
    if (!(kappa > 0.0)) throw std::invalid_argument(system.subject + ": no damping, the response never decays");
    double rate = system.max_rate();
    const double grid_reach = std::abs(grid.center - system.frame) + grid.half_width;
    rate = std::max(rate, grid_reach / 5.0); // keeps the grid well inside the Nyquist band
    const double dt_max = 1.0 / (50.0 * rate);
    const double t_need = 1.5 * std::log(1.0 / plan_decay) / kappa;
    const double h = grid.spacing();
    const double m = std::max(1.0, std::ceil(t_need * h / two_pi));
    const double t_max = two_pi * m / h;
    const double steps_d = std::ceil(t_max / dt_max);
    if (steps_d > max_steps) {
        std::ostringstream os;
        os << system.subject << ": oracle would need " << steps_d << " steps (limit " << max_steps
           << "); use a desk-scale parameter set";
        throw IntegrationError(os.str());
    }
    const std::size_t steps = next_smooth(static_cast<std::size_t>(steps_d));
    Schedule s;
    s.t_max = t_max;
    s.steps = steps;
    s.dt = t_max / static_cast<double>(steps) * dt_scale;
    if (dt_scale != 1.0) s.steps = static_cast<std::size_t>(std::ceil(t_max / s.dt));
    return s;
}

SpectralCurve oracle_sf(const OracleSystem& system, const FrequencyGrid& grid, double dt_scale) {
    FrequencyGrid g = grid;
    for (int attempt = 0;; ++attempt) {
        const Schedule s = plan_schedule(system, g, dt_scale);
        // One extra step lands the last sample exactly on t_max.
        Trajectory tr = evolve(system, s.dt * static_cast<double>(s.steps), s.dt);
        const bool decayed = std::abs(tr.g.back()) <= decay_target * std::abs(tr.g.front());
        if (decayed || attempt == 3) return transform_to_sf(tr, grid);
        // Longer window: halve the spacing used for planning (doubles t_max).
        g = FrequencyGrid{grid.center, g.half_width, 2 * g.num_points - 1};
    }
}

} // namespace cqom
