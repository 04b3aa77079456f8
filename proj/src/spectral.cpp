#include "cqom/spectral.hpp"

#include "cqom/diagnostics.hpp"
#include "cqom/parallel.hpp"
#include "cqom/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace cqom {

const char* to_string(CurveKind kind) noexcept {
    switch (kind) {
    case CurveKind::Bare: return "bare";
    case CurveKind::Dressed: return "dressed";
    case CurveKind::TimeDomain: return "time-domain";
    }
    return "?";
}

namespace {

double lorentzian(double x, double damping) { return damping / (x * x + 0.25 * damping * damping); }

std::vector<std::pair<std::size_t, std::size_t>> negative_runs(const std::vector<double>& damping) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < damping.size(); ++i) {
        if (damping[i] >= 0.0) continue;
        std::size_t j = i;
        while (j + 1 < damping.size() && damping[j + 1] < 0.0) ++j;
        runs.emplace_back(i, j);
        i = j;
    }
    return runs;
}

SpectralCurve dressed(const SelfEnergyCurve& se, double base_damping, std::string subject) {
    validate(se.grid);
    if (se.delta.size() != se.grid.size() || se.lambda.size() != se.grid.size())
        throw std::invalid_argument("self-energy samples do not match their grid");
    SpectralCurve c{se.grid, se.bare_line, std::vector<double>(se.grid.size()), CurveKind::Dressed,
                    std::move(subject), {}};
    std::vector<double> damping(se.grid.size());
    for (std::size_t i = 0; i < se.grid.size(); ++i) {
        damping[i] = base_damping + se.lambda[i];
        c.samples[i] = lorentzian(se.detuning(i) - se.delta[i], damping[i]);
    }
    c.gain_regions = negative_runs(damping);
    if (c.has_gain()) diag::warn(c.subject + ": total damping is negative in " +
                                 std::to_string(c.gain_regions.size()) + " region(s) (gain)");
    return c;
}

} // namespace

SpectralCurve bare_sf(double center, double damping, const FrequencyGrid& grid) {
    validate(grid);
    if (!(damping > 0.0)) throw std::invalid_argument("bare spectral function needs damping > 0");
    SpectralCurve c{grid, center, std::vector<double>(grid.size()), CurveKind::Bare, "bare", {}};
    for (std::size_t i = 0; i < grid.size(); ++i) c.samples[i] = lorentzian(c.detuning(i), damping);
    return c;
}

SpectralCurve dressed_photon_sf(int k, const SelfEnergyCurve& se, const WaveguideModel& model) {
    if (se.bare_line != photon_bare_line(k, model))
        throw std::invalid_argument("self-energy was not computed for this photon mode");
    return dressed(se, model.photon.gamma, "photon k=" + std::to_string(k));
}

SpectralCurve dressed_phonon_sf(int q, std::size_t alpha, const SelfEnergyCurve& se, const WaveguideModel& model) {
    if (se.bare_line != phonon_bare_line(q, alpha, model))
        throw std::invalid_argument("self-energy was not computed for this phonon mode");
    return dressed(se, model.phonons.at(alpha).Gamma,
                   "phonon " + model.phonons.at(alpha).branch_id + " q=" + std::to_string(q));
}

SelfEnergyCurve channel_detuning_curve(int k, int q, std::size_t alpha, Process process, const OccupationState& occ,
                                       const WaveguideModel& model, const FrequencyGrid& grid, Component component) {
    if (process == Process::Scattering || component == Component::Phonon)
        throw std::invalid_argument("channel_detuning_curve selects one photon Stokes or anti-Stokes channel");
    const ModeGrid single{two_pi / model.geometry.length_m, std::abs(q)};
    const auto all = component == Component::PhotonM ? photon_channels_M(k, occ, model, single)
                                                     : photon_channels_EM(k, occ, model, single);
    const double shift = photon_detuning(model.photon, single.wavenumber(k), single.wavenumber(q));
    std::vector<PoleTerm> picked;
    for (PoleTerm t : all) {
        if (t.id.q != q || t.id.branch != alpha || t.id.process != process) continue;
        t.center -= shift; // measured from omega_{k+q}
        picked.push_back(t);
    }
    return evaluate_poles(picked, grid, 0.0);
}

double sum_rule(const SpectralCurve& curve) {
    const auto& s = curve.samples;
    const std::size_t n = s.size();
    if (n < 2) return 0.0;
    const double h = curve.grid.spacing();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += (i == 0 || i + 1 == n) ? 0.5 * s[i] : s[i];
    total *= h;

    const auto peak = static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
    const double peak_value = s[peak];
    if (peak_value <= 0.0) return total / two_pi;
    const double x_peak = curve.grid.offset(peak);
    total += s.front() * std::abs(curve.grid.offset(0) - x_peak);
    total += s.back() * std::abs(curve.grid.offset(n - 1) - x_peak);
    if (std::max(std::abs(s.front()), std::abs(s.back())) > 1e-6 * peak_value)
        diag::warn("sum rule window narrower than ~1e3 linewidths; tail correction dominates");
    return total / two_pi;
}

std::vector<double> kk_reconstruct_delta(const SelfEnergyCurve& se) {
    const std::size_t n = se.lambda.size();
    std::vector<double> out(n, 0.0);
    // -(1/pi) P int (L/2)/(w' - w) dw'  ~  -(1/pi) * 2h * sum_{odd m} (L_{i+m}/2) / (m h)
    parallel_for(n, [&](std::size_t i) {
        double acc = 0.0;
        const auto ii = static_cast<std::ptrdiff_t>(i);
        const auto nn = static_cast<std::ptrdiff_t>(n);
        for (std::ptrdiff_t m = 1; ii - m >= 0 || ii + m < nn; m += 2) {
            const double right = ii + m < nn ? se.lambda[static_cast<std::size_t>(ii + m)] : 0.0;
            const double left = ii - m >= 0 ? se.lambda[static_cast<std::size_t>(ii - m)] : 0.0;
            acc += (right - left) / static_cast<double>(m);
        }
        out[i] = -acc / std::numbers::pi;
    });
    return out;
}

KKResult kk_consistency(const SelfEnergyCurve& se) {
    const auto rec = kk_reconstruct_delta(se);
    const std::size_t n = rec.size();
    const std::size_t lo = n / 4;
    const std::size_t hi = n - n / 4;
    KKResult r;
    for (std::size_t i = lo; i < hi; ++i) {
        r.max_deviation = std::max(r.max_deviation, std::abs(rec[i] - se.delta[i]));
        r.reference = std::max(r.reference, std::abs(se.delta[i]));
    }
    if (r.reference > 0.0) r.relative = r.max_deviation / r.reference;
    else r.relative = r.max_deviation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return r;
}

double l2_relative(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("l2_relative: size mismatch");
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - b[i]) * (a[i] - b[i]);
        den += b[i] * b[i];
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

} // namespace cqom
