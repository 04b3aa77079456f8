#include "cqom/dispersion.hpp"

#include "cqom/diagnostics.hpp"
#include "cqom/units.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cqom {

std::vector<double> ModeGrid::wavenumbers() const {
    std::vector<double> ks;
    ks.reserve(size());
    for (int n = -n_max; n <= n_max; ++n) ks.push_back(wavenumber(n));
    return ks;
}

ModeGrid build_mode_grid(double length_m, int n_max) {
    if (!(length_m > 0.0)) throw ValidationError({"mode grid length must be > 0"});
    if (n_max < 0) throw ValidationError({"mode grid n_max must be >= 0"});
    return ModeGrid{two_pi / length_m, n_max};
}

namespace {

void check_linear_zone(const PhotonBranch& branch, double k) {
    if (std::abs(k) > branch.k_cutoff) {
        std::ostringstream os;
        os << "photon wavenumber " << k << " 1/m outside linear zone |k| <= " << branch.k_cutoff;
        throw OutOfModelRange(os.str());
    }
}

} // namespace

double photon_omega(const PhotonBranch& branch, double k) {
    check_linear_zone(branch, k);
    return branch.omega0 + branch.group_velocity * k;
}

double photon_detuning(const PhotonBranch& branch, double k, double dk) {
    check_linear_zone(branch, k);
    check_linear_zone(branch, k + dk);
    return branch.group_velocity * dk;
}

double phonon_omega(const PhononBranch& branch, double q) noexcept {
    if (const auto* a = std::get_if<Acoustic>(&branch.kind)) return a->sound_velocity * std::abs(q);
    return std::get<Vibrational>(branch.kind).omega;
}

double coupling(const PhononBranch& branch, double /*k*/, double /*q*/) noexcept {
    return branch.coupling_f;
}

int default_n_max(const WaveguideModel& model, double max_abs_detuning, double k_subject) {
    const double dk = two_pi / model.geometry.length_m;
    double band_velocity = 0.0;
    for (const auto& b : model.phonons)
        if (const auto* a = std::get_if<Acoustic>(&b.kind)) band_velocity = std::max(band_velocity, a->sound_velocity);
    if (band_velocity <= 0.0) band_velocity = model.photon.group_velocity;

    const double wanted = std::ceil(3.0 * std::abs(max_abs_detuning) / (band_velocity * dk));
    const double room = std::floor((model.photon.k_cutoff - std::abs(k_subject)) / dk);
    double n = std::max(1.0, wanted);
    if (n > room) {
        std::ostringstream os;
        os << "mode grid n_max clamped from " << n << " to " << room << " by the photon linear-zone cutoff";
        diag::warn(os.str());
        n = room;
    }
    if (n < 1.0) throw OutOfModelRange("subject wavenumber leaves no room inside the photon linear zone");
    return static_cast<int>(std::min<double>(n, std::numeric_limits<int>::max() / 4));
}

int snap_to_mode(double k, double spacing, const char* what) {
    const double exact = k / spacing;
    const double n = std::round(exact);
    if (std::abs(exact - n) > 1e-9) {
        std::ostringstream os;
        os << what << " = " << k << " 1/m is off the mode grid; snapped to n = " << n << " (k = " << n * spacing
           << " 1/m)";
        diag::warn(os.str());
    }
    return static_cast<int>(n);
}

} // namespace cqom
