#include "cqom/occupation.hpp"

#include "cqom/dispersion.hpp"
#include "cqom/units.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace cqom {

namespace {

struct ScenarioValidator {
    std::vector<std::string>& issues;

    void count(double N, const char* name) const {
        if (!(std::isfinite(N) && N >= 0.0)) issues.push_back(std::string(name) + " must be >= 0");
    }
    void operator()(const EmptyCavity&) const {}
    void operator()(const SingleField& s) const { count(s.N0, "N0"); }
    void operator()(const TwoFields& s) const {
        count(s.N1, "N1");
        count(s.N2, "N2");
        if (s.k1 == s.k2) issues.push_back("two-field scenario requires k1 != k2");
    }
    void operator()(const Custom& s) const {
        for (const auto& m : s.modes) count(m.N, "custom mode N");
        count(s.background_N, "background_N");
    }
};

} // namespace

void validate(const Scenario& scenario) {
    std::vector<std::string> issues;
    std::visit(ScenarioValidator{issues}, scenario);
    if (!issues.empty()) throw ValidationError(std::move(issues));
}

double bose_einstein(double omega, double temperature_k) {
    if (temperature_k < 0.0) throw std::invalid_argument("temperature must be >= 0");
    if (temperature_k == 0.0) return 0.0;
    if (!(omega > 0.0)) {
        std::ostringstream os;
        os << "Bose-Einstein occupation diverges for Omega = " << omega << " at T = " << temperature_k
           << " K (exclude the acoustic q = 0 mode)";
        throw DivergentOccupation(os.str());
    }
    const double x = constants::hbar * omega / (constants::k_boltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

double photon_flux(double power_w, double omega) {
    if (power_w < 0.0) throw std::invalid_argument("power must be >= 0");
    if (!(omega > 0.0)) throw std::invalid_argument("photon frequency must be > 0");
    return power_w / (constants::hbar * omega);
}

double photons_from_power(double power_w, double omega, double length_m, double group_velocity) {
    if (!(length_m > 0.0) || !(group_velocity > 0.0))
        throw std::invalid_argument("length and group velocity must be > 0");
    return photon_flux(power_w, omega) * (length_m / group_velocity);
}

OccupationState::OccupationState(std::map<int, double> pumped, double background, const WaveguideModel& model,
                                 bool thermal_phonons)
    : pumped_(std::move(pumped)),
      background_(background),
      branches_(model.phonons),
      mode_spacing_(two_pi / model.geometry.length_m),
      temperature_k_(model.temperature_k),
      thermal_(thermal_phonons) {
    for (const auto& [n, N] : pumped_)
        if (!(N >= 0.0)) throw ValidationError({"photon count must be >= 0 at mode " + std::to_string(n)});
    if (!(background_ >= 0.0)) throw ValidationError({"background photon count must be >= 0"});
}

double OccupationState::photon_N(int n) const {
    auto it = pumped_.find(n);
    return it == pumped_.end() ? background_ : it->second;
}

double OccupationState::phonon_n(int n, std::size_t alpha) const {
    if (!thermal_) return 0.0;
    const auto& branch = branches_.at(alpha);
    if (branch.is_acoustic() && n == 0) return 0.0;
    return bose_einstein(phonon_omega(branch, mode_spacing_ * n), temperature_k_);
}

OccupationState OccupationState::without_thermal_phonons() const {
    OccupationState copy = *this;
    copy.thermal_ = false;
    return copy;
}

namespace {

struct PhotonCounts {
    double spacing;
    std::map<int, double>& out;
    double& background;

    void add(double k, double N, const char* what) const {
        const int n = snap_to_mode(k, spacing, what);
        out[n] += N;
    }
    void operator()(const EmptyCavity&) const {}
    void operator()(const SingleField& s) const { add(s.k0, s.N0, "k0"); }
    void operator()(const TwoFields& s) const {
        add(s.k1, s.N1, "k1");
        add(s.k2, s.N2, "k2");
        if (out.size() != 2) throw ValidationError({"k1 and k2 snap to the same mode"});
    }
    void operator()(const Custom& s) const {
        for (const auto& m : s.modes) add(m.k, m.N, "custom k");
        background = s.background_N;
    }
};

} // namespace

OccupationState build_occupation(const Scenario& scenario, const WaveguideModel& model, bool thermal_phonons) {
    validate(scenario);
    std::map<int, double> pumped;
    double background = 0.0;
    std::visit(PhotonCounts{two_pi / model.geometry.length_m, pumped, background}, scenario);
    return OccupationState(std::move(pumped), background, model, thermal_phonons);
}

} // namespace cqom
