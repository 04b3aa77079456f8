#include "cqom/config.hpp"

#include "cqom/units.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace cqom {

using nlohmann::json;

const char* scenario_name(ScenarioKind kind) noexcept {
    switch (kind) {
    case ScenarioKind::Empty: return "empty";
    case ScenarioKind::SingleField: return "single_field";
    case ScenarioKind::TwoFields: return "two_fields";
    case ScenarioKind::Custom: return "custom";
    }
    return "?";
}

RunConfig default_run_config() {
    RunConfig c;
    c.model = default_silicon_model();
    return c;
}

namespace {

// Reads keys of one object, recording problems instead of throwing.
class Section {
public:
    Section(const json& obj, std::string path, std::vector<std::string>& issues)
        : obj_(obj), path_(std::move(path)), issues_(issues) {}

    bool has(const char* key) const { return obj_.contains(key); }

    double number(const char* key, double fallback = 0.0) const {
        if (!obj_.contains(key)) {
            issues_.push_back("missing required key " + where(key));
            return fallback;
        }
        return as_number(key, fallback);
    }

    std::optional<double> optional_number(const char* key) const {
        if (!obj_.contains(key)) return std::nullopt;
        return as_number(key, 0.0);
    }

    double number_or(const char* key, double fallback) const {
        return optional_number(key).value_or(fallback);
    }

    std::string string_or(const char* key, const std::string& fallback) const {
        if (!obj_.contains(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_string()) {
            issues_.push_back(where(key) + " must be a string");
            return fallback;
        }
        return v.get<std::string>();
    }

    bool bool_or(const char* key, bool fallback) const {
        if (!obj_.contains(key)) return fallback;
        const auto& v = obj_.at(key);
        if (!v.is_boolean()) {
            issues_.push_back(where(key) + " must be true or false");
            return fallback;
        }
        return v.get<bool>();
    }

    std::optional<long long> optional_integer(const char* key) const {
        if (!obj_.contains(key)) return std::nullopt;
        const auto& v = obj_.at(key);
        if (!v.is_number_integer()) {
            issues_.push_back(where(key) + " must be an integer");
            return std::nullopt;
        }
        return v.get<long long>();
    }

    std::string where(const char* key) const { return path_ + "." + key; }

private:
    double as_number(const char* key, double fallback) const {
        const auto& v = obj_.at(key);
        if (!v.is_number()) {
            issues_.push_back(where(key) + " must be a number");
            return fallback;
        }
        return v.get<double>();
    }

    const json& obj_;
    std::string path_;
    std::vector<std::string>& issues_;
};

const json* section(const json& doc, const char* name, json::value_t type, std::vector<std::string>& issues) {
    if (!doc.contains(name)) return nullptr;
    const auto& s = doc.at(name);
    if (s.type() != type) {
        issues.push_back(std::string(name) + " has the wrong type");
        return nullptr;
    }
    return &s;
}

void require_positive(double v, const std::string& what, std::vector<std::string>& issues) {
    if (!(std::isfinite(v) && v > 0.0)) issues.push_back(what + " must be > 0");
}

void require_non_negative(double v, const std::string& what, std::vector<std::string>& issues) {
    if (!(std::isfinite(v) && v >= 0.0)) issues.push_back(what + " must be >= 0");
}

PhononBranch parse_branch(const json& obj, std::size_t i, std::vector<std::string>& issues) {
    const std::string path = "phonons[" + std::to_string(i) + "]";
    PhononBranch b;
    if (!obj.is_object()) {
        issues.push_back(path + " must be an object");
        return b;
    }
    Section s(obj, path, issues);
    const std::string kind = s.string_or("kind", "");
    if (kind == "acoustic") {
        const double v = s.number("velocity_mps");
        require_positive(v, s.where("velocity_mps"), issues);
        b.kind = Acoustic{v};
    } else if (kind == "vibrational") {
        const double nu = s.number("omega_hz");
        require_positive(nu, s.where("omega_hz"), issues);
        b.kind = Vibrational{hz_to_angular(nu)};
    } else {
        issues.push_back(path + ".kind must be \"acoustic\" or \"vibrational\"");
    }
    const double Gamma = s.number("Gamma_hz");
    const double f = s.number("f_hz");
    require_non_negative(Gamma, s.where("Gamma_hz"), issues);
    require_non_negative(f, s.where("f_hz"), issues);
    b.Gamma = hz_to_angular(Gamma);
    b.coupling_f = hz_to_angular(f);
    b.branch_id = s.string_or("branch_id", kind.empty() ? "branch" + std::to_string(i) : kind);
    return b;
}

void parse_scenario(const json& obj, ScenarioSpec& spec, std::vector<std::string>& issues) {
    Section s(obj, "scenario", issues);
    const std::string name = s.string_or("name", "empty");
    spec.thermal_phonons = s.bool_or("thermal_phonons", true);
    spec.k_a = s.number_or("k_a", spec.k_a);
    if (name == "empty") {
        spec.kind = ScenarioKind::Empty;
    } else if (name == "single_field") {
        spec.kind = ScenarioKind::SingleField;
        spec.k0_a = s.number("k0_a");
        spec.N0 = s.optional_number("N0");
        spec.power_w = s.optional_number("power_w");
        if (spec.N0.has_value() == spec.power_w.has_value())
            issues.push_back("scenario needs exactly one of N0 and power_w");
        if (spec.N0) require_non_negative(*spec.N0, "scenario.N0", issues);
        if (spec.power_w) require_non_negative(*spec.power_w, "scenario.power_w", issues);
    } else if (name == "two_fields") {
        spec.kind = ScenarioKind::TwoFields;
        spec.k1_a = s.number("k1_a");
        spec.N1 = s.number("N1");
        spec.k2_a = s.number("k2_a");
        spec.N2 = s.number("N2");
        require_non_negative(spec.N1, "scenario.N1", issues);
        require_non_negative(spec.N2, "scenario.N2", issues);
        if (spec.k1_a == spec.k2_a) issues.push_back("scenario.k1_a and k2_a must differ");
    } else if (name == "custom") {
        spec.kind = ScenarioKind::Custom;
        spec.background_N = s.number_or("background_N", 0.0);
        require_non_negative(spec.background_N, "scenario.background_N", issues);
        if (obj.contains("modes")) {
            const auto& modes = obj.at("modes");
            if (!modes.is_array()) {
                issues.push_back("scenario.modes must be an array");
            } else {
                for (std::size_t i = 0; i < modes.size(); ++i) {
                    Section m(modes[i], "scenario.modes[" + std::to_string(i) + "]", issues);
                    if (!modes[i].is_object()) {
                        issues.push_back("scenario.modes entries must be objects");
                        continue;
                    }
                    const double k_a = m.number("k_a");
                    const double N = m.number("N");
                    require_non_negative(N, m.where("N"), issues);
                    spec.modes.emplace_back(k_a, N);
                }
            }
        }
    } else {
        issues.push_back("unknown scenario name \"" + name + "\"");
    }
}

double hz_out(double omega) { return angular_to_hz_exact(omega); }

} // namespace

RunConfig parse_config(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ValidationError({std::string("config is not valid JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ValidationError({"config must be a JSON object"});

    std::vector<std::string> issues;
    RunConfig c = default_run_config();
    WaveguideModel& m = c.model;

    if (const json* w = section(doc, "waveguide", json::value_t::object, issues)) {
        Section s(*w, "waveguide", issues);
        m.geometry.radius_m = s.number("radius_m");
        m.geometry.length_m = s.number("length_m");
        m.temperature_k = s.number("temperature_k");
        require_positive(m.geometry.radius_m, "waveguide.radius_m", issues);
        require_positive(m.geometry.length_m, "waveguide.length_m", issues);
        require_non_negative(m.temperature_k, "waveguide.temperature_k", issues);
    }
    if (const json* p = section(doc, "photon", json::value_t::object, issues)) {
        Section s(*p, "photon", issues);
        const double omega0 = s.number("omega0_hz");
        const double gamma = s.number("gamma_hz");
        m.photon.group_velocity = s.number("group_velocity_mps");
        require_positive(omega0, "photon.omega0_hz", issues);
        require_non_negative(gamma, "photon.gamma_hz", issues);
        require_positive(m.photon.group_velocity, "photon.group_velocity_mps", issues);
        m.photon.omega0 = hz_to_angular(omega0);
        m.photon.gamma = hz_to_angular(gamma);
        m.photon.k_cutoff = s.number_or("k_cutoff_per_m", 20.0 / m.geometry.radius_m);
        m.photon.branch_id = s.string_or("branch_id", "mu0");
    }
    if (doc.contains("phonons")) {
        const auto& arr = doc.at("phonons");
        if (!arr.is_array()) {
            issues.push_back("phonons must be an array");
        } else {
            m.phonons.clear();
            for (std::size_t i = 0; i < arr.size(); ++i) m.phonons.push_back(parse_branch(arr[i], i, issues));
            if (m.phonons.empty()) issues.push_back("at least one phonon branch is required");
        }
    }
    if (const json* sc = section(doc, "scenario", json::value_t::object, issues)) parse_scenario(*sc, c.scenario, issues);
    if (const json* g = section(doc, "grid", json::value_t::object, issues)) {
        Section s(*g, "grid", issues);
        if (auto hw = s.optional_number("half_width_hz")) {
            require_positive(*hw, "grid.half_width_hz", issues);
            c.grid.half_width = hz_to_angular(*hw);
        }
        if (auto n = s.optional_integer("num_points")) {
            if (*n < 3 || *n % 2 == 0) issues.push_back("grid.num_points must be odd and >= 3");
            else c.grid.num_points = static_cast<std::size_t>(*n);
        }
        if (auto n = s.optional_integer("n_max")) {
            if (*n < 0) issues.push_back("grid.n_max must be >= 0");
            else c.grid.n_max = static_cast<int>(*n);
        }
        c.grid.allow_coarse = s.bool_or("allow_coarse", false);
    }
    if (const json* o = section(doc, "output", json::value_t::object, issues)) {
        Section s(*o, "output", issues);
        c.output_dir = s.string_or("dir", c.output_dir);
    }

    if (!issues.empty()) throw ValidationError(std::move(issues));
    validate(m);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render_config(const RunConfig& c) {
    const WaveguideModel& m = c.model;
    json doc;
    doc["waveguide"] = {{"radius_m", m.geometry.radius_m},
                        {"length_m", m.geometry.length_m},
                        {"temperature_k", m.temperature_k}};
    doc["photon"] = {{"omega0_hz", hz_out(m.photon.omega0)},
                     {"group_velocity_mps", m.photon.group_velocity},
                     {"gamma_hz", hz_out(m.photon.gamma)},
                     {"k_cutoff_per_m", m.photon.k_cutoff},
                     {"branch_id", m.photon.branch_id}};
    json phonons = json::array();
    for (const auto& b : m.phonons) {
        json j;
        if (const auto* a = std::get_if<Acoustic>(&b.kind)) {
            j["kind"] = "acoustic";
            j["velocity_mps"] = a->sound_velocity;
        } else {
            j["kind"] = "vibrational";
            j["omega_hz"] = hz_out(std::get<Vibrational>(b.kind).omega);
        }
        j["Gamma_hz"] = hz_out(b.Gamma);
        j["f_hz"] = hz_out(b.coupling_f);
        j["branch_id"] = b.branch_id;
        phonons.push_back(j);
    }
    doc["phonons"] = phonons;

    const ScenarioSpec& s = c.scenario;
    json sc = {{"name", scenario_name(s.kind)}, {"k_a", s.k_a}, {"thermal_phonons", s.thermal_phonons}};
    switch (s.kind) {
    case ScenarioKind::Empty: break;
    case ScenarioKind::SingleField:
        sc["k0_a"] = s.k0_a;
        if (s.N0) sc["N0"] = *s.N0;
        if (s.power_w) sc["power_w"] = *s.power_w;
        break;
    case ScenarioKind::TwoFields:
        sc["k1_a"] = s.k1_a;
        sc["N1"] = s.N1;
        sc["k2_a"] = s.k2_a;
        sc["N2"] = s.N2;
        break;
    case ScenarioKind::Custom: {
        json modes = json::array();
        for (const auto& [k_a, N] : s.modes) modes.push_back({{"k_a", k_a}, {"N", N}});
        sc["modes"] = modes;
        sc["background_N"] = s.background_N;
        break;
    }
    }
    doc["scenario"] = sc;

    json grid = {{"allow_coarse", c.grid.allow_coarse}};
    if (c.grid.half_width) grid["half_width_hz"] = hz_out(*c.grid.half_width);
    if (c.grid.num_points) grid["num_points"] = *c.grid.num_points;
    if (c.grid.n_max) grid["n_max"] = *c.grid.n_max;
    doc["grid"] = grid;
    doc["output"] = {{"dir", c.output_dir}};
    return doc.dump(2);
}

double wavenumber_from_ka(double k_a, const WaveguideModel& model) {
    return k_a / model.geometry.radius_m;
}

double resolve_N0(const ScenarioSpec& spec, const WaveguideModel& model) {
    if (spec.N0.has_value() == spec.power_w.has_value())
        throw ValidationError({"single-field scenario needs exactly one of N0 and power_w"});
    if (spec.N0) return *spec.N0;
    // Photon energy of the pump carrier omega0.
    return photons_from_power(*spec.power_w, model.photon.omega0, model.geometry.length_m,
                              model.photon.group_velocity);
}

Scenario to_scenario(const ScenarioSpec& spec, const WaveguideModel& model) {
    auto k = [&](double k_a) { return wavenumber_from_ka(k_a, model); };
    switch (spec.kind) {
    case ScenarioKind::Empty: return EmptyCavity{};
    case ScenarioKind::SingleField: return SingleField{k(spec.k0_a), resolve_N0(spec, model)};
    case ScenarioKind::TwoFields: return TwoFields{k(spec.k1_a), spec.N1, k(spec.k2_a), spec.N2};
    case ScenarioKind::Custom: {
        Custom out;
        for (const auto& [k_a, N] : spec.modes) out.modes.push_back({k(k_a), N});
        out.background_N = spec.background_N;
        return out;
    }
    }
    return EmptyCavity{};
}

} // namespace cqom
