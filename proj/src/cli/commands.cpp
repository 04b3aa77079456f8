#include "cqom/cli/commands.hpp"

#include "cqom/cli/csv.hpp"
#include "cqom/diagnostics.hpp"
#include "cqom/dispersion.hpp"
#include "cqom/occupation.hpp"
#include "cqom/oracle.hpp"
#include "cqom/parallel.hpp"
#include "cqom/peaks.hpp"
#include "cqom/selfenergy.hpp"
#include "cqom/spectral.hpp"
#include "cqom/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cqom::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::size_t segment_points = 401;
constexpr double segment_half_widths = 15.0;
constexpr std::size_t max_grid_points = 4000001;

double dk_of(const WaveguideModel& m) { return two_pi / m.geometry.length_m; }

int mode_index(double k_a, const WaveguideModel& m, const char* what) {
    return snap_to_mode(wavenumber_from_ka(k_a, m), dk_of(m), what);
}

std::size_t points_for(double half_width, double spacing) {
    const double half = std::ceil(half_width / spacing - 1e-9);
    if (!(half >= 1.0) || 2.0 * half + 1.0 > static_cast<double>(max_grid_points)) {
        std::ostringstream os;
        os << "grid would need " << 2.0 * half + 1.0 << " points (limit " << max_grid_points
           << "); set grid.half_width_hz / grid.num_points or allow_coarse";
        throw ValidationError({os.str()});
    }
    return 2 * static_cast<std::size_t>(half) + 1;
}

// Main grid around `center`: configured values win, otherwise half width
// `default_hw` at linewidth/10 spacing.
FrequencyGrid main_grid(const RunConfig& c, double center, double default_hw, double linewidth) {
    const double hw = c.grid.half_width.value_or(default_hw);
    const std::size_t n = c.grid.num_points ? *c.grid.num_points : points_for(hw, linewidth / 10.0);
    FrequencyGrid g{center, hw, n};
    validate(g);
    check_resolution(g, linewidth, c.grid.allow_coarse);
    return g;
}

double positive_min_linewidth(const WaveguideModel& m) {
    double lw = std::numeric_limits<double>::infinity();
    if (m.photon.gamma > 0.0) lw = m.photon.gamma;
    for (const auto& b : m.phonons)
        if (b.Gamma > 0.0) lw = std::min(lw, b.Gamma);
    if (!std::isfinite(lw)) throw ValidationError({"every damping rate is zero; lines have no width"});
    return lw;
}

struct Interval {
    double lo, hi, width;
};

// Windows of +-15 widths around each center (relative to bare_line), merged
// where they overlap; sampled at 0.075 of the narrowest width inside.
std::vector<FrequencyGrid> segments(double bare_line, const std::vector<std::pair<double, double>>& centers_widths) {
    std::vector<Interval> iv;
    for (const auto& [c, w] : centers_widths) {
        if (!(w > 0.0)) continue;
        iv.push_back({c - segment_half_widths * w, c + segment_half_widths * w, w});
    }
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const auto& i : iv) {
        if (!merged.empty() && i.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, i.hi);
            merged.back().width = std::min(merged.back().width, i.width);
        } else {
            merged.push_back(i);
        }
    }
    std::vector<FrequencyGrid> out;
    const double step_per_width = 2.0 * segment_half_widths / static_cast<double>(segment_points - 1);
    for (const auto& m : merged) {
        const double hw = 0.5 * (m.hi - m.lo);
        const std::size_t n = points_for(hw, step_per_width * m.width);
        out.push_back(FrequencyGrid{bare_line + 0.5 * (m.lo + m.hi), hw, n});
    }
    return out;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::ios_base::failure("cannot create output directory " + dir + ": " + ec.message());
}

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void write_curves(const std::string& path, const std::vector<CurveRow>& rows, CommandResult& result) {
    std::ostringstream os;
    write_curve_rows(os, rows);
    write_file(path, os.str());
    result.files.push_back(path);
}

void append_selfenergy(std::vector<CurveRow>& rows, const SelfEnergyCurve& se, const std::vector<double>& delta,
                       const std::vector<double>& lambda, const std::vector<double>* sf, const std::string& id) {
    for (std::size_t i = 0; i < se.grid.size(); ++i) {
        CurveRow r;
        r.omega = se.grid.value(i);
        r.detuning = se.detuning(i);
        r.delta = delta[i];
        r.lambda = lambda[i];
        if (sf) r.sf = (*sf)[i];
        r.channel = id;
        rows.push_back(std::move(r));
    }
}

void append_sf(std::vector<CurveRow>& rows, const SpectralCurve& s, const std::string& id) {
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        CurveRow r;
        r.omega = s.grid.value(i);
        r.detuning = s.detuning(i);
        r.sf = s.samples[i];
        r.channel = id;
        rows.push_back(std::move(r));
    }
}

void collect_peaks(const PeakReport& report, const std::string& source, CommandResult& result) {
    for (const auto& p : report.peaks) {
        result.peaks.push_back({source, p.center, p.shift_vs_bare, p.fwhm, p.height,
                                p.channel ? p.channel->label : std::string(), p.low_confidence});
    }
}

void write_peaks(const std::string& dir, CommandResult& result, const std::string& classification = "") {
    Table t;
    t.header = {"source", "center_rad_s", "shift_rad_s", "fwhm_rad_s", "height", "channel_id", "low_confidence",
                "classification"};
    for (const auto& p : result.peaks) {
        t.rows.push_back({p.source, format_number(p.center), format_number(p.shift), format_number(p.fwhm),
                          format_number(p.height), p.channel, p.low_confidence ? "1" : "0", classification});
    }
    std::ostringstream os;
    t.write(os);
    const std::string path = path_in(dir, "peaks.csv");
    write_file(path, os.str());
    result.files.push_back(path);
}

void write_manifest(const RunConfig& config, const std::string& dir, const std::string& command, json derived,
                    CommandResult& result) {
    json doc = json::parse(render_config(config));
    std::vector<std::string> outputs;
    for (const auto& f : result.files) outputs.push_back(fs::path(f).filename().string());
    doc["manifest"] = {{"tool_version", tool_version},
                       {"timestamp", iso_timestamp()},
                       {"command", command},
                       {"outputs", outputs},
                       {"warnings", result.warnings},
                       {"derived", std::move(derived)},
                       {"checks_passed", result.passed}};
    const std::string path = path_in(dir, "manifest.json");
    write_file(path, doc.dump(2) + "\n");
    result.manifest_path = path;
}

// Sum of component curves on one grid.
struct PhotonCurves {
    SelfEnergyCurve m;
    SelfEnergyCurve em;
    SelfEnergyCurve total;
    SpectralCurve sf;
};

PhotonCurves photon_curves(int k, const std::vector<PoleTerm>& m_terms, const std::vector<PoleTerm>& em_terms,
                           const WaveguideModel& model, const FrequencyGrid& grid) {
    const double bare = photon_bare_line(k, model);
    SelfEnergyCurve m = evaluate_poles(m_terms, grid, bare);
    SelfEnergyCurve em = evaluate_poles(em_terms, grid, bare);
    SelfEnergyCurve total = m;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        total.delta[i] = m.delta[i] + em.delta[i];
        total.lambda[i] = m.lambda[i] + em.lambda[i];
    }
    total.components = PhotonSplit{m.delta, m.lambda, em.delta, em.lambda};
    SpectralCurve sf = dressed_photon_sf(k, total, model);
    return {std::move(m), std::move(em), std::move(total), std::move(sf)};
}

void append_photon_curves(std::vector<CurveRow>& se_rows, std::vector<CurveRow>& sf_rows, const PhotonCurves& pc,
                          const WaveguideModel& model, const std::string& where) {
    append_selfenergy(se_rows, pc.m, pc.m.delta, pc.m.lambda, nullptr, "M" + where);
    append_selfenergy(se_rows, pc.em, pc.em.delta, pc.em.lambda, nullptr, "EM" + where);
    append_selfenergy(se_rows, pc.total, pc.total.delta, pc.total.lambda, &pc.sf.samples, "total" + where);
    append_sf(sf_rows, pc.sf, "dressed" + where);
    if (model.photon.gamma > 0.0) append_sf(sf_rows, bare_sf(pc.total.bare_line, model.photon.gamma, pc.sf.grid), "bare" + where);
}

std::vector<std::pair<double, double>> selected_channels(const std::vector<PoleTerm>& terms, int q_limit) {
    std::vector<std::pair<double, double>> out;
    for (const auto& t : terms)
        if (std::abs(t.id.q) <= q_limit && t.weight != 0.0) out.emplace_back(t.center, t.width);
    return out;
}

int photon_n_max(const RunConfig& c, const FrequencyGrid& main, int k) {
    if (c.grid.n_max) return *c.grid.n_max;
    double reach = main.half_width;
    for (const auto& b : c.model.phonons)
        if (!b.is_acoustic())
            reach = std::max(reach, std::get<Vibrational>(b.kind).omega + segment_half_widths * (b.Gamma + c.model.photon.gamma));
    return default_n_max(c.model, reach, dk_of(c.model) * k);
}

std::vector<PredictedResonance> with_line(std::vector<PredictedResonance> p) {
    p.push_back({0.0, 0, Process::Scattering, "line"});
    return p;
}

} // namespace

CommandResult cmd_empty(const RunConfig& config, const std::string& out_dir) {
    diag::ScopedCapture capture;
    CommandResult result;
    const WaveguideModel& model = config.model;
    validate(model);
    const int k = mode_index(config.scenario.k_a, model, "k");
    // A custom scenario keeps its photon occupations; anything else is empty.
    const Scenario scenario = config.scenario.kind == ScenarioKind::Custom ? to_scenario(config.scenario, model)
                                                                           : Scenario{EmptyCavity{}};
    const OccupationState occ = build_occupation(scenario, model, config.scenario.thermal_phonons);

    const double lw = positive_min_linewidth(model);
    const FrequencyGrid grid = main_grid(config, photon_bare_line(k, model), 100.0 * lw, lw);
    const ModeGrid modes = build_mode_grid(model.geometry.length_m, photon_n_max(config, grid, k));
    const auto m_terms = photon_channels_M(k, occ, model, modes);
    const auto em_terms = photon_channels_EM(k, occ, model, modes);

    ensure_dir(out_dir);
    std::vector<CurveRow> se_rows, sf_rows, ch_rows;
    const auto predicted = with_line(predictions_from(m_terms, model));

    const PhotonCurves main = photon_curves(k, m_terms, em_terms, model, grid);
    append_photon_curves(se_rows, sf_rows, main, model, "");
    collect_peaks(find_peaks(main.sf, predicted), "sf", result);
    for (const FrequencyGrid& seg : segments(main.total.bare_line, selected_channels(m_terms, 1))) {
        const PhotonCurves pc = photon_curves(k, m_terms, em_terms, model, seg);
        append_photon_curves(se_rows, sf_rows, pc, model, ":segment");
        collect_peaks(find_peaks(pc.sf, predicted), "sf", result);
    }

    // Single-channel curves versus omega - omega_{k+q}.
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        for (int q = -1; q <= 1; ++q) {
            if (model.phonons[a].is_acoustic() && q == 0) continue;
            if (!modes.contains(q)) continue;
            for (Process p : {Process::AntiStokes, Process::Stokes}) {
                const double Omega = phonon_omega(model.phonons[a], dk_of(model) * q);
                const double W = model.phonons[a].Gamma + model.photon.gamma;
                const double c = p == Process::Stokes ? Omega : -Omega;
                const FrequencyGrid g{c, segment_half_widths * W, segment_points};
                SelfEnergyCurve ch = channel_detuning_curve(k, q, a, p, occ, model, g);
                const ChannelId id{Component::PhotonM, p, a, q, k + q};
                const std::string label = id.label(model);
                const double partner = photon_bare_line(k + q, model);
                for (std::size_t i = 0; i < g.size(); ++i)
                    ch_rows.push_back({partner + ch.detuning(i), ch.detuning(i), ch.delta[i], ch.lambda[i],
                                       std::nullopt, label});
                const PredictedResonance pr{c, a, p, label};
                collect_peaks(find_peaks(ch, std::span(&pr, 1)), "channel", result);
            }
        }
    }

    write_curves(path_in(out_dir, "channels.csv"), ch_rows, result);
    write_curves(path_in(out_dir, "selfenergy.csv"), se_rows, result);
    write_curves(path_in(out_dir, "sf.csv"), sf_rows, result);
    write_peaks(out_dir, result);

    const auto sf_peaks = find_peaks(main.sf);
    json derived = {{"photon_mode_index", k},
                    {"k_per_m", dk_of(model) * k},
                    {"omega_k_rad_s", main.total.bare_line},
                    {"n_max", modes.n_max},
                    {"channel_terms", m_terms.size() + em_terms.size()}};
    if (!sf_peaks.peaks.empty()) {
        derived["dominant_fwhm_rad_s"] = sf_peaks.dominant().fwhm;
        derived["gamma_rad_s"] = model.photon.gamma;
    }
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        if (model.phonons[a].is_acoustic()) continue;
        derived["thermal_n_" + model.phonons[a].branch_id] = occ.phonon_n(0, a);
    }
    result.warnings = capture.messages();
    write_manifest(config, out_dir, "empty", derived, result);
    return result;
}

CommandResult cmd_single_field(const RunConfig& config, const std::string& out_dir) {
    diag::ScopedCapture capture;
    CommandResult result;
    const WaveguideModel& model = config.model;
    validate(model);
    if (config.scenario.kind != ScenarioKind::SingleField)
        throw ValidationError({"single-field run needs scenario.name = single_field"});
    const double N0 = resolve_N0(config.scenario, model);
    const int k0 = mode_index(config.scenario.k0_a, model, "k0");
    const OccupationState occ({{k0, N0}}, 0.0, model, config.scenario.thermal_phonons);

    const double lw = positive_min_linewidth(model);
    const FrequencyGrid grid = main_grid(config, photon_bare_line(k0, model), 100.0 * lw, lw);
    const ModeGrid modes = build_mode_grid(model.geometry.length_m, photon_n_max(config, grid, k0));
    const auto m_terms = photon_channels_M(k0, occ, model, modes);
    const auto em_terms = photon_channels_EM(k0, occ, model, modes);

    ensure_dir(out_dir);
    std::vector<CurveRow> se_rows, sf_rows, ph_rows;
    const auto predicted = predictions_from(em_terms, model);

    std::vector<FrequencyGrid> grids{grid};
    auto centers = selected_channels(em_terms, 1);
    for (const auto& g : segments(photon_bare_line(k0, model), centers)) grids.push_back(g);

    double peak_em = 0.0;
    double em_at_line = 0.0;
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
        const std::string where = gi == 0 ? "" : ":segment";
        const PhotonCurves pc = photon_curves(k0, m_terms, em_terms, model, grids[gi]);
        append_photon_curves(se_rows, sf_rows, pc, model, where);
        const SelfEnergyCurve cf = pumped_photon_em_closed_form(k0, occ, model, grids[gi]);
        append_selfenergy(se_rows, cf, cf.delta, cf.lambda, nullptr, "EM:closed_form" + where);
        for (double v : pc.em.lambda) peak_em = std::max(peak_em, std::abs(v));
        if (gi == 0) em_at_line = pc.em.lambda[static_cast<std::size_t>(grids[0].mid())];

        collect_peaks(find_peaks(pc.em.lambda, grids[gi], pc.em.bare_line, predicted), "lambda_em+", result);
        std::vector<double> neg(pc.em.lambda.size());
        std::transform(pc.em.lambda.begin(), pc.em.lambda.end(), neg.begin(), [](double v) { return -v; });
        collect_peaks(find_peaks(neg, grids[gi], pc.em.bare_line, predicted), "lambda_em-", result);
        collect_peaks(find_peaks(pc.sf, with_line(predicted)), "sf", result);
    }

    // Phonon line q = 1 of every branch.
    json phonon_summary = json::array();
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        const int q = 1;
        const double bare = phonon_bare_line(q, a, model);
        RunConfig local = config;
        local.grid.half_width.reset();
        local.grid.num_points.reset();
        const FrequencyGrid pg = main_grid(local, bare, 100.0 * lw, lw);
        if (a == 0) single_field_closed_forms(k0, N0, q, a, model, grid, pg); // limit warnings
        const SelfEnergyCurve general = phonon_selfenergy(q, a, occ, model, pg);
        const SelfEnergyCurve closed = pumped_phonon_closed_form(q, a, occ, model, pg);
        const SpectralCurve sf = dressed_phonon_sf(q, a, general, model);
        const std::string tag = model.phonons[a].branch_id + ":q=1";
        append_selfenergy(ph_rows, general, general.delta, general.lambda, &sf.samples, "phon:" + tag);
        append_selfenergy(ph_rows, closed, closed.delta, closed.lambda, nullptr, "phon:closed_form:" + tag);
        double peak = 0.0;
        for (double v : general.lambda) peak = std::max(peak, std::abs(v));
        phonon_summary.push_back({{"branch", model.phonons[a].branch_id}, {"q", q}, {"max_abs_lambda_rad_s", peak}});
    }

    write_curves(path_in(out_dir, "selfenergy.csv"), se_rows, result);
    write_curves(path_in(out_dir, "sf.csv"), sf_rows, result);
    write_curves(path_in(out_dir, "phonon.csv"), ph_rows, result);
    write_peaks(out_dir, result);

    json n0 = {{"N0", N0}};
    if (config.scenario.power_w) {
        const double omega = model.photon.omega0;
        n0["source"] = "power";
        n0["power_w"] = *config.scenario.power_w;
        n0["pump_omega_rad_s"] = omega;
        n0["flux_per_s"] = photon_flux(*config.scenario.power_w, omega);
        n0["transit_time_s"] = model.geometry.length_m / model.photon.group_velocity;
        n0["formula"] = "N0 = P / (hbar omega0) * L / v_g";
    } else {
        n0["source"] = "given";
    }
    double max_Gamma = 0.0;
    for (const auto& b : model.phonons) max_Gamma = std::max(max_Gamma, b.Gamma);
    json derived = {{"photon_mode_index", k0},
                    {"N0_derivation", n0},
                    {"n_max", modes.n_max},
                    {"lambda_em_at_line_rad_s", em_at_line},
                    {"max_abs_lambda_em_rad_s", peak_em},
                    {"max_abs_lambda_em_over_max_Gamma", max_Gamma > 0.0 ? peak_em / max_Gamma : 0.0},
                    {"phonon_lines", phonon_summary}};
    result.warnings = capture.messages();
    write_manifest(config, out_dir, "single-field", derived, result);
    return result;
}

namespace {

const char* classify(double lambda_res) {
    if (lambda_res > 0.0) return "cooling";
    if (lambda_res < 0.0) return "heating";
    return "neutral";
}

std::size_t preferred_branch(const WaveguideModel& model, int q0) {
    for (std::size_t a = 0; a < model.phonons.size(); ++a) {
        if (model.phonons[a].is_acoustic() && q0 == 0) continue;
        if (std::abs(resonance_mismatch(q0, a, model)) <= resonance_tolerance(model)) return a;
    }
    for (std::size_t a = 0; a < model.phonons.size(); ++a)
        if (!model.phonons[a].is_acoustic()) return a;
    return 0;
}

} // namespace

CommandResult cmd_two_field(const RunConfig& config, const std::string& out_dir) {
    diag::ScopedCapture capture;
    CommandResult result;
    const WaveguideModel& model = config.model;
    validate(model);
    const ScenarioSpec& s = config.scenario;
    if (s.kind != ScenarioKind::TwoFields) throw ValidationError({"two-field run needs scenario.name = two_fields"});
    const OccupationState occ = build_occupation(to_scenario(s, model), model, s.thermal_phonons);
    const int k1 = mode_index(s.k1_a, model, "k1");
    const int k2 = mode_index(s.k2_a, model, "k2");
    const int q0 = k1 - k2;
    const std::size_t alpha = preferred_branch(model, q0);
    const PhononBranch& b = model.phonons[alpha];
    if (b.is_acoustic() && q0 == 0) throw ValidationError({"q0 = 0 selects the excluded acoustic mode"});
    const double mismatch = resonance_mismatch(q0, alpha, model);
    const bool on_resonance = std::abs(mismatch) <= resonance_tolerance(model);

    json derived = {{"k1_index", k1}, {"k2_index", k2}, {"q0_index", q0}, {"branch", b.branch_id},
                    {"resonance_mismatch_rad_s", mismatch}, {"on_resonance", on_resonance}};
    double lambda_res_est = 0.0;
    if (on_resonance) {
        lambda_res_est = resonant_phonon_damping(s.N1, s.N2, b.coupling_f, model.photon.gamma);
    } else {
        const int limit = std::max(64, 4 * std::abs(q0));
        const int nearest = nearest_resonant_mode(alpha, model, limit);
        std::ostringstream os;
        os << "resonance condition unreachable on the grid for q0 = " << q0 << " (" << b.branch_id
           << "); nearest achievable q = " << nearest << " with mismatch "
           << angular_to_hz(resonance_mismatch(nearest, alpha, model)) << " Hz; using the general phonon self-energy";
        diag::warn(os.str());
        derived["nearest_resonant_q_index"] = nearest;
        derived["nearest_resonant_mismatch_rad_s"] = resonance_mismatch(nearest, alpha, model);
    }

    const double bare = phonon_bare_line(q0, alpha, model);
    const double plw = positive_min_linewidth(model);
    const double default_hw = std::max(100.0 * plw, 10.0 * (b.Gamma + std::abs(lambda_res_est)));
    const FrequencyGrid grid = main_grid(config, bare, default_hw, plw);

    const SelfEnergyCurve general = phonon_selfenergy(q0, alpha, occ, model, grid);
    std::optional<SelfEnergyCurve> resonant;
    if (on_resonance) resonant = two_field_resonant_phonon(k1, s.N1, k2, s.N2, alpha, model, grid);
    const SelfEnergyCurve& used = resonant ? *resonant : general;
    const SpectralCurve sf = dressed_phonon_sf(q0, alpha, used, model);

    const std::size_t mid = static_cast<std::size_t>(grid.mid());
    const double lambda_res = used.lambda[mid];
    const std::string cls = classify(lambda_res);

    ensure_dir(out_dir);
    std::vector<CurveRow> rows, sf_rows;
    const std::string tag = b.branch_id + ":q=" + std::to_string(q0);
    if (resonant) append_selfenergy(rows, *resonant, resonant->delta, resonant->lambda, &sf.samples, "resonant:" + tag);
    append_selfenergy(rows, general, general.delta, general.lambda, resonant ? nullptr : &sf.samples, "general:" + tag);
    append_sf(sf_rows, sf, "dressed:" + tag);
    if (b.Gamma > 0.0) append_sf(sf_rows, bare_sf(bare, b.Gamma, grid), "bare:" + tag);
    const PredictedResonance pr{0.0, alpha, Process::Scattering, tag};
    collect_peaks(find_peaks(sf, std::span(&pr, 1)), "phonon_sf", result);

    write_curves(path_in(out_dir, "phonon_selfenergy.csv"), rows, result);
    write_curves(path_in(out_dir, "phonon_sf.csv"), sf_rows, result);
    write_peaks(out_dir, result, cls);

    result.classification = cls;
    result.lambda_res = lambda_res;
    derived["lambda_res_rad_s"] = lambda_res;
    derived["general_lambda_at_line_rad_s"] = general.lambda[mid];
    derived["Gamma_rad_s"] = b.Gamma;
    derived["lambda_res_over_Gamma"] = b.Gamma > 0.0 ? lambda_res / b.Gamma : 0.0;
    derived["classification"] = cls;
    derived["gain_regions"] = sf.gain_regions.size();
    result.warnings = capture.messages();
    write_manifest(config, out_dir, "two-field", derived, result);
    return result;
}

namespace {

struct OracleCheck {
    std::string name;
    OracleSystem system;
    SpectralCurve closed;
};

FrequencyGrid oracle_grid(const OracleSystem& system, const RunConfig& config) {
    double reach = 0.0;
    double lw = system.damping > 0.0 ? system.damping : std::numeric_limits<double>::infinity();
    for (const auto& c : system.channels) {
        if (c.coupling * c.source == 0.0) continue;
        reach = std::max(reach, std::abs(c.offset) + 5.0 * c.width);
        lw = std::min(lw, c.width);
    }
    reach = std::max(reach, 50.0 * system.damping);
    if (!std::isfinite(lw) || !(lw > 0.0)) throw ValidationError({system.subject + ": no damping"});
    const double hw = config.grid.half_width.value_or(reach);
    const std::size_t n = config.grid.num_points ? *config.grid.num_points : points_for(hw, lw / 10.0);
    FrequencyGrid g{system.frame, hw, n};
    validate(g);
    return g;
}

} // namespace

CommandResult cmd_oracle_check(const RunConfig& config, const std::string& out_dir, OracleOptions options) {
    diag::ScopedCapture capture;
    CommandResult result;
    const WaveguideModel& model = config.model;
    validate(model);
    const int n_max = config.grid.n_max.value_or(options.default_n_max);
    if (2 * n_max > 64) throw ValidationError({"oracle check is limited to 64 modes (n_max <= 32)"});
    const ModeGrid modes = build_mode_grid(model.geometry.length_m, n_max);
    const ScenarioSpec& s = config.scenario;
    const OccupationState occ = build_occupation(to_scenario(s, model), model, s.thermal_phonons);

    std::vector<OracleCheck> checks;
    auto photon_check = [&](const std::string& name, int k) {
        OracleSystem sys = photon_oracle_system(k, occ, model, modes);
        const FrequencyGrid g = oracle_grid(sys, config);
        const SelfEnergyCurve se = photon_selfenergy(k, occ, model, modes, g);
        checks.push_back({name, std::move(sys), dressed_photon_sf(k, se, model)});
    };
    switch (s.kind) {
    case ScenarioKind::Empty:
    case ScenarioKind::Custom: photon_check("photon", mode_index(s.k_a, model, "k")); break;
    case ScenarioKind::SingleField: photon_check("photon", mode_index(s.k0_a, model, "k0")); break;
    case ScenarioKind::TwoFields: {
        const int k1 = mode_index(s.k1_a, model, "k1");
        const int k2 = mode_index(s.k2_a, model, "k2");
        const int q0 = k1 - k2;
        const std::size_t alpha = preferred_branch(model, q0);
        std::vector<int> ks;
        for (const auto& [n, N] : occ.pumped())
            for (int d = -n_max; d <= n_max; ++d) ks.push_back(n + d);
        std::sort(ks.begin(), ks.end());
        ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
        OracleSystem full = phonon_oracle_system(q0, alpha, occ, model, ks);
        const FrequencyGrid g = oracle_grid(full, config);
        const SelfEnergyCurve se = phonon_selfenergy(q0, alpha, occ, model, g);
        checks.push_back({"phonon", std::move(full), dressed_phonon_sf(q0, alpha, se, model)});
        if (std::abs(resonance_mismatch(q0, alpha, model)) <= resonance_tolerance(model)) {
            const int only[] = {k1};
            OracleSystem dom = phonon_oracle_system(q0, alpha, occ, model, only);
            const FrequencyGrid gd = oracle_grid(dom, config);
            const SelfEnergyCurve rs = two_field_resonant_phonon(k1, s.N1, k2, s.N2, alpha, model, gd);
            checks.push_back({"phonon_dominant", std::move(dom), dressed_phonon_sf(q0, alpha, rs, model)});
        }
        break;
    }
    }

    struct Outcome {
        std::optional<SpectralCurve> oracle;
        double l2{std::numeric_limits<double>::infinity()};
        double peak_offset{std::numeric_limits<double>::infinity()};
        bool passed{false};
        std::string diagnostics;
    };
    std::vector<Outcome> outcomes(checks.size());
    parallel_for(checks.size(), [&](std::size_t i) {
        Outcome& o = outcomes[i];
        try {
            SpectralCurve sf = oracle_sf(checks[i].system, checks[i].closed.grid, options.dt_scale);
            o.l2 = l2_relative(sf.samples, checks[i].closed.samples);
            const auto pa = find_peaks(sf);
            const auto pb = find_peaks(checks[i].closed);
            if (!pa.peaks.empty() && !pb.peaks.empty())
                o.peak_offset = std::abs(pa.dominant().shift_vs_bare - pb.dominant().shift_vs_bare);
            o.passed = o.l2 <= 0.01 && o.peak_offset <= checks[i].closed.grid.spacing();
            if (!o.passed) o.diagnostics = "deviation above threshold";
            o.oracle = std::move(sf);
        } catch (const std::invalid_argument& e) {
            o.diagnostics = std::string("precondition violated: ") + e.what();
        } catch (const IntegrationError& e) {
            o.diagnostics = std::string("integration failed: ") + e.what();
        }
    });

    ensure_dir(out_dir);
    std::vector<CurveRow> rows;
    Table report;
    report.header = {"check", "subject", "l2_relative", "peak_offset_rad_s", "grid_spacing_rad_s", "passed",
                     "diagnostics"};
    json derived = json::array();
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& c = checks[i];
        const auto& o = outcomes[i];
        append_sf(rows, c.closed, "closed_form:" + c.name);
        if (o.oracle) append_sf(rows, *o.oracle, "oracle:" + c.name);
        report.rows.push_back({c.name, c.system.subject, format_number(o.l2), format_number(o.peak_offset),
                               format_number(c.closed.grid.spacing()), o.passed ? "1" : "0", o.diagnostics});
        derived.push_back({{"check", c.name}, {"l2_relative", o.l2}, {"passed", o.passed},
                           {"diagnostics", o.diagnostics}});
        result.passed = result.passed && o.passed;
    }
    write_curves(path_in(out_dir, "sf.csv"), rows, result);
    std::ostringstream os;
    report.write(os);
    write_file(path_in(out_dir, "oracle_report.csv"), os.str());
    result.files.push_back(path_in(out_dir, "oracle_report.csv"));
    result.warnings = capture.messages();
    write_manifest(config, out_dir, "oracle-check", {{"checks", derived}, {"dt_scale", options.dt_scale},
                                                     {"n_max", n_max}}, result);
    return result;
}

const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> axes{"T", "N0", "N1", "N2", "k_a", "f_hz", "Gamma_hz", "gamma_hz"};
    return axes;
}

RunConfig apply_sweep_value(const RunConfig& base, const std::string& axis, double v) {
    RunConfig c = base;
    ScenarioSpec& s = c.scenario;
    if (axis == "T") {
        c.model.temperature_k = v;
    } else if (axis == "N0") {
        if (s.kind != ScenarioKind::SingleField) throw ValidationError({"sweep axis N0 needs a single_field scenario"});
        s.N0 = v;
        s.power_w.reset();
    } else if (axis == "N1" || axis == "N2") {
        if (s.kind != ScenarioKind::TwoFields) throw ValidationError({"sweep axis " + axis + " needs a two_fields scenario"});
        (axis == "N1" ? s.N1 : s.N2) = v;
    } else if (axis == "k_a") {
        if (s.kind == ScenarioKind::SingleField) s.k0_a = v;
        else if (s.kind == ScenarioKind::TwoFields) throw ValidationError({"sweep axis k_a is ambiguous for two_fields"});
        else s.k_a = v;
    } else if (axis == "f_hz") {
        for (auto& b : c.model.phonons) b.coupling_f = hz_to_angular(v);
    } else if (axis == "Gamma_hz") {
        for (auto& b : c.model.phonons) b.Gamma = hz_to_angular(v);
    } else if (axis == "gamma_hz") {
        c.model.photon.gamma = hz_to_angular(v);
    } else {
        std::string names;
        for (const auto& a : sweep_axes()) names += (names.empty() ? "" : ", ") + a;
        throw ValidationError({"unknown sweep axis \"" + axis + "\" (expected one of " + names + ")"});
    }
    validate(c.model);
    return c;
}

CommandResult cmd_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values,
                        const std::string& out_dir) {
    if (values.empty()) throw ValidationError({"sweep needs at least one value"});
    std::vector<RunConfig> runs;
    for (double v : values) runs.push_back(apply_sweep_value(config, axis, v));

    ensure_dir(out_dir);
    std::vector<CommandResult> results(runs.size());
    std::vector<std::string> dirs(runs.size());
    std::vector<std::exception_ptr> errors(runs.size());
    parallel_for(runs.size(), [&](std::size_t i) {
        dirs[i] = path_in(out_dir, axis + "_" + std::to_string(i));
        runs[i].output_dir = dirs[i];
        try {
            switch (runs[i].scenario.kind) {
            case ScenarioKind::Empty:
            case ScenarioKind::Custom: results[i] = cmd_empty(runs[i], dirs[i]); break;
            case ScenarioKind::SingleField: results[i] = cmd_single_field(runs[i], dirs[i]); break;
            case ScenarioKind::TwoFields: results[i] = cmd_two_field(runs[i], dirs[i]); break;
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    CommandResult out;
    Table t;
    t.header = {"axis", "value", "run_dir", "source", "center_rad_s", "shift_rad_s", "fwhm_rad_s", "height",
                "channel_id", "classification", "lambda_res_rad_s"};
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = results[i];
        out.passed = out.passed && r.passed;
        for (const auto& w : r.warnings) out.warnings.push_back(axis + "_" + std::to_string(i) + ": " + w);
        const std::string cls = r.classification.value_or("");
        const std::string lres = r.lambda_res ? format_number(*r.lambda_res) : "";
        const std::string dir = fs::path(dirs[i]).filename().string();
        if (r.peaks.empty()) t.rows.push_back({axis, format_number(values[i]), dir, "", "", "", "", "", "", cls, lres});
        for (const auto& p : r.peaks) {
            t.rows.push_back({axis, format_number(values[i]), dir, p.source, format_number(p.center),
                              format_number(p.shift), format_number(p.fwhm), format_number(p.height), p.channel,
                              cls, lres});
        }
        out.peaks.insert(out.peaks.end(), r.peaks.begin(), r.peaks.end());
    }
    std::ostringstream os;
    t.write(os);
    const std::string path = path_in(out_dir, "summary.csv");
    write_file(path, os.str());
    out.files.push_back(path);
    json derived = {{"axis", axis}, {"values", values}, {"runs", dirs.size()}};
    RunConfig snapshot = config;
    snapshot.output_dir = out_dir;
    write_manifest(snapshot, out_dir, "sweep", derived, out);
    return out;
}

} // namespace cqom::cli
