#include <doctest.h>

#include "cqom/diagnostics.hpp"
#include "cqom/oracle.hpp"
#include "cqom/peaks.hpp"
#include "cqom/selfenergy.hpp"
#include "cqom/units.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace cqom;

namespace {

// Exact solution of the linear system behind `evolve`, via eigendecomposition.
std::vector<cplx> exact_g(const OracleSystem& s, double dt, std::size_t steps) {
    const auto m = static_cast<Eigen::Index>(s.channels.size());
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m + 1, m + 1);
    A(0, 0) = -0.5 * s.damping;
    for (Eigen::Index c = 0; c < m; ++c) {
        const auto& ch = s.channels[static_cast<std::size_t>(c)];
        A(0, c + 1) = cplx(0.0, -ch.coupling);
        A(c + 1, 0) = cplx(0.0, -ch.source);
        A(c + 1, c + 1) = cplx(-0.5 * ch.width, -ch.offset);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
    const Eigen::MatrixXcd V = es.eigenvectors();
    Eigen::VectorXcd y0 = Eigen::VectorXcd::Zero(m + 1);
    y0(0) = cplx(0.0, -1.0);
    const Eigen::VectorXcd c = V.partialPivLu().solve(y0);
    std::vector<cplx> g(steps + 1);
    for (std::size_t n = 0; n <= steps; ++n) {
        const double t = dt * static_cast<double>(n);
        cplx acc = 0.0;
        for (Eigen::Index j = 0; j <= m; ++j) acc += V(0, j) * c(j) * std::exp(es.eigenvalues()(j) * t);
        g[n] = acc;
    }
    return g;
}

double max_rel_error(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double e = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
    return e;
}

OracleSystem three_level(double offset) {
    OracleSystem s;
    s.damping = 1.0;
    s.subject = "three-level";
    s.channels = {{offset, 0.5, 20.0, 3.0, "P1"}, {-offset, 0.5, 20.0, 5.0, "P2"}};
    return s;
}

} // namespace

TEST_CASE("uncoupled photon decays exactly as the bare mode") {
    WaveguideModel m = desk_scale_model();
    for (auto& b : m.phonons) b.coupling_f = 0.0;
    const OccupationState occ = build_occupation(EmptyCavity{}, m);
    const double dt = 1.0 / (50.0 * 0.5 * m.photon.gamma);
    const Trajectory tr = evolve_photon_gf(20, occ, m, build_mode_grid(m.geometry.length_m, 4), 30.0 / m.photon.gamma, dt);
    CHECK(tr.frame == photon_bare_line(20, m));
    // RK4 advances a single decaying mode by its amplification polynomial R(z).
    const double z = -0.5 * m.photon.gamma * dt;
    const double R = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
    double err_rk = 0.0, err = 0.0;
    for (std::size_t n = 0; n < tr.g.size(); ++n) {
        const double step = static_cast<double>(n);
        const cplx rk(0.0, -std::pow(R, step));
        const cplx exact(0.0, -std::exp(z * step));
        err_rk = std::max(err_rk, std::abs(tr.g[n] - rk) / std::abs(rk));
        err = std::max(err, std::abs(tr.g[n] - exact) / std::abs(exact));
    }
    CHECK(err_rk <= 1e-12);
    CHECK(err <= 1e-7);
}

TEST_CASE("uncoupled or uniformly pumped phonon decays as the bare mode") {
    WaveguideModel m = desk_scale_model();
    const int ks[] = {18, 19, 20, 21, 22};
    const double Gamma = m.phonons[1].Gamma;
    const double dt = 1.0 / (50.0 * (std::abs(m.photon.group_velocity * 2 * two_pi) + 2 * m.photon.gamma));
    const OccupationState uniform = build_occupation(Custom{{}, 7.0}, m);
    const Trajectory tr = evolve_phonon_gf(2, 1, uniform, m, ks, 20.0 / Gamma, dt);
    double err = 0.0;
    for (std::size_t n = 0; n < tr.g.size(); ++n) {
        const cplx exact(0.0, -std::exp(-0.5 * Gamma * dt * static_cast<double>(n)));
        err = std::max(err, std::abs(tr.g[n] - exact));
    }
    CHECK(err <= 1e-8);
}

TEST_CASE("three-level system matches its eigen-solution and beats") {
    const OracleSystem s = three_level(0.0);
    const double dt = 1.0 / (50.0 * s.max_rate());
    const Trajectory tr = evolve(s, 20.0, dt);
    const auto exact = exact_g(s, dt, tr.g.size() - 1);
    CHECK(max_rel_error(tr.g, exact) <= 1e-7);
    // Exchange with the auxiliary amplitudes: |G| dips and revives.
    bool revived = false;
    for (std::size_t n = 2; n < tr.g.size(); ++n)
        if (std::abs(tr.g[n]) > std::abs(tr.g[n - 1]) + 1e-12) revived = true;
    CHECK(revived);
}

TEST_CASE("halving the step reduces the error by at least 2^3") {
    const OracleSystem s = three_level(15.0);
    const double rate = s.max_rate();
    double previous = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double dt = 0.1 / rate / std::pow(2.0, level);
        const Trajectory tr = evolve(s, 4.0, dt, false);
        const double err = max_rel_error(tr.g, exact_g(s, dt, tr.g.size() - 1));
        if (level > 0) CHECK(previous / err >= 8.0);
        previous = err;
    }
}

TEST_CASE("step and length preconditions") {
    const OracleSystem s = three_level(0.0);
    const double dt = 1.0 / (50.0 * s.max_rate());
    CHECK_THROWS_AS(evolve(s, 20.0, 8 * dt), std::invalid_argument);
    CHECK_THROWS_AS(evolve(s, 1.0, dt), std::invalid_argument);
    CHECK_NOTHROW(evolve(s, 1.0, dt, false));
}

TEST_CASE("no damping anywhere cannot be planned") {
    OracleSystem s;
    s.subject = "undamped";
    CHECK_THROWS_AS(plan_schedule(s, FrequencyGrid{0.0, 1.0, 11}), std::invalid_argument);
}

TEST_CASE("schedule lands the grid on FFT bins") {
    const OracleSystem s = three_level(30.0);
    const FrequencyGrid g{0.0, 60.0, 1201};
    const Schedule sc = plan_schedule(s, g);
    CHECK(sc.dt <= 1.0 / (50.0 * s.max_rate()));
    const double m = sc.t_max * g.spacing() / two_pi;
    CHECK(m == doctest::Approx(std::round(m)).epsilon(1e-12));
    CHECK(std::abs(sc.dt * static_cast<double>(sc.steps) - sc.t_max) <= 1e-9 * sc.t_max);
}

TEST_CASE("transform of a bare decay is the bare Lorentzian") {
    OracleSystem s;
    s.frame = 1e3;
    s.damping = 2.0;
    s.subject = "bare";
    const FrequencyGrid g = FrequencyGrid::with_spacing(1e3, 0.2, 5000);
    const auto sf = oracle_sf(s, g);
    const auto ref = bare_sf(1e3, 2.0, g);
    CHECK(l2_relative(sf.samples, ref.samples) <= 1e-6);
    diag::ScopedCapture cap;
    CHECK(sum_rule(sf) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("conjugated trajectory gives the reflected, negated spectrum") {
    const OracleSystem s = three_level(7.0);
    const FrequencyGrid g{0.0, 40.0, 801};
    const Schedule sc = plan_schedule(s, g);
    Trajectory tr = evolve(s, sc.dt * static_cast<double>(sc.steps), sc.dt);
    const auto S = transform_to_sf(tr, g);
    for (auto& x : tr.g) x = std::conj(x);
    const auto R = transform_to_sf(tr, g);
    double peak = 0.0, dev = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        peak = std::max(peak, std::abs(S.samples[j]));
        dev = std::max(dev, std::abs(R.samples[j] + S.samples[g.size() - 1 - j]));
    }
    CHECK(dev <= 1e-9 * peak);
}

TEST_CASE("undecayed trajectory warns about windowing bias") {
    const OracleSystem s = three_level(0.0);
    const double dt = 1.0 / (50.0 * s.max_rate());
    const Trajectory tr = evolve(s, 2.0, dt, false);
    diag::ScopedCapture cap;
    transform_to_sf(tr, FrequencyGrid{0.0, 10.0, 101});
    CHECK(cap.contains("windowing bias"));
}

TEST_CASE("empty cavity on sixteen modes agrees with the closed form") {
    const WaveguideModel m = desk_scale_model();
    const OccupationState occ = build_occupation(EmptyCavity{}, m);
    const ModeGrid modes = build_mode_grid(m.geometry.length_m, 8);
    const OracleSystem sys = photon_oracle_system(20, occ, m, modes);
    CHECK(sys.channels.size() == 2 * (16 + 17));
    const FrequencyGrid g{photon_bare_line(20, m), 6e9, 38201};
    const auto closed = dressed_photon_sf(20, photon_selfenergy(20, occ, m, modes, g), m);
    const auto td = oracle_sf(sys, g);
    CHECK(l2_relative(td.samples, closed.samples) <= 1e-2);
    CHECK(std::abs(find_peaks(td).dominant().center - find_peaks(closed).dominant().center) <= g.spacing());
}

TEST_CASE("two-field resonant decay rate in the Markov regime") {
    WaveguideModel m = desk_scale_model();
    m.photon.gamma = hz_to_angular(20e6);
    const double N1 = 0.0, N2 = 10.0;
    const OccupationState occ = build_occupation(TwoFields{22 * two_pi, N1, 20 * two_pi, N2}, m, false);
    const int dominant[] = {22};
    const OracleSystem s = phonon_oracle_system(2, 1, occ, m, dominant);
    const double Gamma = m.phonons[1].Gamma;
    const double lam = resonant_phonon_damping(N1, N2, m.phonons[1].coupling_f, m.photon.gamma);
    const double dt = 1.0 / (50.0 * s.max_rate());
    const double t_end = std::max(6.0 / (0.5 * (Gamma + lam)), 12.0 / Gamma);
    const Trajectory tr = evolve(s, t_end, dt);
    // Least-squares slope of ln|D| after the 1/gamma transient.
    const auto first = static_cast<std::size_t>(10.0 / m.photon.gamma / dt);
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (std::size_t i = first; i < tr.g.size(); i += 16) {
        const double t = dt * static_cast<double>(i);
        const double y = std::log(std::abs(tr.g[i]));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        n += 1;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double fitted_lambda = -2.0 * slope - Gamma;
    CHECK(fitted_lambda == doctest::Approx(lam).epsilon(0.05));
}

TEST_CASE("gain channels are flagged") {
    const WaveguideModel m = desk_scale_model();
    const OccupationState occ = build_occupation(TwoFields{22 * two_pi, 10.0, 20 * two_pi, 0.0}, m, false);
    const int ks[] = {22};
    CHECK(phonon_oracle_system(2, 1, occ, m, ks).has_gain());
    CHECK_FALSE(photon_oracle_system(20, build_occupation(EmptyCavity{}, m), m, build_mode_grid(1.0, 2)).has_gain());
    CHECK_THROWS_AS(phonon_oracle_system(0, 0, occ, m, ks), std::invalid_argument);
}
