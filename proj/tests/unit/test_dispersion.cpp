#include <doctest.h>

#include "cqom/diagnostics.hpp"
#include "cqom/dispersion.hpp"
#include "cqom/units.hpp"

#include <algorithm>

using namespace cqom;

TEST_CASE("photon dispersion is linear with intercept omega0") {
    const WaveguideModel m = default_silicon_model();
    CHECK(photon_omega(m.photon, 0.0) == m.photon.omega0);
    const double k = 2.0 / m.geometry.radius_m;
    // 2pi*1e14 + (c/5) * 8e6 = 6.28319e14 + 4.79668e14
    CHECK(m.photon.group_velocity * k == doctest::Approx(4.796679e14).epsilon(1e-6));
    CHECK(photon_omega(m.photon, k) == doctest::Approx(1.107986e15).epsilon(1e-6));
    const double k1 = 1.1e6, k2 = 2.3e6;
    CHECK(photon_omega(m.photon, k1) + photon_omega(m.photon, k2) - m.photon.omega0 ==
          doctest::Approx(photon_omega(m.photon, k1 + k2)).epsilon(1e-15));
}

TEST_CASE("detuning is formed without absolute frequencies") {
    const WaveguideModel m = default_silicon_model();
    const double dk = two_pi / m.geometry.length_m;
    CHECK(photon_detuning(m.photon, 8e6, dk) == m.photon.group_velocity * dk);
    CHECK(photon_detuning(m.photon, 8e6, -3 * dk) == -photon_detuning(m.photon, 8e6, 3 * dk));
}

TEST_CASE("wavenumbers outside the linear zone are rejected") {
    const WaveguideModel m = default_silicon_model();
    CHECK_THROWS_AS(photon_omega(m.photon, 1.01 * m.photon.k_cutoff), OutOfModelRange);
    CHECK_THROWS_AS(photon_detuning(m.photon, 0.9 * m.photon.k_cutoff, 0.2 * m.photon.k_cutoff), OutOfModelRange);
    CHECK_NOTHROW(photon_omega(m.photon, -m.photon.k_cutoff));
}

TEST_CASE("phonon dispersion") {
    const WaveguideModel m = default_silicon_model();
    CHECK(phonon_omega(m.phonons[0], 0.0) == 0.0);
    CHECK(phonon_omega(m.phonons[0], 2.0 / 250e-9) == doctest::Approx(6.7464e10).epsilon(1e-12));
    CHECK(phonon_omega(m.phonons[0], -3.0) == phonon_omega(m.phonons[0], 3.0));
    for (double q : {-1e7, 0.0, 5.0, 3e6}) CHECK(phonon_omega(m.phonons[1], q) == hz_to_angular(1e10));
    CHECK(coupling(m.phonons[0], 1.0, 2.0) == coupling(m.phonons[0], 3.0, -2.0));
}

TEST_CASE("mode grid") {
    const ModeGrid g = build_mode_grid(0.01, 1);
    const auto ks = g.wavenumbers();
    REQUIRE(ks.size() == 3);
    CHECK(ks[0] == doctest::Approx(-628.3185307).epsilon(1e-9));
    CHECK(ks[1] == 0.0);
    CHECK(ks[2] == doctest::Approx(628.3185307).epsilon(1e-9));

    const ModeGrid single = build_mode_grid(3.7, 0);
    CHECK(single.wavenumbers() == std::vector<double>{0.0});

    const ModeGrid big = build_mode_grid(0.37, 17);
    auto w = big.wavenumbers();
    auto neg = w;
    for (double& x : neg) x = -x;
    std::sort(neg.begin(), neg.end());
    CHECK(neg == w);
    CHECK(big.contains(17));
    CHECK_FALSE(big.contains(-18));
    CHECK_THROWS_AS(build_mode_grid(0.01, -1), ValidationError);
    CHECK_THROWS_AS(build_mode_grid(0.0, 1), ValidationError);
}

TEST_CASE("default mode count covers three times the detuning in the acoustic band") {
    const WaveguideModel m = default_silicon_model();
    const double dk = two_pi / m.geometry.length_m;
    const double detuning = 2.0e11;
    const int n = default_n_max(m, detuning, 8e6);
    CHECK(8433.0 * dk * n >= 3.0 * detuning);
    CHECK(8433.0 * dk * (n - 1) < 3.0 * detuning);
    CHECK(default_n_max(m, 0.0, 0.0) == 1);

    diag::ScopedCapture cap;
    const int clamped = default_n_max(m, 1e15, 8e6);
    CHECK(cap.contains("clamped"));
    CHECK(8e6 + clamped * dk <= m.photon.k_cutoff);
}

TEST_CASE("snapping to the mode grid") {
    diag::ScopedCapture cap;
    CHECK(snap_to_mode(5.0 * 2.0, 2.0, "k") == 5);
    CHECK(cap.messages().empty());
    CHECK(snap_to_mode(11.0, 2.0, "k") == 6); // 5.5 rounds away from zero
    CHECK(cap.contains("off the mode grid"));
}
