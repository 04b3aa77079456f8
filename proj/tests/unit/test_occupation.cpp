#include <doctest.h>

#include "cqom/occupation.hpp"
#include "cqom/units.hpp"

#include <cmath>

using namespace cqom;

TEST_CASE("Bose-Einstein occupation") {
    CHECK(bose_einstein(hz_to_angular(1e10), 0.0) == 0.0);
    const double n = bose_einstein(hz_to_angular(1e10), 4.0);
    CHECK(n == doctest::Approx(7.844643679).epsilon(1e-9));
    // hbar Omega / k_B T = ln 2 gives exactly one quantum.
    const double T = 3.0;
    const double omega = std::log(2.0) * constants::k_boltzmann * T / constants::hbar;
    CHECK(bose_einstein(omega, T) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(bose_einstein(0.0, 4.0), DivergentOccupation);
    CHECK_THROWS_AS(bose_einstein(1.0, -1.0), std::invalid_argument);
    CHECK(bose_einstein(hz_to_angular(1e9), 4.0) > bose_einstein(hz_to_angular(1e10), 4.0));
}

TEST_CASE("pump power to photon number") {
    const double omega = hz_to_angular(1e14);
    CHECK(photon_flux(1e-3, omega) == doctest::Approx(1.50919018e16).epsilon(1e-8));
    CHECK(photons_from_power(1e-3, omega, 0.01, constants::speed_of_light / 5.0) ==
          doctest::Approx(2.517058285e6).epsilon(1e-9));
    CHECK(photon_flux(0.0, omega) == 0.0);
    CHECK_THROWS_AS(photon_flux(-1.0, omega), std::invalid_argument);
}

TEST_CASE("scenario occupations") {
    const WaveguideModel m = default_silicon_model();
    const double dk = two_pi / m.geometry.length_m;

    const OccupationState empty = build_occupation(EmptyCavity{}, m);
    for (int n : {-5, 0, 12732}) CHECK(empty.photon_N(n) == 0.0);

    const OccupationState single = build_occupation(SingleField{100 * dk, 1e6}, m);
    CHECK(single.photon_N(100) == 1e6);
    CHECK(single.photon_N(101) == 0.0);
    CHECK(single.pumped().size() == 1);

    const OccupationState two = build_occupation(TwoFields{10 * dk, 3.0, 7 * dk, 5.0}, m);
    CHECK(two.photon_N(10) == 3.0);
    CHECK(two.photon_N(7) == 5.0);
    CHECK_THROWS_AS(build_occupation(TwoFields{dk, 1.0, dk, 2.0}, m), ValidationError);
    CHECK_THROWS_AS(build_occupation(SingleField{dk, -1.0}, m), ValidationError);

    const OccupationState custom = build_occupation(Custom{{{3 * dk, 2.0}}, 0.5}, m);
    CHECK(custom.photon_N(3) == 2.0);
    CHECK(custom.photon_N(4) == 0.5);
}

TEST_CASE("thermal phonon counts") {
    const WaveguideModel m = default_silicon_model();
    const OccupationState occ = build_occupation(EmptyCavity{}, m);
    for (int q : {-7, 0, 1, 300}) CHECK(occ.phonon_n(q, 1) == doctest::Approx(7.84464368).epsilon(1e-8));
    CHECK(occ.phonon_n(0, 0) == 0.0);
    CHECK(occ.phonon_n(1, 0) == occ.phonon_n(-1, 0));
    CHECK(occ.phonon_n(1, 0) > occ.phonon_n(2, 0));
    const OccupationState cold = occ.without_thermal_phonons();
    CHECK(cold.phonon_n(1, 1) == 0.0);
    CHECK_FALSE(build_occupation(EmptyCavity{}, m, false).thermal_phonons());

    WaveguideModel zero = m;
    zero.temperature_k = 0.0;
    CHECK(build_occupation(EmptyCavity{}, zero).phonon_n(5, 0) == 0.0);
}
