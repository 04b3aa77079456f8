// units.hpp: physical constants and Hz <-> rad/s conversion

#pragma once

#include <numbers>

namespace cqom {

// Internally every frequency and rate is angular [rad/s]; files and flags use Hz.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K
inline constexpr double speed_of_light = 2.99792458e8; // m/s
} // namespace constants

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double hz_to_angular(double hz) noexcept { return two_pi * hz; }

// Inverse of hz_to_angular. Not guaranteed to be bit-exact on round trip;
// use angular_to_hz_exact() where that matters (config rendering).
constexpr double angular_to_hz(double omega) noexcept { return omega / two_pi; }

// Returns nu such that hz_to_angular(nu) == omega bit-for-bit when such a
// value exists within a few ulps of omega / 2pi; otherwise omega / 2pi.
double angular_to_hz_exact(double omega) noexcept;

} // namespace cqom
