#pragma once

#include <numbers>

// All frequencies (Rabi, detunings, decay rates, linewidths) are angular, rad/s.
namespace mpo::units {

inline constexpr double speed_of_light = 299792458.0;    // m/s
inline constexpr double hbar = 1.054571817e-34;          // J s
inline constexpr double pi = std::numbers::pi;

constexpr double hz_to_rad_s(double hz) { return 2.0 * pi * hz; }
constexpr double rad_s_to_hz(double w) { return w / (2.0 * pi); }

}  // namespace mpo::units
