#pragma once

#include <numbers>

namespace qnamp::constants {

inline constexpr double c = 299792458.0;            // m/s
inline constexpr double hbar = 1.054571817e-34;     // J s
inline constexpr double k_B = 1.380649e-23;         // J/K
inline constexpr double g_n = 9.80665;              // m/s^2
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double ppm = 1e-6;

}  // namespace qnamp::constants
