#pragma once

#include <numbers>

namespace sqfd::units {

inline constexpr double um = 1e-6;        // m per µm
inline constexpr double um2 = um * um;    // m² per µm²
inline constexpr double um3 = um2 * um;
inline constexpr double um4 = um2 * um2;
inline constexpr double gpa = 1e9;        // Pa per GPa
inline constexpr double khz = 1e3;        // Hz per kHz
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double angular(double hz) { return two_pi * hz; }
inline constexpr double hertz(double rad_per_s) { return rad_per_s / two_pi; }

} // namespace sqfd::units
