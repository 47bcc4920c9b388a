#pragma once

#include <numbers>

namespace tricav::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double k_B = 1.380649e-23;            // J/K
inline constexpr double epsilon_0 = 8.8541878128e-12;  // F/m
inline constexpr double stefan_boltzmann = 5.670374419e-8;  // W m^-2 K^-4

}  // namespace tricav::constants
