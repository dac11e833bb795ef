#pragma once

#include <numbers>

namespace slowlight {

/// SI physical constants (CODATA 2018 exact/recommended values).
struct PhysicalConstants {
    double h;          ///< Planck constant, J s
    double hbar;       ///< reduced Planck constant, J s
    double c;          ///< speed of light, m/s
    double k_B;        ///< Boltzmann constant, J/K
    double amu;        ///< atomic mass unit, kg
    double epsilon_0;  ///< vacuum permittivity, F/m
};

inline constexpr PhysicalConstants kSI{
    6.62607015e-34,
    6.62607015e-34 / (2.0 * std::numbers::pi),
    299792458.0,
    1.380649e-23,
    1.66053906660e-27,
    8.8541878128e-12,
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;
inline constexpr double kZeta3 = 1.2020569031595942854;
inline constexpr double kZeta3Half = 2.6123753486854883433;

}  // namespace slowlight
