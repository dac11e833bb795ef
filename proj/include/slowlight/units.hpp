#pragma once

#include <string_view>

namespace slowlight {

enum class Unit {
    meter,
    nanometer,
    micrometer,
    kelvin,
    nanokelvin,
    hertz,      ///< cyclic frequency; converts to rad/s by a factor 2*pi
    rad_per_s,
    per_cm3,
    per_m3,
    second,
    microsecond,
};

/// Converts between two units of the same dimension. Throws ConfigError for
/// pairs of different dimension.
double convert(double value, Unit from, Unit to);

/// Parses "m", "nm", "um", "K", "nK", "Hz", "rad/s", "cm^-3", "m^-3", "s", "us".
Unit parse_unit(std::string_view name);

std::string_view unit_name(Unit u);

}  // namespace slowlight
