#include "slowlight/units.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"

#include <string>
#include <utility>

namespace slowlight {
namespace {

enum class Dimension { length, temperature, frequency, density, time };

// Dimension and factor to the SI representative of that dimension.
std::pair<Dimension, double> to_si(Unit u) {
    switch (u) {
        case Unit::meter: return {Dimension::length, 1.0};
        case Unit::nanometer: return {Dimension::length, 1e-9};
        case Unit::micrometer: return {Dimension::length, 1e-6};
        case Unit::kelvin: return {Dimension::temperature, 1.0};
        case Unit::nanokelvin: return {Dimension::temperature, 1e-9};
        case Unit::hertz: return {Dimension::frequency, 2.0 * kPi};
        case Unit::rad_per_s: return {Dimension::frequency, 1.0};
        case Unit::per_cm3: return {Dimension::density, 1e6};
        case Unit::per_m3: return {Dimension::density, 1.0};
        case Unit::second: return {Dimension::time, 1.0};
        case Unit::microsecond: return {Dimension::time, 1e-6};
    }
    throw ConfigError("unknown unit");
}

}  // namespace

double convert(double value, Unit from, Unit to) {
    const auto [dim_from, f_from] = to_si(from);
    const auto [dim_to, f_to] = to_si(to);
    if (dim_from != dim_to) {
        throw ConfigError("cannot convert " + std::string(unit_name(from)) + " to " +
                          std::string(unit_name(to)));
    }
    if (from == to) return value;
    return value * f_from / f_to;
}

Unit parse_unit(std::string_view name) {
    if (name == "m") return Unit::meter;
    if (name == "nm") return Unit::nanometer;
    if (name == "um") return Unit::micrometer;
    if (name == "K") return Unit::kelvin;
    if (name == "nK") return Unit::nanokelvin;
    if (name == "Hz") return Unit::hertz;
    if (name == "rad/s") return Unit::rad_per_s;
    if (name == "cm^-3") return Unit::per_cm3;
    if (name == "m^-3") return Unit::per_m3;
    if (name == "s") return Unit::second;
    if (name == "us") return Unit::microsecond;
    throw ConfigError("unsupported unit '" + std::string(name) + "'");
}

std::string_view unit_name(Unit u) {
    switch (u) {
        case Unit::meter: return "m";
        case Unit::nanometer: return "nm";
        case Unit::micrometer: return "um";
        case Unit::kelvin: return "K";
        case Unit::nanokelvin: return "nK";
        case Unit::hertz: return "Hz";
        case Unit::rad_per_s: return "rad/s";
        case Unit::per_cm3: return "cm^-3";
        case Unit::per_m3: return "m^-3";
        case Unit::second: return "s";
        case Unit::microsecond: return "us";
    }
    return "?";
}

}  // namespace slowlight
