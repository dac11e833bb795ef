#include "doctest.h"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/params.hpp"
#include "slowlight/units.hpp"

#include <cmath>
#include <vector>

using namespace slowlight;

TEST_CASE("constants") {
    CHECK(kSI.h == doctest::Approx(2.0 * kPi * kSI.hbar).epsilon(1e-12));
    CHECK(kSI.c > 0);
    CHECK(kSI.k_B > 0);
    CHECK(kSI.amu > 0);
    CHECK(kSI.epsilon_0 > 0);
}

TEST_CASE("derive_optical") {
    OpticalParams p = sodium_optical();
    const DerivedOptical d = derive_optical(p);
    // 2 pi c / 589 nm and 2 pi / 589 nm by hand
    CHECK(d.omega_31 == doctest::Approx(2.0 * 3.141592653589793 * 299792458.0 / 589e-9).epsilon(1e-14));
    CHECK(d.omega_31 == doctest::Approx(3.198e15).epsilon(1e-3));
    CHECK(d.k_0 == doctest::Approx(1.0667e7).epsilon(1e-4));
    p.lambda_31 *= 2.0;
    CHECK(derive_optical(p).omega_31 == 0.5 * d.omega_31);
}

TEST_CASE("parameter validation") {
    OpticalParams p = sodium_optical();
    p.Omega = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = sodium_optical();
    p.Gamma_21 = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    TrapGasParams t = sodium_trap(43e-9);
    CHECK_NOTHROW(t.validate());
    t.N = 0.0;
    CHECK_THROWS_AS(t.validate(), ConfigError);
    t = sodium_trap(-1.0);
    CHECK_THROWS_AS(t.validate(), ConfigError);
}

TEST_CASE("trap geometry") {
    TrapGasParams t = sodium_trap(0.0);
    CHECK(t.aspect_ratio() == doctest::Approx(21.0 / 69.0));
    CHECK(t.mean_frequency() ==
          doctest::Approx(std::cbrt(t.omega_r * t.omega_r * t.omega_z)).epsilon(1e-14));
    t.omega_z = t.omega_r;
    CHECK(t.mean_frequency() == doctest::Approx(t.omega_r).epsilon(1e-14));
}

TEST_CASE("unit conversions") {
    CHECK(convert(3.3e12, Unit::per_cm3, Unit::per_m3) == doctest::Approx(3.3e18).epsilon(1e-15));
    CHECK(convert(10.01e6, Unit::hertz, Unit::rad_per_s) ==
          doctest::Approx(6.289e7).epsilon(1e-4));
    CHECK(convert(450.0, Unit::nanokelvin, Unit::kelvin) == doctest::Approx(4.5e-7).epsilon(1e-15));
    CHECK(convert(589.0, Unit::nanometer, Unit::meter) == doctest::Approx(5.89e-7).epsilon(1e-15));
    CHECK(convert(15.0, Unit::micrometer, Unit::meter) == doctest::Approx(1.5e-5).epsilon(1e-15));
    CHECK(convert(7.5, Unit::microsecond, Unit::second) == doctest::Approx(7.5e-6).epsilon(1e-15));
    CHECK_THROWS_AS(convert(1.0, Unit::meter, Unit::kelvin), ConfigError);
    CHECK_THROWS_AS(convert(1.0, Unit::hertz, Unit::second), ConfigError);
    CHECK_THROWS_AS(parse_unit("furlong"), ConfigError);
}

TEST_CASE("unit round trips") {
    const std::vector<std::vector<Unit>> groups{
        {Unit::meter, Unit::nanometer, Unit::micrometer},
        {Unit::kelvin, Unit::nanokelvin},
        {Unit::hertz, Unit::rad_per_s},
        {Unit::per_cm3, Unit::per_m3},
        {Unit::second, Unit::microsecond},
    };
    for (const auto& g : groups) {
        for (Unit a : g) {
            CHECK(parse_unit(unit_name(a)) == a);
            for (Unit b : g) {
                const double x = 1.2345678901234;
                CHECK(convert(convert(x, a, b), b, a) == doctest::Approx(x).epsilon(1e-15));
            }
        }
    }
}
