#include "slowlight/params.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"

#include <cmath>
#include <string>

namespace slowlight {
namespace {

void require(bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void OpticalParams::validate() const {
    require(finite_positive(lambda_31), "lambda_31 must be positive");
    require(finite_positive(gamma), "gamma must be positive");
    require(finite_positive(Gamma_31), "Gamma_31 must be positive");
    require(std::isfinite(Gamma_21) && Gamma_21 >= 0.0, "Gamma_21 must be non-negative");
    require(finite_positive(Omega), "Omega must be positive");
    require(std::isfinite(Delta), "Delta must be finite");
}

OpticalParams OpticalParams::with_detuning(double delta) const {
    OpticalParams p = *this;
    p.Delta = delta;
    return p;
}

DerivedOptical derive_optical(const OpticalParams& p) {
    p.validate();
    return {2.0 * kPi * kSI.c / p.lambda_31, 2.0 * kPi / p.lambda_31};
}

void TrapGasParams::validate() const {
    require(finite_positive(N), "N must be positive");
    require(finite_positive(M), "M must be positive");
    require(finite_positive(a_sc), "a_sc must be positive");
    require(finite_positive(omega_r), "omega_r must be positive");
    require(finite_positive(omega_z), "omega_z must be positive");
    require(std::isfinite(T) && T >= 0.0, "T must be non-negative");
}

double TrapGasParams::mean_frequency() const {
    return std::cbrt(omega_r * omega_r * omega_z);
}

TrapGasParams TrapGasParams::with_temperature(double temperature) const {
    TrapGasParams t = *this;
    t.T = temperature;
    return t;
}

OpticalParams sodium_optical() {
    const double gamma = 2.0 * kPi * 10.01e6;
    OpticalParams p;
    p.lambda_31 = 589e-9;
    p.gamma = gamma;
    p.Gamma_31 = 0.5 * gamma;
    p.Gamma_21 = 2.0 * kPi * 1e3;
    p.Omega = 0.56 * gamma;
    p.Delta = 0.0;
    return p;
}

TrapGasParams sodium_trap(double temperature) {
    TrapGasParams t;
    t.N = 8.3e6;
    t.M = 23.0 * kSI.amu;
    t.a_sc = 2.75e-9;
    t.omega_r = 2.0 * kPi * 69.0;
    t.omega_z = 2.0 * kPi * 21.0;
    t.T = temperature;
    return t;
}

}  // namespace slowlight
