#pragma once

namespace slowlight {

/// Three-level Lambda transition and laser parameters. Rates and detunings
/// are angular frequencies (rad/s).
struct OpticalParams {
    double lambda_31 = 0.0;  ///< |3> -> |1> transition wavelength, m
    double gamma = 0.0;      ///< reference linewidth used to express the rates
    double Gamma_31 = 0.0;   ///< |3> -> |1> decay rate
    double Gamma_21 = 0.0;   ///< ground-state decoherence rate
    double Omega = 0.0;      ///< dressing Rabi frequency
    double Delta = 0.0;      ///< probe detuning omega_0 - omega_31

    void validate() const;
    OpticalParams with_detuning(double delta) const;
};

struct DerivedOptical {
    double omega_31;  ///< rad/s
    double k_0;       ///< 1/m
};

DerivedOptical derive_optical(const OpticalParams& p);

/// Harmonic trap and atomic gas.
struct TrapGasParams {
    double N = 0.0;        ///< total atom number
    double M = 0.0;        ///< atomic mass, kg
    double a_sc = 0.0;     ///< s-wave scattering length, m
    double omega_r = 0.0;  ///< radial trap frequency, rad/s
    double omega_z = 0.0;  ///< axial trap frequency, rad/s
    double T = 0.0;        ///< temperature, K (0 is accepted as the zero-temperature limit)

    void validate() const;
    double aspect_ratio() const { return omega_z / omega_r; }
    double mean_frequency() const;
    TrapGasParams with_temperature(double temperature) const;
};

/// Sodium D-line EIT parameters used throughout the slow-light experiments:
/// lambda = 589 nm, gamma = 2pi x 10.01 MHz, Gamma_31 = 0.5 gamma,
/// Gamma_21 = 2pi x 1 kHz, Omega = 0.56 gamma, resonant probe.
OpticalParams sodium_optical();

/// Sodium magnetic trap: N = 8.3e6, M = 23 amu, a_sc = 2.75 nm,
/// omega_r = 2pi x 69 Hz, omega_z = 2pi x 21 Hz.
TrapGasParams sodium_trap(double temperature);

}  // namespace slowlight
