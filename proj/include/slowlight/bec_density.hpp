#pragma once

#include "slowlight/params.hpp"

#include <string>
#include <vector>

namespace slowlight {

enum class GasModel { interacting, ideal };

const char* gas_model_name(GasModel model);

/// k_B T_C = hbar w_bar (N / zeta(3))^(1/3).
double critical_temperature(const TrapGasParams& trap);

/// Root z in (0, 1) of g_3(z) = zeta(3) / t^3 for t = T/T_C > 1.
double fugacity_above_Tc(double T_over_Tc);

/// s = 1/2 zeta(3)^(1/3) (15 N^(1/6) a_sc / a_ho)^(2/5).
double scaling_s(const TrapGasParams& trap);

/// N0/N = 1 - t^3 - s (zeta(2)/zeta(3)) t^2 (1 - t^3)^(2/5), clamped to [0, 1].
double condensate_fraction(double T_over_Tc, double s);

/// Chemical potential of the interacting two-component model, J.
double chemical_potential(const TrapGasParams& trap);

struct ThermoState {
    double T_C = 0.0;           ///< K
    double mu = 0.0;            ///< J
    double mu_TF = 0.0;         ///< J, s k_B T_C
    double cond_frac = 0.0;     ///< N0/N
    double s = 0.0;
    double fugacity = 1.0;      ///< e^(beta mu) above T_C, 1 below
    double Lambda_T = 0.0;      ///< m, +inf at T = 0
    double U = 0.0;             ///< J m^3
    double a_ho = 0.0;          ///< m
    double peak_density = 0.0;  ///< 1/m^3
};

/// Two-component density of a harmonically trapped Bose gas.
///
/// interacting: Thomas-Fermi condensate (mu - V)/U plus the semiclassical
/// thermal cloud g_{3/2}(e^{-beta |V - mu|}) / Lambda^3 below T_C and
/// g_{3/2}(z e^{-beta V}) / Lambda^3 above.
///
/// ideal: harmonic-oscillator ground-state Gaussian holding N (1 - t^3)
/// atoms plus the ideal-gas thermal cloud g_{3/2}(e^{beta(mu - V)}) / Lambda^3
/// with mu = 0 below T_C.
class DensityModel {
public:
    explicit DensityModel(const TrapGasParams& trap, GasModel model = GasModel::interacting);

    const TrapGasParams& trap() const { return trap_; }
    GasModel model() const { return model_; }
    const ThermoState& state() const { return state_; }

    double T_C() const { return state_.T_C; }
    double mu() const { return state_.mu; }
    double cond_frac() const { return state_.cond_frac; }
    double peak_density() const { return state_.peak_density; }

    double potential(double r, double z) const;
    double condensate_density(double r, double z) const;
    double thermal_density(double r, double z) const;
    double density(double r, double z) const;

    /// rho(0, 0).
    double center_density() const;
    /// rho(r, z) / rho(0, 0). Throws ConfigError if rho(0, 0) is not positive.
    double normalized(double r, double z) const;

    /// Thomas-Fermi radii sqrt(2 mu / M w^2); zero without a TF condensate.
    double tf_radius_r() const;
    double tf_radius_z() const;
    /// Axial half-width of the V < mu region at radius r (0 outside).
    double condensate_half_length(double r) const;

    /// Closed-form TF condensate number (8 pi / 15)(mu / U) R_r^2 R_z.
    double thomas_fermi_number() const;
    /// Integral of the condensate term alone.
    double condensate_number(double rel_tol = 1e-9) const;
    /// Integral of rho over all space.
    double total_number(double rel_tol = 1e-9) const;

    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    double integrate_density(bool condensate_only, double rel_tol) const;
    double outer_radius() const;
    double outer_half_length() const;

    TrapGasParams trap_;
    GasModel model_;
    ThermoState state_;
    double beta_ = 0.0;          // 1 / k_B T, 0 at T = 0
    double thermal_scale_ = 0.0; // 1 / Lambda^3
    double sigma_r_ = 0.0;       // oscillator widths for the ideal condensate
    double sigma_z_ = 0.0;
    double ideal_peak_ = 0.0;    // N0 / (pi^1.5 sigma_r^2 sigma_z)
    std::vector<std::string> warnings_;
};

double density(double r, double z, const TrapGasParams& trap);
double ideal_gas_density(double r, double z, const TrapGasParams& trap);

/// Evaluable f(r, z) = rho(r, z) / rho(0, 0).
class NormalizedProfile {
public:
    explicit NormalizedProfile(const TrapGasParams& trap, GasModel model = GasModel::interacting);
    explicit NormalizedProfile(DensityModel model);

    double operator()(double r, double z) const;
    const DensityModel& model() const { return model_; }
    double center_density() const { return center_; }

private:
    DensityModel model_;
    double center_;
};

NormalizedProfile normalized_profile(const TrapGasParams& trap,
                                     GasModel model = GasModel::interacting);

double total_number(const TrapGasParams& trap, GasModel model = GasModel::interacting);

}  // namespace slowlight
