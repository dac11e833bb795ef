#pragma once

#include "slowlight/params.hpp"

#include <complex>
#include <span>
#include <vector>

namespace slowlight {

using cplx = std::complex<double>;

/// Steady-state single-atom susceptibility of the Lambda system,
///   chi1 = -[Delta/G31 + i(1 + Omega^2 / (4 G31 (G21 - i Delta)))]^-1.
/// At G21 = Delta = 0 (with Omega > 0) the continuous limit chi1 = 0 is returned.
cplx chi1(double Delta, double Omega, double Gamma_31, double Gamma_21);

/// d chi1 / d Delta, in seconds. At G21 = Delta = 0 the limit 4 G31 / Omega^2 is returned.
cplx dchi1_dDelta(double Delta, double Omega, double Gamma_31, double Gamma_21);

/// h = chi1 + (Delta + omega_31) d chi1/d Delta, so that N_g = 1 + 2 pi eta h.
cplx h_aux(double Delta, double Omega, const OpticalParams& optical);

/// eta = (3 lambda^3 / 32 pi^3) rho, the density prefactor of chi = eta chi1.
double eta_from_density(double rho, const OpticalParams& optical);

struct IndexBundle {
    cplx chi;                 ///< eta * chi1
    double refractive_index;  ///< Re(1 + 2 pi chi)
    double loss_index;        ///< Im(1 + 2 pi chi)
    cplx N_g;                 ///< group index + i * phase-correlation index
    cplx alpha;               ///< 2 pi i k0 chi, 1/m
    double eta;

    /// N_g / c in s/m (the convention used for the superluminal numbers).
    cplx N_g_over_c() const;
};

IndexBundle index_bundle(double rho, const OpticalParams& optical);

/// Closed-form resonant EIT group velocity 4 pi^2 Omega^2 c / (3 lambda^3 rho omega_31 G31).
/// Throws ConfigError for rho <= 0.
double resonant_group_velocity(double rho, const OpticalParams& optical);

/// Same quantity in SI dipole form hbar c eps0 Omega^2 / (2 omega_31 d31^2 rho).
double resonant_group_velocity_dipole_form(double rho, const OpticalParams& optical);

struct GroupVelocitySample {
    double Delta;
    double v_def1;  ///< Re(c / N_g)
    double v_def2;  ///< c / Re(N_g); +-inf where flagged
    bool singular;  ///< Re(N_g) changes sign at or next to this grid point
};

struct GroupVelocityCurves {
    std::vector<GroupVelocitySample> samples;
    /// Detunings where Re(N_g) crosses zero, linearly interpolated between grid points.
    std::vector<double> singular_detunings;
};

GroupVelocityCurves group_velocity_curves(double rho, const OpticalParams& optical,
                                          std::span<const double> Delta_grid);

/// Minimum slab length for a superluminal pulse to beat absorption:
///   L_c = |alpha'| / (a (N_g''/c)^2)
/// with alpha' in 1/m, a in 1/s^2 and N_g''/c in s/m.
double critical_superluminal_length(double alpha_prime, double a, double Ng_pp_over_c);

/// Dimensionless-N_g'' form |alpha'| c^2 / (a N_g''^2).
double critical_superluminal_length_dimensionless(double alpha_prime, double a, double Ng_pp);

}  // namespace slowlight
