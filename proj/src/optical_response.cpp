#include "slowlight/optical_response.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"

#include <cmath>
#include <limits>

namespace slowlight {
namespace {

constexpr cplx I{0.0, 1.0};

bool perfect_transparency_point(double Delta, double Omega, double Gamma_21) {
    return Gamma_21 == 0.0 && Delta == 0.0 && Omega != 0.0;
}

cplx bracket(double Delta, double Omega, double Gamma_31, double Gamma_21) {
    const cplx w{Gamma_21, -Delta};
    return Delta / Gamma_31 + I * (1.0 + Omega * Omega / (4.0 * Gamma_31 * w));
}

}  // namespace

cplx chi1(double Delta, double Omega, double Gamma_31, double Gamma_21) {
    if (perfect_transparency_point(Delta, Omega, Gamma_21)) return {0.0, 0.0};
    return -1.0 / bracket(Delta, Omega, Gamma_31, Gamma_21);
}

cplx dchi1_dDelta(double Delta, double Omega, double Gamma_31, double Gamma_21) {
    if (perfect_transparency_point(Delta, Omega, Gamma_21)) {
        return {4.0 * Gamma_31 / (Omega * Omega), 0.0};
    }
    const cplx w{Gamma_21, -Delta};
    const cplx num = 1.0 / Gamma_31 - Omega * Omega / (4.0 * Gamma_31 * w * w);
    const cplx b = bracket(Delta, Omega, Gamma_31, Gamma_21);
    return num / (b * b);
}

cplx h_aux(double Delta, double Omega, const OpticalParams& optical) {
    const double omega_31 = derive_optical(optical).omega_31;
    return chi1(Delta, Omega, optical.Gamma_31, optical.Gamma_21) +
           (Delta + omega_31) * dchi1_dDelta(Delta, Omega, optical.Gamma_31, optical.Gamma_21);
}

double eta_from_density(double rho, const OpticalParams& optical) {
    const double l = optical.lambda_31;
    return 3.0 * l * l * l / (32.0 * kPi * kPi * kPi) * rho;
}

cplx IndexBundle::N_g_over_c() const { return N_g / kSI.c; }

IndexBundle index_bundle(double rho, const OpticalParams& optical) {
    if (!(rho >= 0.0)) throw ConfigError("density must be non-negative");
    const DerivedOptical d = derive_optical(optical);
    IndexBundle b{};
    b.eta = eta_from_density(rho, optical);
    b.chi = b.eta * chi1(optical.Delta, optical.Omega, optical.Gamma_31, optical.Gamma_21);
    const cplx n = 1.0 + 2.0 * kPi * b.chi;
    b.refractive_index = n.real();
    b.loss_index = n.imag();
    b.N_g = 1.0 + 2.0 * kPi * b.eta * h_aux(optical.Delta, optical.Omega, optical);
    b.alpha = 2.0 * kPi * I * d.k_0 * b.chi;
    return b;
}

double resonant_group_velocity(double rho, const OpticalParams& optical) {
    if (!(rho > 0.0)) throw ConfigError("resonant group velocity needs a positive density");
    const DerivedOptical d = derive_optical(optical);
    const double l3 = std::pow(optical.lambda_31, 3);
    return 4.0 * kPi * kPi * optical.Omega * optical.Omega * kSI.c /
           (3.0 * l3 * rho * d.omega_31 * optical.Gamma_31);
}

double resonant_group_velocity_dipole_form(double rho, const OpticalParams& optical) {
    if (!(rho > 0.0)) throw ConfigError("resonant group velocity needs a positive density");
    const DerivedOptical d = derive_optical(optical);
    // 3 lambda^3 G31 / 32 pi^3 is the Gaussian-unit d31^2/hbar; SI carries an extra 4 pi eps0.
    const double d2_over_hbar = 4.0 * kPi * kSI.epsilon_0 * 3.0 *
                                std::pow(optical.lambda_31, 3) * optical.Gamma_31 /
                                (32.0 * kPi * kPi * kPi);
    return kSI.c * kSI.epsilon_0 * optical.Omega * optical.Omega /
           (2.0 * d.omega_31 * d2_over_hbar * rho);
}

GroupVelocityCurves group_velocity_curves(double rho, const OpticalParams& optical,
                                          std::span<const double> Delta_grid) {
    GroupVelocityCurves out;
    out.samples.reserve(Delta_grid.size());
    std::vector<double> ng_real;
    ng_real.reserve(Delta_grid.size());
    for (double Delta : Delta_grid) {
        if (!std::isfinite(Delta)) throw ConfigError("detuning grid must be finite");
        const cplx ng = index_bundle(rho, optical.with_detuning(Delta)).N_g;
        ng_real.push_back(ng.real());
        out.samples.push_back({Delta, (kSI.c / ng).real(), kSI.c / ng.real(), false});
    }
    constexpr double inf = std::numeric_limits<double>::infinity();
    auto flag = [&](std::size_t i) {
        auto& s = out.samples[i];
        s.singular = true;
        s.v_def2 = std::copysign(inf, ng_real[i]);
    };
    for (std::size_t i = 0; i < ng_real.size(); ++i) {
        if (ng_real[i] == 0.0) {
            flag(i);
            out.singular_detunings.push_back(Delta_grid[i]);
        }
        if (i + 1 < ng_real.size() && ng_real[i] * ng_real[i + 1] < 0.0) {
            const double a = ng_real[i];
            const double b = ng_real[i + 1];
            const double x = Delta_grid[i] + (Delta_grid[i + 1] - Delta_grid[i]) * a / (a - b);
            out.singular_detunings.push_back(x);
            flag(std::abs(a) <= std::abs(b) ? i : i + 1);
        }
    }
    return out;
}

double critical_superluminal_length(double alpha_prime, double a, double Ng_pp_over_c) {
    if (!(alpha_prime < 0.0)) throw ConfigError("superluminal tunneling needs alpha' < 0");
    if (!(a > 0.0)) throw ConfigError("pulse sharpness a must be positive");
    if (Ng_pp_over_c == 0.0) {
        throw ConfigError("N_g'' = 0: infinite length required to beat absorption");
    }
    return std::abs(alpha_prime) / (a * Ng_pp_over_c * Ng_pp_over_c);
}

double critical_superluminal_length_dimensionless(double alpha_prime, double a, double Ng_pp) {
    return critical_superluminal_length(alpha_prime, a, Ng_pp / kSI.c);
}

}  // namespace slowlight
