#include "slowlight/bec_density.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/polylog.hpp"
#include "slowlight/quadrature.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace slowlight {
namespace {

constexpr double kThermalCutoff = 45.0;  // beta (V - mu) beyond which the thermal tail is dropped
constexpr double kGaussianCutoff = 8.0;  // ideal condensate widths
constexpr double kSWarning = 0.3;

double thermal_wavelength(double M, double T) {
    if (T <= 0.0) return std::numeric_limits<double>::infinity();
    return kSI.h / std::sqrt(2.0 * kPi * M * kSI.k_B * T);
}

}  // namespace

const char* gas_model_name(GasModel model) {
    return model == GasModel::interacting ? "interacting" : "ideal";
}

double critical_temperature(const TrapGasParams& trap) {
    trap.validate();
    return kSI.hbar * trap.mean_frequency() * std::cbrt(trap.N / kZeta3) / kSI.k_B;
}

double fugacity_above_Tc(double T_over_Tc) {
    if (!(T_over_Tc > 1.0) || !std::isfinite(T_over_Tc)) {
        throw ConfigError(fmt::format(
            "fugacity_above_Tc needs T/T_C > 1 (got {}); use the condensed branch", T_over_Tc));
    }
    const double target = kZeta3 / (T_over_Tc * T_over_Tc * T_over_Tc);
    double lo = 0.0;
    double hi = 1.0;
    double mid = 0.5;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double residual = polylog(3.0, mid) - target;
        if (std::abs(residual) < 1e-13 || hi - lo < 1e-16) break;
        (residual < 0.0 ? lo : hi) = mid;
    }
    const double residual = std::abs(polylog(3.0, mid) - target);
    if (residual >= 1e-10) {
        throw NumericalError(fmt::format("fugacity bisection stalled, residual {}", residual));
    }
    return mid;
}

double scaling_s(const TrapGasParams& trap) {
    trap.validate();
    const double a_ho = std::sqrt(kSI.hbar / (trap.M * trap.mean_frequency()));
    return 0.5 * std::cbrt(kZeta3) *
           std::pow(15.0 * std::pow(trap.N, 1.0 / 6.0) * trap.a_sc / a_ho, 0.4);
}

double condensate_fraction(double T_over_Tc, double s) {
    if (!(T_over_Tc >= 0.0 && T_over_Tc <= 1.0)) {
        throw ConfigError(fmt::format("condensate_fraction needs 0 <= T/T_C <= 1, got {}", T_over_Tc));
    }
    const double t = T_over_Tc;
    const double t3 = t * t * t;
    const double f = 1.0 - t3 - s * (kZeta2 / kZeta3) * t * t * std::pow(1.0 - t3, 0.4);
    return std::clamp(f, 0.0, 1.0);
}

double chemical_potential(const TrapGasParams& trap) {
    return DensityModel(trap, GasModel::interacting).mu();
}

DensityModel::DensityModel(const TrapGasParams& trap, GasModel model)
    : trap_(trap), model_(model) {
    trap_.validate();
    ThermoState& st = state_;
    st.T_C = critical_temperature(trap_);
    st.s = scaling_s(trap_);
    st.mu_TF = st.s * kSI.k_B * st.T_C;
    st.U = 4.0 * kPi * kSI.hbar * kSI.hbar * trap_.a_sc / trap_.M;
    st.a_ho = std::sqrt(kSI.hbar / (trap_.M * trap_.mean_frequency()));
    st.Lambda_T = thermal_wavelength(trap_.M, trap_.T);
    beta_ = trap_.T > 0.0 ? 1.0 / (kSI.k_B * trap_.T) : 0.0;
    thermal_scale_ = trap_.T > 0.0 ? 1.0 / std::pow(st.Lambda_T, 3) : 0.0;
    sigma_r_ = std::sqrt(kSI.hbar / (trap_.M * trap_.omega_r));
    sigma_z_ = std::sqrt(kSI.hbar / (trap_.M * trap_.omega_z));

    const double t = trap_.T / st.T_C;
    if (t > 1.0) {
        st.fugacity = fugacity_above_Tc(t);
        st.mu = kSI.k_B * trap_.T * std::log(st.fugacity);
        st.cond_frac = 0.0;
    } else if (model_ == GasModel::interacting) {
        st.fugacity = 1.0;
        st.cond_frac = condensate_fraction(t, st.s);
        st.mu = st.mu_TF * std::pow(st.cond_frac, 0.4);
    } else {
        st.fugacity = 1.0;
        st.cond_frac = 1.0 - t * t * t;
        st.mu = 0.0;
    }
    ideal_peak_ = model_ == GasModel::ideal
                      ? trap_.N * st.cond_frac / (std::pow(kPi, 1.5) * sigma_r_ * sigma_r_ * sigma_z_)
                      : 0.0;

    st.peak_density = center_density();
    if (model_ == GasModel::interacting && st.mu > 0.0 && trap_.T > 0.0) {
        // Below T_C rho(V) is convex on [0, mu] and decreasing beyond, so the
        // maximum sits at V = 0 or on the condensate surface.
        st.peak_density = std::max(st.peak_density, thermal_scale_ * kZeta3Half);
    }

    if (model_ == GasModel::interacting && st.s > kSWarning) {
        warnings_.push_back(fmt::format(
            "scaling parameter s = {:.4f} exceeds {}; the two-component model is less accurate here",
            st.s, kSWarning));
    }
}

double DensityModel::potential(double r, double z) const {
    return 0.5 * trap_.M *
           (trap_.omega_r * trap_.omega_r * r * r + trap_.omega_z * trap_.omega_z * z * z);
}

double DensityModel::condensate_density(double r, double z) const {
    if (state_.cond_frac <= 0.0) return 0.0;
    if (model_ == GasModel::ideal) {
        return ideal_peak_ *
               std::exp(-r * r / (sigma_r_ * sigma_r_) - z * z / (sigma_z_ * sigma_z_));
    }
    const double excess = state_.mu - potential(r, z);
    return excess > 0.0 ? excess / state_.U : 0.0;
}

double DensityModel::thermal_density(double r, double z) const {
    if (trap_.T <= 0.0) return 0.0;
    const double V = potential(r, z);
    double x;
    if (state_.T_C < trap_.T || model_ == GasModel::ideal) {
        x = state_.mu - V;  // mu <= 0 here
    } else {
        x = -std::abs(V - state_.mu);
    }
    x *= beta_;
    if (x < -700.0) return 0.0;
    return thermal_scale_ * polylog(1.5, std::min(1.0, std::exp(x)));
}

double DensityModel::density(double r, double z) const {
    return condensate_density(r, z) + thermal_density(r, z);
}

double DensityModel::center_density() const { return density(0.0, 0.0); }

double DensityModel::normalized(double r, double z) const {
    const double c = center_density();
    if (!(c > 0.0)) throw ConfigError("normalized profile needs a positive central density");
    return density(r, z) / c;
}

double DensityModel::tf_radius_r() const {
    if (model_ != GasModel::interacting || state_.mu <= 0.0) return 0.0;
    return std::sqrt(2.0 * state_.mu / (trap_.M * trap_.omega_r * trap_.omega_r));
}

double DensityModel::tf_radius_z() const {
    if (model_ != GasModel::interacting || state_.mu <= 0.0) return 0.0;
    return std::sqrt(2.0 * state_.mu / (trap_.M * trap_.omega_z * trap_.omega_z));
}

double DensityModel::condensate_half_length(double r) const {
    if (model_ != GasModel::interacting || state_.mu <= 0.0) return 0.0;
    const double rest = 2.0 * state_.mu / trap_.M - trap_.omega_r * trap_.omega_r * r * r;
    return rest > 0.0 ? std::sqrt(rest) / trap_.omega_z : 0.0;
}

double DensityModel::thomas_fermi_number() const {
    if (model_ != GasModel::interacting || state_.mu <= 0.0) return 0.0;
    const double Rr = tf_radius_r();
    return 8.0 * kPi / 15.0 * (state_.mu / state_.U) * Rr * Rr * tf_radius_z();
}

double DensityModel::outer_radius() const {
    double r = 0.0;
    if (trap_.T > 0.0) {
        const double V = std::max(state_.mu, 0.0) + kThermalCutoff / beta_;
        r = std::sqrt(2.0 * V / (trap_.M * trap_.omega_r * trap_.omega_r));
    }
    r = std::max(r, tf_radius_r());
    if (model_ == GasModel::ideal) r = std::max(r, kGaussianCutoff * sigma_r_);
    return r;
}

double DensityModel::outer_half_length() const {
    return outer_radius() * trap_.omega_r / trap_.omega_z;
}

double DensityModel::integrate_density(bool condensate_only, double rel_tol) const {
    const double r_out = outer_radius();
    const double z_out = outer_half_length();
    if (!(r_out > 0.0)) return 0.0;
    QuadratureOptions inner_opts;
    inner_opts.rel_tol = 0.1 * rel_tol;
    QuadratureOptions outer_opts;
    outer_opts.rel_tol = rel_tol;

    auto column = [&](double r) {
        auto fz = [&](double z) {
            return condensate_only ? condensate_density(r, z) : density(r, z);
        };
        const std::array<double, 1> kink{condensate_half_length(r)};
        return 2.0 * integrate(fz, 0.0, z_out, kink, inner_opts);
    };
    const std::array<double, 1> rkink{tf_radius_r()};
    return integrate([&](double r) { return 2.0 * kPi * r * column(r); }, 0.0, r_out, rkink,
                     outer_opts);
}

double DensityModel::condensate_number(double rel_tol) const {
    return integrate_density(true, rel_tol);
}

double DensityModel::total_number(double rel_tol) const {
    return integrate_density(false, rel_tol);
}

double density(double r, double z, const TrapGasParams& trap) {
    return DensityModel(trap, GasModel::interacting).density(r, z);
}

double ideal_gas_density(double r, double z, const TrapGasParams& trap) {
    return DensityModel(trap, GasModel::ideal).density(r, z);
}

NormalizedProfile::NormalizedProfile(const TrapGasParams& trap, GasModel model)
    : NormalizedProfile(DensityModel(trap, model)) {}

NormalizedProfile::NormalizedProfile(DensityModel model)
    : model_(std::move(model)), center_(model_.center_density()) {
    if (!(center_ > 0.0)) throw ConfigError("normalized profile needs a positive central density");
}

double NormalizedProfile::operator()(double r, double z) const {
    return model_.density(r, z) / center_;
}

NormalizedProfile normalized_profile(const TrapGasParams& trap, GasModel model) {
    return NormalizedProfile(trap, model);
}

double total_number(const TrapGasParams& trap, GasModel model) {
    return DensityModel(trap, model).total_number();
}

}  // namespace slowlight
