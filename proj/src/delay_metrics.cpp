#include "slowlight/delay_metrics.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/optical_response.hpp"
#include "slowlight/parallel.hpp"
#include "slowlight/quadrature.hpp"

#include <fmt/format.h>

#include <array>
#include <cmath>

namespace slowlight {
namespace {

constexpr int kScanPoints = 4000;

// (Re N_g - 1) / c per unit density at Delta = 0; N_g is affine in rho.
double excess_delay_per_density(const OpticalParams& optical) {
    return (index_bundle(1.0, optical.with_detuning(0.0)).N_g.real() - 1.0) / kSI.c;
}

}  // namespace

double local_group_velocity(double rho, const OpticalParams& optical) {
    return kSI.c / index_bundle(rho, optical.with_detuning(0.0)).N_g.real();
}

double local_group_velocity(double r, double z, const DensityModel& model,
                            const OpticalParams& optical) {
    return local_group_velocity(model.density(r, z), optical);
}

double local_group_velocity(double r, double z, const TrapGasParams& trap,
                            const OpticalParams& optical) {
    return local_group_velocity(r, z, DensityModel(trap), optical);
}

double cloud_length(const DensityModel& model, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError(fmt::format("cloud length threshold must lie in (0, 1), got {}", threshold));
    }
    const double target = threshold * model.center_density();
    if (!(target > 0.0)) throw ConfigError("cloud length needs a positive central density");
    auto rho = [&](double z) { return model.density(0.0, z); };

    const TrapGasParams& trap = model.trap();
    double z_hi = std::max(model.tf_radius_z(), std::sqrt(kSI.hbar / (trap.M * trap.omega_z)));
    if (trap.T > 0.0) {
        z_hi = std::max(z_hi, std::sqrt(2.0 * kSI.k_B * trap.T / trap.M) / trap.omega_z);
    }
    for (int i = 0; rho(z_hi) >= target; ++i) {
        if (i > 60) throw NumericalError("cloud edge not found");
        z_hi *= 2.0;
    }

    int last = 0;
    const double dz = z_hi / kScanPoints;
    for (int i = 1; i <= kScanPoints; ++i) {
        if (rho(i * dz) >= target) last = i;
    }
    double lo = last * dz;
    double hi = lo + dz;
    for (int it = 0; it < 100 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rho(mid) >= target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double cloud_length(const TrapGasParams& trap, double threshold) {
    return cloud_length(DensityModel(trap), threshold);
}

double delay_time(const DensityFn& rho, const OpticalParams& optical, double R, double L,
                  const DensityKinks& kinks, double rel_tol) {
    if (!(R >= 0.0) || !std::isfinite(R)) throw ConfigError("pinhole radius must be >= 0");
    if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("integration half-length must be > 0");
    const double per_density = excess_delay_per_density(optical);
    QuadratureOptions inner_opts;
    inner_opts.rel_tol = 0.1 * rel_tol;
    QuadratureOptions outer_opts;
    outer_opts.rel_tol = rel_tol;

    auto ray = [&](double r) {
        std::array<double, 2> zk{0.0, 0.0};
        std::size_t nk = 0;
        if (kinks.axial_half_width) {
            const double w = kinks.axial_half_width(r);
            if (w > 0.0 && w < L) {
                zk = {-w, w};
                nk = 2;
            }
        }
        return per_density * integrate([&](double z) { return rho(r, z); }, -L, L,
                                        std::span<const double>(zk.data(), nk), inner_opts);
    };
    if (R == 0.0) return ray(0.0);
    const double weighted = integrate([&](double r) { return r * ray(r); }, 0.0, R,
                                      kinks.radial, outer_opts);
    return 2.0 * weighted / (R * R);
}

double delay_time(const DensityModel& model, const OpticalParams& optical, double R,
                  const DelayOptions& opts) {
    const double L = cloud_length(model, opts.threshold);
    DensityKinks kinks;
    kinks.radial = {model.tf_radius_r()};
    kinks.axial_half_width = [&model](double r) { return model.condensate_half_length(r); };
    return delay_time([&model](double r, double z) { return model.density(r, z); }, optical, R, L,
                      kinks, opts.rel_tol);
}

double delay_time(const TrapGasParams& trap, const OpticalParams& optical, double R,
                  const DelayOptions& opts) {
    return delay_time(DensityModel(trap), optical, R, opts);
}

double uniform_delay_estimate(const DensityModel& model, const OpticalParams& optical, double L) {
    return 2.0 * L * excess_delay_per_density(optical) * model.center_density();
}

DelayResult evaluate_delay(const DensityModel& model, const OpticalParams& optical, double R,
                           const DelayOptions& opts) {
    DelayResult out;
    out.T = model.trap().T;
    out.model = model.model();
    out.L = cloud_length(model, opts.threshold);
    out.t_d = delay_time(model, optical, R, opts);
    if (!(out.t_d > 0.0)) {
        throw NumericalError(fmt::format("non-positive delay {} at T = {} K", out.t_d, out.T));
    }
    out.v_avg = 2.0 * out.L / out.t_d;
    out.v_center = local_group_velocity(model.center_density(), optical);
    return out;
}

std::vector<DelayResult> vgroup_vs_temperature(const TrapGasParams& trap,
                                               const OpticalParams& optical, double R,
                                               std::span<const double> T_grid, GasModel model,
                                               const DelayOptions& opts, unsigned workers) {
    if (T_grid.empty()) throw ConfigError("temperature grid is empty");
    for (double T : T_grid) {
        if (!(T > 0.0) || !std::isfinite(T)) {
            throw ConfigError(fmt::format("temperatures must be positive, got {}", T));
        }
    }
    std::vector<DelayResult> out(T_grid.size());
    parallel_for(T_grid.size(), workers, [&](std::size_t i) {
        out[i] = evaluate_delay(DensityModel(trap.with_temperature(T_grid[i]), model), optical, R,
                                opts);
    });
    return out;
}

}  // namespace slowlight
