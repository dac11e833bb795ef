#pragma once

#include "slowlight/bec_density.hpp"
#include "slowlight/params.hpp"

#include <functional>
#include <span>
#include <vector>

namespace slowlight {

struct DelayOptions {
    double threshold = 0.01;  ///< cloud edge at this fraction of the central on-axis density
    double rel_tol = 1e-6;
};

struct DelayResult {
    double T = 0.0;         ///< K
    double t_d = 0.0;       ///< s
    double L = 0.0;         ///< m, on-axis half-length
    double v_avg = 0.0;     ///< m/s, 2L / t_d
    double v_center = 0.0;  ///< m/s, local v_g at the trap center
    GasModel model = GasModel::interacting;
};

using DensityFn = std::function<double(double r, double z)>;

/// c / Re N_g at the local density, on resonance (the detuning in `optical` is ignored).
double local_group_velocity(double rho, const OpticalParams& optical);
double local_group_velocity(double r, double z, const DensityModel& model,
                            const OpticalParams& optical);
double local_group_velocity(double r, double z, const TrapGasParams& trap,
                            const OpticalParams& optical);

/// Outermost on-axis z at which rho(0, z) falls to `threshold` of rho(0, 0).
double cloud_length(const DensityModel& model, double threshold = 0.01);
double cloud_length(const TrapGasParams& trap, double threshold = 0.01);

/// Kinks of the density used as quadrature breakpoints.
struct DensityKinks {
    std::vector<double> radial;                        ///< r values
    std::function<double(double r)> axial_half_width;  ///< |z| of the kink at radius r, or 0
};

/// Pinhole-averaged delay
///   t_d = (1 / pi R^2) int_0^R 2 pi r dr int_{-L}^{L} dz (1/v_g - 1/c)
/// for an arbitrary density. R = 0 gives the on-axis line integral.
double delay_time(const DensityFn& rho, const OpticalParams& optical, double R, double L,
                  const DensityKinks& kinks = {}, double rel_tol = 1e-6);

double delay_time(const DensityModel& model, const OpticalParams& optical, double R,
                  const DelayOptions& opts = {});
double delay_time(const TrapGasParams& trap, const OpticalParams& optical, double R,
                  const DelayOptions& opts = {});

/// Delay of a slab of the central density over [-L, L]: 2L (1/v_g(rho0) - 1/c).
double uniform_delay_estimate(const DensityModel& model, const OpticalParams& optical, double L);

DelayResult evaluate_delay(const DensityModel& model, const OpticalParams& optical, double R,
                           const DelayOptions& opts = {});

/// One DelayResult per temperature, in grid order, evaluated on `workers` threads.
std::vector<DelayResult> vgroup_vs_temperature(const TrapGasParams& trap,
                                               const OpticalParams& optical, double R,
                                               std::span<const double> T_grid, GasModel model,
                                               const DelayOptions& opts = {},
                                               unsigned workers = 1);

}  // namespace slowlight
