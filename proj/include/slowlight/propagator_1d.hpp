#pragma once

#include "slowlight/bec_density.hpp"
#include "slowlight/optical_response.hpp"
#include "slowlight/params.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <vector>

namespace slowlight {

/// Injected Gaussian exp(-a t^2) at z0 with carrier detuning Delta.
struct PulseSpec {
    double a = 0.0;      ///< 1/s^2
    double z0 = 0.0;     ///< m
    double Delta = 0.0;  ///< rad/s
    void validate() const;
};

struct UniformSolution {
    double U;
    double phi;
};

/// Closed-form envelope E = U e^{i phi} in a uniform medium for the injected
/// Gaussian, with dz = z - z0 (m) and t (s).
UniformSolution analytic_uniform_solution(const PulseSpec& pulse, cplx Ng, cplx alpha, double dz,
                                          double t);

/// c / (1 + 2 pi eta(0) Re h(0, Omega)) at the central density.
double v_g0_reference(const DensityModel& model, const OpticalParams& optical);
double v_g0_reference(const TrapGasParams& trap, const OpticalParams& optical);

/// Coefficients of the scaled envelope equation
///   dE/dz + kappa(z) dE/dt = s(z) E,   z = 2 z_phys / L,  t = (v_ref / L) t_phys,
/// with kappa = v_ref N_g / (2c) and s = L alpha / 2. The medium is described by
/// a normalized profile f and the indices at f = 1; N_g - 1 and alpha scale with f.
class ScaledMedium {
public:
    ScaledMedium(std::function<double(double)> profile, cplx Ng_peak, cplx alpha_peak, double L,
                 double v_ref, bool bounded);

    /// On-axis profile of a trapped cloud, L = twice the on-axis half-length.
    static ScaledMedium cloud(const DensityModel& model, const OpticalParams& optical,
                              double threshold = 0.01);
    /// f = 1 everywhere at density rho; v_ref defaults to the resonant c / Re N_g.
    static ScaledMedium uniform(double rho, const OpticalParams& optical, double L,
                                double v_ref = 0.0);
    /// f = 1 everywhere with the indices given directly.
    static ScaledMedium uniform_indices(cplx Ng, cplx alpha, double L, double v_ref);
    static ScaledMedium vacuum(double L, double v_ref);

    double profile(double zbar) const { return profile_(zbar); }
    cplx kappa(double zbar) const;
    cplx source(double zbar) const;
    cplx Ng_peak() const { return Ng_peak_; }
    cplx alpha_peak() const { return alpha_peak_; }
    double L() const { return L_; }
    double v_ref() const { return v_ref_; }
    /// True when the medium has edges, so injection must happen outside it.
    bool bounded() const { return bounded_; }

private:
    std::function<double(double)> profile_;
    cplx Ng_peak_;
    cplx alpha_peak_;
    double L_;
    double v_ref_;
    bool bounded_;
};

struct Grid1D {
    double z_min = -1.5;
    double z_max = 1.5;
    std::size_t nz = 2048;
    /// With auto_time the window is chosen from the pulse width, the largest
    /// retardation and the CFL bound; otherwise [t_min, t_max] is used as given.
    bool auto_time = true;
    double t_min = -1.0;
    double t_max = 3.0;
    std::size_t nt = 4096;
    std::size_t store_every = 8;  ///< keep every n-th z row (the last row is always kept)
    double cfl_margin = 0.95;
};

struct Propagate1DOptions {
    bool run_grid = true;               ///< false: characteristics only
    double injection_tolerance = 1e-4;  ///< max f at the injection point of a bounded medium
    double max_spurious_growth = 10.0;  ///< bound on prod_k max_theta |g_k(theta)|
};

enum class FieldScheme { grid, characteristics };

using FieldMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EnvelopeField {
    std::vector<double> z;  ///< scaled positions of stored rows
    std::vector<double> t;  ///< scaled times
    FieldMatrix values;     ///< upwind grid scheme (empty when not run)
    FieldMatrix reference;  ///< exact characteristics
    double L = 0.0;         ///< m
    double v_g0 = 0.0;      ///< m/s
    double a_bar = 0.0;     ///< scaled pulse sharpness

    // Per z node diagnostics.
    std::vector<double> z_nodes;
    std::vector<double> energy;            ///< sum |E|^2 dt of the grid scheme
    std::vector<double> energy_reference;  ///< closed form for the characteristics
    std::vector<cplx> K;                   ///< int kappa dz from injection
    std::vector<cplx> S;                   ///< int s dz from injection
    double spurious_growth = 1.0;
    double max_courant = 0.0;

    const FieldMatrix& scheme(FieldScheme s) const;
    std::size_t row_near(double zbar) const;
    double seconds(double tbar) const { return tbar * L / v_g0; }
    double meters(double zbar) const { return 0.5 * zbar * L; }
};

/// Scaled-units propagation of exp(-a_bar t^2) injected at grid.z_min.
EnvelopeField propagate_1d(double a_bar, const ScaledMedium& medium, const Grid1D& grid,
                           const Propagate1DOptions& opts = {});

/// Physical-units entry: the cloud is built at pulse.Delta, the injection
/// point z0 sets the grid start, and a is scaled by (L / v_g0)^2.
EnvelopeField propagate_1d(const PulseSpec& pulse, const TrapGasParams& trap,
                           const OpticalParams& optical, Grid1D grid = {},
                           const Propagate1DOptions& opts = {});

/// Peak time by quadratic interpolation of |E|^2 around the grid maximum.
/// Throws NumericalError for a split (multi-peaked) pulse.
double peak_time(const std::vector<double>& t, const cplx* row, std::size_t n);

/// Operational delay, s: t_peak(exit) - t_peak(injection) - (z_exit - z_inj) / c,
/// taken at the stored row nearest z_exit (scaled).
double measure_delay(const EnvelopeField& field, double z_exit,
                     FieldScheme scheme = FieldScheme::grid);

/// Fraction of the cloud extent [-1, 1] reached before the pulse energy drops
/// below e^-2 of its incident value; 1 when it never does. The trap overload
/// uses the characteristics energy.
double absorption_depth(const EnvelopeField& field, FieldScheme scheme = FieldScheme::grid);
double absorption_depth(const TrapGasParams& trap, const OpticalParams& optical, double a_bar,
                        const Grid1D& grid = {});

}  // namespace slowlight
