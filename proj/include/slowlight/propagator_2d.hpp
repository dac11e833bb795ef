#pragma once

#include "slowlight/bec_density.hpp"
#include "slowlight/optical_response.hpp"
#include "slowlight/params.hpp"
#include "slowlight/propagator_1d.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace slowlight {

/// Quasi-discrete Hankel transform of order zero on [0, R] with n nodes.
/// Nodes r_i = j_i R / S and k_i = j_i / R, S = j_{n+1}, where j_i are the
/// zeros of J0. On scaled vectors F_i = f(r_i) R / |J1(j_i)| and
/// G_i = g(k_i) (S / R) / |J1(j_i)| the transform is G = T F with T symmetric
/// and T^2 = I up to rounding.
class HankelTransform {
public:
    HankelTransform(std::size_t n, double R);

    std::size_t size() const { return r_.size(); }
    double R() const { return R_; }
    double S() const { return S_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& k() const { return k_; }
    const Eigen::MatrixXd& matrix() const { return T_; }

    /// f(r_i) = F_i * to_physical()[i].
    const Eigen::VectorXd& to_physical() const { return to_physical_; }
    /// Fourier-Bessel coefficients c_m = G_m * coefficient()[m]; f(r) = sum c_m J0(k_m r).
    const Eigen::VectorXd& coefficient() const { return coefficient_; }
    /// Quadrature weights with int_0^R |f|^2 r dr = sum w_i |f(r_i)|^2.
    const Eigen::VectorXd& weights() const { return weights_; }

    /// M_mn = int_0^a J0(k_m r) J0(k_n r) r dr.
    Eigen::MatrixXd disk_gram(double a) const;

private:
    double R_;
    double S_;
    std::vector<double> r_, k_;
    Eigen::MatrixXd T_;
    Eigen::VectorXd to_physical_, coefficient_, weights_;
};

/// Scaled medium with radial dependence; kappa and s as in ScaledMedium with
/// f = f(r, zbar), r in meters.
class RadialMedium {
public:
    RadialMedium(std::function<double(double, double)> profile, cplx Ng_peak, cplx alpha_peak,
                 double L, double v_ref, double k0, double radial_scale, bool bounded);

    static RadialMedium cloud(const DensityModel& model, const OpticalParams& optical,
                              double threshold = 0.01);
    static RadialMedium vacuum(double L, double v_ref, double k0);

    double profile(double r, double zbar) const { return profile_(r, zbar); }
    cplx kappa(double r, double zbar) const;
    cplx source(double r, double zbar) const;
    double L() const { return L_; }
    double v_ref() const { return v_ref_; }
    double k0() const { return k0_; }
    /// Transverse feature size that the grid must resolve (0: none).
    double radial_scale() const { return radial_scale_; }
    bool bounded() const { return bounded_; }

private:
    std::function<double(double, double)> profile_;
    cplx Ng_peak_, alpha_peak_;
    double L_, v_ref_, k0_, radial_scale_;
    bool bounded_;
};

struct TransverseGrid {
    double extent = 2e-3;       ///< radial half-width R, m; x spans [-R, R]
    std::size_t points = 4096;  ///< radial nodes, power of two
};

struct Scenario2D {
    double beam_radius = 0.5e-3;  ///< 1/e^2 intensity radius, m
    TransverseGrid transverse;
    Grid1D axial = default_axial();
    PulseSpec pulse;
    TrapGasParams trap;
    OpticalParams optical;

    static Grid1D default_axial() {
        Grid1D g;
        g.nz = 257;
        return g;
    }
};

/// quasi_monochromatic: diffraction acts on the carrier amplitude and each ray
/// carries its own exact 1D temporal factor. spectral: every temporal Fourier
/// bin is diffracted separately (full x, t, z co-propagation, higher cost).
enum class TemporalMode { quasi_monochromatic, spectral };

struct ParaxialOptions {
    bool diffraction = true;
    TemporalMode temporal = TemporalMode::quasi_monochromatic;
    double alias_limit = 1e-6;          ///< max spectral energy fraction in the top 10% of k
    double injection_tolerance = 1e-4;  ///< max on-axis f at the injection point
    double spectrum_floor = 1e-12;      ///< temporal bins below this relative amplitude are dropped
    double points_per_width = 16.0;     ///< temporal samples per 1/sqrt(a_bar) with auto_time
};

struct ParaxialField {
    std::shared_ptr<const HankelTransform> hankel;
    std::vector<double> z;         ///< scaled positions of stored rows
    std::vector<double> t;         ///< scaled time grid (periodic window)
    std::vector<double> omega;     ///< propagated temporal frequencies ({0} when quasi-monochromatic)
    Eigen::MatrixXd intensity;     ///< int |E|^2 dt at (row, r_i), relative to the incident axis
    std::vector<double> axis_intensity;  ///< same at r = 0
    std::vector<double> power;     ///< transverse power relative to the incident power
    FieldMatrix axis;              ///< E(r = 0, t) per stored row
    /// Scaled Hankel spectra at entry and exit; the squared column norms summed
    /// over columns give the time-integrated intensity (up to a common factor).
    FieldMatrix entry_spectrum;
    FieldMatrix exit_spectrum;
    double L = 0.0;
    double v_g0 = 0.0;
    double a_bar = 0.0;
    double beam_radius = 0.0;
    bool diffraction = true;
    TemporalMode temporal = TemporalMode::quasi_monochromatic;
    double max_alias_fraction = 0.0;

    double seconds(double tbar) const { return tbar * L / v_g0; }
    double meters(double zbar) const { return 0.5 * zbar * L; }
    std::size_t row_near(double zbar) const;
};

/// Strang split-step march of exp(-a_bar t^2) exp(-r^2 / w^2) injected at axial.z_min.
/// The medium step is exact for each carried temporal bin.
ParaxialField propagate_paraxial(double a_bar, double beam_radius, const RadialMedium& medium,
                                 const TransverseGrid& transverse, const Grid1D& axial,
                                 const ParaxialOptions& opts = {});

/// Physical-units entry on the trapped cloud at the pulse detuning.
ParaxialField propagate_paraxial(const Scenario2D& sc, const ParaxialOptions& opts = {});

struct IntensityMap {
    std::vector<double> x;  ///< m, mirrored about the axis and including x = 0
    std::vector<double> z;  ///< scaled
    Eigen::MatrixXd I;      ///< rows z, columns x
};

/// Time-integrated intensity in the y = 0 plane, normalized to the incident
/// on-axis value. Throws ConfigError if more than 1% of the on-axis energy of
/// any stored row lies near the edges of the periodic time window.
IntensityMap time_averaged_intensity(const ParaxialField& field);

/// Energy through a disk of radius R at exit over that at entry.
double pinhole_transmission(const ParaxialField& field, double R);

/// sqrt(2 <r^2>) of the time-integrated intensity at a stored row, m.
double beam_width(const ParaxialField& field, std::size_t row);

/// On-axis peak delay between entry and a stored row, s, less vacuum transit.
double axis_delay(const ParaxialField& field, std::size_t row);

/// Peak of |E(0, t)| at a stored row.
double axis_peak_amplitude(const ParaxialField& field, std::size_t row);

}  // namespace slowlight
