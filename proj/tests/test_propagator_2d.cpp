#include "doctest.h"

#include "slowlight/constants.hpp"
#include "slowlight/delay_metrics.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/propagator_1d.hpp"
#include "slowlight/propagator_2d.hpp"

#include <cmath>

using namespace slowlight;

namespace {

double probe_k0() { return derive_optical(sodium_optical()).k_0; }

Grid1D axial(double z_min, double z_max, std::size_t nz, std::size_t store_every) {
    Grid1D g;
    g.z_min = z_min;
    g.z_max = z_max;
    g.nz = nz;
    g.store_every = store_every;
    return g;
}

}  // namespace

TEST_CASE("hankel transform") {
    const double w = 20e-6, R = 200e-6;
    const HankelTransform H(256, R);
    const auto n = static_cast<Eigen::Index>(H.size());
    Eigen::VectorXd F(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = H.r()[static_cast<std::size_t>(i)];
        F(i) = std::exp(-r * r / (w * w)) / H.to_physical()(i);
    }
    const Eigen::VectorXd G = H.matrix() * F;
    // int_0^inf e^{-r^2/w^2} J0(k r) r dr = (w^2 / 2) e^{-k^2 w^2 / 4}
    const double scale = H.S() / H.R();
    double worst = 0.0;
    for (Eigen::Index m = 0; m < 40; ++m) {
        const double k = H.k()[static_cast<std::size_t>(m)];
        const double J1 = H.to_physical()(m) * H.R();
        const double g = G(m) * J1 / scale;
        worst = std::max(worst, std::abs(g - 0.5 * w * w * std::exp(-k * k * w * w / 4.0)) / (0.5 * w * w));
    }
    CHECK(worst < 1e-10);
    CHECK((H.matrix() * H.matrix() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((H.coefficient().array() * G.array()).sum() == doctest::Approx(1.0).epsilon(1e-10));

    // full-disk Gram matrix is diagonal, giving back the quadrature norm
    const Eigen::MatrixXd M = H.disk_gram(R);
    const Eigen::VectorXd c = H.coefficient().asDiagonal() * G;
    double quad = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) quad += H.weights()(i) * std::pow(F(i) * H.to_physical()(i), 2);
    CHECK(c.dot(M * c) == doctest::Approx(quad).epsilon(1e-9));
    CHECK(quad == doctest::Approx(w * w / 4.0).epsilon(1e-9));
}

TEST_CASE("free-space gaussian beam") {
    const double w0 = 30e-6;
    const double zR = probe_k0() * w0 * w0 / 2.0;
    const RadialMedium vac = RadialMedium::vacuum(zR, 100.0, probe_k0());
    TransverseGrid tg;
    tg.extent = 8.0 * w0;
    tg.points = 256;
    const ParaxialField f = propagate_paraxial(25.0, w0, vac, tg, axial(-1.0, 1.0, 65, 8));
    for (std::size_t row = 0; row < f.z.size(); ++row) {
        const double z = f.meters(f.z[row] - f.z[0]);
        const double expected = w0 * std::sqrt(1.0 + (z / zR) * (z / zR));
        CHECK(beam_width(f, row) == doctest::Approx(expected).epsilon(0.01));
        CHECK(f.power[row] == doctest::Approx(1.0).epsilon(1e-6));
    }
    CHECK(beam_width(f, f.z.size() - 1) == doctest::Approx(std::sqrt(2.0) * w0).epsilon(0.01));
    CHECK(f.axis_intensity.back() == doctest::Approx(0.5).epsilon(0.01));
    // no aperture: the disk energy ratio is the total power ratio
    CHECK(pinhole_transmission(f, tg.extent) == doctest::Approx(f.power.back()).epsilon(1e-9));
}

TEST_CASE("wide beam in vacuum") {
    const RadialMedium vac = RadialMedium::vacuum(140e-6, 1.0, probe_k0());
    TransverseGrid tg;
    tg.extent = 0.8e-3;
    tg.points = 256;
    const ParaxialField f = propagate_paraxial(100.0, 0.2e-3, vac, tg, axial(-1.5, 1.5, 33, 4));
    for (double I : f.axis_intensity) CHECK(I == doctest::Approx(1.0).epsilon(0.01));
    CHECK(pinhole_transmission(f, 15e-6) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(axis_delay(f, f.z.size() - 1)) < f.seconds(f.t[1] - f.t[0]));

    const IntensityMap map = time_averaged_intensity(f);
    const auto nx = map.I.cols();
    REQUIRE(nx == 2 * 256 + 1);
    for (Eigen::Index s = 0; s < map.I.rows(); ++s) {
        for (Eigen::Index i = 0; i < nx; ++i) CHECK(map.I(s, i) == map.I(s, nx - 1 - i));
    }
    CHECK(map.x[static_cast<std::size_t>(nx / 2)] == 0.0);
}

TEST_CASE("strang splitting is second order") {
    // z-independent lens-like slab, so the only error is the splitting
    const double w0 = 40e-6, r0 = 30e-6;
    const double L = probe_k0() * w0 * w0 / 2.0;
    const RadialMedium lens([r0](double r, double) { return std::exp(-r * r / (r0 * r0)); },
                            cplx(1.0, 0.0), cplx(-200.0, 4000.0), L, 100.0, probe_k0(), 0.0, false);
    TransverseGrid tg;
    tg.extent = 16.0 * w0;
    tg.points = 256;
    auto exit_field = [&](std::size_t nz) {
        return propagate_paraxial(25.0, w0, lens, tg, axial(-1.0, 1.0, nz, nz - 1)).exit_spectrum;
    };
    const FieldMatrix ref = exit_field(1025);
    const double e1 = (exit_field(9) - ref).norm();
    const double e2 = (exit_field(17) - ref).norm();
    const double e3 = (exit_field(33) - ref).norm();
    CHECK(e1 > 1e-6 * ref.norm());
    CHECK(e2 / e1 == doctest::Approx(0.25).epsilon(0.1));
    CHECK(e3 / e2 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("without diffraction the axis follows the 1D model") {
    const OpticalParams opt = sodium_optical();
    const DensityModel m(sodium_trap(43e-9));
    const RadialMedium cloud = RadialMedium::cloud(m, opt);
    TransverseGrid tg;
    tg.extent = 200e-6;
    tg.points = 512;
    ParaxialOptions off;
    off.diffraction = false;
    const ParaxialField f = propagate_paraxial(100.0, 50e-6, cloud, tg, Scenario2D::default_axial(), off);

    Propagate1DOptions chars;
    chars.run_grid = false;
    const EnvelopeField g = propagate_1d(100.0, ScaledMedium::cloud(m, opt), Grid1D{}, chars);
    const std::size_t last = f.z.size() - 1;
    CHECK(f.z[last] == doctest::Approx(1.5));
    CHECK(axis_delay(f, last) ==
          doctest::Approx(measure_delay(g, 1.5, FieldScheme::characteristics)).epsilon(0.005));
    double peak1d = 0.0;
    for (Eigen::Index j = 0; j < g.reference.cols(); ++j) {
        peak1d = std::max(peak1d, std::abs(g.reference(g.reference.rows() - 1, j)));
    }
    CHECK(axis_peak_amplitude(f, last) == doctest::Approx(peak1d).epsilon(0.005));
}

TEST_CASE("spectral mode agrees where the bins decouple") {
    const OpticalParams opt = sodium_optical();
    const DensityModel m(sodium_trap(43e-9));
    const RadialMedium cloud = RadialMedium::cloud(m, opt);
    TransverseGrid tg;
    tg.extent = 200e-6;
    tg.points = 512;
    ParaxialOptions quasi, full;
    quasi.diffraction = full.diffraction = false;
    full.temporal = TemporalMode::spectral;
    const ParaxialField a = propagate_paraxial(100.0, 50e-6, cloud, tg, Scenario2D::default_axial(), quasi);
    const ParaxialField b = propagate_paraxial(100.0, 50e-6, cloud, tg, Scenario2D::default_axial(), full);
    CHECK(b.omega.size() > 20);
    for (std::size_t row = 0; row < a.z.size(); ++row) {
        // node values agree exactly; r = 0 comes from the Fourier-Bessel series
        CHECK(b.intensity(static_cast<Eigen::Index>(row), 0) ==
              doctest::Approx(a.intensity(static_cast<Eigen::Index>(row), 0)).epsilon(1e-9));
        CHECK(b.axis_intensity[row] == doctest::Approx(a.axis_intensity[row]).epsilon(2e-4));
        CHECK(b.power[row] == doctest::Approx(a.power[row]).epsilon(1e-6));
    }
    CHECK(axis_delay(b, b.z.size() - 1) == doctest::Approx(axis_delay(a, a.z.size() - 1)).epsilon(1e-4));
    CHECK(pinhole_transmission(b, 15e-6) == doctest::Approx(pinhole_transmission(a, 15e-6)).epsilon(1e-6));

    // free space: every bin diffracts alike
    const double w0 = 30e-6;
    const double zR = probe_k0() * w0 * w0 / 2.0;
    TransverseGrid wide;
    wide.extent = 16.0 * w0;
    wide.points = 256;
    ParaxialOptions free_full;
    free_full.temporal = TemporalMode::spectral;
    const ParaxialField f = propagate_paraxial(25.0, w0, RadialMedium::vacuum(zR, 100.0, probe_k0()),
                                               wide, axial(-1.0, 1.0, 33, 32), free_full);
    CHECK(beam_width(f, 1) == doctest::Approx(std::sqrt(2.0) * w0).epsilon(0.01));
}

TEST_CASE("thermal cloud attenuates the axis monotonically") {
    const OpticalParams opt = sodium_optical();
    TrapGasParams trap = sodium_trap(43e-9);
    trap = trap.with_temperature(0.3 * critical_temperature(trap));
    const RadialMedium cloud = RadialMedium::cloud(DensityModel(trap), opt);
    TransverseGrid tg;
    tg.extent = 400e-6;
    tg.points = 1024;
    const ParaxialField f =
        propagate_paraxial(100.0, 100e-6, cloud, tg, axial(-2.5, 2.5, 201, 4));
    // through the cloud; behind it the shadow partly refills
    for (std::size_t i = 1; i < f.axis_intensity.size(); ++i) {
        if (f.z[i] < -1.0 || f.z[i] > 1.0) continue;
        CHECK(f.axis_intensity[i] <= f.axis_intensity[i - 1] * (1.0 + 1e-9));
    }
    CHECK(f.axis_intensity.back() < 0.99);
    CHECK(f.max_alias_fraction < 1e-6);
}

TEST_CASE("configuration and numerical errors") {
    const double k0 = probe_k0();
    const RadialMedium vac = RadialMedium::vacuum(100e-6, 1.0, k0);
    TransverseGrid tg;
    tg.extent = 100e-6;
    tg.points = 64;
    const Grid1D ax = axial(-1.0, 1.0, 9, 8);
    CHECK_THROWS_AS(propagate_paraxial(25.0, 30e-6, vac, tg, ax), ConfigError);  // extent < 4 w
    TransverseGrid odd = tg;
    odd.points = 100;
    CHECK_THROWS_AS(propagate_paraxial(25.0, 10e-6, vac, odd, ax), ConfigError);

    TransverseGrid coarse;
    coarse.extent = 64e-6;
    coarse.points = 16;
    CHECK_THROWS_AS(propagate_paraxial(25.0, 2e-6, vac, coarse, ax), NumericalError);

    const RadialMedium cloud = RadialMedium::cloud(DensityModel(sodium_trap(43e-9)), sodium_optical());
    TransverseGrid sparse;
    sparse.extent = 400e-6;
    sparse.points = 64;
    CHECK_THROWS_AS(propagate_paraxial(100.0, 50e-6, cloud, sparse, Scenario2D::default_axial()),
                    ConfigError);
    TransverseGrid fine;
    fine.extent = 200e-6;
    fine.points = 512;
    CHECK_THROWS_AS(propagate_paraxial(100.0, 50e-6, cloud, fine, axial(-0.5, 1.5, 9, 8)), ConfigError);

    // window too short for the pulse: the map refuses it
    Grid1D tight = ax;
    tight.auto_time = false;
    tight.t_min = -0.1;
    tight.t_max = 0.1;
    tight.nt = 256;
    TransverseGrid ok;
    ok.extent = 200e-6;
    ok.points = 64;
    const ParaxialField f = propagate_paraxial(25.0, 30e-6, vac, ok, tight);
    CHECK_THROWS_AS(time_averaged_intensity(f), ConfigError);
}
