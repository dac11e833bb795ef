#include "slowlight/propagator_2d.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/delay_metrics.hpp"
#include "slowlight/errors.hpp"

#include <fmt/format.h>
#include <gsl/gsl_sf_bessel.h>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace slowlight {
namespace {

constexpr double kWindowWidths = 6.0;
constexpr double kMinTfPoints = 32.0;
constexpr double kMinExtentInBeams = 4.0;
constexpr double kEdgeBand = 0.02;       // fraction of the time window checked on each side
constexpr double kEdgeEnergyLimit = 0.01;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

using RealRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealRowsMap = Eigen::Map<RealRows>;

// Complex row-major (r, omega) viewed as real (r, 2 omega); T acts on it with one real GEMM.
void apply_hankel(const Eigen::MatrixXd& T, FieldMatrix& in, FieldMatrix& out) {
    out.resize(in.rows(), in.cols());
    RealRowsMap a(reinterpret_cast<double*>(in.data()), in.rows(), 2 * in.cols());
    RealRowsMap b(reinterpret_cast<double*>(out.data()), out.rows(), 2 * out.cols());
    b.noalias() = T * a;
}

}  // namespace

HankelTransform::HankelTransform(std::size_t n, double R) : R_(R) {
    require(n >= 4, "Hankel transform needs at least 4 nodes");
    require(R > 0.0 && std::isfinite(R), "Hankel transform radius must be positive");
    std::vector<double> zeros(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        zeros[i] = gsl_sf_bessel_zero_J0(static_cast<unsigned>(i + 1));
    }
    S_ = zeros[n];
    r_.resize(n);
    k_.resize(n);
    Eigen::VectorXd J1(static_cast<Eigen::Index>(n));
    to_physical_.resize(static_cast<Eigen::Index>(n));
    coefficient_.resize(static_cast<Eigen::Index>(n));
    weights_.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        r_[i] = zeros[i] * R / S_;
        k_[i] = zeros[i] / R;
        J1(e) = std::abs(gsl_sf_bessel_J1(zeros[i]));
        to_physical_(e) = J1(e) / R;
        coefficient_(e) = 2.0 / (R * S_ * J1(e));
        weights_(e) = 2.0 * R * R / (S_ * S_ * J1(e) * J1(e));
    }
    const auto N = static_cast<Eigen::Index>(n);
    T_.resize(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = 2.0 * gsl_sf_bessel_J0(zeros[static_cast<std::size_t>(i)] *
                                                    zeros[static_cast<std::size_t>(j)] / S_) /
                             (J1(i) * J1(j) * S_);
            T_(i, j) = v;
            T_(j, i) = v;
        }
    }
}

Eigen::MatrixXd HankelTransform::disk_gram(double a) const {
    require(a > 0.0 && a <= R_ * (1.0 + 1e-12), "disk radius must lie in (0, R]");
    const auto N = static_cast<Eigen::Index>(size());
    Eigen::VectorXd j0(N), j1(N);
    for (Eigen::Index m = 0; m < N; ++m) {
        const double x = k_[static_cast<std::size_t>(m)] * a;
        j0(m) = gsl_sf_bessel_J0(x);
        j1(m) = gsl_sf_bessel_J1(x);
    }
    Eigen::MatrixXd M(N, N);
    for (Eigen::Index m = 0; m < N; ++m) {
        const double km = k_[static_cast<std::size_t>(m)];
        M(m, m) = 0.5 * a * a * (j0(m) * j0(m) + j1(m) * j1(m));
        for (Eigen::Index q = 0; q < m; ++q) {
            const double kq = k_[static_cast<std::size_t>(q)];
            const double v = a * (km * j1(m) * j0(q) - kq * j0(m) * j1(q)) / (km * km - kq * kq);
            M(m, q) = v;
            M(q, m) = v;
        }
    }
    return M;
}

RadialMedium::RadialMedium(std::function<double(double, double)> profile, cplx Ng_peak,
                           cplx alpha_peak, double L, double v_ref, double k0,
                           double radial_scale, bool bounded)
    : profile_(std::move(profile)),
      Ng_peak_(Ng_peak),
      alpha_peak_(alpha_peak),
      L_(L),
      v_ref_(v_ref),
      k0_(k0),
      radial_scale_(radial_scale),
      bounded_(bounded) {
    require(L_ > 0.0 && std::isfinite(L_), "medium length must be positive");
    require(v_ref_ > 0.0 && std::isfinite(v_ref_), "reference velocity must be positive");
    require(k0_ > 0.0 && std::isfinite(k0_), "carrier wavenumber must be positive");
    require(radial_scale_ >= 0.0, "radial scale must be non-negative");
    require(static_cast<bool>(profile_), "medium profile is empty");
}

RadialMedium RadialMedium::cloud(const DensityModel& model, const OpticalParams& optical,
                                 double threshold) {
    const double half = cloud_length(model, threshold);
    const double rho0 = model.center_density();
    const IndexBundle b = index_bundle(rho0, optical);
    auto f = [model, rho0, half](double r, double zbar) {
        return model.density(r, zbar * half) / rho0;
    };
    return RadialMedium(f, b.N_g, b.alpha, 2.0 * half, v_g0_reference(model, optical),
                        derive_optical(optical).k_0, model.tf_radius_r(), true);
}

RadialMedium RadialMedium::vacuum(double L, double v_ref, double k0) {
    return RadialMedium([](double, double) { return 0.0; }, cplx(1.0, 0.0), cplx(0.0, 0.0), L,
                        v_ref, k0, 0.0, true);
}

cplx RadialMedium::kappa(double r, double zbar) const {
    return v_ref_ * (1.0 + profile_(r, zbar) * (Ng_peak_ - 1.0)) / (2.0 * kSI.c);
}

cplx RadialMedium::source(double r, double zbar) const {
    return 0.5 * L_ * profile_(r, zbar) * alpha_peak_;
}

std::size_t ParaxialField::row_near(double zbar) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (std::abs(z[i] - zbar) < std::abs(z[best] - zbar)) best = i;
    }
    return best;
}

ParaxialField propagate_paraxial(double a_bar, double beam_radius, const RadialMedium& medium,
                                 const TransverseGrid& transverse, const Grid1D& axial,
                                 const ParaxialOptions& opts) {
    require(a_bar > 0.0 && std::isfinite(a_bar), "scaled pulse sharpness must be positive");
    require(beam_radius > 0.0 && std::isfinite(beam_radius), "beam radius must be positive");
    require(is_power_of_two(transverse.points) && transverse.points >= 16,
            "transverse points must be a power of two >= 16");
    require(transverse.extent >= kMinExtentInBeams * beam_radius,
            fmt::format("transverse extent {:.4g} m is below {} beam radii", transverse.extent,
                        kMinExtentInBeams));
    require(axial.nz >= 2 && axial.z_max > axial.z_min, "axial grid needs nz >= 2 and z_max > z_min");
    require(axial.store_every >= 1, "store_every must be >= 1");
    if (medium.bounded()) {
        const double f0 = medium.profile(0.0, axial.z_min);
        require(f0 < opts.injection_tolerance,
                fmt::format("injection at z = {} lies inside the cloud (f = {:.3g})", axial.z_min, f0));
    }

    auto hankel = std::make_shared<const HankelTransform>(transverse.points, transverse.extent);
    const HankelTransform& H = *hankel;
    const auto nr = static_cast<Eigen::Index>(H.size());
    const double dr = H.r()[1] - H.r()[0];
    if (medium.radial_scale() > 0.0) {
        require(dr <= medium.radial_scale() / kMinTfPoints,
                fmt::format("radial spacing {:.3g} m resolves the cloud radius {:.3g} m with fewer "
                            "than {} points",
                            dr, medium.radial_scale(), kMinTfPoints));
    }

    ParaxialField out;
    out.hankel = hankel;
    out.L = medium.L();
    out.v_g0 = medium.v_ref();
    out.a_bar = a_bar;
    out.beam_radius = beam_radius;
    out.diffraction = opts.diffraction;

    const std::size_t nz = axial.nz;
    const double dz = (axial.z_max - axial.z_min) / static_cast<double>(nz - 1);

    // Time window from the on-axis retardation.
    const double width = 1.0 / std::sqrt(a_bar);
    double t_min = axial.t_min, t_max = axial.t_max;
    std::size_t nt = axial.nt;
    if (axial.auto_time) {
        double K = 0.0, lo = 0.0, hi = 0.0;
        for (std::size_t k = 0; k + 1 < nz; ++k) {
            const double z0 = axial.z_min + dz * static_cast<double>(k);
            K += dz * (medium.kappa(0.0, z0) + 4.0 * medium.kappa(0.0, z0 + 0.5 * dz) +
                       medium.kappa(0.0, z0 + dz)).real() / 6.0;
            lo = std::min(lo, K);
            hi = std::max(hi, K);
        }
        t_min = lo - kWindowWidths * width;
        t_max = hi + kWindowWidths * width;
        nt = 16;
        while (static_cast<double>(nt) < (t_max - t_min) / width * opts.points_per_width) nt *= 2;
    }
    require(t_max > t_min && nt >= 8, "time window is empty");
    const double dt = (t_max - t_min) / static_cast<double>(nt);
    out.t.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) out.t[j] = t_min + dt * static_cast<double>(j);

    // Temporal content. The spectral mode carries every significant Fourier bin
    // of the injected Gaussian; the quasi-monochromatic mode carries the carrier
    // amplitude A(r, z) only and attaches exp(-a_bar (t - K(r, z))^2) per ray.
    const bool spectral = opts.temporal == TemporalMode::spectral;
    out.temporal = opts.temporal;
    Eigen::FFT<double> fft;
    std::vector<cplx> pulse_w;
    std::vector<std::size_t> bins;
    double incident_spectral = 1.0;
    if (spectral) {
        std::vector<cplx> pulse_t(nt);
        for (std::size_t j = 0; j < nt; ++j) pulse_t[j] = std::exp(-a_bar * out.t[j] * out.t[j]);
        fft.fwd(pulse_w, pulse_t);
        double top = 0.0;
        for (const cplx& p : pulse_w) top = std::max(top, std::abs(p));
        for (std::size_t m = 0; m < nt; ++m) {
            if (std::abs(pulse_w[m]) >= opts.spectrum_floor * top) bins.push_back(m);
        }
        incident_spectral = 0.0;
        for (std::size_t m : bins) {
            const long signed_m = m < nt / 2 ? static_cast<long>(m)
                                             : static_cast<long>(m) - static_cast<long>(nt);
            out.omega.push_back(2.0 * kPi * static_cast<double>(signed_m) /
                                (static_cast<double>(nt) * dt));
            incident_spectral += std::norm(pulse_w[m]);
        }
    } else {
        out.omega.push_back(0.0);
    }
    const auto nw = static_cast<Eigen::Index>(out.omega.size());

    // Scaled field F(r_i, omega) at injection.
    FieldMatrix F(nr, nw), G(nr, nw);
    for (Eigen::Index i = 0; i < nr; ++i) {
        const double r = H.r()[static_cast<std::size_t>(i)];
        const double g = std::exp(-r * r / (beam_radius * beam_radius)) / H.to_physical()(i);
        for (Eigen::Index b = 0; b < nw; ++b) {
            F(i, b) = spectral ? g * pulse_w[bins[static_cast<std::size_t>(b)]] : cplx(g, 0.0);
        }
    }

    const Eigen::MatrixXd& T = H.matrix();
    // dE/dzbar = ... + i (L / 4 k0) laplacian; half-step kernel in k space.
    const double D = medium.L() / (4.0 * medium.k0());
    Eigen::ArrayXcd half_kernel(nr);
    for (Eigen::Index m = 0; m < nr; ++m) {
        const double k = H.k()[static_cast<std::size_t>(m)];
        half_kernel(m) = std::exp(cplx(0.0, -0.5 * D * k * k * dz));
    }
    const double k_alias = 0.9 * H.S() / H.R();
    auto alias_fraction = [&](const FieldMatrix& spec) {
        const Eigen::ArrayXd rows = spec.rowwise().squaredNorm().array();
        double high = 0.0;
        for (Eigen::Index m = 0; m < nr; ++m) {
            if (H.k()[static_cast<std::size_t>(m)] > k_alias) high += rows(m);
        }
        const double total = rows.sum();
        return total > 0.0 ? high / total : 0.0;
    };
    auto check_alias = [&](const FieldMatrix& spec, double zbar) {
        const double frac = alias_fraction(spec);
        out.max_alias_fraction = std::max(out.max_alias_fraction, frac);
        if (frac > opts.alias_limit) {
            throw NumericalError(fmt::format(
                "aliasing: {:.3g} of the transverse spectral energy lies within 10% of the largest "
                "k at z = {:.4f}; widen the transverse grid or add points",
                frac, zbar));
        }
    };

    // Accumulated complex retardation per radius and on the axis.
    std::vector<cplx> K_acc(static_cast<std::size_t>(nr), cplx(0.0, 0.0));
    cplx K_axis(0.0, 0.0);
    // Quasi-monochromatic energy factor int |exp(-a (t - K)^2)|^2 dt relative to K = 0.
    auto temporal_gain = [&](cplx K) { return spectral ? 1.0 : std::exp(2.0 * a_bar * K.imag() * K.imag()); };

    std::vector<std::size_t> stored;
    for (std::size_t k = 0; k < nz; k += axial.store_every) stored.push_back(k);
    if (stored.back() != nz - 1) stored.push_back(nz - 1);
    const auto ns = static_cast<Eigen::Index>(stored.size());
    out.intensity.resize(ns, nr);
    out.axis.resize(ns, static_cast<Eigen::Index>(nt));
    out.axis_intensity.resize(stored.size());
    out.power.resize(stored.size());
    double incident_power = 0.0;
    std::vector<cplx> spectrum(nt), trace;
    auto record = [&](std::size_t slot, double zbar) {
        const auto s = static_cast<Eigen::Index>(slot);
        out.z.push_back(zbar);
        double power = 0.0;
        for (Eigen::Index i = 0; i < nr; ++i) {
            const double phys = H.to_physical()(i);
            const double I = F.row(i).squaredNorm() * phys * phys / incident_spectral *
                             temporal_gain(K_acc[static_cast<std::size_t>(i)]);
            out.intensity(s, i) = I;
            power += H.weights()(i) * I;
        }
        if (slot == 0) incident_power = power;
        out.power[slot] = power / incident_power;
        if (spectral) {
            std::fill(spectrum.begin(), spectrum.end(), cplx(0.0, 0.0));
            double axis = 0.0;
            for (Eigen::Index b = 0; b < nw; ++b) {
                const cplx f0 = (H.coefficient().array() * G.col(b).array()).sum();
                spectrum[bins[static_cast<std::size_t>(b)]] = f0;
                axis += std::norm(f0);
            }
            out.axis_intensity[slot] = axis / incident_spectral;
            fft.inv(trace, spectrum);
            for (std::size_t j = 0; j < nt; ++j) out.axis(s, static_cast<Eigen::Index>(j)) = trace[j];
        } else {
            const cplx A0 = (H.coefficient().array() * G.col(0).array()).sum();
            out.axis_intensity[slot] = std::norm(A0) * temporal_gain(K_axis);
            for (std::size_t j = 0; j < nt; ++j) {
                const cplx tau = out.t[j] - K_axis;
                out.axis(s, static_cast<Eigen::Index>(j)) = A0 * std::exp(-a_bar * tau * tau);
            }
        }
    };

    apply_hankel(T, F, G);
    check_alias(G, axial.z_min);
    out.entry_spectrum = G;
    record(0, axial.z_min);
    std::size_t slot = 1;

    // Cell integrals of kappa and s at each radius by Simpson's rule.
    std::vector<cplx> k_left(static_cast<std::size_t>(nr)), s_left(static_cast<std::size_t>(nr));
    for (Eigen::Index i = 0; i < nr; ++i) {
        const double r = H.r()[static_cast<std::size_t>(i)];
        k_left[static_cast<std::size_t>(i)] = medium.kappa(r, axial.z_min);
        s_left[static_cast<std::size_t>(i)] = medium.source(r, axial.z_min);
    }
    cplx k_axis_left = medium.kappa(0.0, axial.z_min);
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        const double z0 = axial.z_min + dz * static_cast<double>(k);
        const double z1 = k + 2 == nz ? axial.z_max : z0 + dz;
        const double zm = 0.5 * (z0 + z1);
        if (opts.diffraction) {
            G.array().colwise() *= half_kernel;
            apply_hankel(T, G, F);
        }
        for (Eigen::Index i = 0; i < nr; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const double r = H.r()[u];
            const cplx k_mid = medium.kappa(r, zm), k_right = medium.kappa(r, z1);
            const cplx s_mid = medium.source(r, zm), s_right = medium.source(r, z1);
            const cplx Kc = (k_left[u] + 4.0 * k_mid + k_right) * (z1 - z0) / 6.0;
            const cplx Sc = (s_left[u] + 4.0 * s_mid + s_right) * (z1 - z0) / 6.0;
            k_left[u] = k_right;
            s_left[u] = s_right;
            K_acc[u] += Kc;
            const cplx eS = std::exp(Sc);
            for (Eigen::Index b = 0; b < nw; ++b) {
                F(i, b) *= eS * std::exp(cplx(0.0, -out.omega[static_cast<std::size_t>(b)]) * Kc);
            }
        }
        const cplx k_axis_right = medium.kappa(0.0, z1);
        K_axis += (k_axis_left + 4.0 * medium.kappa(0.0, zm) + k_axis_right) * (z1 - z0) / 6.0;
        k_axis_left = k_axis_right;

        const bool keep = slot < stored.size() && stored[slot] == k + 1;
        if (opts.diffraction) {
            apply_hankel(T, F, G);
            G.array().colwise() *= half_kernel;
            check_alias(G, z1);
            if (keep) apply_hankel(T, G, F);
        } else if (keep) {
            apply_hankel(T, F, G);
            check_alias(G, z1);
        }
        if (keep) record(slot++, z1);
        if (!F.allFinite() || !G.allFinite()) throw NumericalError("paraxial field became non-finite");
    }
    if (spectral) {
        out.exit_spectrum = G;
    } else {
        // Fold the per-ray temporal energy factor into the carrier amplitude so
        // that |column|^2 is the time-integrated intensity.
        FieldMatrix Fh = F;
        for (Eigen::Index i = 0; i < nr; ++i) {
            Fh(i, 0) *= std::sqrt(temporal_gain(K_acc[static_cast<std::size_t>(i)]));
        }
        apply_hankel(T, Fh, out.exit_spectrum);
    }
    return out;
}

ParaxialField propagate_paraxial(const Scenario2D& sc, const ParaxialOptions& opts) {
    sc.pulse.validate();
    const DensityModel model(sc.trap);
    const RadialMedium medium = RadialMedium::cloud(model, sc.optical.with_detuning(sc.pulse.Delta));
    Grid1D axial = sc.axial;
    axial.z_min = 2.0 * sc.pulse.z0 / medium.L();
    const double scale = medium.L() / medium.v_ref();
    return propagate_paraxial(sc.pulse.a * scale * scale, sc.beam_radius, medium, sc.transverse,
                              axial, opts);
}

IntensityMap time_averaged_intensity(const ParaxialField& field) {
    const auto nt = field.axis.cols();
    const auto band = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(kEdgeBand * static_cast<double>(nt)));
    for (Eigen::Index s = 0; s < field.axis.rows(); ++s) {
        const auto row = field.axis.row(s);
        const double total = row.squaredNorm();
        const double edge = row.head(band).squaredNorm() + row.tail(band).squaredNorm();
        if (total > 0.0 && edge > kEdgeEnergyLimit * total) {
            throw ConfigError(fmt::format(
                "time window truncates the pulse: {:.3g} of the on-axis energy at z = {:.4f} lies "
                "at the window edges",
                edge / total, field.z[static_cast<std::size_t>(s)]));
        }
    }
    const HankelTransform& H = *field.hankel;
    const auto nr = static_cast<Eigen::Index>(H.size());
    IntensityMap map;
    map.z = field.z;
    map.x.reserve(static_cast<std::size_t>(2 * nr + 1));
    for (Eigen::Index i = nr - 1; i >= 0; --i) map.x.push_back(-H.r()[static_cast<std::size_t>(i)]);
    map.x.push_back(0.0);
    for (Eigen::Index i = 0; i < nr; ++i) map.x.push_back(H.r()[static_cast<std::size_t>(i)]);
    map.I.resize(field.intensity.rows(), 2 * nr + 1);
    for (Eigen::Index s = 0; s < field.intensity.rows(); ++s) {
        map.I(s, nr) = field.axis_intensity[static_cast<std::size_t>(s)];
        for (Eigen::Index i = 0; i < nr; ++i) {
            map.I(s, nr + 1 + i) = field.intensity(s, i);
            map.I(s, nr - 1 - i) = field.intensity(s, i);
        }
    }
    return map;
}

double pinhole_transmission(const ParaxialField& field, double R) {
    const HankelTransform& H = *field.hankel;
    const Eigen::MatrixXd M = H.disk_gram(R);
    auto energy = [&](const FieldMatrix& spec) {
        const Eigen::MatrixXcd c = H.coefficient().asDiagonal() * spec;
        return (c.adjoint() * M * c).trace().real();
    };
    return energy(field.exit_spectrum) / energy(field.entry_spectrum);
}

double beam_width(const ParaxialField& field, std::size_t row) {
    const HankelTransform& H = *field.hankel;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < H.size(); ++i) {
        const double wI = H.weights()(static_cast<Eigen::Index>(i)) *
                          field.intensity(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(i));
        num += wI * H.r()[i] * H.r()[i];
        den += wI;
    }
    return std::sqrt(2.0 * num / den);
}

double axis_delay(const ParaxialField& field, std::size_t row) {
    const auto n = field.t.size();
    const double t_in = peak_time(field.t, field.axis.row(0).data(), n);
    const double t_out = peak_time(field.t, field.axis.row(static_cast<Eigen::Index>(row)).data(), n);
    const double dz = field.meters(field.z[row]) - field.meters(field.z[0]);
    return field.seconds(t_out - t_in) - dz / kSI.c;
}

double axis_peak_amplitude(const ParaxialField& field, std::size_t row) {
    const auto r = field.axis.row(static_cast<Eigen::Index>(row));
    Eigen::Index imax = 0;
    r.cwiseAbs2().maxCoeff(&imax);
    if (imax == 0 || imax + 1 == r.size()) return std::abs(r(imax));
    const double y0 = std::norm(r(imax - 1)), y1 = std::norm(r(imax)), y2 = std::norm(r(imax + 1));
    const double denom = y0 - 2.0 * y1 + y2;
    if (denom >= 0.0) return std::sqrt(y1);
    const double d = 0.5 * (y0 - y2) / denom;
    return std::sqrt(y1 - 0.25 * (y0 - y2) * d);
}

}  // namespace slowlight
