#include "slowlight/propagator_1d.hpp"

#include "slowlight/constants.hpp"
#include "slowlight/delay_metrics.hpp"
#include "slowlight/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace slowlight {
namespace {

constexpr double kPointsPerWidth = 40.0;
constexpr double kWindowWidths = 4.0;

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

}  // namespace

void PulseSpec::validate() const {
    require(a > 0.0 && std::isfinite(a), "pulse sharpness a must be positive");
    require(std::isfinite(z0), "pulse injection point must be finite");
    require(std::isfinite(Delta), "pulse detuning must be finite");
}

UniformSolution analytic_uniform_solution(const PulseSpec& pulse, cplx Ng, cplx alpha, double dz,
                                          double t) {
    pulse.validate();
    const double ng1 = Ng.real() / kSI.c;
    const double ng2 = Ng.imag() / kSI.c;
    const double retarded = t - ng1 * dz;
    UniformSolution s;
    s.U = std::exp(alpha.real() * dz + pulse.a * (ng2 * dz) * (ng2 * dz) -
                   pulse.a * retarded * retarded);
    s.phi = alpha.imag() * dz + 2.0 * pulse.a * ng2 * dz * retarded;
    return s;
}

double v_g0_reference(const DensityModel& model, const OpticalParams& optical) {
    return local_group_velocity(model.center_density(), optical);
}

double v_g0_reference(const TrapGasParams& trap, const OpticalParams& optical) {
    return v_g0_reference(DensityModel(trap), optical);
}

ScaledMedium::ScaledMedium(std::function<double(double)> profile, cplx Ng_peak, cplx alpha_peak,
                           double L, double v_ref, bool bounded)
    : profile_(std::move(profile)),
      Ng_peak_(Ng_peak),
      alpha_peak_(alpha_peak),
      L_(L),
      v_ref_(v_ref),
      bounded_(bounded) {
    require(L_ > 0.0 && std::isfinite(L_), "medium length must be positive");
    require(v_ref_ > 0.0 && std::isfinite(v_ref_), "reference velocity must be positive");
    require(static_cast<bool>(profile_), "medium profile is empty");
}

ScaledMedium ScaledMedium::cloud(const DensityModel& model, const OpticalParams& optical,
                                 double threshold) {
    const double half = cloud_length(model, threshold);
    const double rho0 = model.center_density();
    const IndexBundle b = index_bundle(rho0, optical);
    const double L = 2.0 * half;
    auto f = [model, rho0, half](double zbar) { return model.density(0.0, zbar * half) / rho0; };
    return ScaledMedium(f, b.N_g, b.alpha, L, v_g0_reference(model, optical), true);
}

ScaledMedium ScaledMedium::uniform(double rho, const OpticalParams& optical, double L,
                                   double v_ref) {
    const IndexBundle b = index_bundle(rho, optical);
    if (v_ref <= 0.0) v_ref = local_group_velocity(rho, optical);
    return uniform_indices(b.N_g, b.alpha, L, v_ref);
}

ScaledMedium ScaledMedium::uniform_indices(cplx Ng, cplx alpha, double L, double v_ref) {
    return ScaledMedium([](double) { return 1.0; }, Ng, alpha, L, v_ref, false);
}

ScaledMedium ScaledMedium::vacuum(double L, double v_ref) {
    return ScaledMedium([](double) { return 0.0; }, cplx(1.0, 0.0), cplx(0.0, 0.0), L, v_ref,
                        true);
}

cplx ScaledMedium::kappa(double zbar) const {
    const double f = profile_(zbar);
    return v_ref_ * (1.0 + f * (Ng_peak_ - 1.0)) / (2.0 * kSI.c);
}

cplx ScaledMedium::source(double zbar) const {
    return 0.5 * L_ * profile_(zbar) * alpha_peak_;
}

const FieldMatrix& EnvelopeField::scheme(FieldScheme s) const {
    const FieldMatrix& m = s == FieldScheme::grid ? values : reference;
    if (m.size() == 0) throw ConfigError("requested scheme was not run for this field");
    return m;
}

std::size_t EnvelopeField::row_near(double zbar) const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (std::abs(z[i] - zbar) < std::abs(z[best] - zbar)) best = i;
    }
    return best;
}

EnvelopeField propagate_1d(double a_bar, const ScaledMedium& medium, const Grid1D& grid,
                           const Propagate1DOptions& opts) {
    require(a_bar > 0.0 && std::isfinite(a_bar), "scaled pulse sharpness must be positive");
    require(grid.nz >= 2 && grid.nt >= 8, "grid needs nz >= 2 and nt >= 8");
    require(grid.z_max > grid.z_min, "grid needs z_max > z_min");
    require(grid.store_every >= 1, "store_every must be >= 1");
    require(grid.cfl_margin > 0.0 && grid.cfl_margin <= 1.0, "cfl_margin must lie in (0, 1]");
    if (medium.bounded()) {
        const double f0 = medium.profile(grid.z_min);
        if (!(f0 < opts.injection_tolerance)) {
            throw ConfigError(fmt::format(
                "injection at z = {} lies inside the cloud (f = {:.3g} >= {:.1g}); start further out",
                grid.z_min, f0, opts.injection_tolerance));
        }
    }

    EnvelopeField out;
    out.L = medium.L();
    out.v_g0 = medium.v_ref();
    out.a_bar = a_bar;
    const std::size_t nz = grid.nz;
    const double dz = (grid.z_max - grid.z_min) / static_cast<double>(nz - 1);

    // Cell-averaged coefficients by Simpson's rule. The profile is continuous
    // with at most a kink at the condensate surface, so each cell integral is
    // accurate to at least second order.
    std::vector<cplx> kap_cell(nz - 1), src_cell(nz - 1);
    out.z_nodes.resize(nz);
    out.K.assign(nz, cplx(0.0, 0.0));
    out.S.assign(nz, cplx(0.0, 0.0));
    cplx k_left = medium.kappa(grid.z_min);
    cplx s_left = medium.source(grid.z_min);
    out.z_nodes[0] = grid.z_min;
    double max_abs_kappa = 0.0;
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        const double z0 = grid.z_min + dz * static_cast<double>(k);
        const double z1 = k + 2 == nz ? grid.z_max : z0 + dz;
        const double zm = 0.5 * (z0 + z1);
        const cplx k_mid = medium.kappa(zm), k_right = medium.kappa(z1);
        const cplx s_mid = medium.source(zm), s_right = medium.source(z1);
        kap_cell[k] = (k_left + 4.0 * k_mid + k_right) / 6.0;
        src_cell[k] = (s_left + 4.0 * s_mid + s_right) / 6.0;
        out.K[k + 1] = out.K[k] + kap_cell[k] * dz;
        out.S[k + 1] = out.S[k] + src_cell[k] * dz;
        out.z_nodes[k + 1] = z1;
        max_abs_kappa = std::max(max_abs_kappa, std::abs(kap_cell[k]));
        k_left = k_right;
        s_left = s_right;
    }

    // Time window.
    double t_min = grid.t_min, t_max = grid.t_max;
    const double width = 1.0 / std::sqrt(a_bar);
    if (grid.auto_time) {
        double lo = 0.0, hi = 0.0;
        for (const cplx& k : out.K) {
            lo = std::min(lo, k.real());
            hi = std::max(hi, k.real());
        }
        t_min = lo - kWindowWidths * width;
        t_max = hi + kWindowWidths * width;
        if (opts.run_grid) {
            const double dt_needed = max_abs_kappa * dz / grid.cfl_margin;
            const double span_needed = dt_needed * static_cast<double>(grid.nt - 1);
            if (t_max - t_min < span_needed) t_max = t_min + span_needed;
        }
    }
    require(t_max > t_min, "time window is empty");
    const std::size_t nt = grid.nt;
    const double dt = (t_max - t_min) / static_cast<double>(nt - 1);
    if (width / dt < kPointsPerWidth) {
        throw ConfigError(fmt::format(
            "time grid under-resolves the pulse: {:.1f} points per 1/sqrt(a), need {}",
            width / dt, kPointsPerWidth));
    }
    out.t.resize(nt);
    for (std::size_t j = 0; j < nt; ++j) out.t[j] = t_min + dt * static_cast<double>(j);

    std::vector<std::size_t> stored;
    for (std::size_t k = 0; k < nz; k += grid.store_every) stored.push_back(k);
    if (stored.back() != nz - 1) stored.push_back(nz - 1);
    out.z.reserve(stored.size());
    for (std::size_t k : stored) out.z.push_back(out.z_nodes[k]);

    // Exact solution along characteristics: E = G(t - K(z)) exp(S(z)), with G entire.
    const double gauss_energy = std::sqrt(kPi / (2.0 * a_bar));
    out.energy_reference.resize(nz);
    for (std::size_t k = 0; k < nz; ++k) {
        const double kim = out.K[k].imag();
        out.energy_reference[k] =
            gauss_energy * std::exp(2.0 * a_bar * kim * kim + 2.0 * out.S[k].real());
    }
    out.reference.resize(static_cast<Eigen::Index>(stored.size()), static_cast<Eigen::Index>(nt));
    for (std::size_t i = 0; i < stored.size(); ++i) {
        const cplx K = out.K[stored[i]];
        const cplx eS = std::exp(out.S[stored[i]]);
        for (std::size_t j = 0; j < nt; ++j) {
            const cplx tau = out.t[j] - K;
            out.reference(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                std::exp(-a_bar * tau * tau) * eS;
        }
    }
    if (!opts.run_grid) return out;

    // First-order upwind march in z. The upwind side follows the sign of Re(nu).
    Eigen::ArrayXcd E(static_cast<Eigen::Index>(nt));
    for (std::size_t j = 0; j < nt; ++j) E(static_cast<Eigen::Index>(j)) = std::exp(-a_bar * out.t[j] * out.t[j]);
    Eigen::ArrayXcd next(E.size());
    out.values.resize(static_cast<Eigen::Index>(stored.size()), static_cast<Eigen::Index>(nt));
    out.energy.resize(nz);
    std::size_t store_pos = 0;
    auto record = [&](std::size_t k) {
        out.energy[k] = E.abs2().sum() * dt;
        if (store_pos < stored.size() && stored[store_pos] == k) {
            out.values.row(static_cast<Eigen::Index>(store_pos)) = E.matrix().transpose();
            ++store_pos;
        }
    };
    record(0);
    const Eigen::Index n = E.size();
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        const cplx nu = kap_cell[k] * dz / dt;
        out.max_courant = std::max(out.max_courant, std::abs(nu));
        if (std::abs(nu) > 1.0 + 1e-12) {
            throw ConfigError(fmt::format(
                "CFL violation: |nu| = {:.4f} > 1 at z = {:.4f}; widen the time window or refine z",
                std::abs(nu), out.z_nodes[k]));
        }
        // max over theta of the upwind amplification factor |1 -+ nu (1 - e^{-+i theta})|
        out.spurious_growth *= std::abs(nu.real() >= 0.0 ? 1.0 - nu : 1.0 + nu) + std::abs(nu);
        if (out.spurious_growth > opts.max_spurious_growth) {
            throw NumericalError(fmt::format(
                "upwind scheme amplifies spurious modes by {:.3g} at z = {:.4f} (complex advection "
                "makes the grid problem ill-posed); use the characteristics scheme",
                out.spurious_growth, out.z_nodes[k]));
        }
        const cplx decay = std::exp(src_cell[k] * dz);
        if (nu.real() >= 0.0) {
            next(0) = E(0) * (1.0 - nu);
            next.tail(n - 1) = E.tail(n - 1) - nu * (E.tail(n - 1) - E.head(n - 1));
        } else {
            next(n - 1) = E(n - 1) * (1.0 + nu);
            next.head(n - 1) = E.head(n - 1) - nu * (E.tail(n - 1) - E.head(n - 1));
        }
        E = next * decay;
        if (!E.allFinite()) throw NumericalError("upwind field became non-finite");
        record(k + 1);
    }
    return out;
}

EnvelopeField propagate_1d(const PulseSpec& pulse, const TrapGasParams& trap,
                           const OpticalParams& optical, Grid1D grid,
                           const Propagate1DOptions& opts) {
    pulse.validate();
    const DensityModel model(trap);
    const ScaledMedium medium = ScaledMedium::cloud(model, optical.with_detuning(pulse.Delta));
    grid.z_min = 2.0 * pulse.z0 / medium.L();
    const double scale = medium.L() / medium.v_ref();
    return propagate_1d(pulse.a * scale * scale, medium, grid, opts);
}

double peak_time(const std::vector<double>& t, const cplx* row, std::size_t n) {
    if (n < 3 || t.size() != n) throw ConfigError("peak search needs at least three samples");
    std::vector<double> I(n);
    for (std::size_t j = 0; j < n; ++j) I[j] = std::norm(row[j]);
    const std::size_t imax = static_cast<std::size_t>(std::max_element(I.begin(), I.end()) - I.begin());
    const double top = I[imax];
    if (!(top > 0.0)) throw NumericalError("pulse has vanished; no peak to locate");

    // A second hump above 10% of the maximum, separated by a dip below half of
    // the smaller hump, marks a split pulse.
    std::vector<std::size_t> humps;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        if (I[j] >= 0.1 * top && I[j] > I[j - 1] && I[j] >= I[j + 1]) humps.push_back(j);
    }
    for (std::size_t h = 0; h + 1 < humps.size(); ++h) {
        const std::size_t a = humps[h], b = humps[h + 1];
        const double dip = *std::min_element(I.begin() + static_cast<long>(a), I.begin() + static_cast<long>(b) + 1);
        if (dip < 0.5 * std::min(I[a], I[b])) {
            throw NumericalError(fmt::format(
                "multi-modal temporal profile: peaks at t = {:.5g} and {:.5g} with dip {:.3g} of max",
                t[a], t[b], dip / top));
        }
    }
    if (imax == 0 || imax + 1 == n) {
        throw NumericalError("pulse peak sits on the time-window boundary");
    }
    const double y0 = I[imax - 1], y1 = I[imax], y2 = I[imax + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    const double shift = denom != 0.0 ? 0.5 * (y0 - y2) / denom : 0.0;
    return t[imax] + shift * (t[1] - t[0]);
}

double measure_delay(const EnvelopeField& field, double z_exit, FieldScheme scheme) {
    const FieldMatrix& m = field.scheme(scheme);
    const std::size_t row = field.row_near(z_exit);
    const std::size_t n = field.t.size();
    const double t_in = peak_time(field.t, m.row(0).data(), n);
    const double t_out = peak_time(field.t, m.row(static_cast<Eigen::Index>(row)).data(), n);
    const double dz = field.meters(field.z[row]) - field.meters(field.z[0]);
    return field.seconds(t_out - t_in) - dz / kSI.c;
}

double absorption_depth(const EnvelopeField& field, FieldScheme scheme) {
    const std::vector<double>& e = scheme == FieldScheme::grid ? field.energy : field.energy_reference;
    if (e.empty()) throw ConfigError("requested scheme was not run for this field");
    const double limit = std::exp(-2.0) * e.front();
    for (std::size_t k = 1; k < e.size(); ++k) {
        if (e[k] < limit) {
            const double frac = (e[k - 1] - limit) / (e[k - 1] - e[k]);
            const double zc = field.z_nodes[k - 1] + frac * (field.z_nodes[k] - field.z_nodes[k - 1]);
            return std::clamp(0.5 * (zc + 1.0), 0.0, 1.0);
        }
    }
    return 1.0;
}

double absorption_depth(const TrapGasParams& trap, const OpticalParams& optical, double a_bar,
                        const Grid1D& grid) {
    // Detuned N_g is complex, which the upwind grid cannot march stably;
    // the characteristics carry the exact energy.
    const ScaledMedium medium = ScaledMedium::cloud(DensityModel(trap), optical);
    Propagate1DOptions opts;
    opts.run_grid = false;
    return absorption_depth(propagate_1d(a_bar, medium, grid, opts), FieldScheme::characteristics);
}

}  // namespace slowlight
