#include "doctest.h"

#include "slowlight/constants.hpp"
#include "slowlight/errors.hpp"
#include "slowlight/optical_response.hpp"
#include "slowlight/params.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace slowlight;

namespace {
const double kRhoFig3 = 3.3e18;
}

TEST_CASE("chi1 limits") {
    const OpticalParams p = sodium_optical();
    const cplx two_level = chi1(0.0, 1e-12 * p.gamma, p.Gamma_31, p.Gamma_21);
    CHECK(two_level.real() == doctest::Approx(0.0));
    CHECK(two_level.imag() == doctest::Approx(1.0).epsilon(1e-12));

    const cplx res = chi1(0.0, p.Omega, p.Gamma_31, p.Gamma_21);
    const double small_g21 = 4.0 * p.Gamma_31 * p.Gamma_21 / (p.Omega * p.Omega);
    CHECK(std::abs(res.real()) < 1e-12);
    CHECK(res.imag() == doctest::Approx(small_g21).epsilon(1e-3));
    CHECK(res.imag() == doctest::Approx(6.37e-4).epsilon(2e-3));

    const double far = 100.0 * p.gamma;
    const cplx off = chi1(far, p.Omega, p.Gamma_31, p.Gamma_21);
    CHECK(off.real() == doctest::Approx(-p.Gamma_31 / far).epsilon(2e-3));
    CHECK(std::abs(off.imag()) < 1e-2 * std::abs(off.real()));

    CHECK(chi1(0.0, p.Omega, p.Gamma_31, 0.0) == cplx(0.0, 0.0));
}

TEST_CASE("dchi1_dDelta") {
    const OpticalParams p = sodium_optical();
    const cplx d0 = dchi1_dDelta(0.0, p.Omega, p.Gamma_31, p.Gamma_21);
    CHECK(d0.real() == doctest::Approx(4.0 * p.Gamma_31 / (p.Omega * p.Omega)).epsilon(3e-3));
    CHECK(d0.real() == doctest::Approx(1.01e-7).epsilon(5e-3));
    const cplx no_dress = dchi1_dDelta(0.0, 1e-9 * p.gamma, p.Gamma_31, p.Gamma_21);
    CHECK(no_dress.real() == doctest::Approx(-1.0 / p.Gamma_31).epsilon(1e-9));

    auto fd_check = [&](double Delta, double Omega, double G21) {
        const double h = 1e-6 * p.gamma;
        const cplx fd = (chi1(Delta + h, Omega, p.Gamma_31, G21) -
                         chi1(Delta - h, Omega, p.Gamma_31, G21)) / (2.0 * h);
        const cplx an = dchi1_dDelta(Delta, Omega, p.Gamma_31, G21);
        return std::abs(fd - an) / std::abs(an);
    };
    CHECK(fd_check(0.2 * p.gamma, p.Omega, p.Gamma_21) < 1e-5);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dd(-2.0, 2.0);
    std::uniform_real_distribution<double> dO(0.2, 1.5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        worst = std::max(worst, fd_check(dd(rng) * p.gamma, dO(rng) * p.gamma, p.Gamma_21));
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("passivity and symmetry") {
    const OpticalParams p = sodium_optical();
    for (int i = -400; i <= 400; ++i) {
        const double D = 0.01 * i * p.gamma;
        CHECK(chi1(D, p.Omega, p.Gamma_31, p.Gamma_21).imag() >= 0.0);
        if (i == 0) continue;
        const cplx plus = chi1(D, p.Omega, p.Gamma_31, 0.0);
        const cplx minus = chi1(-D, p.Omega, p.Gamma_31, 0.0);
        CHECK(std::abs(minus + std::conj(plus)) <= 1e-14 * std::abs(plus));
    }
}

TEST_CASE("h_aux") {
    OpticalParams p = sodium_optical();
    const double w31 = derive_optical(p).omega_31;
    const cplx h = h_aux(0.0, p.Omega, p);
    CHECK(h.real() == doctest::Approx(w31 * 4.0 * p.Gamma_31 / (p.Omega * p.Omega)).epsilon(3e-3));
    const cplx h0 = h_aux(0.0, 1e-9 * p.gamma, p);
    CHECK(h0.real() == doctest::Approx(-w31 / p.Gamma_31).epsilon(1e-9));
    CHECK(h0.imag() == doctest::Approx(1.0).epsilon(1e-6));
    const double D = 0.3 * p.gamma;
    const cplx ident = chi1(D, p.Omega, p.Gamma_31, p.Gamma_21) +
                       (D + w31) * dchi1_dDelta(D, p.Omega, p.Gamma_31, p.Gamma_21);
    CHECK(std::abs(h_aux(D, p.Omega, p) - ident) <= 1e-15 * std::abs(ident));
}

TEST_CASE("index bundle") {
    const OpticalParams p = sodium_optical();
    const IndexBundle vac = index_bundle(0.0, p);
    CHECK(vac.N_g == cplx(1.0, 0.0));
    CHECK(vac.alpha == cplx(0.0, 0.0));
    CHECK(vac.refractive_index == 1.0);
    CHECK(vac.loss_index == 0.0);
    CHECK_THROWS_AS(index_bundle(-1.0, p), ConfigError);

    const IndexBundle b = index_bundle(kRhoFig3, p);
    CHECK(std::abs(b.N_g.imag() / b.N_g.real()) < 1e-3);
    CHECK(b.eta == doctest::Approx(3.0 * std::pow(589e-9, 3) / (32.0 * std::pow(kPi, 3)) * kRhoFig3));

    const IndexBundle b2 = index_bundle(2.0 * kRhoFig3, p);
    CHECK(std::abs(b2.chi - 2.0 * b.chi) < 1e-14 * std::abs(b.chi));
    CHECK(std::abs(b2.alpha - 2.0 * b.alpha) < 1e-14 * std::abs(b.alpha));
    CHECK(std::abs((b2.N_g - 1.0) - 2.0 * (b.N_g - 1.0)) < 1e-12 * std::abs(b.N_g));
}

TEST_CASE("Autler-Townes doublet") {
    const OpticalParams p = sodium_optical();
    std::vector<double> D, loss;
    for (int i = -400; i <= 400; ++i) {
        D.push_back(0.005 * i * p.gamma);
        loss.push_back(index_bundle(kRhoFig3, p.with_detuning(D.back())).loss_index);
    }
    const std::size_t mid = 400;
    std::size_t ipos = mid, ineg = mid;
    for (std::size_t i = mid; i < D.size(); ++i) if (loss[i] > loss[ipos]) ipos = i;
    for (std::size_t i = 0; i <= mid; ++i) if (loss[i] > loss[ineg]) ineg = i;
    CHECK(D[ipos] == doctest::Approx(0.5 * p.Omega).epsilon(0.1));
    CHECK(D[ineg] == doctest::Approx(-0.5 * p.Omega).epsilon(0.1));
    for (std::size_t i = 0; i < D.size(); ++i) CHECK(loss[i] >= loss[mid]);
}

TEST_CASE("resonant group velocity") {
    const OpticalParams p = sodium_optical();
    const double v = resonant_group_velocity(kRhoFig3, p);
    CHECK(v == doctest::Approx(72.0).epsilon(0.01));
    CHECK(resonant_group_velocity_dipole_form(kRhoFig3, p) == doctest::Approx(v).epsilon(1e-12));
    OpticalParams p2 = p;
    p2.Omega *= 2.0;
    CHECK(resonant_group_velocity(kRhoFig3, p2) == doctest::Approx(4.0 * v).epsilon(1e-12));
    CHECK(resonant_group_velocity(2.0 * kRhoFig3, p) == doctest::Approx(0.5 * v).epsilon(1e-12));
    CHECK_THROWS_AS(resonant_group_velocity(0.0, p), ConfigError);

    // The closed form keeps only the leading term of d chi1/d Delta; expanding
    // the exact derivative at Delta = 0 gives the relative offset 8 G31 G21 / Omega^2.
    const double offset = 8.0 * p.Gamma_31 * p.Gamma_21 / (p.Omega * p.Omega);
    OpticalParams narrow = p;
    narrow.Gamma_21 = 2.0 * kPi * 100.0;
    for (int i = 0; i <= 16; ++i) {
        const double rho = 1e16 * std::pow(10.0, 0.25 * i);  // 1e10 .. 1e14 cm^-3
        const double exact = kSI.c / index_bundle(rho, p).N_g.real();
        const double rel = resonant_group_velocity(rho, p) / exact - 1.0;
        CHECK(rel == doctest::Approx(-offset).epsilon(0.02));
        const double exact_narrow = kSI.c / index_bundle(rho, narrow).N_g.real();
        CHECK(resonant_group_velocity(rho, narrow) == doctest::Approx(exact_narrow).epsilon(1e-3));
    }
}

TEST_CASE("group velocity definitions") {
    const OpticalParams p = sodium_optical();
    std::vector<double> grid;
    for (int i = -300; i <= 300; ++i) grid.push_back(0.01 * i * p.gamma);
    const GroupVelocityCurves c = group_velocity_curves(kRhoFig3, p, grid);
    const GroupVelocitySample& s0 = c.samples[300];
    CHECK(s0.Delta == 0.0);
    CHECK(s0.v_def1 == doctest::Approx(s0.v_def2).epsilon(1e-3));
    CHECK_FALSE(c.singular_detunings.empty());
    bool flagged = false;
    for (const auto& s : c.samples) {
        CHECK(std::isfinite(s.v_def1));
        if (s.singular) {
            flagged = true;
            CHECK(std::isinf(s.v_def2));
        }
    }
    CHECK(flagged);

    const GroupVelocityCurves vac = group_velocity_curves(0.0, p, grid);
    for (const auto& s : vac.samples) {
        CHECK(s.v_def1 == kSI.c);
        CHECK(s.v_def2 == kSI.c);
        CHECK_FALSE(s.singular);
    }
}

TEST_CASE("critical superluminal length") {
    const double a = 0.44e12;
    const double Lc = critical_superluminal_length(-0.1e6, a, 0.03);
    CHECK(Lc == doctest::Approx(2.53e-4).epsilon(3e-3));
    CHECK(critical_superluminal_length(-0.1e6, 0.5 * a, 0.03) == doctest::Approx(2.0 * Lc));
    CHECK(critical_superluminal_length(-1000.0, a, 3e-4) == doctest::Approx(0.0253).epsilon(3e-3));
    CHECK(critical_superluminal_length_dimensionless(-0.1e6, a, 0.03 * kSI.c) ==
          doctest::Approx(Lc).epsilon(1e-12));
    CHECK_THROWS_AS(critical_superluminal_length(-0.1e6, a, 0.0), ConfigError);
    CHECK_THROWS_AS(critical_superluminal_length(0.1e6, a, 0.03), ConfigError);
}
