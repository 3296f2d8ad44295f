#include <cmath>
#include <random>

#include "doctest.h"
#include "approx.hpp"
#include "satqkd/numerics.hpp"
#include "oracles.hpp"
#include "satqkd/beam.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/refraction.hpp"

using namespace satqkd;
using testutil::Approx;

namespace {
double deg(double d) { return d * kDeg; }

const turb::TurbulenceProfile& night() {
    static const turb::TurbulenceProfile p(turb::AfglWk{});
    return p;
}

beam::ChannelContext table_context(double za_deg, const turb::TurbulenceProfile& p = night()) {
    const double L = refr::refracted_slant_range(deg(za_deg), 780e3);
    return beam::make_context(beam::BeamParams{}, p, {L, deg(za_deg)});
}

// exp(-g^2 r^2 / 2W0^2 - rho0^-5/3 X^2 r^5/3), the r = 0 form of the beam kernel
double kappa_of(const beam::ChannelContext& c) { return std::pow(c.rho0, -5.0 / 3.0) * c.chi_sq; }
}  // namespace

TEST_CASE("phase structure function: trivial limits") {
    const auto c = table_context(30);
    CHECK(beam::phase_structure_function(0, 0, c) == 0.0);
    const turb::TurbulenceProfile flat(turb::Exponential{1e-17, 1e16});
    const auto cf = beam::make_context(beam::BeamParams{}, flat, {5e4, 0.0});
    const double rp = 0.07;
    CHECK(beam::phase_structure_function(0, rp, cf) ==
          Approx(2 * std::pow(cf.rho0, -5.0 / 3) * std::pow(rp, 5.0 / 3) * 0.375).epsilon(1e-9));
}

TEST_CASE("phase structure function against a trapezoid oracle, both directions") {
    const turb::TurbulenceProfile ex(turb::Exponential{1e-17, 500});
    for (auto dir : {turb::Direction::downlink, turb::Direction::uplink}) {
        const turb::SlantContext s{60e3, deg(20), dir};
        const auto c = beam::make_context(beam::BeamParams{}, ex, s);
        const double r = 0.1, rp = 0.2, span = s.L_r * std::cos(s.apparent_zenith);
        const double I = oracle::trapezoid(
            [&](double xi) {
                const double h = (dir == turb::Direction::downlink ? 1 - xi : xi) * span;
                return 1e-17 * std::exp(-h / 500.0) * std::pow(std::abs(r * (1 - xi) + rp * xi), 5.0 / 3.0);
            },
            0.0, 1.0, 1000000);
        CHECK(beam::phase_structure_function(r, rp, c) ==
              Approx(2 * std::pow(c.rho0, -5.0 / 3) * I / c.Cn0_sq).epsilon(1e-6));
    }
}

TEST_CASE("mean transmittance: vacuum and infinite aperture") {
    const turb::TurbulenceProfile none(turb::Exponential{0.0, 500});
    for (double L : {5e3, 200e3, 780e3}) {
        const auto c = beam::make_context(beam::BeamParams{}, none, {L, 0.0});
        const double W = 0.02 * std::sqrt(std::pow(1 - L / 1e5, 2) +
                                          std::pow(2 * L / (2 * oracle::pi / 840e-9 * 0.02 * 0.02), 2));
        CHECK(beam::mean_transmittance(c).value == Approx(1 - std::exp(-2 * 0.25 / (W * W))).epsilon(0.005));
        CHECK(beam::vacuum_radius(c.beam, L) == Approx(W).epsilon(1e-12));
    }
    beam::BeamParams big;
    big.aperture = 200.0;
    const auto c = beam::make_context(big, night(), {800e3, 0.0});
    // the Kolmogorov wings fall off as r^-11/3, so ~kappa (u a)^-5/3 ~ 3e-8 stays outside
    const double v = beam::mean_transmittance(c).value;
    CHECK(v <= 1.0);
    CHECK(1.0 - v < 1e-7);
    CHECK(1.0 - v > 1e-9);
}

TEST_CASE("mean transmittance against a 2-D Monte Carlo oracle") {
    const auto c = table_context(0);
    const auto& b = c.beam;
    const double L = c.slant.L_r, k = 2 * oracle::pi / b.wavelength;
    const double Om = k * b.W0 * b.W0 / (2 * L), g2 = 1 + Om * Om * std::pow(1 - L / b.F, 2);
    const double kap = kappa_of(c);
    // r uniform on the aperture disc, r' Rayleigh with sigma W0/g
    std::mt19937_64 gen(12345);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const int n = 10000000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double r = b.aperture * std::sqrt(U(gen));
        const double rp = b.W0 / std::sqrt(g2) * std::sqrt(-2 * std::log(1 - U(gen)));
        const double v = std::exp(-kap * std::pow(rp, 5.0 / 3)) * std::cyl_bessel_j(0.0, k * r * rp / L);
        s += v;
        s2 += v * v;
    }
    const double pref = k * k / (L * L) * b.aperture * b.aperture / 2 * b.W0 * b.W0 / g2;
    const double mean = pref * s / n, se = pref * std::sqrt((s2 / n - (s / n) * (s / n)) / n);
    const double v = beam::mean_transmittance(c).value;
    CHECK(v == Approx(mean).epsilon(0.01));
    CHECK(std::abs(v - mean) < 5 * se + 1e-12);
}

TEST_CASE("mean transmittance: 1-D quadrature oracle on a short link where the Bessel factor matters") {
    beam::BeamParams b;
    b.W0 = 0.05;
    b.aperture = 0.05;
    b.F = INFINITY;
    const turb::TurbulenceProfile strong(turb::Exponential{5e-15, 500});
    const auto c = beam::make_context(b, strong, {2e3, 0.0});
    const double L = 2e3, k = 2 * oracle::pi / b.wavelength;
    const double Om = k * b.W0 * b.W0 / (2 * L), g2 = 1 + Om * Om;
    const double kap = kappa_of(c);
    // inner integral over r first: int_0^a r J0(k r r'/L) dr = a L J1(k a r'/L)/(k r')
    const double v = k * k / (L * L) *
                     oracle::simpson(
                         [&](double rp) {
                             if (rp == 0) return 0.0;
                             return rp * std::exp(-g2 * rp * rp / (2 * b.W0 * b.W0) - kap * std::pow(rp, 5.0 / 3)) *
                                    b.aperture * L * std::cyl_bessel_j(1.0, k * b.aperture * rp / L) / (k * rp);
                         },
                         0.0, 12 * b.W0, 400000);
    CHECK(beam::mean_transmittance(c).value == Approx(v).epsilon(1e-7));
}

TEST_CASE("quadratic approximation of the mean within 5% for strong turbulence") {
    beam::BeamParams b;
    const double k = 2 * oracle::pi / b.wavelength;
    for (double frac : {0.5, 0.3, 0.2, 0.1}) {
        const double rho = frac * b.W0;
        // Cn0^2 giving this rho0 on a 500 m layer
        const double cn = std::pow(rho, -5.0 / 3) / (1.5 * k * k * 500.0);
        const turb::TurbulenceProfile p(turb::Exponential{cn, 500});
        for (double L : {20e3, 780e3}) {
            const auto c = beam::make_context(b, p, {L, 0.0});
            REQUIRE(c.rho0 == Approx(rho).epsilon(1e-3));
            CHECK(beam::mean_transmittance_quadratic(c) == Approx(beam::mean_transmittance(c).value).epsilon(0.05));
        }
    }
}

TEST_CASE("long-term radius") {
    const turb::TurbulenceProfile none(turb::Exponential{0.0, 500});
    const auto c0 = beam::make_context(beam::BeamParams{}, none, {780e3, 0.0});
    CHECK(beam::long_term_radius(c0) == Approx(beam::vacuum_radius(c0.beam, 780e3)).epsilon(1e-14));
    const auto c = table_context(70);
    const double L = c.slant.L_r, k = 2 * oracle::pi / 840e-9, W0 = 0.02;
    const double Om = k * W0 * W0 / (2 * L);
    const double ref = W0 * std::sqrt(std::pow(1 - L / 1e5, 2) + (1 + W0 * W0 * c.chi_sq / (c.rho0 * c.rho0)) / (Om * Om));
    CHECK(beam::long_term_radius(c) == Approx(ref).epsilon(1e-13));
    // the 1 + 3 = 4 identity of the Omega term
    auto c3 = c0;
    c3.chi_sq = 3.0;
    c3.rho0 = W0;
    const double focus = std::pow(1 - 780e3 / 1e5, 2);
    const double Om0 = k * W0 * W0 / (2 * 780e3);
    CHECK(std::pow(beam::long_term_radius(c3) / W0, 2) - focus == Approx(4.0 / (Om0 * Om0)).epsilon(1e-12));
}

TEST_CASE("short-term radius") {
    const turb::TurbulenceProfile none(turb::Exponential{0.0, 500});
    const auto c0 = beam::make_context(beam::BeamParams{}, none, {780e3, 0.0});
    CHECK(beam::short_term_radius(c0) == Approx(beam::vacuum_radius(c0.beam, 780e3)).epsilon(1e-14));
    for (double z = 0; z <= 85; z += 5) {
        const auto c = table_context(z);
        CHECK(beam::short_term_radius(c) <= beam::long_term_radius(c));
    }
    const auto a = table_context(0), b = table_context(80);
    CHECK(beam::short_term_radius(b) / b.slant.L_r > beam::short_term_radius(a) / a.slant.L_r);
}

TEST_CASE("beam wander variance: zero turbulence, oracle and sub-linear scaling") {
    const turb::TurbulenceProfile none(turb::Exponential{0.0, 500});
    CHECK(beam::beam_wander_variance(beam::make_context(beam::BeamParams{}, none, {780e3, 0.0})) == 0.0);

    const turb::TurbulenceProfile p1(turb::Exponential{1e-14, 800}), p4(turb::Exponential{4e-14, 800});
    const turb::SlantContext s{780e3, deg(40)};
    const auto c1 = beam::make_context(beam::BeamParams{}, p1, s), c4 = beam::make_context(beam::BeamParams{}, p4, s);
    const double v1 = beam::beam_wander_variance(c1), v4 = beam::beam_wander_variance(c4);
    CHECK(v4 > v1);
    CHECK(v4 < 4 * v1);

    // Simpson over the height actually carrying turbulence (xi near 1)
    const double L = s.L_r, cz = std::cos(s.apparent_zenith), W0 = 0.02, k = 2 * oracle::pi / 840e-9;
    auto Wst = [&](double z) {
        const double Om = k * W0 * W0 / (2 * z);
        const double X = std::sqrt(c1.chi_sq);
        const double t = W0 * W0 / (c1.rho0 * c1.rho0) * c1.chi_sq / (1 + 0.24 * std::cbrt(c1.rho0 / (0.5 * X)));
        return W0 * std::sqrt(std::pow(1 - z / 1e5, 2) + (1 + t) / (Om * Om));
    };
    const double smax = 40 * 800 / (L * cz);
    const double I = oracle::simpson(
        [&](double s1) {
            const double xi = 1 - s1, h = L * s1 * cz, W = s1 == 0 ? W0 : Wst(s1 * L);
            const double Lo = 4 / (1 + std::pow((h - 8500) / 2500, 2));
            return xi * xi * 1e-14 * std::exp(-h / 800) *
                   (std::pow(W, -1.0 / 3) + std::pow(W * W + std::pow(Lo / (2 * oracle::pi), 2), -1.0 / 6));
        },
        0.0, smax, 200000);
    CHECK(v1 == Approx(1.29 * L * L * L * I).epsilon(1e-6));
}

TEST_CASE("second moment: turbulence off reproduces the deterministic beam") {
    const turb::TurbulenceProfile none(turb::Exponential{0.0, 500});
    const auto c = beam::make_context(beam::BeamParams{}, none, {780e3, 0.0});
    num::McSpec mc;
    mc.max_samples = 1 << 18;
    const auto s = beam::eta_second_moment(c, mc);
    const double eta = beam::mean_transmittance(c).value;
    CHECK(s.value == Approx(eta * eta).epsilon(1e-9));
    CHECK(std::abs(s.vacuum_check - eta * eta) < 4 * s.vacuum_check_se);
}

TEST_CASE("second moment: variance bound, imaginary part and vacuum normalisation") {
    num::McSpec mc;
    for (double z : {0.0, 40.0, 70.0}) {
        const auto c = table_context(z);
        const auto s = beam::eta_second_moment(c, mc);
        const double eta = beam::mean_transmittance(c).value;
        CHECK(s.value >= eta * eta);
        CHECK(s.value <= eta);
        CHECK(s.se / s.value <= mc.target_rel_se);
        CHECK(std::abs(s.imag_mean) < 3 * s.imag_se + 1e-300);
        const double ev = beam::mean_transmittance_vacuum(c.beam, c.slant.L_r);
        CHECK(std::abs(s.vacuum_check - ev * ev) < 4 * s.vacuum_check_se);
    }
}

TEST_CASE("second moment: serial reference and OpenMP kernel agree bitwise") {
    const auto c = table_context(50);
    num::McSpec mc;
    mc.seed = 4242;
    const auto ref = beam::eta_second_moment(c, mc, false);
    for (int w : {1, 2, 4}) {
        mc.workers = w;
        const auto par = beam::eta_second_moment(c, mc, true);
        CHECK(par.value == ref.value);
        CHECK(par.se == ref.se);
        CHECK(par.samples == ref.samples);
    }
    mc.seed = 4243;
    CHECK(beam::eta_second_moment(c, mc).value != ref.value);
}

TEST_CASE("second moment: budget exhaustion and uplink are reported") {
    const auto c = table_context(60);
    num::McSpec mc;
    mc.target_rel_se = 1e-12;
    mc.max_samples = 1 << 16;
    CHECK_THROWS_AS(beam::eta_second_moment(c, mc), NumericalError);
    auto up = c;
    up.slant.direction = turb::Direction::uplink;
    CHECK_THROWS_AS(beam::eta_second_moment(up, num::McSpec{}), DomainError);
}

TEST_CASE("channel moments invariants") {
    for (double z : {0.0, 30.0, 60.0, 80.0}) {
        const auto m = beam::channel_moments(table_context(z), num::McSpec{});
        CHECK(m.eta_mean > 0.0);
        CHECK(m.eta_mean <= 1.0);
        CHECK(m.eta_sq_mean >= m.eta_mean * m.eta_mean);
        CHECK(m.eta_sq_mean <= m.eta_mean);
        CHECK(m.W_ST <= m.W_LT);
        CHECK(m.scint_index == Approx(m.eta_sq_mean / (m.eta_mean * m.eta_mean) - 1).epsilon(1e-14));
        CHECK(m.scint_index >= 0.0);
    }
}

TEST_CASE("phenomenological scintillation: small aperture and closed-form pieces") {
    const double lam = 847e-9, cn = 2.5e-17, H0 = 500, mu = 0.92;
    const double k = 2 * oracle::pi / lam;
    for (double z : {0.0, 45.0, 75.0}) {
        const double Hs = H0 / std::cos(deg(z));
        const double dk = 0.69 * mu * std::pow(cn, -1.2 / 2) * std::pow(k, -0.2) * std::pow(Hs, -1.6);
        CHECK(beam::delta_kappa(lam, cn, H0, mu, deg(z)) == Approx(dk).epsilon(1e-13));
        CHECK(beam::scint_index_phenomenological(1e-12, lam, cn, H0, mu, deg(z)) ==
              Approx(1.12 * cn * std::pow(dk, 7.0 / 3) * Hs * Hs * Hs).epsilon(1e-12));
    }
    CHECK_THROWS_AS(beam::scint_index_phenomenological(0.0, lam, cn, H0, mu, 0.0), DomainError);
    CHECK_THROWS_AS(beam::scint_index_phenomenological(3.2e-3, lam, cn, H0, mu, kPi / 2), DomainError);
}

TEST_CASE("phenomenological scintillation: rises, peaks between 60 and 89 degrees, falls") {
    double best = 0, arg = 0, first = 0, last = 0;
    for (double z = 0; z <= 89.0; z += 0.5) {
        const double v = beam::scint_index_phenomenological(3.2e-3, 847e-9, 2.5e-17, 500, 0.92, deg(z));
        if (z == 0) first = v;
        last = v;
        if (v > best) {
            best = v;
            arg = z;
        }
    }
    CHECK(arg > 60.0);
    CHECK(arg < 89.0);
    CHECK(best > first);
    CHECK(best > last);
}
