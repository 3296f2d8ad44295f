#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "approx.hpp"
#include "satqkd/numerics.hpp"
#include "oracles.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/turbulence.hpp"

using namespace satqkd;
using testutil::Approx;

namespace {
double deg(double d) { return d * kDeg; }
}

TEST_CASE("exponential profile") {
    const turb::TurbulenceProfile p(turb::Exponential{2e-17, 700.0});
    CHECK(p.cn2(0) == 2e-17);
    CHECK(p.cn2(700) == Approx(2e-17 / std::exp(1.0)).epsilon(1e-15));
    // along a slant path the scale height stretches by sec Z_a
    const turb::SlantContext s{2e6, deg(60)};
    for (double z : {0.0, 100.0, 1400.0, 5000.0}) {
        const double xi = 1.0 - z / s.L_r;
        CHECK(turb::cn2_along_path(p, s, xi) == Approx(2e-17 * std::exp(-z / (700.0 * 2.0))).epsilon(1e-12));
    }
}

TEST_CASE("Walters-Kunkel night power law below the inversion") {
    turb::AfglWk m;
    const turb::TurbulenceProfile p(m);
    CHECK(p.cn2(m.h0) == Approx(m.Cn0_sq_at_h0).epsilon(1e-15));
    CHECK(p.cn2(4 * m.h0) / p.cn2(m.h0) == Approx(std::pow(4.0, -2.0 / 3.0)).epsilon(1e-14));
    CHECK(p.cn2(4 * m.h0) / p.cn2(m.h0) == Approx(0.397).epsilon(1e-3));
    CHECK(p.cn2(1.0) == p.cn2(m.h0));  // clamped below h0
}

TEST_CASE("AFGL + WK splice is continuous and profiles are non-negative") {
    for (bool day : {false, true}) {
        turb::AfglWk m;
        m.day = day;
        if (day) {
            m.h0 = 5.0;
            m.h_i = 1000.0;
        }
        const turb::TurbulenceProfile p(m);
        const double l = p.cn2(m.h_i), r = p.cn2(m.h_i * (1 + 1e-12));
        CHECK(std::abs(l - r) <= 1e-6 * l);
    }
    const turb::TurbulenceProfile night(turb::AfglWk{}), hv(turb::Hufnagel{}), ex(turb::Exponential{});
    for (double h = 0; h <= 100e3; h += 37.0) {
        CHECK(night.cn2(h) >= 0.0);
        CHECK(hv.cn2(h) >= 0.0);
        CHECK(ex.cn2(h) >= 0.0);
    }
}

TEST_CASE("AFGL unit convention reproduces the usual free-atmosphere magnitude") {
    const turb::AfglWk a;
    const double c10 = turb::afgl_raw(a, 10e3);
    CHECK(c10 > 1e-18);
    CHECK(c10 < 1e-15);
    // above the splice the profile is the raw branch scaled to meet the surface layer
    const turb::TurbulenceProfile night(a);
    CHECK(night.cn2(10e3) / night.cn2(500.0) == Approx(c10 / turb::afgl_raw(a, 500.0)).epsilon(1e-12));
    // Hufnagel-Valley 5/7 at 10 km for comparison
    const turb::TurbulenceProfile hv(turb::Hufnagel{});
    CHECK(hv.cn2(10e3) == Approx(0.00594 * std::pow(21.0 / 27, 2) * 1e-10 * std::exp(-10.0) + 2.7e-16 * std::exp(-10e3 / 1500) +
                                  1.7e-14 * std::exp(-100.0))
                              .epsilon(1e-12));
}

TEST_CASE("path height mapping, downlink and uplink") {
    const turb::TurbulenceProfile p(turb::Exponential{1e-17, 500});
    const turb::SlantContext down{780e3, deg(30), turb::Direction::downlink};
    const turb::SlantContext up{780e3, deg(30), turb::Direction::uplink};
    CHECK(turb::cn2_along_path(p, down, 1.0) == p.cn2(0));
    CHECK(turb::cn2_along_path(p, down, 0.0) < 1e-300);
    CHECK(turb::cn2_along_path(p, up, 0.0) == p.cn2(0));
    CHECK(turb::height_along_path(down, 0.25) == Approx(780e3 * 0.75 * std::cos(deg(30))));
    CHECK_THROWS_AS(turb::cn2_along_path(p, down, 1.5), DomainError);
}

TEST_CASE("coherence radius") {
    CHECK(turb::coherence_radius_rho0(2.5e-17, 847e-9, 500.0) == Approx(0.98).epsilon(0.005));
    const double k = 2 * oracle::pi / 847e-9;
    CHECK(turb::coherence_radius_rho0(2.5e-17, 847e-9, 500.0) ==
          Approx(std::pow(1.5 * 2.5e-17 * k * k * 500, -0.6)).epsilon(1e-14));
    CHECK(turb::coherence_radius_rho0(2.5e-17, 847e-9, 1000.0) / turb::coherence_radius_rho0(2.5e-17, 847e-9, 500.0) ==
          Approx(std::pow(2.0, -0.6)).epsilon(1e-14));
    CHECK(std::isinf(turb::coherence_radius_rho0(0.0, 847e-9, 500.0)));
}

TEST_CASE("turbulent path length") {
    const turb::TurbulenceProfile ex(turb::Exponential{1e-17, 500});
    CHECK(turb::turbulent_path_length(ex, {780e3, deg(60)}) == Approx(1000.0).epsilon(1e-12));
    const turb::TurbulenceProfile night(turb::AfglWk{});
    const turb::SlantContext s{780e3, deg(40)};
    const double L = turb::turbulent_path_length(night, s);
    const double ref = turb::cn0_sq(night, s);
    CHECK(night.cn2(L * std::cos(deg(40))) == Approx(1e-3 * ref).epsilon(1e-6));
    const turb::TurbulenceProfile fixed(turb::Exponential{1e-17, 500}, 1234.0);
    CHECK(turb::turbulent_path_length(fixed, s) == 1234.0);
}

TEST_CASE("slant weight: constant profile, empty profile, exponential profile") {
    const turb::TurbulenceProfile flat(turb::Exponential{1e-17, 1e16});
    CHECK(turb::chi_weight(flat, {5e4, 0.0}) == Approx(0.375).epsilon(1e-9));
    const turb::TurbulenceProfile none(turb::Exponential{0.0, 500});
    CHECK(turb::chi_weight(none, {1e5, 0.0}) == 0.0);

    const turb::TurbulenceProfile ex(turb::Exponential{1e-17, 500});
    const turb::SlantContext s{500e3, 0.0};
    const double L = s.L_r, H0 = 500.0;
    const double ref = oracle::trapezoid(
        [&](double xi) { return std::pow(xi, 5.0 / 3.0) * std::exp(-L * (1 - xi) / H0); }, 0.0, 1.0, 1000000);
    CHECK(turb::chi_weight(ex, s) == Approx(ref).epsilon(1e-6));
}

TEST_CASE("slant weight: uplink mirror") {
    const turb::TurbulenceProfile night(turb::AfglWk{});
    const turb::SlantContext up{900e3, deg(25), turb::Direction::uplink};
    const double c0 = turb::cn0_sq(night, up);
    const double span = up.L_r * std::cos(up.apparent_zenith);
    // only the first 85 km of height carry turbulence
    const double tmax = 84.8e3 / span;
    const double ref = oracle::simpson([&](double xi) { return night.cn2(span * xi) * std::pow(xi, 5.0 / 3.0); }, 0.0,
                                       tmax, 2000000) / c0;
    CHECK(turb::chi_weight(night, up) == Approx(ref).epsilon(1e-5));
    CHECK(turb::chi_weight(night, up) < 1e-3 * turb::chi_weight(night, {900e3, deg(25)}));
}

TEST_CASE("outer scale") {
    CHECK(turb::outer_scale(8500) == 4.0);
    CHECK(turb::outer_scale(11000) == Approx(2.0).epsilon(1e-15));
    CHECK(turb::outer_scale(0) == Approx(4.0 / 12.56).epsilon(1e-12));
    CHECK(turb::outer_scale(0) == Approx(0.3185).epsilon(2e-4));
}

TEST_CASE("shear profile CSV") {
    const auto syn = turb::ShearProfile::synthetic();
    const auto back = turb::ShearProfile::parse_csv(syn.to_csv());
    REQUIRE(back.h.size() == syn.h.size());
    for (std::size_t i = 0; i < syn.h.size(); ++i) {
        CHECK(back.h[i] == Approx(syn.h[i]));
        CHECK(back.shear[i] == Approx(syn.shear[i]));
    }
    for (double s : syn.shear) {
        CHECK(s >= 0.0);
        CHECK(s <= 0.02 + 1e-12);
    }
    CHECK_THROWS_AS(turb::ShearProfile::parse_csv("h_m,S_per_s,lapse_K_per_km\n0,0.01,-6.5\n0,0.02,-6.5\n"), DomainError);
    CHECK_THROWS_AS(turb::ShearProfile::parse_csv("a,b\n1,2\n"), DomainError);
    CHECK_THROWS_AS(turb::ShearProfile::from_csv("/nonexistent/shear.csv"), DomainError);
    const auto shipped = turb::ShearProfile::from_csv(SATQKD_SOURCE_DIR "/data/synthetic_shear.csv");
    CHECK(shipped.h.size() == syn.h.size());
}
