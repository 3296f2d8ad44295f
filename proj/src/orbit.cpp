#include "satqkd/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "satqkd/numerics.hpp"

namespace satqkd::orbit {

void validate(const ObserverGeo& obs) {
    if (!(std::abs(obs.latitude) <= kPi / 2)) throw DomainError("observer latitude outside [-90, 90] deg");
    if (!(obs.altitude >= 0.0)) throw DomainError("observer altitude must be >= 0");
}

bool validate(const OrbitSpec& orb) {
    if (!(orb.altitude > 0.0)) throw DomainError("orbit altitude must be positive");
    if (!(orb.period > 0.0)) throw DomainError("orbit period must be positive");
    if (orb.revolutions < 0) throw DomainError("revolutions must be >= 0");
    return orb.altitude >= 160e3 && orb.altitude <= 2000e3;
}

double slant_range(double H, double Z) {
    if (!(Z >= 0.0 && Z <= kPi / 2 + 1e-15)) throw DomainError("slant_range: zenith outside [0, 90] deg");
    const double R = earth::R;
    const double c = std::cos(Z);
    // H^2 + 2HR + R^2 c^2 - (R c)^2 = H^2 + 2HR, rewritten to avoid cancellation
    const double s = std::sqrt(H * H + 2.0 * H * R + R * R * c * c);
    return (H * H + 2.0 * H * R) / (s + R * c);
}

double min_zenith(double psi, double di) {
    if (!(std::abs(di) < kPi / 2)) throw DomainError("min_zenith: |inclination| must be < 90 deg");
    const double c = std::cos(psi), s = std::sin(di);
    return std::acos(std::sqrt(1.0 - c * c * s * s));
}

double inclination_after_revolutions(const OrbitSpec& orb) {
    if (!(orb.period > 0.0) || orb.revolutions < 0) throw DomainError("inclination: bad orbit");
    return orb.revolutions * orb.period * earth::v_equator / earth::R;
}

double apparent_zenith(double Z, double n0) {
    if (!(Z >= 0.0 && Z <= kPi / 2 + 1e-15)) throw DomainError("apparent_zenith: zenith outside [0, 90] deg");
    if (!(n0 >= 1.0)) throw DomainError("apparent_zenith: n0 < 1");
    return std::asin(std::sin(Z) / n0);
}

double true_zenith(double Za, double n0) {
    if (!(n0 >= 1.0)) throw DomainError("true_zenith: n0 < 1");
    const double s = n0 * std::sin(Za);
    if (s > 1.0 + 1e-12) throw DomainError("true_zenith: apparent angle beyond the refraction limit");
    return std::asin(std::min(s, 1.0));
}

ZenithState zenith_from_orbit_state(double psi, double di, double delta) {
    // haversine form; acos loses half the digits near the zenith
    auto hav = [](double x) { const double s = std::sin(0.5 * x); return s * s; };
    const double h = hav(psi - delta) + std::cos(psi) * std::cos(delta) * hav(di);
    const double z = 2.0 * std::asin(std::sqrt(std::clamp(h, 0.0, 1.0)));
    if (z > kPi / 2) return {kPi / 2, true};
    return {z, false};
}

double communication_arc(double H) {
    const double R = earth::R;
    return 2.0 * std::atan(std::sqrt(H * H + 2.0 * R * H) / R);
}

double pass_start_declination(double psi, double di) {
    // psi -> 0: cot diverges; the limit from the northern side gives -pi/2
    if (std::abs(std::tan(psi)) < 1e-300) return -kPi / 2;
    return -std::atan(std::cos(di) / std::tan(psi));
}

double closest_declination(double psi, double di) {
    return std::atan2(std::sin(psi), std::cos(psi) * std::cos(di));
}

namespace {
// topocentric zenith of a satellite at geocentric separation gamma
double topocentric_zenith(double gamma, double H) {
    const double rs = earth::R + H;
    return std::atan2(rs * std::sin(gamma), rs * std::cos(gamma) - earth::R);
}
}  // namespace

std::vector<PassSample> pass_timeline(const ObserverGeo& obs, const OrbitSpec& orb, double di,
                                      double dt) {
    if (!(dt > 0.0)) throw DomainError("pass_timeline: time step must be positive");
    validate(obs);
    validate(orb);
    const double psi = obs.latitude, H = orb.altitude;
    const double A = std::sqrt(std::pow(std::sin(psi), 2) + std::pow(std::cos(psi) * std::cos(di), 2));
    const double cos_gmax = std::cos(0.5 * communication_arc(H));  // = R/(R+H)
    if (A <= cos_gmax) return {};
    const double half = std::acos(cos_gmax / A);
    const double dc = closest_declination(psi, di);
    const double omega = 2.0 * kPi / orb.period;
    const double window = 2.0 * half / omega;

    std::vector<PassSample> out;
    const auto n = static_cast<std::size_t>(std::ceil(window / dt - 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        const double t = std::min(i * dt, window);
        const double delta = dc - half + omega * t;
        const double cg = std::sin(psi) * std::sin(delta) + std::cos(psi) * std::cos(delta) * std::cos(di);
        const double gamma = std::acos(std::clamp(cg, -1.0, 1.0));
        double Z = topocentric_zenith(gamma, H);
        Z = std::clamp(Z, 0.0, kPi / 2);
        if (i == 0 || i == n) Z = kPi / 2;
        out.push_back({t, delta, Z, slant_range(H, Z)});
    }
    return out;
}

bool parallax_warning(const ObserverGeo& obs, const OrbitSpec& orb) {
    return orb.altitude < 300e3 && std::abs(obs.latitude) < 20.0 * kDeg;
}

}  // namespace satqkd::orbit
