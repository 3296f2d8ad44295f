#pragma once

#include <vector>

#include "satqkd/constants.hpp"

namespace satqkd::orbit {

struct ObserverGeo {
    double latitude = 48.0 * kDeg;  // rad
    double altitude = 0.0;          // m above sea level
};

struct OrbitSpec {
    double altitude = 780e3;         // m
    double inclination = 0.0;        // rad, relative to the observer meridian
    double period = 100.0 * 60.0;    // s
    int revolutions = 0;
};

void validate(const ObserverGeo& obs);
// throws DomainError for non-physical input; returns false (warning) outside 160..2000 km
bool validate(const OrbitSpec& orb);

double slant_range(double altitude, double true_zenith);
double min_zenith(double latitude, double inclination);
double inclination_after_revolutions(const OrbitSpec& orb);

double apparent_zenith(double true_zenith, double n0);
double true_zenith(double apparent_zenith, double n0);

struct ZenithState {
    double zenith;       // rad, clamped to pi/2 when below horizon
    bool below_horizon;
};
ZenithState zenith_from_orbit_state(double latitude, double inclination, double declination);

// Central angle of the visible arc: 2 arctan(sqrt(H^2 + 2RH)/R)
double communication_arc(double altitude);
// Pass start declination -arctan(cos(di) cot(psi)); psi -> 0 limit documented in the README
double pass_start_declination(double latitude, double inclination);
// Declination at closest approach (maximum of cos Z along the orbit)
double closest_declination(double latitude, double inclination);

struct PassSample {
    double time;         // s from the start of the above-horizon window
    double declination;  // rad
    double zenith;       // rad (true)
    double slant_range;  // m
};

// Samples the above-horizon window on a uniform time grid; the first and last
// samples sit exactly on the horizon crossings. Empty if the orbit never rises.
std::vector<PassSample> pass_timeline(const ObserverGeo& obs, const OrbitSpec& orb, double inclination,
                                      double time_step);

// Parallax neglected within one pass; flag low orbits seen from near the equator.
bool parallax_warning(const ObserverGeo& obs, const OrbitSpec& orb);

}  // namespace satqkd::orbit
