#pragma once

namespace satqkd::ext {

struct ExtinctionParams {
    double beta0_per_km = 5e-3;   // sea-level extinction coefficient, 1/km
    double scale_height = 6600.0; // m
};

void validate(const ExtinctionParams& p);

// Closed form for an observer at sea level.
double extinction_factor(double apparent_zenith, double L_r, const ExtinctionParams& p = {});

// Quadrature of the extinction integral along the path with h(s) = s cos Z_a + h_obs.
double extinction_factor_quadrature(double apparent_zenith, double L_r, const ExtinctionParams& p = {},
                                    double observer_altitude = 0.0);

}  // namespace satqkd::ext
