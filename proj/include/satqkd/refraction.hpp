#pragma once

#include <vector>

namespace satqkd::refr {

// Which number is reported as the elongation factor. `published` rescales the
// geometric path excess by 90/pi, the convention behind the H=780 km fit
// polynomial and the figures built on it; `geometric` is the raw length ratio.
enum class ElongationConvention { published, geometric };

// Interfaces H[0]=0 < H[1] < ... with index n[i] at H[i]. Between interfaces
// i-1 and i the ray sees the constant index n[i-1]; above the last one, vacuum.
struct RefractiveProfile {
    std::vector<double> H;
    std::vector<double> n;

    static RefractiveProfile standard();
    static RefractiveProfile vacuum();
};

struct RayTraceResult {
    std::vector<double> segment_lengths;  // layers 1..N, then the vacuum leg
    std::vector<double> beta;             // elevation just above interface i, i=0..N
    std::vector<double> alpha;            // elevation at the top of layer i (index i-1 unused)
    std::vector<double> alpha0;           // elevation at the bottom of layer i
    std::vector<double> central_angle;    // Phi_i, then Theta for the vacuum leg
    std::vector<double> bending;          // r_i, analytic layer approximation
    double invariant = 0.0;               // n0 R sin Z_a
    double total_refraction = 0.0;        // sum r_i, rad
    double geometric_elongation = 1.0;    // sum L_i / L(Z_a)
    double elongation_factor = 1.0;       // per the requested convention
    double slant_range_geometric = 0.0;   // L(Z_a)
    double slant_range_refracted = 0.0;   // elongation_factor * L(Z_a)
    bool grazing = false;                 // Z_a > 89.9 deg
};

RayTraceResult trace_refracted_path(double apparent_zenith, double orbit_altitude,
                                    const RefractiveProfile& profile = RefractiveProfile::standard(),
                                    ElongationConvention conv = ElongationConvention::published);

double refracted_slant_range(double apparent_zenith, double orbit_altitude,
                             const RefractiveProfile& profile = RefractiveProfile::standard(),
                             ElongationConvention conv = ElongationConvention::published);

// degree-10 fit for H = 780 km, argument in degrees
double elongation_fit_poly(double apparent_zenith_deg);

// Cross-checks on the continuous ray through the piecewise-linear index
// profile, by quadrature. Path length in m, refraction in rad.
double continuous_ray_length(double apparent_zenith, double orbit_altitude);
double continuous_total_refraction(double apparent_zenith);

// Empirical ray curvature radius (m) from local T, P and lapse rate.
double ray_curvature_diagnostic(double h, double apparent_zenith);

}  // namespace satqkd::refr
