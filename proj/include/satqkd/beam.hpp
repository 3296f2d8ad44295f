#pragma once

#include <cstdint>
#include <limits>

#include "satqkd/numerics.hpp"
#include "satqkd/turbulence.hpp"

namespace satqkd::beam {

struct BeamParams {
    double W0 = 0.02;                  // m
    double F = 1e5;                    // m; +inf for a collimated beam
    double wavelength = 840e-9;        // m
    double aperture = 0.5;             // m, receiver radius a
};

void validate(const BeamParams& b);

struct DerivedBeamNumbers {
    double k;      // 2 pi / lambda
    double Omega;  // k W0^2 / (2 L)
    double g_sq;   // 1 + Omega^2 (1 - L/F)^2
};
DerivedBeamNumbers derived(const BeamParams& b, double L);

// Everything the moment formulas need at one zenith angle.
struct ChannelContext {
    BeamParams beam;
    turb::SlantContext slant;
    const turb::TurbulenceProfile* profile;
    double Cn0_sq;
    double L_turb;
    double rho0;    // m, +inf without turbulence
    double chi_sq;  // slant weight
};
ChannelContext make_context(const BeamParams& b, const turb::TurbulenceProfile& p, const turb::SlantContext& s);

// 2 rho0^-5/3 int (Cn2/Cn0^2) |r(1-xi) + r' xi|^5/3 dxi, collinear radial arguments
double phase_structure_function(double r, double r_prime, const ChannelContext& c);

double vacuum_radius(const BeamParams& b, double L);
double mean_transmittance_vacuum(const BeamParams& b, double L);  // 1 - exp(-2a^2/W^2)

struct MeanTransmittance {
    double value;
    double truncation_radius;  // m, where the Gaussian factor drops below 1e-12
};
MeanTransmittance mean_transmittance(const ChannelContext& c);

double long_term_radius(const ChannelContext& c);
// Gaussian spot of radius W_LT through the aperture (quadratic structure function)
double mean_transmittance_quadratic(const ChannelContext& c);
double short_term_radius(const ChannelContext& c);
// same formula evaluated at propagation distance z with the path's rho0 and weight
double short_term_radius_at(const ChannelContext& c, double z);
double beam_wander_variance(const ChannelContext& c);

struct SecondMoment {
    double value;             // <eta^2>
    double se;                // MC standard error of value
    double vacuum_check;      // MC estimate of the J=1 term, equals eta_vac^2 in expectation
    double vacuum_check_se;
    double imag_mean;         // must vanish by symmetry
    double imag_se;
    std::uint64_t samples;
};

// 6-D importance-sampled Monte Carlo with the aperture integrals done in closed
// form. parallel=false runs the serial reference; both give identical bits.
SecondMoment eta_second_moment(const ChannelContext& c, const num::McSpec& mc, bool parallel = true);

struct ChannelMoments {
    double eta_mean;
    double eta_sq_mean;
    double eta_sq_se;
    double scint_index;
    double W_LT;
    double W_ST;
    double sigma_BW;
    double rho0;
    double chi_sq;
    double L_r;
    double eta_vacuum;
};
ChannelMoments channel_moments(const ChannelContext& c, const num::McSpec& mc, bool parallel = true);

// Saturating phenomenological scintillation index with the 2F3 closed form.
double delta_kappa(double wavelength, double Cn0_sq, double H0, double mu, double apparent_zenith);
double scint_index_phenomenological(double a, double wavelength, double Cn0_sq, double H0, double mu,
                                    double apparent_zenith);

}  // namespace satqkd::beam
