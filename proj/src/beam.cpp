#include "satqkd/beam.hpp"

#include <cmath>
#include <sstream>

#include "satqkd/constants.hpp"

namespace satqkd::beam {

void validate(const BeamParams& b) {
    if (!(b.W0 > 0.0)) throw DomainError("beam: W0 must be positive");
    if (!(b.aperture > 0.0)) throw DomainError("beam: aperture radius must be positive");
    if (!(b.wavelength > 0.0)) throw DomainError("beam: wavelength must be positive");
    if (b.F == 0.0 || std::isnan(b.F)) throw DomainError("beam: wavefront radius F must be non-zero");
}

DerivedBeamNumbers derived(const BeamParams& b, double L) {
    const double k = 2.0 * kPi / b.wavelength;
    const double Omega = k * b.W0 * b.W0 / (2.0 * L);
    const double focus = std::isinf(b.F) ? 1.0 : 1.0 - L / b.F;
    return {k, Omega, 1.0 + Omega * Omega * focus * focus};
}

ChannelContext make_context(const BeamParams& b, const turb::TurbulenceProfile& p, const turb::SlantContext& s) {
    validate(b);
    if (!(s.L_r > 0.0)) throw DomainError("channel: L_r must be positive");
    ChannelContext c{b, s, &p, 0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
    c.Cn0_sq = turb::cn0_sq(p, s);
    c.L_turb = turb::turbulent_path_length(p, s);
    c.rho0 = turb::coherence_radius_rho0(c.Cn0_sq, b.wavelength, c.L_turb);
    c.chi_sq = turb::chi_weight(p, s);
    return c;
}

namespace {
// rho0^-5/3, zero without turbulence
double rho_m53(const ChannelContext& c) { return std::isinf(c.rho0) ? 0.0 : std::pow(c.rho0, -5.0 / 3.0); }
}  // namespace

double phase_structure_function(double r, double rp, const ChannelContext& c) {
    if (!(c.Cn0_sq > 0.0) || std::isinf(c.rho0)) return 0.0;
    if (r == 0.0 && rp == 0.0) return 0.0;
    const double I = turb::integrate_along_path(
                         *c.profile, c.slant,
                         [&](double xi) { return std::pow(std::abs(r * (1.0 - xi) + rp * xi), 5.0 / 3.0); }, 1e-10) /
                     c.Cn0_sq;
    return 2.0 * rho_m53(c) * I;
}

double vacuum_radius(const BeamParams& b, double L) {
    const auto d = derived(b, L);
    const double focus = std::isinf(b.F) ? 1.0 : 1.0 - L / b.F;
    return b.W0 * std::sqrt(focus * focus + 1.0 / (d.Omega * d.Omega));
}

double mean_transmittance_vacuum(const BeamParams& b, double L) {
    const double W = vacuum_radius(b, L);
    return -std::expm1(-2.0 * b.aperture * b.aperture / (W * W));
}

MeanTransmittance mean_transmittance(const ChannelContext& c) {
    const auto& b = c.beam;
    const double L = c.slant.L_r;
    const auto d = derived(b, L);
    const double u = d.k / L;  // 2 Omega / W0^2
    const double kappa = rho_m53(c) * c.chi_sq;  // D_S(0,r')/2 = kappa r'^5/3
    // the aperture integral over r is done in closed form: a J1(u a r')/(u r')
    const double rmax = b.W0 / std::sqrt(d.g_sq) * std::sqrt(2.0 * std::log(1e12));
    auto f = [&](double rp) {
        return std::exp(-d.g_sq * rp * rp / (2.0 * b.W0 * b.W0) - kappa * std::pow(rp, 5.0 / 3.0)) *
               num::bessel_j1(u * b.aperture * rp);
    };
    // split into pieces of a few Bessel half-periods so oscillation stays resolved
    const double period = kPi / (u * b.aperture);
    const int pieces = std::max(1, std::min(4000, static_cast<int>(std::ceil(rmax / period))));
    double sum = 0.0;
    for (int i = 0; i < pieces; ++i)
        sum += num::integrate(f, rmax * i / pieces, rmax * (i + 1) / pieces,
                              {1e-11, 1e-13 / (u * b.aperture), 20});  // absolute: 1e-13 in eta per piece
    double v = u * b.aperture * sum;
    if (!(v >= 0.0 && v <= 1.0 + 1e-9)) throw NumericalError("mean transmittance outside [0,1]");
    return {std::min(v, 1.0), rmax};
}

double mean_transmittance_quadratic(const ChannelContext& c) {
    const double W = long_term_radius(c);
    return -std::expm1(-2.0 * c.beam.aperture * c.beam.aperture / (W * W));
}

double long_term_radius(const ChannelContext& c) {
    const auto d = derived(c.beam, c.slant.L_r);
    const double W0 = c.beam.W0;
    const double focus = std::isinf(c.beam.F) ? 1.0 : 1.0 - c.slant.L_r / c.beam.F;
    const double turb = std::isinf(c.rho0) ? 0.0 : W0 * W0 / (c.rho0 * c.rho0) * c.chi_sq;
    return W0 * std::sqrt(focus * focus + (1.0 + turb) / (d.Omega * d.Omega));
}

double short_term_radius_at(const ChannelContext& c, double z) {
    const double W0 = c.beam.W0;
    const double focus = std::isinf(c.beam.F) ? 1.0 : 1.0 - z / c.beam.F;
    if (z <= 0.0) return W0 * std::abs(focus);
    const auto d = derived(c.beam, z);
    double turb = 0.0;
    if (!std::isinf(c.rho0) && c.chi_sq > 0.0) {
        const double X = std::sqrt(c.chi_sq);
        turb = W0 * W0 / (c.rho0 * c.rho0) * c.chi_sq /
               (1.0 + 0.24 * std::cbrt(c.rho0 / (c.beam.aperture * X)));
    }
    return W0 * std::sqrt(focus * focus + (1.0 + turb) / (d.Omega * d.Omega));
}

double short_term_radius(const ChannelContext& c) { return short_term_radius_at(c, c.slant.L_r); }

double beam_wander_variance(const ChannelContext& c) {
    const double L = c.slant.L_r;
    const double cosz = std::cos(c.slant.apparent_zenith);
    const bool down = c.slant.direction == turb::Direction::downlink;
    auto w = [&](double xi) {
        const double s = down ? 1.0 - xi : xi;  // fraction of path from the ground
        const double z = s * L;
        const double W = short_term_radius_at(c, z);
        const double Lo = turb::outer_scale(std::max(0.0, L * s * cosz));
        const double t = Lo / (2.0 * kPi);
        return xi * xi * (std::pow(W, -1.0 / 3.0) + std::pow(W * W + t * t, -1.0 / 6.0));
    };
    return 1.29 * L * L * L * turb::integrate_along_path(*c.profile, c.slant, w, 1e-9);
}

SecondMoment eta_second_moment(const ChannelContext& c, const num::McSpec& mc, bool parallel) {
    if (c.slant.direction != turb::Direction::downlink)
        throw DomainError("second moment: the r -> 0 kernel reduction holds for downlinks only");
    if (mc.block_size == 0 || mc.max_samples < mc.block_size) throw DomainError("MC spec: bad sample budget");
    const auto& b = c.beam;
    const double L = c.slant.L_r;
    const auto d = derived(b, L);
    const double u = d.k / L;
    const double focus = std::isinf(b.F) ? 1.0 : 1.0 - L / b.F;
    const double cphase = u * focus;
    const double a = b.aperture;
    const double s12 = b.W0 / std::sqrt(2.0);         // per-coordinate sd of r1', r2'
    const double s3 = s12 / std::sqrt(d.g_sq);         // r3'
    const double kappa = rho_m53(c) * c.chi_sq;
    // prefactor times the Gaussian normalization: u^4 W0^4 / (4 pi^2 g^2)
    const double pz = std::pow(u * b.W0, 4) / (4.0 * kPi * kPi * d.g_sq);
    auto aperture_ft = [a](double q) {
        const double x = q * a;
        return x < 1e-8 ? kPi * a * a : 2.0 * kPi * a * num::bessel_j1(x) / q;
    };
    auto p53 = [](double x, double y) { return std::pow(x * x + y * y, 5.0 / 6.0); };

    auto kernel = [&](num::CounterRng& rng) -> std::array<double, 3> {
        // rotational invariance: freeze the azimuth of r1'
        const double x1 = s12 * std::sqrt(-2.0 * std::log(rng.uniform()));
        const auto n23 = rng.normal_pair();
        const auto n3 = rng.normal_pair();
        const double x2 = s12 * n23[0], y2 = s12 * n23[1];
        const double x3 = s3 * n3[0], y3 = s3 * n3[1];
        const double A1 = aperture_ft(u * std::hypot(x2 + x3, y2 + y3));
        const double A2 = aperture_ft(u * std::hypot(x2 - x3, y2 - y3));
        const double phase = cphase * x1 * x2;
        const double base = pz * A1 * A2;
        double jm1 = 0.0;
        if (kappa > 0.0) {
            const double Aexp = kappa * (p53(x1 + x3, y3) + p53(x1 - x3, -y3));
            const double Bexp = kappa * (p53(x2 + x3, y2 + y3) + p53(x2 - x3, y2 - y3));
            jm1 = -std::expm1(-Aexp) * std::expm1(-Bexp);  // -(1-e^-A)(1-e^-B)
        }
        return {base * std::cos(phase) * jm1, base * std::sin(phase) * jm1, base * std::cos(phase)};
    };

    const double eta_vac = mean_transmittance_vacuum(b, L);
    const std::uint64_t total_blocks = mc.max_samples / mc.block_size;
    std::uint64_t done = 0;
    std::uint64_t round = std::min<std::uint64_t>(total_blocks, std::max<std::uint64_t>(16, 65536 / mc.block_size));
    num::McSums<3> sums;
    SecondMoment out{};
    while (true) {
        const std::uint64_t last = std::min(total_blocks, done + round);
        const auto part = parallel ? num::mc_blocks_parallel<3>(kernel, mc, done, last)
                                   : num::mc_blocks_serial<3>(kernel, mc, done, last);
        sums.merge(part);
        done = last;
        out.value = eta_vac * eta_vac + sums.mean(0);
        out.se = sums.se(0);
        const double rel = out.value > 0.0 ? out.se / out.value : INFINITY;
        if (rel <= mc.target_rel_se || done >= total_blocks) {
            if (rel > mc.target_rel_se) {
                std::ostringstream os;
                os << "second moment: relative SE " << rel << " above target after " << sums.n << " samples";
                throw NumericalError(os.str());
            }
            break;
        }
        round *= 2;  // deterministic schedule
    }
    out.vacuum_check = sums.mean(2);
    out.vacuum_check_se = sums.se(2);
    out.imag_mean = sums.mean(1);
    out.imag_se = sums.se(1);
    out.samples = sums.n;
    return out;
}

ChannelMoments channel_moments(const ChannelContext& c, const num::McSpec& mc, bool parallel) {
    ChannelMoments m{};
    m.L_r = c.slant.L_r;
    m.rho0 = c.rho0;
    m.chi_sq = c.chi_sq;
    m.eta_vacuum = mean_transmittance_vacuum(c.beam, c.slant.L_r);
    m.eta_mean = mean_transmittance(c).value;
    const auto s = eta_second_moment(c, mc, parallel);
    m.eta_sq_mean = s.value;
    m.eta_sq_se = s.se;
    m.scint_index = m.eta_sq_mean / (m.eta_mean * m.eta_mean) - 1.0;
    m.W_LT = long_term_radius(c);
    m.W_ST = short_term_radius(c);
    m.sigma_BW = std::sqrt(beam_wander_variance(c));
    return m;
}

double delta_kappa(double wavelength, double Cn0_sq, double H0, double mu, double Za) {
    const double k = 2.0 * kPi / wavelength;
    const double Hs = H0 / std::cos(Za);
    return 0.69 * mu * std::pow(Cn0_sq, -0.6) * std::pow(k, -0.2) * std::pow(Hs, -1.6);
}

double scint_index_phenomenological(double a, double wavelength, double Cn0_sq, double H0, double mu, double Za) {
    if (!(a > 0.0) || !(wavelength > 0.0) || !(Cn0_sq > 0.0) || !(H0 > 0.0) || !(mu > 0.0))
        throw DomainError("phenomenological scintillation: parameters must be positive");
    if (!(Za >= 0.0 && Za < kPi / 2)) throw DomainError("phenomenological scintillation: Z_a outside [0, 90) deg");
    const double Hs = H0 / std::cos(Za);
    const double dk = delta_kappa(wavelength, Cn0_sq, H0, mu, Za);
    const double F = num::hyp2f3(7.0 / 6.0, 1.5, 2.0, 13.0 / 6.0, 3.0, -a * a * dk * dk);
    return 1.12 * Cn0_sq * std::pow(dk, 7.0 / 3.0) * Hs * Hs * Hs * F;
}

}  // namespace satqkd::beam
