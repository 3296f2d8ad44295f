#include "satqkd/refraction.hpp"

#include <algorithm>
#include <cmath>

#include "satqkd/atmosphere.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/numerics.hpp"
#include "satqkd/orbit.hpp"

namespace satqkd::refr {

RefractiveProfile RefractiveProfile::standard() {
    RefractiveProfile p;
    for (const auto& row : atm::kRefractiveTable) {
        p.H.push_back(row.H_i);
        p.n.push_back(1.0 + row.n_minus_1);
    }
    return p;
}

RefractiveProfile RefractiveProfile::vacuum() {
    RefractiveProfile p = standard();
    std::fill(p.n.begin(), p.n.end(), 1.0);
    return p;
}

namespace {

double checked_acos(double x) {
    if (x > 1.0 + 1e-12 || x < -1.0 - 1e-12) throw NumericalError("ray trace: arccos argument out of range");
    return std::acos(std::clamp(x, -1.0, 1.0));
}

// straight chord between radii rb, rt subtending central angle phi
double chord(double rb, double rt, double phi) {
    const double s = std::sin(0.5 * phi);
    return std::sqrt((rt - rb) * (rt - rb) + 4.0 * rb * rt * s * s);
}

}  // namespace

RayTraceResult trace_refracted_path(double Za, double H, const RefractiveProfile& prof,
                                    ElongationConvention conv) {
    if (!(Za >= 0.0 && Za <= kPi / 2 + 1e-15)) throw DomainError("ray trace: apparent zenith outside [0, 90] deg");
    if (prof.H.size() < 2 || prof.H.size() != prof.n.size() || prof.H.front() != 0.0)
        throw DomainError("ray trace: malformed refractive profile");
    if (!(H > prof.H.back())) throw DomainError("ray trace: satellite must lie above the top layer");

    const double R = earth::R;
    const std::size_t N = prof.H.size() - 1;
    RayTraceResult out;
    out.grazing = Za > 89.9 * kDeg;
    out.invariant = prof.n[0] * R * std::sin(Za);
    const double K = out.invariant;

    out.beta.resize(N + 1);
    out.alpha.assign(N + 1, 0.0);
    out.alpha0.assign(N + 1, 0.0);
    out.bending.assign(N + 1, 0.0);
    out.beta[0] = kPi / 2 - Za;
    for (std::size_t i = 1; i <= N; ++i) {
        const double Ci = R / (R + prof.H[i]);
        out.beta[i] = checked_acos(prof.n[0] / prof.n[i] * Ci * std::sin(Za));
    }

    double total = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
        const double rb = R + prof.H[i - 1], rt = R + prof.H[i];
        const double n = prof.n[i - 1];
        out.alpha0[i] = checked_acos(K / (n * rb));
        out.alpha[i] = checked_acos(prof.n[i] / n * std::cos(out.beta[i]));
        const double phi = out.alpha[i] - out.alpha0[i];
        out.central_angle.push_back(phi);
        const double Li = chord(rb, rt, phi);
        out.segment_lengths.push_back(Li);
        total += Li;
        const double tb = std::tan(out.beta[i]) + std::tan(out.beta[i - 1]);
        out.bending[i] = tb > 0.0 ? 2.0 * (prof.n[i - 1] - prof.n[i]) / tb : 0.0;
        out.total_refraction += out.bending[i];
    }

    // vacuum leg from the top interface to the satellite
    const double rb = R + prof.H[N], rs = R + H;
    const double e_top = checked_acos(K / rb);
    const double e_sat = checked_acos(K / rs);
    const double theta = e_sat - e_top;
    out.central_angle.push_back(theta);
    const double Lv = chord(rb, rs, theta);
    out.segment_lengths.push_back(Lv);
    total += Lv;

    out.slant_range_geometric = orbit::slant_range(H, Za);
    out.geometric_elongation = total / out.slant_range_geometric;
    out.elongation_factor = conv == ElongationConvention::published
                                ? 1.0 + 90.0 / kPi * (out.geometric_elongation - 1.0)
                                : out.geometric_elongation;
    out.slant_range_refracted = out.elongation_factor * out.slant_range_geometric;
    return out;
}

double refracted_slant_range(double Za, double H, const RefractiveProfile& prof, ElongationConvention conv) {
    return trace_refracted_path(Za, H, prof, conv).slant_range_refracted;
}

double elongation_fit_poly(double z) {
    if (!(z >= 0.0 && z <= 90.0)) throw DomainError("elongation fit: Z_a outside [0, 90] deg");
    static constexpr double c[] = {1.0,           0.0,           1.818908e-4,  -4.066061e-5,
                                   3.813573e-6,   -1.920844e-7,  5.710429e-9,  -1.032821e-10,
                                   1.117105e-12,  -6.644358e-15, 1.672433e-17};
    double v = 0.0;
    for (int i = 10; i >= 0; --i) v = v * z + c[i];
    return v;
}

namespace {

struct Piece {
    double rb, rt, n0, slope;  // n(r) = n0 + slope (r - rb)
};

std::vector<Piece> linear_pieces() {
    std::vector<Piece> out;
    const auto& t = atm::kRefractiveTable;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double rb = earth::R + t[i].H_i, rt = earth::R + t[i + 1].H_i;
        out.push_back({rb, rt, 1.0 + t[i].n_minus_1, (t[i + 1].n_minus_1 - t[i].n_minus_1) / (rt - rb)});
    }
    return out;
}

// integrate g(r, n, dn/dr, root) over each piece with r = rb + u^2 to tame the
// square-root turning point at grazing incidence
template <class G>
double over_pieces(double K, G g) {
    double sum = 0.0;
    for (const auto& p : linear_pieces()) {
        const double umax = std::sqrt(p.rt - p.rb);
        sum += num::integrate(
            [&](double u) {
                const double r = p.rb + u * u;
                const double n = p.n0 + p.slope * (r - p.rb);
                const double q = std::max(n * n * r * r - K * K, 0.0);
                if (q == 0.0) return 0.0;
                return 2.0 * u * g(r, n, p.slope, std::sqrt(q));
            },
            0.0, umax, {1e-11, 1e-300, 20});
    }
    return sum;
}

}  // namespace

double continuous_ray_length(double Za, double H) {
    const double K = (1.0 + atm::kRefractiveTable[0].n_minus_1) * earth::R * std::sin(Za);
    const double atm_part = over_pieces(K, [](double r, double n, double, double root) { return n * r / root; });
    const double rb = earth::R + air::top, rs = earth::R + H;
    return atm_part + std::sqrt(rs * rs - K * K) - std::sqrt(rb * rb - K * K);
}

double continuous_total_refraction(double Za) {
    const double K = (1.0 + atm::kRefractiveTable[0].n_minus_1) * earth::R * std::sin(Za);
    return over_pieces(K, [K](double, double n, double slope, double root) { return -slope * K / (n * root); });
}

double ray_curvature_diagnostic(double h, double Za) {
    const double s = std::sin(Za);
    if (s == 0.0) return INFINITY;
    const double P_mb = atm::pressure(h) / 100.0;
    const double T = atm::temperature(h);
    const double lapse_K_per_km = atm::lapse_rate(h) * 1e3;
    return earth::R / (670.87 * P_mb / (T * T) * (0.034 + lapse_K_per_km * 1e-3) * s);
}

}  // namespace satqkd::refr
