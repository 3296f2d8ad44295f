#include "satqkd/extinction.hpp"

#include <cmath>

#include "satqkd/numerics.hpp"

namespace satqkd::ext {

void validate(const ExtinctionParams& p) {
    if (!(p.beta0_per_km >= 0.0)) throw DomainError("extinction coefficient must be >= 0");
    if (!(p.scale_height > 0.0)) throw DomainError("scale height must be positive");
}

double extinction_factor(double Za, double L_r, const ExtinctionParams& p) {
    validate(p);
    if (!(L_r > 0.0)) throw DomainError("extinction: L_r must be positive");
    if (p.beta0_per_km == 0.0) return 1.0;
    const double Hs = p.scale_height / std::cos(Za);  // m; infinite at the horizon
    double path;
    if (!std::isfinite(Hs) || Hs > 1e6 * L_r)
        path = L_r;  // horizontal-link limit
    else
        path = -Hs * std::expm1(-L_r / Hs);
    return std::exp(-p.beta0_per_km * path / 1000.0);
}

double extinction_factor_quadrature(double Za, double L_r, const ExtinctionParams& p, double h_obs) {
    validate(p);
    if (!(L_r > 0.0)) throw DomainError("extinction: L_r must be positive");
    const double c = std::cos(Za);
    const double s_max = c > 0 ? std::min(L_r, 60.0 * p.scale_height / c) : L_r;
    const double tau = num::integrate(
        [&](double s) { return p.beta0_per_km / 1000.0 * std::exp(-(s * c + h_obs) / p.scale_height); }, 0.0,
        s_max, {1e-12, 1e-300, 20});
    return std::exp(-tau);
}

}  // namespace satqkd::ext
