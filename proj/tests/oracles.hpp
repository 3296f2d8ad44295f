#pragma once
// Reference evaluations used only by the tests. Nothing here calls into the
// library; each routine is the dumbest method that is still accurate enough.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

inline constexpr double pi = 3.14159265358979323846;

// composite trapezoid on n intervals
inline double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double s = 0.5 * (f(a) + f(b));
    for (std::size_t i = 1; i < n; ++i) s += f(a + h * static_cast<double>(i));
    return s * h;
}

// composite Simpson, n even
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double s = f(a) + f(b);
    for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * static_cast<double>(i));
    return s * h / 3.0;
}

// J_n from the Bessel integral (1/pi) int_0^pi cos(n t - x sin t) dt. The
// integrand is smooth and periodic, so the trapezoid rule converges geometrically.
inline double bessel_j(int n, double x, int nodes = 256) {
    double s = 0.0;
    const double h = pi / nodes;
    for (int i = 0; i <= nodes; ++i) {
        const double t = h * i;
        const double w = (i == 0 || i == nodes) ? 0.5 : 1.0;
        s += w * std::cos(n * t - x * std::sin(t));
    }
    return s * h / pi;
}

// I_n from its power series (fine for the moderate arguments used in tests)
inline double bessel_i(int n, double x) {
    double term = std::pow(0.5 * x, n) / std::tgamma(n + 1.0), s = term;
    for (int k = 1; k < 500; ++k) {
        term *= 0.25 * x * x / (k * static_cast<double>(k + n));
        s += term;
        if (term < 1e-18 * s) break;
    }
    return s;
}

inline double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Kolmogorov-Smirnov distance between sorted samples and a CDF
inline double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        d = std::max({d, F - i / n, (i + 1) / n - F});
    }
    return d;
}

inline double h2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace oracle
