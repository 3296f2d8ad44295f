#include "satqkd/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <limits>
#include <sstream>

namespace satqkd::num {

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0))
        throw DomainError("quadrature tolerances must be positive");
    if (a == b) return {0.0, 0.0};
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, spec.max_depth, spec.rel_tol, &err, &l1);
    if (!std::isfinite(v)) throw NumericalError("quadrature produced a non-finite value");
    // Boost measures the error against the L1 norm; for cancelling integrands that is
    // the meaningful scale too.
    const double allowed = std::max({spec.rel_tol * std::abs(v), spec.rel_tol * l1, spec.abs_tol});
    if (err > allowed * 10.0) {
        std::ostringstream os;
        os << "quadrature did not converge on [" << a << ", " << b << "]: err=" << err
           << " value=" << v;
        throw NumericalError(os.str());
    }
    return {v, err};
}

namespace {

template <class T>
T pfq23_series(T a1, T a2, T b1, T b2, T b3, T x, double& max_term_over_sum) {
    T term = 1, sum = 1, comp = 0;  // Neumaier compensation
    T max_term = 1;
    const double xd = std::abs(static_cast<double>(x));
    const int k_peak = static_cast<int>(std::sqrt(xd)) + 2;
    for (int k = 0; k < 100000; ++k) {
        const T kk = k;
        term *= (a1 + kk) * (a2 + kk) / ((b1 + kk) * (b2 + kk) * (b3 + kk) * (kk + 1)) * x;
        const T t = sum + term;
        using std::abs;
        if (abs(sum) >= abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
        if (abs(term) > max_term) max_term = abs(term);
        if (k > k_peak && abs(term) <= std::numeric_limits<double>::epsilon() * 1e-6 * abs(sum + comp))
            break;
    }
    using std::abs;
    max_term_over_sum = static_cast<double>(max_term / abs(sum + comp));
    return sum + comp;
}

}  // namespace

Hyp2F3Info hyp2f3_info(double a1, double a2, double b1, double b2, double b3, double x) {
    if (x > 0.0) throw DomainError("hyp2f3: only x <= 0 is supported");
    for (double b : {b1, b2, b3})
        if (b <= 0.0 && b == std::floor(b)) throw DomainError("hyp2f3: b parameter is a non-positive integer");
    if (x == 0.0) return {1.0, false, 1.0};

    double canc = 0.0;
    const long double v = pfq23_series<long double>(a1, a2, b1, b2, b3, x, canc);
    // long double carries ~19 digits; demand 1e-9 after the cancellation loss
    if (canc * std::numeric_limits<long double>::epsilon() < 1e-10)
        return {static_cast<double>(v), false, canc};

    if (canc > 1e84) throw NumericalError("hyp2f3: cancellation beyond 100-digit fallback");
    using big = boost::multiprecision::cpp_bin_float_100;
    double canc_big = 0.0;
    const big vb = pfq23_series<big>(big(a1), big(a2), big(b1), big(b2), big(b3), big(x), canc_big);
    return {static_cast<double>(vb), true, canc};
}

double bessel_j0(double x) { return boost::math::cyl_bessel_j(0, x); }
double bessel_j1(double x) { return boost::math::cyl_bessel_j(1, x); }
double bessel_i0(double x) { return boost::math::cyl_bessel_i(0, x); }
double bessel_i1(double x) { return boost::math::cyl_bessel_i(1, x); }

namespace {
// Hankel asymptotic series for exp(-x) I_n(x), large x
double ie_asymptotic(int n, double x) {
    const double mu = 4.0 * n * n;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 30; ++k) {
        const double f = (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * 8.0 * x);
        const double next = -term * f;
        if (std::abs(next) > std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * pi * x);
}
}  // namespace

double bessel_i0e(double x) {
    x = std::abs(x);
    return x < 500.0 ? boost::math::cyl_bessel_i(0, x) * std::exp(-x) : ie_asymptotic(0, x);
}
double bessel_i1e(double x) {
    const double s = x < 0 ? -1.0 : 1.0;
    x = std::abs(x);
    return s * (x < 500.0 ? boost::math::cyl_bessel_i(1, x) * std::exp(-x) : ie_asymptotic(1, x));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p outside (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double find_root_bracketed(const std::function<double(double)>& f, double lo, double hi, double tol,
                           int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw NumericalError("find_root_bracketed: no sign change");
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm) <= tol || 0.5 * (hi - lo) < tol) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace satqkd::num
