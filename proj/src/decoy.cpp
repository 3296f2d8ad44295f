#include "satqkd/decoy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "satqkd/numerics.hpp"

namespace satqkd::qkd {

void DecoyConfig::validate() const {
    if (!(mu_d > 0.0 && mu_d < mu_s && mu_s < 1.0)) throw DomainError("decoy: need 0 < mu_d < mu_s < 1");
    if (!(p_s >= 0.0 && p_d >= 0.0 && p_s + p_d <= 1.0 + 1e-15)) throw DomainError("decoy: bad intensity probabilities");
    if (!(p_x >= 0.0 && p_x <= 1.0)) throw DomainError("decoy: p_x outside [0,1]");
    for (double p : {eta_det, chi_opt, chi_ext, e_det, e0, Y0_dark})
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("decoy: probability parameter outside [0,1]");
    if (!(failure_eps > 0.0 && failure_eps < 1.0)) throw DomainError("decoy: failure_eps outside (0,1)");
    if (!(N > 0.0) || !(rate_rN > 0.0)) throw DomainError("decoy: N and rate must be positive");
    if (!(f_EC >= 1.0)) throw DomainError("decoy: f_EC must be >= 1");
    if (!(M_vacuum >= 0.0)) throw DomainError("decoy: M_vacuum must be non-negative");
}

double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("binary entropy: argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double overall_gain(double eta, const DecoyConfig& c, double mu) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("gain: eta outside [0,1]");
    const double x = c.eta_d() * eta * mu;
    return std::exp(-x) * background_yield(c) - std::expm1(-x);
}

double overall_error_gain(double eta, const DecoyConfig& c, double mu) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("error gain: eta outside [0,1]");
    const double Y0 = background_yield(c);
    return c.e0 * Y0 - c.e_det * std::expm1(-c.eta_d() * eta * mu) * (1.0 - Y0);
}

std::optional<double> chernoff_delta(double x, double eps) {
    if (!(x > 0.0)) throw DomainError("chernoff: x must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("chernoff: eps outside (0,1)");
    const double l = std::log(eps / 2.0);
    if (x + l <= 0.0) return std::nullopt;
    return (-3.0 * l + std::sqrt(l * l - 8.0 * l * x)) / (2.0 * (x + l));
}

double background_yield(const DecoyConfig& c) {
    const double denom = c.N * (std::exp(-c.mu_s) * c.p_s + std::exp(-c.mu_d) * c.p_d + c.p_v());
    return (c.M_vacuum > 0.0 ? c.M_vacuum / denom : 0.0) + c.Y0_dark;
}

double qber(const pdt::Channel& ch, const DecoyConfig& c) {
    const double Q = ch.average([&](double e) { return overall_gain(e, c); });
    const double EQ = ch.average([&](double e) { return overall_error_gain(e, c); });
    return EQ / Q;
}

namespace {

struct Dev {
    const DecoyConfig& c;
    bool* flag;
    // Q / (1 + delta(count)); an unusable delta gives no information: lower bound 0
    double lower(double Q, double count) const {
        if (c.infinite_statistics) return Q;
        if (!(count > 0.0)) { *flag = true; return 0.0; }
        const auto d = chernoff_delta(count, c.failure_eps);
        if (!d) { *flag = true; return 0.0; }
        return Q / (1.0 + *d);
    }
    double upper(double Q, double count) const {
        if (c.infinite_statistics) return Q;
        if (!(count > 0.0)) { *flag = true; return std::numeric_limits<double>::infinity(); }
        const auto d = chernoff_delta(count, c.failure_eps);
        if (!d || *d >= 1.0) { *flag = true; return std::numeric_limits<double>::infinity(); }
        return Q / (1.0 - *d);
    }
};

}  // namespace

PointBounds bounded_rates(double eta, const DecoyConfig& c) {
    PointBounds b{};
    Dev dev{c, &b.insufficient_statistics};
    const double ms = c.mu_s, md = c.mu_d;
    b.Q_s = overall_gain(eta, c, ms);
    b.EQ_s = overall_error_gain(eta, c, ms);
    b.Q_d = overall_gain(eta, c, md);
    b.EQ_d = overall_error_gain(eta, c, md);
    b.Y0 = background_yield(c);
    const double Nv = c.N * c.p_v();
    b.Y0_L = dev.lower(b.Y0, Nv * b.Y0);
    b.Y0_U = dev.upper(b.Y0, Nv * b.Y0);
    const double pg[2] = {c.p_x, 1.0 - c.p_x};
    const double single = c.N * (std::exp(-ms) * ms * c.p_s + std::exp(-md) * md * c.p_d);
    for (int g = 0; g < 2; ++g) {
        b.Q_d_L[g] = dev.lower(b.Q_d, c.N * c.p_d * pg[g] * b.Q_d);
        b.Q_s_U[g] = dev.upper(b.Q_s, c.N * c.p_s * pg[g] * b.Q_s);
        double y1 = ms / (ms * md - md * md) *
                    (b.Q_d_L[g] * std::exp(md) - md * md / (ms * ms) * b.Q_s_U[g] * std::exp(ms) -
                     (ms * ms - md * md) / (ms * ms) * b.Y0_U);
        if (!(y1 > 0.0)) {  // also catches -inf / nan from unusable upper bounds
            y1 = 0.0;
            b.y1_clamped = true;
        }
        b.Y1_L[g] = y1;
        b.Q1_L[g] = y1 * ms * std::exp(-ms);
        b.M1_L[g] = y1 * single * pg[g];
    }
    b.EQ_d_x_U = dev.upper(b.EQ_d, c.N * c.p_d * c.p_x * b.EQ_d);
    if (b.Y1_L[0] > 0.0 && std::isfinite(b.EQ_d_x_U)) {
        b.e1_xU = std::clamp((b.EQ_d_x_U * std::exp(md) - c.e0 * b.Y0_L) / (md * b.Y1_L[0]), 0.0, 0.5);
    } else {
        b.e1_xU = 0.5;
        b.e1_undefined = true;
    }
    const double s1 = c.p_s * std::exp(-ms) * ms, d1 = c.p_d * std::exp(-md) * md;
    const double p1s = s1 / (s1 + d1);
    const double base = p1s * b.M1_L[1];
    if (c.infinite_statistics) {
        b.M1_szL = base;
    } else if (base > 0.0) {
        const auto d = chernoff_delta(base, c.failure_eps);
        b.M1_szL = d ? std::max(0.0, 1.0 - *d) * base : 0.0;
        if (!d) b.insufficient_statistics = true;
    } else {
        b.M1_szL = 0.0;
    }
    return b;
}

ThetaSolve solve_theta_upper(double Mx, double Msz, double e1, double eps) {
    if (!(Mx > 0.0 && Msz > 0.0)) return {1.0, true};
    if (!(e1 > 0.0 && e1 < 1.0)) return {0.0, false};  // no bit flips to bound
    const double M = Mx + Msz;
    const double qx = Mx / M;
    const double A = std::sqrt(M) / std::sqrt(e1 * (1.0 - e1) * Mx * Msz);
    const double kxi = std::log(2.0) / 2.0 * qx * (1.0 - qx) / ((1.0 - e1) * e1);
    // log2 of the right-hand side minus log2(eps); decreasing in theta
    auto g = [&](double th) { return std::log2(A) - M * kxi * th * th - std::log2(eps); };
    if (g(0.0) <= 0.0) return {0.0, false};
    const double hi = 1.0 - e1;
    if (g(hi) > 0.0) return {1.0, true};
    return {num::find_root_bracketed(g, 0.0, hi, 1e-10), false};
}

KeyRateResult key_rate(const pdt::Channel& ch, const DecoyConfig& c) {
    c.validate();
    KeyRateResult r{};
    auto avg = [&](auto field) { return ch.average([&](double e) { return field(bounded_rates(e, c)); }); };
    r.eta_mean = ch.average([](double e) { return e; });
    r.Q_mu_s = avg([](const PointBounds& b) { return b.Q_s; });
    r.EQ_mu_s = avg([](const PointBounds& b) { return b.EQ_s; });
    r.qber = r.EQ_mu_s / r.Q_mu_s;
    for (int g = 0; g < 2; ++g) {
        r.Y1_L[g] = avg([g](const PointBounds& b) { return b.Y1_L[g]; });
        r.Q1_L[g] = avg([g](const PointBounds& b) { return b.Q1_L[g]; });
    }
    r.e1_xU = avg([](const PointBounds& b) { return b.e1_xU; });
    const double eQx = avg([](const PointBounds& b) { return b.e1_xU * b.Q1_L[0]; });
    const double eQz = avg([](const PointBounds& b) { return b.e1_xU * b.Q1_L[1]; });
    r.M1_xL = avg([](const PointBounds& b) { return b.M1_L[0]; });
    r.M1_szL = avg([](const PointBounds& b) { return b.M1_szL; });

    // flags are read on the mean transmittance only
    const auto probe = bounded_rates(std::clamp(r.eta_mean, 0.0, 1.0), c);
    if (probe.y1_clamped) r.warnings.push_back("single-photon yield bound clamped at 0");
    if (probe.insufficient_statistics) r.warnings.push_back("insufficient statistics for a Chernoff bound");

    double theta = 0.0;
    bool no_root = false;
    if (!c.infinite_statistics) {
        const auto t = solve_theta_upper(r.M1_xL, r.M1_szL, r.e1_xU, c.failure_eps);
        theta = t.theta;
        no_root = t.no_root;
    }
    r.theta_U = theta;

    const double ms = c.p_s * c.N, md = c.p_d * c.N, mv = c.p_v() * c.N;
    const double k = 0.5 * c.eta_d() * r.eta_mean;
    r.sifted_session[0] = k * ms;
    r.sifted_session[1] = k * md;
    r.sifted_session[2] = k * mv;
    r.sifted_per_second[0] = k * c.p_s * c.rate_rN;
    r.sifted_per_second[1] = k * c.p_d * c.rate_rN;
    r.sifted_per_second[2] = k * c.p_v() * c.rate_rN;

    const double q = c.p_s / 2.0;
    double R = -r.Q_mu_s * c.f_EC * binary_entropy(std::min(r.qber, 0.5));
    double ex = 0.5, ez = 0.5;
    if (r.Q1_L[0] > 0.0) ex = std::min(0.5, eQx / r.Q1_L[0]);
    if (r.Q1_L[1] > 0.0) ez = std::min(0.5, (eQz + theta * r.Q1_L[1]) / r.Q1_L[1]);
    r.e1_zU = ez;
    R += r.Q1_L[0] * (1.0 - binary_entropy(ex)) + r.Q1_L[1] * (1.0 - binary_entropy(ez));
    R *= q;
    if (no_root) {
        R = 0.0;
        r.warnings.push_back("no root for the phase-error bound; key rate set to 0");
    }
    if (R < 0.0) {
        R = 0.0;
        r.clamped = true;
    }
    r.key_rate = R;
    r.key_rate_per_second = R * c.rate_rN;
    return r;
}

}  // namespace satqkd::qkd
