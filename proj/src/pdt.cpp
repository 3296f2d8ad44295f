#include "satqkd/pdt.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include "json.hpp"
#include <sstream>

#include "satqkd/numerics.hpp"

namespace satqkd::pdt {

namespace {

// 1 - exp(-x) I0(x); series for small x where the difference cancels
long double one_minus_i0e(long double x) {
    if (x < 1.0L) {
        // e^-x I0(x) = 1F1(1/2; 1; -2x)
        long double term = 1.0L, sum = 0.0L;
        for (int k = 1; k < 200; ++k) {
            term *= (k - 0.5L) / (static_cast<long double>(k) * k) * (-2.0L * x);
            sum += term;
            if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
        }
        return -sum;
    }
    return 1.0L - num::bessel_i0e(static_cast<double>(x));
}

}  // namespace

double PdtModel::mu_at(double r0) const { return mu0 + std::pow(r0 / R_scale, lambda_shape); }

double wander_integral(double s, double lambda, double m) {
    if (s == 0.0) return 1.0;
    auto f = [&](double x) { return x * std::exp(-0.5 * x * x - m * std::pow(s * x, lambda)); };
    return num::integrate(f, 0.0, 9.0, {1e-12, 1e-300, 20}) + num::integrate(f, 9.0, 40.0, {1e-10, 1e-300, 20});
}

ShapeParams shape_parameters(double a, double W_ST) {
    if (!(a > 0.0) || !(W_ST > 0.0)) throw DomainError("PDT: aperture and W_ST must be positive");
    const long double s = static_cast<long double>(a) * a / (static_cast<long double>(W_ST) * W_ST);
    const long double x = 4.0L * s;
    const long double D = one_minus_i0e(x);
    const long double num2 = -2.0L * std::expm1(-2.0L * s);
    const long double lnG = std::log1p((num2 - D) / D);
    if (!(lnG > 0.0L)) throw NumericalError("PDT: shape logarithm is not positive");
    const long double i1e = num::bessel_i1e(static_cast<double>(x));
    const double lambda = static_cast<double>(8.0L * s * i1e / D / lnG);
    const double R = static_cast<double>(a * std::pow(lnG, -1.0L / lambda));
    return {R, lambda};
}

PdtModel build_pdt(const PdtInputs& in, std::optional<double> tracking, double L_r) {
    if (!(in.eta_mean > 0.0 && in.eta_mean < 1.0)) throw DomainError("PDT: <eta> must lie in (0,1)");
    if (!(in.eta_sq_mean >= in.eta_mean * in.eta_mean) || !(in.eta_sq_mean <= in.eta_mean))
        throw DomainError("PDT: <eta^2> violates <eta>^2 <= <eta^2> <= <eta>");
    if (!(in.sigma_BW >= 0.0)) throw DomainError("PDT: sigma_BW must be non-negative");
    const auto sp = shape_parameters(in.aperture, in.W_ST);
    PdtModel m{};
    m.R_scale = sp.R;
    m.lambda_shape = sp.lambda;
    m.sigma_bw = in.sigma_BW;
    m.aperture = in.aperture;
    m.W_ST = in.W_ST;
    const double s = in.sigma_BW / sp.R;
    m.eta0 = in.eta_mean / wander_integral(s, sp.lambda, 1.0);
    m.zeta0_sq = in.eta_sq_mean / wander_integral(s, sp.lambda, 2.0);
    const double ratio = m.zeta0_sq / (m.eta0 * m.eta0);
    if (ratio < 1.0 - 1e-12)
        throw DomainError("PDT: wander alone exceeds the requested variance (zeta0^2 < eta0^2)");
    m.sigma_ln = std::sqrt(std::max(0.0, std::log(ratio)));
    m.mu0 = -std::log(m.eta0 * m.eta0 / std::sqrt(m.zeta0_sq));
    if (tracking) {
        if (!(*tracking >= 0.0) || !(L_r > 0.0)) throw DomainError("PDT: tracking needs theta >= 0 and L_r > 0");
        m.sigma_centroid = *tracking * L_r;
    } else {
        m.sigma_centroid = in.sigma_BW;
    }
    return m;
}

namespace {

constexpr double kRhoMax = 8.0;  // centroid radius cut in units of sigma; tail mass e^-32

// centroid radius (units of sigma) where the conditional log-normal is centred on ln(eta)
std::vector<double> rho_breaks(const PdtModel& m, double eta) {
    std::vector<double> b{0.0, kRhoMax};
    if (m.sigma_centroid == 0.0 || eta <= 0.0) return b;
    const double tstar = -std::log(eta) - m.mu0;
    for (double k : {-6.0, -3.0, -1.0, 0.0, 1.0, 3.0, 6.0}) {
        const double t = tstar + k * m.sigma_ln;
        if (t <= 0.0) continue;
        const double rho = m.R_scale * std::pow(t, 1.0 / m.lambda_shape) / m.sigma_centroid;
        if (rho > 0.0 && rho < kRhoMax) b.push_back(rho);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

// abs: error floor in the result; the centroid cut already drops ~e^-32 of the mass
double over_centroid(const PdtModel& m, double eta, const std::function<double(double)>& cond, double rel, double abs) {
    if (m.sigma_centroid == 0.0) return cond(0.0);
    auto g = [&](double rho) { return rho * std::exp(-0.5 * rho * rho) * cond(rho * m.sigma_centroid); };
    const auto b = rho_breaks(m, eta);
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i) sum += num::integrate(g, b[i], b[i + 1], {rel, abs, 20});
    return sum;
}

}  // namespace

double pdt_density(const PdtModel& m, double eta) {
    if (!(eta > 0.0 && eta <= 1.0)) return 0.0;
    if (m.degenerate()) throw DomainError("PDT: degenerate law (zero log-variance) has no density");
    const double s = m.sigma_ln;
    auto cond = [&](double r0) {
        const double mu = m.mu_at(r0);
        const double z = (std::log(eta) + mu) / s;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * num::pi) * eta * s) / num::normal_cdf(mu / s);
    };
    return over_centroid(m, eta, cond, 1e-9, 1e-15 / (eta * s));  // cond <~ 1/(eta s)
}

double pdt_cdf(const PdtModel& m, double eta) {
    if (eta <= 0.0) return 0.0;
    if (eta >= 1.0) return 1.0;
    const double s = m.sigma_ln;
    auto cond = [&](double r0) {
        const double mu = m.mu_at(r0);
        if (s == 0.0) return std::exp(-mu) <= eta ? 1.0 : 0.0;
        const double Fb = num::normal_cdf(mu / s);
        return std::min(1.0, num::normal_cdf((std::log(eta) + mu) / s) / Fb);
    };
    return over_centroid(m, eta, cond, 1e-10, 1e-16);
}

std::vector<double> pdt_sample(const PdtModel& m, std::uint64_t seed, std::size_t n) {
    if (n == 0) throw DomainError("PDT sampler: n must be >= 1");
    num::CounterRng rng(seed, 0x5d7);
    std::vector<double> out(n);
    for (auto& eta : out) {
        const double r0 = m.sigma_centroid * std::sqrt(-2.0 * std::log(rng.uniform()));
        const double v = rng.uniform();
        const double mu = m.mu_at(r0);
        if (m.degenerate()) {
            eta = std::min(1.0, std::exp(-mu));
            continue;
        }
        const double u = num::normal_quantile(v * num::normal_cdf(mu / m.sigma_ln));
        eta = std::min(1.0, std::exp(m.sigma_ln * u - mu));
    }
    return out;
}

namespace {

// E[f(eta)] for the log-normal truncated to eta <= 1, at fixed mu
double conditional_average(const PdtModel& m, double mu, const std::function<double(double)>& f) {
    const double s = m.sigma_ln;
    if (s == 0.0) return f(std::min(1.0, std::exp(-mu)));
    const double b = mu / s;  // truncation point in the standard-normal variable
    const double hi = std::min(b, 9.0);
    const double lo = b < -8.0 ? b - 50.0 / std::fabs(b) : -9.0;
    auto g = [&](double u) { return std::exp(-0.5 * u * u) * f(std::exp(s * u - mu)); };
    // mass below -9 is ~1e-19
    const double I = num::integrate(g, lo, hi, {1e-10, 1e-16, 20}) / std::sqrt(2.0 * num::pi);
    return I / num::normal_cdf(b);
}

}  // namespace

double average_over_pdt(const PdtModel& m, const std::function<double(double)>& f) {
    if (m.sigma_centroid == 0.0) return conditional_average(m, m.mu0, f);
    auto g = [&](double rho) {
        return rho * std::exp(-0.5 * rho * rho) * conditional_average(m, m.mu_at(rho * m.sigma_centroid), f);
    };
    return num::integrate(g, 0.0, kRhoMax, {1e-9, 1e-15, 20});
}

std::pair<double, double> bulk_range(const PdtModel& m) {
    const double tmax = m.sigma_centroid > 0.0 ? std::pow(kRhoMax * m.sigma_centroid / m.R_scale, m.lambda_shape) : 0.0;
    const double lo = std::exp(-(m.mu0 + tmax) - 8.0 * m.sigma_ln);
    const double hi = std::min(1.0, std::exp(-m.mu0 + 8.0 * m.sigma_ln));
    return {lo, hi};
}

PdtSummary summarize(const PdtModel& m) {
    PdtSummary s{};
    s.eta_mean = average_over_pdt(m, [](double e) { return e; });
    s.eta2_mean = average_over_pdt(m, [](double e) { return e * e; });
    const double mu = s.eta_mean;
    const double var = average_over_pdt(m, [mu](double e) { return (e - mu) * (e - mu); });
    const double m3 = average_over_pdt(m, [mu](double e) { return (e - mu) * (e - mu) * (e - mu); });
    s.skew = var > 0.0 ? m3 / std::pow(var, 1.5) : 0.0;
    s.mass_below_0p01 = pdt_cdf(m, 0.01);
    return s;
}

std::string density_csv(const PdtModel& m, std::size_t points) {
    if (points < 2) throw DomainError("PDT export: need at least two grid points");
    const auto [lo, hi] = bulk_range(m);
    std::ostringstream os;
    os << std::setprecision(12) << "eta,density\n";
    for (std::size_t i = 0; i < points; ++i) {
        const double eta = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        os << eta << ',' << (m.degenerate() ? 0.0 : pdt_density(m, eta)) << '\n';
    }
    return os.str();
}

std::string summary_json(const PdtModel& m) {
    const auto s = summarize(m);
    nlohmann::json j{{"eta_mean", s.eta_mean},     {"eta2_mean", s.eta2_mean},
                     {"skew", s.skew},             {"mass_below_0.01", s.mass_below_0p01},
                     {"eta0", m.eta0},             {"zeta0_sq", m.zeta0_sq},
                     {"R_scale_m", m.R_scale},     {"lambda_shape", m.lambda_shape},
                     {"sigma_centroid_m", m.sigma_centroid}, {"sigma_ln", m.sigma_ln}};
    return j.dump(2);
}

Channel Channel::fixed(double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("channel: fixed transmittance outside [0,1]");
    Channel c;
    c.eta_ = eta;
    return c;
}

Channel Channel::from_pdt(PdtModel m) {
    Channel c;
    c.model_ = std::move(m);
    return c;
}

double Channel::average(const std::function<double(double)>& f) const {
    return model_ ? average_over_pdt(*model_, f) : f(eta_);
}

}  // namespace satqkd::pdt
