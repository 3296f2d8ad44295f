#include "satqkd/turbulence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "satqkd/atmosphere.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/numerics.hpp"

namespace satqkd::turb {

namespace {

double interp(const std::vector<double>& x, const std::vector<double>& y, double z) {
    if (z <= x.front()) return y.front();
    if (z >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), z);
    const std::size_t i = static_cast<std::size_t>(it - x.begin());
    const double f = (z - x[i - 1]) / (x[i] - x[i - 1]);
    return y[i - 1] + f * (y[i] - y[i - 1]);
}

}  // namespace

double ShearProfile::shear_at(double z) const { return interp(h, shear, z); }
double ShearProfile::lapse_at(double z) const { return interp(h, lapse_K_per_km, z); }

void ShearProfile::validate() const {
    if (h.size() < 2 || shear.size() != h.size() || lapse_K_per_km.size() != h.size())
        throw DomainError("shear profile: need >= 2 rows with h, S, lapse");
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i > 0 && !(h[i] > h[i - 1])) throw DomainError("shear profile: h must be strictly increasing");
        if (!(shear[i] >= 0.0)) throw DomainError("shear profile: negative shear");
    }
}

ShearProfile ShearProfile::parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    ShearProfile p;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("h_m,S_per_s,lapse_K_per_km", 0) != 0)
                throw DomainError("shear profile: expected header h_m,S_per_s,lapse_K_per_km");
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ','))
            throw DomainError("shear profile: malformed row '" + line + "'");
        try {
            p.h.push_back(std::stod(a));
            p.shear.push_back(std::stod(b));
            p.lapse_K_per_km.push_back(std::stod(c));
        } catch (const std::exception&) {
            throw DomainError("shear profile: non-numeric row '" + line + "'");
        }
    }
    p.validate();
    return p;
}

ShearProfile ShearProfile::from_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open shear profile " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_csv(ss.str());
}

std::string ShearProfile::to_csv() const {
    std::ostringstream os;
    os.precision(12);
    os << "h_m,S_per_s,lapse_K_per_km\n";
    for (std::size_t i = 0; i < h.size(); ++i) os << h[i] << ',' << shear[i] << ',' << lapse_K_per_km[i] << '\n';
    return os.str();
}

ShearProfile ShearProfile::synthetic() {
    // shear knots (km, 1/s); lapse follows the layered standard atmosphere
    static const double knots[][2] = {{0, 0.004},  {1, 0.004},  {2, 0.005},  {4, 0.006},  {6, 0.008},
                                      {8, 0.012},  {10, 0.018}, {11, 0.020}, {12, 0.018}, {14, 0.010},
                                      {17, 0.005}, {20, 0.003}, {30, 0.002}, {50, 0.003}, {70, 0.004},
                                      {84.8, 0.004}};
    std::vector<double> kx, ky;
    for (const auto& k : knots) {
        kx.push_back(k[0] * 1e3);
        ky.push_back(k[1]);
    }
    ShearProfile p;
    for (double z = 0.0; z <= air::top + 1.0; z += 200.0) {
        const double zz = std::min(z, air::top);
        p.h.push_back(zz);
        p.shear.push_back(interp(kx, ky, zz));
        // lapse of the layer the row sits in; rows straddle layer edges by < 200 m
        p.lapse_K_per_km.push_back(atm::lapse_rate(std::min(zz, air::top - 1.0)) * 1e3);
    }
    return p;
}

double afgl_raw(const AfglWk& m, double h) {
    if (h > air::top || h < 0.0) return 0.0;
    const double S = m.shear.shear_at(h);
    const double lam = m.shear.lapse_at(h);  // K/km
    double Y;
    if (h <= m.lower_troposphere_top)
        Y = 2.9767 + 27.9804 * S + 2.9012 * lam + 1.1843 * lam * lam + 0.1741 * std::pow(lam, 3) +
            0.0086 * std::pow(lam, 4);
    else if (h <= m.troposphere_top)
        Y = 0.7152 + 30.6024 * S + 0.0003 * lam - 0.0057 * lam * lam - 0.0016 * std::pow(lam, 3) +
            0.0001 * std::pow(lam, 4);
    else
        Y = 0.6763 + 8.1569 * S - 0.0536 * lam + 0.0084 * lam * lam - 0.0007 * std::pow(lam, 3) +
            0.00002 * std::pow(lam, 4);
    const double T = atm::temperature(h);
    const double P_mb = atm::pressure(h) / 100.0;
    const double gamma_dry = 9.8e-3;                       // K/m
    const double N2 = air::g * (lam * 1e-3 + gamma_dry) / T;  // s^-2
    const double M = -79e-6 * P_mb * N2 / (air::g * T);
    return 2.8 * M * M * std::pow(0.1, 4.0 / 3.0) * std::pow(10.0, Y);
}

namespace {

double wk_shape(const AfglWk& m, double h) {
    h = std::max(h, m.h0);
    if (!m.day) return std::pow(h / m.h0, -2.0 / 3.0);
    const double hi = m.h_i;
    if (h <= 0.5 * hi) return std::pow(h / m.h0, -4.0 / 3.0);
    if (h <= 0.7 * hi) return std::pow(0.5 * hi / m.h0, -4.0 / 3.0);
    return 2.9 * std::pow(0.5 * hi / m.h0, -4.0 / 3.0) * std::pow(h / hi, 3.0);
}

}  // namespace

TurbulenceProfile::TurbulenceProfile(Cn2Model model, std::optional<double> L_turb_override)
    : model_(std::move(model)), L_turb_override_(L_turb_override) {
    if (L_turb_override_ && !(*L_turb_override_ > 0.0)) throw DomainError("L_turb override must be positive");
    if (auto* e = std::get_if<Exponential>(&model_)) {
        if (!(e->Cn0_sq >= 0.0) || !(e->H0 > 0.0)) throw DomainError("exponential Cn2: bad parameters");
    } else if (auto* hv = std::get_if<Hufnagel>(&model_)) {
        if (!(hv->v_rms >= 0.0) || !(hv->A >= 0.0)) throw DomainError("Hufnagel: bad parameters");
    } else {
        auto& a = std::get<AfglWk>(model_);
        a.shear.validate();
        if (!(a.h0 > 0.0) || !(a.h_i > a.h0) || !(a.Cn0_sq_at_h0 >= 0.0) || a.h_i >= air::top)
            throw DomainError("AFGL+WK: need 0 < h0 < h_i < 84.8 km and Cn0^2 >= 0");
        const double raw = afgl_raw(a, a.h_i);
        if (!(raw > 0.0)) throw DomainError("AFGL+WK: AFGL branch vanishes at the splice height");
        match_ = a.Cn0_sq_at_h0 * wk_shape(a, a.h_i) / raw;
    }
}

double TurbulenceProfile::cn2(double h) const {
    if (h < 0.0) h = 0.0;
    if (const auto* e = std::get_if<Exponential>(&model_)) return e->Cn0_sq * std::exp(-h / e->H0);
    if (const auto* hv = std::get_if<Hufnagel>(&model_)) {
        return 0.00594 * std::pow(hv->v_rms / 27.0, 2) * std::pow(1e-5 * h, 10) * std::exp(-h / 1000.0) +
               2.7e-16 * std::exp(-h / 1500.0) + hv->A * std::exp(-h / 100.0);
    }
    const auto& a = std::get<AfglWk>(model_);
    if (h <= a.h_i) return a.Cn0_sq_at_h0 * wk_shape(a, h);
    return match_ * afgl_raw(a, h);
}

double TurbulenceProfile::reference_height() const {
    if (std::holds_alternative<Exponential>(model_)) return 0.0;
    if (std::holds_alternative<Hufnagel>(model_)) return 10.0;
    return std::get<AfglWk>(model_).h0;
}

std::vector<double> TurbulenceProfile::breakpoints() const {
    std::vector<double> b;
    if (std::holds_alternative<AfglWk>(model_)) {
        const auto& a = std::get<AfglWk>(model_);
        b = {a.h0, a.h_i, a.lower_troposphere_top, a.troposphere_top, air::top};
        if (a.day) {
            b.push_back(0.5 * a.h_i);
            b.push_back(0.7 * a.h_i);
        }
        for (const auto& L : atm::kThermoTable) b.push_back(L.H_b);
        for (double z : a.shear.h) b.push_back(z);
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

double height_along_path(const SlantContext& ctx, double xi) {
    const double s = ctx.direction == Direction::downlink ? 1.0 - xi : xi;
    return ctx.L_r * s * std::cos(ctx.apparent_zenith);
}

double cn2_along_path(const TurbulenceProfile& p, const SlantContext& ctx, double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw DomainError("cn2_along_path: xi outside [0,1]");
    return p.cn2(height_along_path(ctx, xi));
}

double integrate_along_path(const TurbulenceProfile& p, const SlantContext& ctx,
                            const std::function<double(double)>& w, double rel_tol) {
    if (!(ctx.L_r > 0.0)) throw DomainError("slant context: L_r must be positive");
    const bool down = ctx.direction == Direction::downlink;
    // integrate in t = fraction of the path measured from the ground end, so the
    // turbulent end sits near t = 0 where doubles resolve it
    auto xi_of = [down](double t) { return down ? 1.0 - t : t; };
    const double span = ctx.L_r * std::cos(ctx.apparent_zenith);  // height range covered
    if (!(span > 0.0)) {
        const double c = p.cn2(0.0);
        return c * num::integrate([&](double t) { return w(xi_of(t)); }, 0.0, 1.0, {rel_tol});
    }
    std::vector<double> cuts{0.0};
    for (double h : p.breakpoints())
        if (h > 0.0 && h < span) cuts.push_back(h / span);
    // the profile decays over a few km; a geometric ladder lets the adaptive rule see it
    for (double h = 50.0; h < std::min(span, 2.0 * air::top); h *= 2.0) cuts.push_back(h / span);
    const double t_end = std::min(1.0, air::top / span);  // vacuum beyond
    cuts.push_back(t_end);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    while (!cuts.empty() && cuts.back() > t_end) cuts.pop_back();

    auto f = [&](double t) { return w(xi_of(t)) * p.cn2(span * t); };
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        scale = std::max(scale, std::abs(f(0.5 * (cuts[i] + cuts[i + 1]))) * (cuts[i + 1] - cuts[i]));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        sum += num::integrate(f, cuts[i], cuts[i + 1], {rel_tol, std::max(scale, 1e-300) * 1e-14, 22});
    return sum;
}

double cn0_sq(const TurbulenceProfile& p, const SlantContext& ctx) {
    const double c = std::cos(ctx.apparent_zenith);
    const double h = c > 0.0 ? p.reference_height() / c : air::top;
    return p.cn2(h);
}

double turbulent_path_length(const TurbulenceProfile& p, const SlantContext& ctx) {
    if (p.L_turb_override()) return std::min(*p.L_turb_override(), ctx.L_r);
    const double c = std::cos(ctx.apparent_zenith);
    if (const auto* e = std::get_if<Exponential>(&p.model()))
        return c > 0.0 ? std::min(e->H0 / c, ctx.L_r) : ctx.L_r;
    const double ref = cn0_sq(p, ctx);
    if (!(ref > 0.0)) return 0.0;
    const double thr = 1e-3 * ref;
    // highest altitude where the profile is still above the threshold
    double top = 0.0;
    const double dz = 25.0;
    for (double z = 0.0; z <= air::top; z += dz)
        if (p.cn2(z) >= thr) top = z;
    if (top > 0.0 && top + dz <= air::top) {
        double lo = top, hi = top + dz;
        for (int i = 0; i < 60; ++i) {
            const double mid = 0.5 * (lo + hi);
            (p.cn2(mid) >= thr ? lo : hi) = mid;
        }
        top = lo;
    }
    return c > 0.0 ? std::min(top / c, ctx.L_r) : ctx.L_r;
}

double coherence_radius_rho0(double Cn0_sq, double wavelength, double L_turb) {
    if (!(Cn0_sq >= 0.0) || !(wavelength > 0.0) || !(L_turb >= 0.0)) throw DomainError("rho0: bad input");
    const double k = 2.0 * kPi / wavelength;
    const double base = 1.5 * Cn0_sq * k * k * L_turb;
    if (base == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(base, -0.6);
}

double coherence_radius_rho0(const TurbulenceProfile& p, const SlantContext& ctx, double wavelength) {
    return coherence_radius_rho0(cn0_sq(p, ctx), wavelength, turbulent_path_length(p, ctx));
}

double chi_weight(const TurbulenceProfile& p, const SlantContext& ctx) {
    const double c0 = cn0_sq(p, ctx);
    if (!(c0 > 0.0)) return 0.0;
    return integrate_along_path(p, ctx, [](double xi) { return std::pow(xi, 5.0 / 3.0); }, 1e-9) / c0;
}

double outer_scale(double h) {
    if (!(h >= 0.0)) throw DomainError("outer_scale: negative altitude");
    const double x = (h - 8500.0) / 2500.0;
    return 4.0 / (1.0 + x * x);
}

std::string profile_csv(const ShearProfile& shear, double step) {
    AfglWk night;
    night.shear = shear;
    AfglWk day = night;
    day.day = true;
    day.h_i = 1000.0;
    day.h0 = 5.0;
    const TurbulenceProfile pn(night), pd(day), ph(Hufnagel{}), pe(Exponential{});
    std::ostringstream os;
    os.precision(8);
    os << "h_m,cn2_afgl_wk_night,cn2_afgl_wk_day,cn2_afgl_raw,cn2_hufnagel,cn2_exponential\n";
    for (double h = 0.0; h <= air::top + 1e-9; h += step)
        os << h << ',' << pn.cn2(h) << ',' << pd.cn2(h) << ',' << afgl_raw(night, h) << ',' << ph.cn2(h) << ','
           << pe.cn2(h) << '\n';
    return os.str();
}

}  // namespace satqkd::turb
