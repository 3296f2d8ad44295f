#include "satqkd/scenario.hpp"

#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "satqkd/atmosphere.hpp"
#include "satqkd/constants.hpp"
#include "satqkd/pdt.hpp"

namespace satqkd::scenario {

using nlohmann::json;

std::vector<double> ZenithGrid::values() const {
    if (!(step_deg > 0.0) || stop_deg < start_deg) throw DomainError("grid: need step > 0 and stop >= start");
    if (start_deg < 0.0 || stop_deg > 90.0) throw DomainError("grid: zenith angles must lie in [0, 90] deg");
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((stop_deg - start_deg) / step_deg + 1e-9));
    for (long i = 0; i <= n; ++i) v.push_back(start_deg + static_cast<double>(i) * step_deg);
    return v;
}

ZenithGrid ZenithGrid::parse(const std::string& spec) {
    ZenithGrid g;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> g.start_deg >> c1 >> g.stop_deg >> c2 >> g.step_deg) || c1 != ':' || c2 != ':' || !is.eof())
        throw DomainError("grid: expected start:stop:step, got '" + spec + "'");
    g.values();
    return g;
}

namespace {

void check_keys(const json& j, const char* section, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw DomainError(std::string("config: '") + section + "' must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) throw DomainError(std::string("config: unknown key '") + k + "' in '" + section + "'");
}

template <class T>
void get(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: bad value for '") + key + "': " + e.what());
    }
}

std::vector<double> deg_list(const json& j, const char* key) {
    std::vector<double> v;
    get(j, key, v);
    for (auto& x : v) x *= kDeg;
    return v;
}

}  // namespace

void ScenarioConfig::validate() const {
    orbit::validate(observer);
    if (observer.altitude != 0.0) throw DomainError("config: only sea-level observers are modelled");
    auto leo = [](const orbit::OrbitSpec& o) {
        if (!orbit::validate(o)) throw DomainError("config: orbit altitude outside the 160-2000 km LEO range");
    };
    leo(orbit);
    for (double h : altitudes) {
        orbit::OrbitSpec o = orbit;
        o.altitude = h;
        leo(o);
    }
    beam::validate(beam);
    if (!(extinction.beta0_per_km >= 0.0) || !(extinction.scale_height > 0.0))
        throw DomainError("config: bad extinction parameters");
    if (tracking_angle && !(*tracking_angle >= 0.0)) throw DomainError("config: tracking angle must be >= 0");
    qkd.validate();
    grid.values();
    if (!(pass_time_step > 0.0)) throw DomainError("config: pass time step must be positive");
    if (!(pdt_zenith_deg >= 0.0 && pdt_zenith_deg < 90.0)) throw DomainError("config: pdt zenith outside [0, 90)");
    if (mc.block_size == 0 || mc.max_samples < mc.block_size || !(mc.target_rel_se > 0.0) || mc.workers < 0)
        throw DomainError("config: bad Monte Carlo settings");
    const auto& t = turbulence.model;
    if (t != "afgl_wk" && t != "hufnagel" && t != "exponential")
        throw DomainError("config: turbulence model must be afgl_wk, hufnagel or exponential");
    make_profile(*this);
}

ScenarioConfig from_json(const json& j, const std::string& base_dir) {
    ScenarioConfig c;
    c.base_dir = base_dir;
    check_keys(j, "root",
               {"observer", "orbit", "beam", "turbulence", "extinction", "refraction", "tracking_urad", "qkd",
                "phenomenological", "sweep", "mc"});
    if (j.contains("observer")) {
        const auto& o = j["observer"];
        check_keys(o, "observer", {"latitude_deg", "altitude_m"});
        double lat = c.observer.latitude / kDeg;
        get(o, "latitude_deg", lat);
        c.observer.latitude = lat * kDeg;
        get(o, "altitude_m", c.observer.altitude);
    }
    if (j.contains("orbit")) {
        const auto& o = j["orbit"];
        check_keys(o, "orbit",
                   {"altitude_m", "period_s", "inclination_deg", "revolutions", "extra_altitudes_m",
                    "inclinations_deg"});
        get(o, "altitude_m", c.orbit.altitude);
        get(o, "period_s", c.orbit.period);
        double inc = c.orbit.inclination / kDeg;
        get(o, "inclination_deg", inc);
        c.orbit.inclination = inc * kDeg;
        get(o, "revolutions", c.orbit.revolutions);
        get(o, "extra_altitudes_m", c.altitudes);
        c.inclinations = deg_list(o, "inclinations_deg");
    }
    if (j.contains("beam")) {
        const auto& b = j["beam"];
        check_keys(b, "beam", {"W0_m", "F_m", "wavelength_m", "aperture_m"});
        get(b, "W0_m", c.beam.W0);
        if (b.contains("F_m")) {
            if (b["F_m"].is_null()) c.beam.F = INFINITY;
            else get(b, "F_m", c.beam.F);
        }
        get(b, "wavelength_m", c.beam.wavelength);
        get(b, "aperture_m", c.beam.aperture);
    }
    if (j.contains("turbulence")) {
        const auto& t = j["turbulence"];
        check_keys(t, "turbulence",
                   {"model", "Cn0_sq", "H0_m", "h0_m", "h_i_m", "day", "shear_csv", "v_rms", "A", "L_turb_m"});
        auto& T = c.turbulence;
        get(t, "model", T.model);
        get(t, "Cn0_sq", T.Cn0_sq);
        get(t, "H0_m", T.H0);
        get(t, "h0_m", T.h0);
        get(t, "h_i_m", T.h_i);
        get(t, "day", T.day);
        get(t, "shear_csv", T.shear_csv);
        get(t, "v_rms", T.v_rms);
        get(t, "A", T.A);
        if (t.contains("L_turb_m") && !t["L_turb_m"].is_null()) {
            double L = 0.0;
            get(t, "L_turb_m", L);
            T.L_turb = L;
        }
    }
    if (j.contains("extinction")) {
        const auto& e = j["extinction"];
        check_keys(e, "extinction", {"beta0_per_km", "scale_height_m"});
        get(e, "beta0_per_km", c.extinction.beta0_per_km);
        get(e, "scale_height_m", c.extinction.scale_height);
    }
    if (j.contains("refraction")) {
        const auto& r = j["refraction"];
        check_keys(r, "refraction", {"atmosphere", "convention"});
        std::string atmo = "standard", conv = "published";
        get(r, "atmosphere", atmo);
        get(r, "convention", conv);
        if (atmo != "standard" && atmo != "vacuum") throw DomainError("config: refraction.atmosphere must be standard|vacuum");
        if (conv != "published" && conv != "geometric")
            throw DomainError("config: refraction.convention must be published|geometric");
        c.vacuum_atmosphere = atmo == "vacuum";
        c.convention = conv == "published" ? refr::ElongationConvention::published : refr::ElongationConvention::geometric;
    }
    if (j.contains("tracking_urad")) {
        if (j["tracking_urad"].is_null()) {
            c.tracking_angle.reset();
        } else {
            double t = 0.0;
            get(j, "tracking_urad", t);
            c.tracking_angle = t * 1e-6;
        }
    }
    if (j.contains("qkd")) {
        const auto& q = j["qkd"];
        check_keys(q, "qkd",
                   {"mu_s", "mu_d", "N", "rate_Hz", "p_s", "p_d", "p_x", "eta_det", "chi_opt", "Y0_dark", "e_det",
                    "e0", "failure_eps", "f_EC", "M_vacuum", "infinite_statistics"});
        auto& Q = c.qkd;
        get(q, "mu_s", Q.mu_s);
        get(q, "mu_d", Q.mu_d);
        get(q, "N", Q.N);
        get(q, "rate_Hz", Q.rate_rN);
        get(q, "p_s", Q.p_s);
        get(q, "p_d", Q.p_d);
        get(q, "p_x", Q.p_x);
        get(q, "eta_det", Q.eta_det);
        get(q, "chi_opt", Q.chi_opt);
        get(q, "Y0_dark", Q.Y0_dark);
        get(q, "e_det", Q.e_det);
        get(q, "e0", Q.e0);
        get(q, "failure_eps", Q.failure_eps);
        get(q, "f_EC", Q.f_EC);
        get(q, "M_vacuum", Q.M_vacuum);
        get(q, "infinite_statistics", Q.infinite_statistics);
    }
    if (j.contains("phenomenological")) {
        const auto& p = j["phenomenological"];
        check_keys(p, "phenomenological", {"aperture_m", "wavelength_m", "Cn0_sq", "H0_m", "mu"});
        auto& P = c.phenomenological;
        get(p, "aperture_m", P.aperture);
        get(p, "wavelength_m", P.wavelength);
        get(p, "Cn0_sq", P.Cn0_sq);
        get(p, "H0_m", P.H0);
        get(p, "mu", P.mu);
    }
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        check_keys(s, "sweep", {"grid", "pass_time_step_s", "pdt_zenith_deg"});
        if (s.contains("grid")) {
            std::string g;
            get(s, "grid", g);
            c.grid = ZenithGrid::parse(g);
        }
        get(s, "pass_time_step_s", c.pass_time_step);
        get(s, "pdt_zenith_deg", c.pdt_zenith_deg);
    }
    if (j.contains("mc")) {
        const auto& m = j["mc"];
        check_keys(m, "mc", {"seed", "max_samples", "target_rel_se", "workers", "block_size"});
        get(m, "seed", c.mc.seed);
        get(m, "max_samples", c.mc.max_samples);
        get(m, "target_rel_se", c.mc.target_rel_se);
        get(m, "workers", c.mc.workers);
        get(m, "block_size", c.mc.block_size);
    }
    c.validate();
    return c;
}

namespace {
std::string grid_string(const ZenithGrid& g) {
    std::ostringstream os;
    os << std::setprecision(15) << g.start_deg << ':' << g.stop_deg << ':' << g.step_deg;
    return os.str();
}
std::vector<double> to_deg(const std::vector<double>& v) {
    std::vector<double> o;
    for (double x : v) o.push_back(x / kDeg);
    return o;
}
}  // namespace

json to_json(const ScenarioConfig& c) {
    json j;
    j["observer"] = {{"latitude_deg", c.observer.latitude / kDeg}, {"altitude_m", c.observer.altitude}};
    j["orbit"] = {{"altitude_m", c.orbit.altitude},
                  {"period_s", c.orbit.period},
                  {"inclination_deg", c.orbit.inclination / kDeg},
                  {"revolutions", c.orbit.revolutions},
                  {"extra_altitudes_m", c.altitudes},
                  {"inclinations_deg", to_deg(c.inclinations)}};
    j["beam"] = {{"W0_m", c.beam.W0},
                 {"F_m", std::isinf(c.beam.F) ? json(nullptr) : json(c.beam.F)},
                 {"wavelength_m", c.beam.wavelength},
                 {"aperture_m", c.beam.aperture}};
    const auto& T = c.turbulence;
    j["turbulence"] = {{"model", T.model}, {"Cn0_sq", T.Cn0_sq}, {"H0_m", T.H0},       {"h0_m", T.h0},
                       {"h_i_m", T.h_i},   {"day", T.day},       {"shear_csv", T.shear_csv}, {"v_rms", T.v_rms},
                       {"A", T.A},         {"L_turb_m", T.L_turb ? json(*T.L_turb) : json(nullptr)}};
    j["extinction"] = {{"beta0_per_km", c.extinction.beta0_per_km}, {"scale_height_m", c.extinction.scale_height}};
    j["refraction"] = {{"atmosphere", c.vacuum_atmosphere ? "vacuum" : "standard"},
                       {"convention", c.convention == refr::ElongationConvention::published ? "published" : "geometric"}};
    j["tracking_urad"] = c.tracking_angle ? json(*c.tracking_angle * 1e6) : json(nullptr);
    const auto& Q = c.qkd;
    j["qkd"] = {{"mu_s", Q.mu_s},       {"mu_d", Q.mu_d},
                {"N", Q.N},             {"rate_Hz", Q.rate_rN},
                {"p_s", Q.p_s},         {"p_d", Q.p_d},
                {"p_x", Q.p_x},         {"eta_det", Q.eta_det},
                {"chi_opt", Q.chi_opt}, {"Y0_dark", Q.Y0_dark},
                {"e_det", Q.e_det},     {"e0", Q.e0},
                {"failure_eps", Q.failure_eps}, {"f_EC", Q.f_EC},
                {"M_vacuum", Q.M_vacuum}, {"infinite_statistics", Q.infinite_statistics}};
    const auto& P = c.phenomenological;
    j["phenomenological"] = {{"aperture_m", P.aperture}, {"wavelength_m", P.wavelength}, {"Cn0_sq", P.Cn0_sq},
                             {"H0_m", P.H0},             {"mu", P.mu}};
    j["sweep"] = {{"grid", grid_string(c.grid)}, {"pass_time_step_s", c.pass_time_step},
                  {"pdt_zenith_deg", c.pdt_zenith_deg}};
    j["mc"] = {{"seed", c.mc.seed},
               {"max_samples", c.mc.max_samples},
               {"target_rel_se", c.mc.target_rel_se},
               {"workers", c.mc.workers},
               {"block_size", c.mc.block_size}};
    return j;
}

ScenarioConfig load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DomainError(std::string("config: JSON parse error: ") + e.what());
    }
    return from_json(j, std::filesystem::path(path).parent_path().string());
}

ScenarioConfig preset(const std::string& name) {
    ScenarioConfig c;
    if (name == "fig2") {
        c.altitudes = {400e3, 780e3, 2000e3};
        c.grid = ZenithGrid::parse("0:89:1");
    } else if (name == "fig3") {
        c.inclinations = {0.0, 25.0 * kDeg, 50.0 * kDeg};
        c.grid = ZenithGrid::parse("0:85:1");
    } else if (name == "fig5") {
        c.grid = ZenithGrid::parse("0:89:1");
    } else if (name == "fig6") {
        c.grid = ZenithGrid::parse("0:89:1");
    } else if (name == "fig9") {
        c.inclinations = {0.0, 10.0 * kDeg, 20.0 * kDeg, 30.0 * kDeg};
    } else {
        throw DomainError("unknown preset '" + name + "' (fig2|fig3|fig5|fig6|fig9)");
    }
    c.validate();
    return c;
}

turb::TurbulenceProfile make_profile(const ScenarioConfig& c) {
    const auto& T = c.turbulence;
    if (T.model == "exponential") return turb::TurbulenceProfile(turb::Exponential{T.Cn0_sq, T.H0}, T.L_turb);
    if (T.model == "hufnagel") return turb::TurbulenceProfile(turb::Hufnagel{T.v_rms, T.A}, T.L_turb);
    turb::AfglWk m;
    if (!T.shear_csv.empty()) {
        std::filesystem::path p(T.shear_csv);
        if (p.is_relative() && !c.base_dir.empty()) p = std::filesystem::path(c.base_dir) / p;
        m.shear = turb::ShearProfile::from_csv(p.string());
    }
    m.day = T.day;
    m.h0 = T.h0;
    m.h_i = T.h_i;
    m.Cn0_sq_at_h0 = T.Cn0_sq;
    return turb::TurbulenceProfile(m, T.L_turb);
}

ZenithPoint evaluate_zenith(const ScenarioConfig& c, const turb::TurbulenceProfile& p, double Za, double H,
                            bool with_moments) {
    ZenithPoint z{};
    z.Za = Za;
    const auto prof = c.vacuum_atmosphere ? refr::RefractiveProfile::vacuum() : refr::RefractiveProfile::standard();
    const auto tr = refr::trace_refracted_path(Za, H, prof, c.convention);
    z.slant_range = tr.slant_range_geometric;
    z.elongation = tr.elongation_factor;
    z.L_r = tr.slant_range_refracted;
    z.chi_ext = ext::extinction_factor(Za, z.L_r, c.extinction);
    const auto ctx = beam::make_context(c.beam, p, {z.L_r, Za});
    if (with_moments) {
        z.moments = beam::channel_moments(ctx, c.mc);
    } else {
        z.moments.L_r = z.L_r;
        z.moments.eta_vacuum = beam::mean_transmittance_vacuum(c.beam, z.L_r);
        z.moments.eta_mean = beam::mean_transmittance(ctx).value;
        z.moments.rho0 = ctx.rho0;
        z.moments.chi_sq = ctx.chi_sq;
    }
    const auto& P = c.phenomenological;
    z.scint_phen = Za < kPi / 2 ? beam::scint_index_phenomenological(P.aperture, P.wavelength, P.Cn0_sq, P.H0, P.mu, Za)
                                : NAN;
    return z;
}

namespace {

// deterministic-order parallel map; the first exception (by index) is rethrown
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F f) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> err(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
        } catch (...) {
            err[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : err)
        if (e) std::rethrow_exception(e);
    return out;
}

double effective_inclination(const orbit::OrbitSpec& o) {
    return o.revolutions > 0 ? orbit::inclination_after_revolutions(o) : o.inclination;
}

std::ostringstream csv_stream() {
    std::ostringstream os;
    os << std::setprecision(10);
    return os;
}

}  // namespace

std::string header(const std::string& command, const ScenarioConfig& c) {
    std::ostringstream os;
    os << "# satqkd " << command << "\n# seed: " << c.mc.seed << "\n# config: " << to_json(c).dump() << "\n";
    return os.str();
}

std::string run_loss_budget(const ScenarioConfig& c) {
    const auto p = make_profile(c);
    const auto zs = c.grid.values();
    const auto Hs = c.altitudes.empty() ? std::vector<double>{c.orbit.altitude} : c.altitudes;
    struct Job {
        double H, zd;
    };
    std::vector<Job> jobs;
    for (double H : Hs)
        for (double zd : zs) jobs.push_back({H, zd});
    const auto pts = parallel_map<ZenithPoint>(
        jobs.size(), [&](std::size_t i) { return evaluate_zenith(c, p, jobs[i].zd * kDeg, jobs[i].H, false); });
    auto os = csv_stream();
    os << header("loss-budget", c);
    os << "H_m,Z_a_deg,slant_range_m,elongation,L_r_m,chi_ext,eta_mean,eta_vacuum,total_transmission,loss_dB\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& z = pts[i];
        const double tot = z.chi_ext * z.moments.eta_mean;
        os << jobs[i].H << ',' << jobs[i].zd << ',' << z.slant_range << ',' << z.elongation << ',' << z.L_r << ','
           << z.chi_ext << ',' << z.moments.eta_mean << ',' << z.moments.eta_vacuum << ',' << tot << ','
           << -10.0 * std::log10(tot) << '\n';
    }
    return os.str();
}

std::string run_turbulence_stats(const ScenarioConfig& c) {
    const auto p = make_profile(c);
    const auto zs = c.grid.values();
    std::vector<double> zs_rad;
    for (double z : zs) zs_rad.push_back(z * kDeg);
    const auto pts = parallel_map<ZenithPoint>(zs.size(), [&](std::size_t i) {
        if (zs_rad[i] >= kPi / 2) throw DomainError("turb-stats: zenith grid must stay below 90 deg");
        return evaluate_zenith(c, p, zs_rad[i], c.orbit.altitude, true);
    });
    const auto incs = c.inclinations.empty() ? std::vector<double>{effective_inclination(c.orbit)}
                                             : c.inclinations;
    auto os = csv_stream();
    os << header("turb-stats", c);
    os << "inclination_deg,Z_a_deg,L_r_m,eta_mean,eta2_mean,eta2_se,scint_index,W_LT_m,W_ST_m,sigma_BW_m,rho0_m,"
          "chi_sq,W_ST_over_L,sigma_BW_over_L,scint_phenomenological\n";
    for (double di : incs) {
        const double zmin = orbit::min_zenith(c.observer.latitude, di);
        for (std::size_t i = 0; i < zs.size(); ++i) {
            // the true zenith must be reachable on this orbit
            if (zs_rad[i] + 1e-12 < zmin) continue;
            const auto& z = pts[i];
            const auto& m = z.moments;
            os << di / kDeg << ',' << zs[i] << ',' << m.L_r << ',' << m.eta_mean << ',' << m.eta_sq_mean << ','
               << m.eta_sq_se << ',' << m.scint_index << ',' << m.W_LT << ',' << m.W_ST << ',' << m.sigma_BW << ','
               << m.rho0 << ',' << m.chi_sq << ',' << m.W_ST / m.L_r << ',' << m.sigma_BW / m.L_r << ','
               << z.scint_phen << '\n';
        }
    }
    return os.str();
}

namespace {
pdt::PdtModel pdt_at(const ScenarioConfig& c, const turb::TurbulenceProfile& p, double Za, ZenithPoint* zp) {
    const auto z = evaluate_zenith(c, p, Za, c.orbit.altitude, true);
    if (zp) *zp = z;
    const auto& m = z.moments;
    return pdt::build_pdt({m.eta_mean, m.eta_sq_mean, m.W_ST, m.sigma_BW, c.beam.aperture}, c.tracking_angle, m.L_r);
}
}  // namespace

PdtFiles run_pdt(const ScenarioConfig& c) {
    const auto p = make_profile(c);
    ZenithPoint z{};
    const auto model = pdt_at(c, p, c.pdt_zenith_deg * kDeg, &z);
    PdtFiles f;
    f.density_csv = header("pdt", c) + pdt::density_csv(model, 2048);
    auto j = json::parse(pdt::summary_json(model));
    j["Z_a_deg"] = c.pdt_zenith_deg;
    j["input_eta_mean"] = z.moments.eta_mean;
    j["input_eta2_mean"] = z.moments.eta_sq_mean;
    j["seed"] = c.mc.seed;
    j["config"] = to_json(c);
    f.summary_json = j.dump(2) + "\n";
    return f;
}

std::vector<PassRow> qkd_pass_rows(const ScenarioConfig& c) {
    const auto p = make_profile(c);
    const auto incs = c.inclinations.empty() ? std::vector<double>{effective_inclination(c.orbit)}
                                             : c.inclinations;
    const double n0 = 1.0 + atm::kRefractiveTable[0].n_minus_1;
    std::vector<PassRow> rows;
    for (double di : incs) {
        for (const auto& s : orbit::pass_timeline(c.observer, c.orbit, di, c.pass_time_step)) {
            PassRow r{};
            r.inclination = di;
            r.time = s.time;
            r.true_zenith = s.zenith;
            r.apparent_zenith = orbit::apparent_zenith(s.zenith, n0);
            rows.push_back(r);
        }
    }
    const auto rates = parallel_map<qkd::KeyRateResult>(rows.size(), [&](std::size_t i) {
        ZenithPoint z{};
        auto model = pdt_at(c, p, rows[i].apparent_zenith, &z);
        auto q = c.qkd;
        q.chi_ext = z.chi_ext;
        return qkd::key_rate(pdt::Channel::from_pdt(std::move(model)), q);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rate = rates[i];
    return rows;
}

std::string run_qkd_pass(const ScenarioConfig& c) {
    const auto rows = qkd_pass_rows(c);
    auto os = csv_stream();
    os << header("qkd-pass", c);
    os << "inclination_deg,t_s,Z_deg,Z_a_deg,qber,key_rate_bits_per_s,Q_mu_s,Y1_L,e1_xU,theta_U,sifted_s_per_s,"
          "sifted_d_per_s,clamped\n";
    for (const auto& r : rows) {
        const auto& k = r.rate;
        os << r.inclination / kDeg << ',' << r.time << ',' << r.true_zenith / kDeg << ',' << r.apparent_zenith / kDeg
           << ',' << k.qber << ',' << k.key_rate_per_second << ',' << k.Q_mu_s << ',' << k.Y1_L[0] << ','
           << k.e1_xU << ',' << k.theta_U << ',' << k.sifted_per_second[0] << ',' << k.sifted_per_second[1] << ','
           << (k.clamped || !k.warnings.empty() ? 1 : 0) << '\n';
    }
    return os.str();
}

AtmosphereFiles run_atmosphere_tables(const ScenarioConfig& c) {
    AtmosphereFiles f;
    f.standard_atmosphere_csv = header("atmosphere-tables", c) + atm::profiles_csv(100.0, c.beam.wavelength);
    turb::ShearProfile shear = turb::ShearProfile::synthetic();
    if (!c.turbulence.shear_csv.empty()) {
        std::filesystem::path p(c.turbulence.shear_csv);
        if (p.is_relative() && !c.base_dir.empty()) p = std::filesystem::path(c.base_dir) / p;
        shear = turb::ShearProfile::from_csv(p.string());
    }
    f.cn2_profiles_csv = header("atmosphere-tables", c) + turb::profile_csv(shear, 100.0);
    return f;
}

}  // namespace satqkd::scenario
