#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "satqkd/beam.hpp"
#include "satqkd/decoy.hpp"
#include "satqkd/extinction.hpp"
#include "satqkd/orbit.hpp"
#include "satqkd/refraction.hpp"
#include "satqkd/turbulence.hpp"

namespace satqkd::scenario {

struct ZenithGrid {
    double start_deg = 0.0;
    double stop_deg = 85.0;
    double step_deg = 1.0;
    std::vector<double> values() const;
    static ZenithGrid parse(const std::string& spec);  // "start:stop:step"
};

struct TurbulenceConfig {
    std::string model = "afgl_wk";  // afgl_wk | hufnagel | exponential
    double Cn0_sq = 1e-17;          // exponential ground value / AFGL-WK value at h0
    double H0 = 500.0;              // exponential scale height
    double h0 = 10.0;
    double h_i = 500.0;
    bool day = false;
    std::string shear_csv;          // empty: built-in synthetic profile
    double v_rms = 21.0;
    double A = 1.7e-14;
    std::optional<double> L_turb;   // override, m
};

struct PhenomenologicalConfig {
    double aperture = 3.2e-3;
    double wavelength = 847e-9;
    double Cn0_sq = 2.5e-17;
    double H0 = 500.0;
    double mu = 0.92;
};

struct ScenarioConfig {
    orbit::ObserverGeo observer;
    orbit::OrbitSpec orbit;
    std::vector<double> altitudes;       // extra orbit altitudes for loss-budget sweeps (m)
    std::vector<double> inclinations;    // rad; pass / turb-stats families
    beam::BeamParams beam;
    TurbulenceConfig turbulence;
    ext::ExtinctionParams extinction;
    bool vacuum_atmosphere = false;
    refr::ElongationConvention convention = refr::ElongationConvention::published;
    std::optional<double> tracking_angle = 1e-6;  // rad
    qkd::DecoyConfig qkd;
    PhenomenologicalConfig phenomenological;
    ZenithGrid grid;
    double pass_time_step = 5.0;  // s
    double pdt_zenith_deg = 0.0;
    num::McSpec mc;
    std::string base_dir;  // for relative paths; not serialized

    void validate() const;
};

ScenarioConfig from_json(const nlohmann::json& j, const std::string& base_dir = "");
nlohmann::json to_json(const ScenarioConfig& c);
ScenarioConfig load_file(const std::string& path);
ScenarioConfig preset(const std::string& name);  // fig2 fig3 fig5 fig6 fig9

turb::TurbulenceProfile make_profile(const ScenarioConfig& c);

// Everything evaluated at one apparent zenith angle.
struct ZenithPoint {
    double Za;            // rad
    double slant_range;   // m, geometric
    double elongation;
    double L_r;
    double chi_ext;
    beam::ChannelMoments moments;
    double scint_phen;
};
ZenithPoint evaluate_zenith(const ScenarioConfig& c, const turb::TurbulenceProfile& p, double Za, double altitude,
                            bool with_moments = true);

// CSV writers; every file starts with '#' lines carrying the resolved config and seed.
std::string header(const std::string& command, const ScenarioConfig& c);
std::string run_loss_budget(const ScenarioConfig& c);
std::string run_turbulence_stats(const ScenarioConfig& c);
struct PdtFiles {
    std::string density_csv;
    std::string summary_json;
};
PdtFiles run_pdt(const ScenarioConfig& c);
std::string run_qkd_pass(const ScenarioConfig& c);
struct AtmosphereFiles {
    std::string standard_atmosphere_csv;
    std::string cn2_profiles_csv;
};
AtmosphereFiles run_atmosphere_tables(const ScenarioConfig& c);

// One sample of a pass, exposed for tests.
struct PassRow {
    double inclination;
    double time;
    double true_zenith;
    double apparent_zenith;
    qkd::KeyRateResult rate;
};
std::vector<PassRow> qkd_pass_rows(const ScenarioConfig& c);

}  // namespace satqkd::scenario
