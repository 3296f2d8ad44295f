#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace satqkd::turb {

// Tabulated wind shear and lapse rate, linear interpolation, clamped at the ends.
struct ShearProfile {
    std::vector<double> h;               // m, strictly increasing
    std::vector<double> shear;           // 1/s
    std::vector<double> lapse_K_per_km;  // K/km

    double shear_at(double z) const;
    double lapse_at(double z) const;
    void validate() const;

    static ShearProfile from_csv(const std::string& path);
    static ShearProfile parse_csv(const std::string& text);
    std::string to_csv() const;
    // Synthetic night-time profile shaped like a mid-latitude summer night:
    // weak shear near the ground, a jet-level maximum just below the tropopause.
    static ShearProfile synthetic();
};

struct Exponential {
    double Cn0_sq = 1e-17;  // m^-2/3 at the ground
    double H0 = 500.0;      // m
};

// Hufnagel-Valley form with the usual 5/7 defaults
struct Hufnagel {
    double v_rms = 21.0;      // m/s
    double A = 1.7e-14;       // m^-2/3, ground term
};

struct AfglWk {
    ShearProfile shear = ShearProfile::synthetic();
    bool day = false;
    double h_i = 500.0;             // inversion height, m
    double h0 = 10.0;               // Monin-Obukhov scale, m
    double Cn0_sq_at_h0 = 1e-17;    // m^-2/3
    double lower_troposphere_top = 5e3;
    double troposphere_top = 17e3;
};

using Cn2Model = std::variant<Exponential, Hufnagel, AfglWk>;

enum class Direction { downlink, uplink };

struct SlantContext {
    double L_r;              // m
    double apparent_zenith;  // rad
    Direction direction = Direction::downlink;
};

// Unmatched AFGL value from the shear/lapse profile and the standard atmosphere.
double afgl_raw(const AfglWk& m, double h);

class TurbulenceProfile {
public:
    explicit TurbulenceProfile(Cn2Model model, std::optional<double> L_turb_override = std::nullopt);

    double cn2(double h) const;
    const Cn2Model& model() const { return model_; }
    // reference height for the structure constant entering rho0 (before the sec Z_a stretch)
    double reference_height() const;
    // altitudes where the profile has kinks; used to split quadratures
    std::vector<double> breakpoints() const;
    // AFGL branch scale factor that makes the splice continuous (1 for other models)
    double matching_constant() const { return match_; }
    std::optional<double> L_turb_override() const { return L_turb_override_; }

private:
    Cn2Model model_;
    std::optional<double> L_turb_override_;
    double match_ = 1.0;
};

double height_along_path(const SlantContext& ctx, double xi);
double cn2_along_path(const TurbulenceProfile& p, const SlantContext& ctx, double xi);

// Integral over xi in [0,1] of w(xi) Cn^2(h(xi)), split at the profile kinks.
double integrate_along_path(const TurbulenceProfile& p, const SlantContext& ctx,
                            const std::function<double(double)>& w, double rel_tol = 1e-10);

double cn0_sq(const TurbulenceProfile& p, const SlantContext& ctx);  // Cn^2(h_ref sec Z_a)
double turbulent_path_length(const TurbulenceProfile& p, const SlantContext& ctx);
double coherence_radius_rho0(double Cn0_sq, double wavelength, double L_turb);
double coherence_radius_rho0(const TurbulenceProfile& p, const SlantContext& ctx, double wavelength);
double chi_weight(const TurbulenceProfile& p, const SlantContext& ctx);
double outer_scale(double h);

// CSV h_m,cn2_afgl_wk_night,cn2_afgl_wk_day,cn2_hufnagel,cn2_exponential
std::string profile_csv(const ShearProfile& shear, double step);

}  // namespace satqkd::turb
