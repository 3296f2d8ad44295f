#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace satqkd::pdt {

struct PdtInputs {
    double eta_mean;
    double eta_sq_mean;
    double W_ST;      // m
    double sigma_BW;  // m
    double aperture;  // m
};

struct PdtModel {
    double eta0;
    double zeta0_sq;
    double R_scale;       // m
    double lambda_shape;
    double sigma_bw;      // turbulent wander used in eta0, zeta0
    double sigma_centroid;  // wander used in the centroid law (sigma_tr under tracking)
    double aperture;
    double W_ST;
    double mu0;           // -ln(eta0^2 / zeta0)
    double sigma_ln;      // sqrt(ln(zeta0^2 / eta0^2))

    double mu_at(double r0) const;  // mu0 + (r0/R)^lambda
    bool degenerate() const { return sigma_ln == 0.0; }
};

// Beam-wander weighting integral  int_0^inf x exp(-x^2/2) exp(-m (s x)^lambda) dx
double wander_integral(double s, double lambda, double m);

// Shape parameters of the conditional law from W_ST and a.
struct ShapeParams {
    double R;
    double lambda;
};
ShapeParams shape_parameters(double aperture, double W_ST);

// tracking_angle: pointing accuracy (rad); replaces sigma_BW by theta*L_r in the centroid law only
PdtModel build_pdt(const PdtInputs& in, std::optional<double> tracking_angle = std::nullopt, double L_r = 0.0);

double pdt_density(const PdtModel& m, double eta);
double pdt_cdf(const PdtModel& m, double eta);
std::vector<double> pdt_sample(const PdtModel& m, std::uint64_t seed, std::size_t n);

// <f(eta)> by nested quadrature (centroid radius, then the truncated log-normal)
double average_over_pdt(const PdtModel& m, const std::function<double(double)>& f);

// Transmittance range holding essentially all the mass.
std::pair<double, double> bulk_range(const PdtModel& m);

struct PdtSummary {
    double eta_mean;
    double eta2_mean;
    double skew;
    double mass_below_0p01;
};
PdtSummary summarize(const PdtModel& m);

std::string density_csv(const PdtModel& m, std::size_t points = 2048);
std::string summary_json(const PdtModel& m);

// Channel law seen by the key-rate code: either a PDT or a fixed transmittance.
class Channel {
public:
    static Channel fixed(double eta);
    static Channel from_pdt(PdtModel m);

    double average(const std::function<double(double)>& f) const;
    bool is_fixed() const { return !model_.has_value(); }
    const PdtModel* model() const { return model_ ? &*model_ : nullptr; }

private:
    std::optional<PdtModel> model_;
    double eta_ = 1.0;
};

}  // namespace satqkd::pdt
