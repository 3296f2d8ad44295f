#pragma once

#include <optional>
#include <string>
#include <vector>

#include "satqkd/pdt.hpp"

namespace satqkd::qkd {

struct DecoyConfig {
    double mu_s = 0.8;
    double mu_d = 0.1;
    double N = 1e11;          // pulses in one session
    double rate_rN = 150e6;   // Hz
    double p_s = 0.65;
    double p_d = 0.25;        // vacuum takes the remainder
    double p_x = 0.6;         // x-basis share of each intensity class
    double eta_det = 0.6;
    double chi_opt = 0.84;
    double chi_ext = 1.0;     // set per zenith angle
    double Y0_dark = 5.89e-7;
    double e_det = 0.01;
    double e0 = 0.5;
    double failure_eps = 1e-5;
    double f_EC = 1.16;
    double M_vacuum = 0.0;    // detected vacuum-decoy counts; 0 leaves the dark-count yield
    bool infinite_statistics = false;

    double p_v() const { return 1.0 - p_s - p_d; }
    double eta_d() const { return eta_det * chi_ext * chi_opt; }
    void validate() const;
};

double binary_entropy(double x);

double overall_gain(double eta, const DecoyConfig& c, double mu);
inline double overall_gain(double eta, const DecoyConfig& c) { return overall_gain(eta, c, c.mu_s); }
double overall_error_gain(double eta, const DecoyConfig& c, double mu);
inline double overall_error_gain(double eta, const DecoyConfig& c) { return overall_error_gain(eta, c, c.mu_s); }

// Chernoff deviation; nullopt when x + ln(eps/2) <= 0 (too few events)
std::optional<double> chernoff_delta(double x, double eps);

double qber(const pdt::Channel& ch, const DecoyConfig& c);

// Background yield including vacuum-decoy counts.
double background_yield(const DecoyConfig& c);

// Pointwise bounds at a fixed transmittance.
struct PointBounds {
    double Q_s, EQ_s, Q_d, EQ_d;
    double Y0, Y0_L, Y0_U;
    double Q_d_L[2], Q_s_U[2];  // index 0: x, 1: z
    double EQ_d_x_U;
    double Y1_L[2];
    double e1_xU;
    double Q1_L[2];
    double M1_L[2];
    double M1_szL;
    bool y1_clamped = false;
    bool e1_undefined = false;
    bool insufficient_statistics = false;
};
PointBounds bounded_rates(double eta, const DecoyConfig& c);

struct ThetaSolve {
    double theta;
    bool no_root;  // statistics too small: theta = 1 sentinel
};
// M_x, M_sz: averaged single-photon counts; e1: averaged x-basis single-photon error bound
ThetaSolve solve_theta_upper(double M_x, double M_sz, double e1, double eps);

struct KeyRateResult {
    double qber;
    double key_rate;            // per pulse, clamped at 0
    double key_rate_per_second;
    double Q_mu_s;
    double EQ_mu_s;
    double Y1_L[2];             // <Y1^{gamma L}>
    double Q1_L[2];
    double e1_xU;               // <e1^{xU}>
    double e1_zU;
    double theta_U;
    double M1_xL, M1_szL;
    double eta_mean;
    // expected sifted counts 0.5 eta_d <eta> N^a, a = s, d, v
    double sifted_session[3];
    double sifted_per_second[3];
    bool clamped = false;
    std::vector<std::string> warnings;
};

KeyRateResult key_rate(const pdt::Channel& ch, const DecoyConfig& c);

}  // namespace satqkd::qkd
