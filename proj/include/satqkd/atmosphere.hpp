#pragma once

#include <array>
#include <string>

namespace satqkd::atm {

struct ThermoLayer {
    double H_b;       // m
    double lambda_b;  // K/m
    double T_b;       // K
    double P_b;       // Pa
};

struct RefractiveLayer {
    double H_i;          // m
    double dn_dh;        // 1/m (magnitude, as tabulated)
    double n_minus_1;
};

// layered standard atmosphere, 0..84.8 km
extern const std::array<ThermoLayer, 8> kThermoTable;
// layered refractive index at 840 nm
extern const std::array<RefractiveLayer, 11> kRefractiveTable;

double temperature(double h);
double pressure(double h);                 // Pa
double lapse_rate(double h);               // K/m of the layer containing h
double number_density_ratio(double h);     // exp(-h/6600 m)

// Edlen refractivity; P in Pa, T in K, wavelength in m (0.3..2 um)
double refractive_index_edlen(double P, double T, double wavelength);
// piecewise-linear in the table; 1 above 84.8 km
double refractive_index_layered(double h);

// CSV with columns h_m,T_K,P_Pa,n_minus_1 (layered) plus Edlen at the given wavelength
std::string profiles_csv(double step, double wavelength);

}  // namespace satqkd::atm
