#include "satqkd/atmosphere.hpp"

#include <cmath>
#include <sstream>

#include "satqkd/constants.hpp"
#include "satqkd/numerics.hpp"

namespace satqkd::atm {

const std::array<ThermoLayer, 8> kThermoTable{{
    {0.0, -6.5e-3, 288.0, 1013e2},
    {11e3, 0.0, 217.0, 226e2},
    {20e3, 1.0e-3, 217.0, 54.7e2},
    {32e3, 2.8e-3, 229.0, 8.68e2},
    {47e3, 0.0, 271.0, 1.11e2},
    {51e3, -2.8e-3, 271.0, 0.67e2},
    {71e3, -2.0e-3, 215.0, 0.04e2},
    {84.8e3, 0.0, 188.0, 0.004e2},
}};

const std::array<RefractiveLayer, 11> kRefractiveTable{{
    {0.0, 0.0, 27340e-8},
    {5e3, 25.68e-9, 14660e-8},
    {7e3, 17.58e-9, 11142e-8},
    {11e3, 12.50e-9, 6141e-8},
    {15e3, 7.183e-9, 3268e-8},
    {20e3, 3.565e-9, 1485e-8},
    {32e3, 1.042e-9, 235e-8},
    {47e3, 0.134e-9, 34e-8},
    {51e3, 0.034e-9, 21e-8},
    {71e3, 0.010e-9, 1e-8},
    {84.8e3, 0.001e-9, 0.1e-8},
}};

namespace {
std::size_t layer_of(double h) {
    if (!(h >= 0.0) || h > air::top) throw DomainError("standard atmosphere: altitude outside [0, 84.8] km");
    // the 84.8 km row only closes the last layer; anchoring a layer there would
    // make pressure jump upwards at the top
    std::size_t b = 0;
    while (b + 2 < kThermoTable.size() && h >= kThermoTable[b + 1].H_b) ++b;
    return b;
}
}  // namespace

double temperature(double h) {
    const auto& L = kThermoTable[layer_of(h)];
    return L.T_b + L.lambda_b * (h - L.H_b);
}

double lapse_rate(double h) { return kThermoTable[layer_of(h)].lambda_b; }

double pressure(double h) {
    const auto& L = kThermoTable[layer_of(h)];
    const double gR = air::g / air::R_specific;
    if (L.lambda_b != 0.0)
        return L.P_b * std::pow(1.0 + L.lambda_b / L.T_b * (h - L.H_b), -gR / L.lambda_b);
    return L.P_b * std::exp(-(h - L.H_b) * gR / L.T_b);
}

double number_density_ratio(double h) { return std::exp(-h / air::scale_height); }

double refractive_index_edlen(double P, double T, double wavelength) {
    const double um = wavelength * 1e6;
    if (!(um >= 0.3 && um <= 2.0)) throw DomainError("Edlen: wavelength outside 0.3..2.0 um");
    if (P < 0.0 || !(T > 0.0)) throw DomainError("Edlen: bad P or T");
    const double s2 = 1.0 / (um * um);
    const double ns = (8342.54 + 2406147.0 / (130.0 - s2) + 15998.0 / (38.9 - s2)) * 1e-8;
    const double t = T - 273.15;
    return 1.0 + P * ns / 96095.43 * (1.0 + 1e-8 * (0.601 - 0.00972 * t) * P) / (1.0 + 0.0036610 * t);
}

double refractive_index_layered(double h) {
    if (!(h >= 0.0)) throw DomainError("refractive index: negative altitude");
    if (h >= air::top) return h == air::top ? 1.0 + kRefractiveTable.back().n_minus_1 : 1.0;
    std::size_t i = 0;
    while (i + 1 < kRefractiveTable.size() && h >= kRefractiveTable[i + 1].H_i) ++i;
    const auto& lo = kRefractiveTable[i];
    const auto& hi = kRefractiveTable[i + 1];
    const double f = (h - lo.H_i) / (hi.H_i - lo.H_i);
    return 1.0 + lo.n_minus_1 + f * (hi.n_minus_1 - lo.n_minus_1);
}

std::string profiles_csv(double step, double wavelength) {
    std::ostringstream os;
    os.precision(10);
    os << "h_m,T_K,P_Pa,n_minus_1,n_minus_1_edlen\n";
    for (double h = 0.0; h <= air::top + 1e-9; h += step) {
        const double T = temperature(h), P = pressure(h);
        os << h << ',' << T << ',' << P << ',' << refractive_index_layered(h) - 1.0 << ','
           << refractive_index_edlen(P, T, wavelength) - 1.0 << '\n';
    }
    return os.str();
}

}  // namespace satqkd::atm
