#pragma once

namespace satqkd {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDeg = kPi / 180.0;

namespace earth {
inline constexpr double R = 6'371'000.0;               // m
inline constexpr double v_equator = 1669.8 / 3.6;      // m/s
}  // namespace earth

namespace air {
inline constexpr double g = 9.8;                        // m/s^2
inline constexpr double R_specific = 287.053;           // J/(kg K)
inline constexpr double scale_height = 6600.0;          // m, number-density e-folding
inline constexpr double top = 84'800.0;                 // m, vacuum above
}  // namespace air

}  // namespace satqkd
