#pragma once

#include <string_view>
#include <utility>
#include <vector>

// SI units throughout: seconds, meters, kilograms.
namespace localmath::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0;          // m/s
inline constexpr double gravitational_constant = 6.67430e-11;  // m^3 kg^-1 s^-2
inline constexpr double reduced_planck = 1.054571817e-34;      // J s
inline constexpr double electron_volt = 1.602176634e-19;       // J
inline constexpr double julian_year = 31557600.0;              // s (365.25 d)
inline constexpr double megaparsec_km = 3.0857e19;             // km
inline constexpr double megaparsec_m = 3.0857e22;              // m
inline constexpr double astronomical_unit = 1.495978707e11;    // m

/// Name/value pairs printed into every scenario report header.
std::vector<std::pair<std::string_view, double>> table();

}  // namespace localmath::constants
