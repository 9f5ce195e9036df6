#include "localmath/constants.hpp"

namespace localmath::constants {

std::vector<std::pair<std::string_view, double>> table() {
  return {
      {"speed_of_light_m_per_s", speed_of_light},
      {"gravitational_constant_m3_per_kg_s2", gravitational_constant},
      {"reduced_planck_J_s", reduced_planck},
      {"electron_volt_J", electron_volt},
      {"julian_year_s", julian_year},
      {"megaparsec_km", megaparsec_km},
      {"megaparsec_m", megaparsec_m},
      {"astronomical_unit_m", astronomical_unit},
  };
}

}  // namespace localmath::constants
