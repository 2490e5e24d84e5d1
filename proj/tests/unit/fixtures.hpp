#pragma once

#include <string>

#include "sepsis/abm/params.hpp"
#include "sepsis/abm/simulation.hpp"

namespace fixtures {

inline std::string source_path(const std::string& rel) { return std::string(SEPSIS_SOURCE_DIR) + "/" + rel; }

inline const sepsis::abm::RuleConstants& constants() {
  static const auto c = sepsis::abm::load_rule_constants(source_path("config/constants.json"));
  return c;
}

// Small stochastic-zone patient on a reduced grid.
inline sepsis::abm::SimulationParams small_params(int side = 31, int injury = 3) {
  sepsis::abm::PatientParams p{injury, 3.7, 5.0, 2.0, 0.5};
  return sepsis::abm::make_params(p, constants(), side, 28.0);
}

// Zero-injury, zero-toxicity patient: nothing ever happens.
inline sepsis::abm::SimulationParams quiet_params(int side = 21) {
  sepsis::abm::PatientParams p{0, 1.0, 1.0, 0.0, 1.0};
  return sepsis::abm::make_params(p, constants(), side, 28.0);
}

}  // namespace fixtures
