#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sepsis::env {

enum class Outcome { kOngoing, kHealth, kDeath, kTimeout };
const char* outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& name);

struct StepResult {
  std::vector<double> observation;
  double reward = 0.0;
  bool done = false;
  Outcome outcome = Outcome::kOngoing;
  // Reward components, reported on every step including terminal ones.
  double shaping = 0.0;
  double penalty = 0.0;
  // Action actually applied after clamping and health-window forcing.
  std::vector<double> applied_action;
};

// Episodic continuous-control interface shared by the sepsis environment
// and the point-mass toy.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int observation_size() const = 0;
  virtual int action_size() const = 0;

  virtual std::vector<double> reset(std::uint64_t seed) = 0;
  // Throws std::logic_error when called after the episode has finished.
  virtual StepResult step(std::span<const double> action) = 0;
};

}  // namespace sepsis::env
