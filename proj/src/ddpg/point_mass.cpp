#include "sepsis/ddpg/point_mass.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sepsis/abm/rng.hpp"

namespace sepsis::ddpg {

PointMassEnv::PointMassEnv(PointMassConfig config) : config_(config) {
  if (!(config.dt > 0.0) || config.max_steps < 1 || !(config.bound > config.init_range)) {
    throw std::invalid_argument("invalid point-mass config");
  }
}

std::vector<double> PointMassEnv::reset(std::uint64_t seed) {
  Rng rng(seed, 0x706d);
  x_ = rng.uniform(-config_.init_range, config_.init_range);
  v_ = 0.0;
  steps_ = 0;
  done_ = false;
  return {x_, v_};
}

env::StepResult PointMassEnv::step(std::span<const double> action) {
  if (done_) throw std::logic_error("step called on a finished episode");
  if (action.size() != 1) throw std::invalid_argument("point-mass action has one component");
  const double u = std::clamp(std::isnan(action[0]) ? 0.0 : action[0], -1.0, 1.0);
  v_ += config_.dt * config_.force_scale * u;
  x_ += config_.dt * v_;
  ++steps_;

  env::StepResult r;
  r.applied_action = {u};
  r.penalty = config_.action_cost * u * u;
  r.shaping = -config_.position_cost * x_ * x_;
  r.reward = r.shaping - r.penalty;
  if (std::abs(x_) > config_.bound) {
    r.outcome = env::Outcome::kDeath;
    r.reward = config_.failure_reward;
  } else if (std::abs(x_) < config_.position_tolerance &&
             std::abs(v_) < config_.velocity_tolerance) {
    r.outcome = env::Outcome::kHealth;
    r.reward = config_.success_reward;
  } else if (steps_ >= config_.max_steps) {
    r.outcome = env::Outcome::kTimeout;
  }
  r.done = r.outcome != env::Outcome::kOngoing;
  done_ = r.done;
  r.observation = {x_, v_};
  return r;
}

double point_mass_pd(double x, double v, double kp, double kd) {
  return std::clamp(-kp * x - kd * v, -1.0, 1.0);
}

}  // namespace sepsis::ddpg
