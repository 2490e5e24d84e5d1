#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sepsis/env/environment.hpp"

namespace sepsis::ddpg {

// 1-D mass with bounded force: v += dt * force_scale * u, x += dt * v.
// Success (reported as Health) once |x| and |v| are both inside their
// tolerances; leaving [-bound, bound] counts as failure (Death).
struct PointMassConfig {
  double dt = 0.1;
  double force_scale = 1.0;
  double init_range = 1.0;  // x0 ~ U(-r, r), v0 = 0
  double bound = 3.0;
  double position_tolerance = 0.05;
  double velocity_tolerance = 0.05;
  int max_steps = 200;
  double success_reward = 10.0;
  double failure_reward = -10.0;
  double position_cost = 1.0;  // per-step -(c_x x^2 + c_u u^2)
  double action_cost = 0.01;
};

class PointMassEnv final : public env::Environment {
 public:
  explicit PointMassEnv(PointMassConfig config = {});

  int observation_size() const override { return 2; }
  int action_size() const override { return 1; }
  std::vector<double> reset(std::uint64_t seed) override;
  env::StepResult step(std::span<const double> action) override;

  double position() const { return x_; }
  double velocity() const { return v_; }
  const PointMassConfig& config() const { return config_; }

 private:
  PointMassConfig config_;
  double x_ = 0.0;
  double v_ = 0.0;
  int steps_ = 0;
  bool done_ = true;
};

// Saturated PD reference controller.
double point_mass_pd(double x, double v, double kp, double kd);

}  // namespace sepsis::ddpg
