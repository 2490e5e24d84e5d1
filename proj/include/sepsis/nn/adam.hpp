#pragma once

#include <cstdint>

#include "sepsis/nn/network.hpp"

namespace sepsis::nn {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;  // L2 term added to the gradient
};

// Adam with bias-corrected moments.
class Adam {
 public:
  Adam() = default;
  Adam(const ParameterSet& shape, AdamConfig config);

  // Descends along `grads`.
  void step(ParameterSet& params, const ParameterSet& grads);

  const AdamConfig& config() const { return config_; }
  std::int64_t step_count() const { return t_; }
  const ParameterSet& first_moment() const { return m_; }
  const ParameterSet& second_moment() const { return v_; }

 private:
  AdamConfig config_;
  ParameterSet m_;
  ParameterSet v_;
  std::int64_t t_ = 0;
};

}  // namespace sepsis::nn
