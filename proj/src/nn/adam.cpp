#include "sepsis/nn/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace sepsis::nn {
namespace {

template <typename T>
void update(T& p, T& m, T& v, const T& g_raw, const AdamConfig& c, double step_size,
            double v_correction) {
  const T g = c.weight_decay != 0.0 ? T(g_raw + c.weight_decay * p) : g_raw;
  m = c.beta1 * m + (1.0 - c.beta1) * g;
  v = c.beta2 * v + (1.0 - c.beta2) * g.cwiseAbs2();
  p.array() -= step_size * m.array() / ((v.array() / v_correction).sqrt() + c.epsilon);
}

}  // namespace

Adam::Adam(const ParameterSet& shape, AdamConfig config) : config_(config) {
  if (!(config.learning_rate >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
  if (!(config.beta1 >= 0.0 && config.beta1 < 1.0 && config.beta2 >= 0.0 && config.beta2 < 1.0)) {
    throw std::invalid_argument("Adam betas must lie in [0,1)");
  }
  m_ = shape;
  m_.set_zero();
  v_ = m_;
}

void Adam::step(ParameterSet& params, const ParameterSet& grads) {
  if (!params.same_shape(m_) || !grads.same_shape(m_)) {
    throw std::invalid_argument("Adam shape mismatch");
  }
  ++t_;
  const double m_correction = 1.0 - std::pow(config_.beta1, double(t_));
  const double v_correction = 1.0 - std::pow(config_.beta2, double(t_));
  const double step_size = config_.learning_rate / m_correction;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    update(params.weights[l], m_.weights[l], v_.weights[l], grads.weights[l], config_, step_size,
           v_correction);
    update(params.biases[l], m_.biases[l], v_.biases[l], grads.biases[l], config_, step_size,
           v_correction);
  }
}

}  // namespace sepsis::nn
