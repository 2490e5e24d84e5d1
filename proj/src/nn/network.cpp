#include "sepsis/nn/network.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sepsis/abm/rng.hpp"

namespace sepsis::nn {
namespace {

void activate(Matrix& z, Activation a) {
  switch (a) {
    case Activation::kRelu: z = z.cwiseMax(0.0); break;
    case Activation::kTanh: z = z.array().tanh().matrix(); break;
    case Activation::kIdentity: break;
  }
}

// Multiplies `d` in place by the activation derivative, expressed through
// the activation output y.
void activation_backward(Matrix& d, const Matrix& y, Activation a) {
  switch (a) {
    case Activation::kRelu: d = (y.array() > 0.0).select(d, 0.0); break;
    case Activation::kTanh: d = (d.array() * (1.0 - y.array().square())).matrix(); break;
    case Activation::kIdentity: break;
  }
}

}  // namespace

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kIdentity: return "identity";
  }
  return "?";
}

Activation activation_from_name(const std::string& name) {
  for (Activation a : {Activation::kRelu, Activation::kTanh, Activation::kIdentity}) {
    if (name == activation_name(a)) return a;
  }
  throw std::invalid_argument("unknown activation '" + name + "'");
}

int NetworkSpec::layer_input_size(int l) const {
  return layer_sizes[l - 1] + (l == action_injection_layer ? action_size : 0);
}

void NetworkSpec::validate() const {
  if (layer_sizes.size() < 3) throw std::invalid_argument("network needs >= 1 hidden layer");
  for (int s : layer_sizes) {
    if (s < 1) throw std::invalid_argument("layer sizes must be positive");
  }
  if (action_injection_layer != 0) {
    if (action_injection_layer < 1 || action_injection_layer > num_layers()) {
      throw std::invalid_argument("action_injection_layer out of range");
    }
    if (action_size < 1) throw std::invalid_argument("action injection needs action_size >= 1");
  } else if (action_size != 0) {
    throw std::invalid_argument("action_size set without an injection layer");
  }
}

NetworkSpec NetworkSpec::actor(int obs, std::vector<int> hidden, int act) {
  NetworkSpec s;
  s.layer_sizes.push_back(obs);
  s.layer_sizes.insert(s.layer_sizes.end(), hidden.begin(), hidden.end());
  s.layer_sizes.push_back(act);
  s.output_activation = Activation::kTanh;
  return s;
}

NetworkSpec NetworkSpec::critic(int obs, std::vector<int> hidden, int act, Activation output) {
  NetworkSpec s;
  s.layer_sizes.push_back(obs);
  s.layer_sizes.insert(s.layer_sizes.end(), hidden.begin(), hidden.end());
  s.layer_sizes.push_back(1);
  s.output_activation = output;
  s.action_injection_layer = 2;
  s.action_size = act;
  return s;
}

ParameterSet ParameterSet::zeros_like(const NetworkSpec& spec) {
  ParameterSet p;
  for (int l = 1; l <= spec.num_layers(); ++l) {
    p.weights.push_back(Matrix::Zero(spec.layer_sizes[l], spec.layer_input_size(l)));
    p.biases.push_back(Vector::Zero(spec.layer_sizes[l]));
  }
  return p;
}

std::size_t ParameterSet::num_scalars() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

bool ParameterSet::all_finite() const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (!weights[l].allFinite() || !biases[l].allFinite()) return false;
  }
  return true;
}

void ParameterSet::set_zero() {
  for (auto& w : weights) w.setZero();
  for (auto& b : biases) b.setZero();
}

bool ParameterSet::same_shape(const ParameterSet& o) const {
  if (weights.size() != o.weights.size()) return false;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l].rows() != o.weights[l].rows() || weights[l].cols() != o.weights[l].cols() ||
        biases[l].size() != o.biases[l].size()) {
      return false;
    }
  }
  return true;
}

std::vector<double> ParameterSet::flatten() const {
  std::vector<double> out;
  out.reserve(num_scalars());
  for_each([&](double v) { out.push_back(v); });
  return out;
}

void ParameterSet::assign(std::span<const double> flat) {
  if (flat.size() != num_scalars()) throw std::invalid_argument("parameter count mismatch");
  std::size_t i = 0;
  for_each([&](double& v) { v = flat[i++]; });
}

bool ParameterSet::operator==(const ParameterSet& o) const {
  if (!same_shape(o)) return false;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    if (weights[l] != o.weights[l] || biases[l] != o.biases[l]) return false;
  }
  return true;
}

Network::Network(NetworkSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  params_ = ParameterSet::zeros_like(spec_);
}

Network Network::initialized(NetworkSpec spec, std::uint64_t seed, double final_layer_scale) {
  Network net(std::move(spec));
  const int layers = net.spec_.num_layers();
  for (int l = 1; l <= layers; ++l) {
    Rng rng(seed, static_cast<std::uint64_t>(l));
    const double bound =
        l == layers ? final_layer_scale : 1.0 / std::sqrt(double(net.spec_.layer_input_size(l)));
    Matrix& w = net.params_.weights[l - 1];
    Vector& b = net.params_.biases[l - 1];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-bound, bound);
    for (Eigen::Index r = 0; r < b.size(); ++r) b(r) = rng.uniform(-bound, bound);
  }
  return net;
}

void Network::check_inputs(const Matrix& x, const Matrix* actions) const {
  if (x.rows() != spec_.input_size()) throw std::invalid_argument("input size mismatch");
  if (spec_.action_injection_layer != 0) {
    if (!actions) throw std::invalid_argument("network requires an action input");
    if (actions->rows() != spec_.action_size || actions->cols() != x.cols()) {
      throw std::invalid_argument("action input shape mismatch");
    }
    if (!actions->allFinite()) throw std::domain_error("non-finite action input");
  }
  if (!x.allFinite()) throw std::domain_error("non-finite network input");
  if (!params_.all_finite()) throw std::domain_error("non-finite network parameters");
}

Matrix Network::forward(const Matrix& x, const Matrix* actions) const {
  check_inputs(x, actions);
  Matrix h = x;
  const int layers = spec_.num_layers();
  for (int l = 1; l <= layers; ++l) {
    if (l == spec_.action_injection_layer) {
      Matrix cat(h.rows() + actions->rows(), h.cols());
      cat << h, *actions;
      h = std::move(cat);
    }
    Matrix z = params_.weights[l - 1] * h;
    z.colwise() += params_.biases[l - 1];
    activate(z, l == layers ? spec_.output_activation : spec_.hidden_activation);
    h = std::move(z);
  }
  return h;
}

Matrix Network::forward(const Matrix& x, const Matrix* actions, Tape& tape) const {
  check_inputs(x, actions);
  const int layers = spec_.num_layers();
  tape.inputs.resize(layers);
  tape.outputs.resize(layers);
  for (int l = 1; l <= layers; ++l) {
    const Matrix& prev = l == 1 ? x : tape.outputs[l - 2];
    Matrix& in = tape.inputs[l - 1];
    if (l == spec_.action_injection_layer) {
      in.resize(prev.rows() + actions->rows(), prev.cols());
      in << prev, *actions;
    } else {
      in = prev;
    }
    Matrix& z = tape.outputs[l - 1];
    z.noalias() = params_.weights[l - 1] * in;
    z.colwise() += params_.biases[l - 1];
    if (l == layers) tape.pre_output = z;
    activate(z, l == layers ? spec_.output_activation : spec_.hidden_activation);
  }
  return tape.outputs.back();
}

std::vector<double> Network::forward(std::span<const double> x,
                                     std::span<const double> action) const {
  const Matrix xm = Eigen::Map<const Matrix>(x.data(), static_cast<Eigen::Index>(x.size()), 1);
  Matrix out;
  if (spec_.action_injection_layer != 0) {
    const Matrix am =
        Eigen::Map<const Matrix>(action.data(), static_cast<Eigen::Index>(action.size()), 1);
    out = forward(xm, &am);
  } else {
    out = forward(xm, nullptr);
  }
  return {out.data(), out.data() + out.size()};
}

void Network::backward(const Tape& tape, const Matrix& d_output, ParameterSet* grads,
                       Matrix* d_input, Matrix* d_action, const Matrix* d_pre_output) const {
  const int layers = spec_.num_layers();
  if (static_cast<int>(tape.outputs.size()) != layers) throw std::logic_error("stale tape");
  if (grads && !grads->same_shape(params_)) throw std::invalid_argument("gradient shape mismatch");
  Matrix d = d_output;
  for (int l = layers; l >= 1; --l) {
    activation_backward(d, tape.outputs[l - 1],
                        l == layers ? spec_.output_activation : spec_.hidden_activation);
    if (l == layers && d_pre_output) d += *d_pre_output;
    if (grads) {
      grads->weights[l - 1].noalias() += d * tape.inputs[l - 1].transpose();
      grads->biases[l - 1] += d.rowwise().sum();
    }
    const bool need_more = l > 1 || d_input;
    const bool need_action = l == spec_.action_injection_layer && d_action;
    if (!need_more && !need_action) break;
    Matrix d_in = params_.weights[l - 1].transpose() * d;
    if (l == spec_.action_injection_layer) {
      const Eigen::Index h = spec_.layer_sizes[l - 1];
      if (d_action) *d_action = d_in.bottomRows(spec_.action_size);
      d = d_in.topRows(h);
    } else {
      d = std::move(d_in);
    }
  }
  if (d_input) *d_input = d;
}

void soft_update(ParameterSet& target, const ParameterSet& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
  if (!target.same_shape(online)) throw std::invalid_argument("soft_update shape mismatch");
  for (std::size_t l = 0; l < target.weights.size(); ++l) {
    target.weights[l] = tau * online.weights[l] + (1.0 - tau) * target.weights[l];
    target.biases[l] = tau * online.biases[l] + (1.0 - tau) * target.biases[l];
  }
}

}  // namespace sepsis::nn
