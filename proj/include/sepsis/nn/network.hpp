#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sepsis::nn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Activation : std::uint8_t { kRelu = 0, kTanh = 1, kIdentity = 2 };
const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Dense feed-forward net. layer_sizes = {in, h1, ..., out}; layer l (1-based)
// maps layer_sizes[l-1] inputs to layer_sizes[l] units. When
// action_injection_layer = L > 0, layer L additionally reads an action
// vector of size action_size, concatenated below the previous activations.
struct NetworkSpec {
  std::vector<int> layer_sizes;
  Activation hidden_activation = Activation::kRelu;
  Activation output_activation = Activation::kIdentity;
  int action_injection_layer = 0;
  int action_size = 0;

  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
  int input_size() const { return layer_sizes.front(); }
  int output_size() const { return layer_sizes.back(); }
  // Input width of layer l (1-based), including any injected action.
  int layer_input_size(int l) const;
  void validate() const;
  bool operator==(const NetworkSpec&) const = default;

  static NetworkSpec actor(int obs, std::vector<int> hidden, int act);
  static NetworkSpec critic(int obs, std::vector<int> hidden, int act,
                            Activation output = Activation::kIdentity);
};

// Per-layer weights (out x in) and biases.
struct ParameterSet {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static ParameterSet zeros_like(const NetworkSpec& spec);
  std::size_t num_scalars() const;
  bool all_finite() const;
  void set_zero();
  bool same_shape(const ParameterSet& other) const;
  // Visits every scalar in serialization order: layer by layer, W row-major
  // then b.
  template <typename F>
  void for_each(F&& f) const;
  template <typename F>
  void for_each(F&& f);
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  bool operator==(const ParameterSet& o) const;
};

// Activations recorded by a forward pass for the backward pass.
struct Tape {
  std::vector<Matrix> inputs;  // input of each layer (action rows included)
  std::vector<Matrix> outputs; // post-activation output of each layer
  Matrix pre_output;            // final layer before its activation
};

class Network {
 public:
  Network() = default;
  explicit Network(NetworkSpec spec);  // zero parameters

  // Fan-in scaled uniform init: hidden layers U(+-1/sqrt(fan_in)), output
  // layer U(+-final_layer_scale). Deterministic per seed.
  static Network initialized(NetworkSpec spec, std::uint64_t seed,
                             double final_layer_scale = 3e-3);

  const NetworkSpec& spec() const { return spec_; }
  const ParameterSet& params() const { return params_; }
  ParameterSet& params() { return params_; }

  // Batched forward: columns are samples. `actions` is required iff the
  // spec injects an action. Throws std::domain_error on non-finite
  // parameters or inputs.
  Matrix forward(const Matrix& x, const Matrix* actions = nullptr) const;
  Matrix forward(const Matrix& x, const Matrix* actions, Tape& tape) const;
  std::vector<double> forward(std::span<const double> x,
                              std::span<const double> action = {}) const;

  // Reverse pass from dL/d(output) (out x B). Parameter gradients are
  // summed over the batch and added into `grads` when non-null; input and
  // action gradients are written when requested. `d_pre_output`, when
  // given, is added to the final layer's gradient after its activation.
  void backward(const Tape& tape, const Matrix& d_output, ParameterSet* grads,
                Matrix* d_input = nullptr, Matrix* d_action = nullptr,
                const Matrix* d_pre_output = nullptr) const;

  bool operator==(const Network& o) const { return spec_ == o.spec_ && params_ == o.params_; }

 private:
  void check_inputs(const Matrix& x, const Matrix* actions) const;

  NetworkSpec spec_;
  ParameterSet params_;
};

// target <- tau * online + (1 - tau) * target.
void soft_update(ParameterSet& target, const ParameterSet& online, double tau);

template <typename F>
void ParameterSet::for_each(F&& f) const {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Matrix& w = weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) f(w(r, c));
    for (Eigen::Index r = 0; r < biases[l].size(); ++r) f(biases[l](r));
  }
}

template <typename F>
void ParameterSet::for_each(F&& f) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    Matrix& w = weights[l];
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c) f(w(r, c));
    for (Eigen::Index r = 0; r < biases[l].size(); ++r) f(biases[l](r));
  }
}

}  // namespace sepsis::nn
