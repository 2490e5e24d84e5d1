#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "sepsis/abm/rng.hpp"
#include "sepsis/ddpg/replay_buffer.hpp"
#include "sepsis/nn/adam.hpp"
#include "sepsis/nn/checkpoint.hpp"
#include "sepsis/nn/network.hpp"

namespace sepsis::ddpg {

// sigma(e) = base_sigma * decay_factor^(-floor(e / decay_every)).
struct NoiseSchedule {
  double base_sigma = 0.1;
  double decay_factor = 10.0;
  int decay_every = 1000;
};
double noise_sigma(int episode, const NoiseSchedule& schedule);

struct DdpgConfig {
  std::vector<int> actor_hidden{400, 300};
  std::vector<int> critic_hidden{400, 300};
  nn::Activation critic_output = nn::Activation::kIdentity;
  double final_layer_init = 3e-3;
  double actor_lr = 1e-4;
  double critic_lr = 1e-3;
  double critic_weight_decay = 0.0;
  // Adds kappa * mean ||z||^2 on the actor's pre-tanh output to the actor
  // loss; keeps the actor out of tanh saturation, where it cannot recover.
  double actor_preactivation_penalty = 0.0;
  double tau = 0.001;
  double gamma = 0.99;
  int batch_size = 64;
  std::size_t replay_capacity = 1'000'000;
  std::size_t warmup = 64;  // transitions stored before the first update
  double reward_scale = 1.0;  // applied to rewards entering the replay buffer
  NoiseSchedule noise;

  void validate() const;
};
nlohmann::json to_json(const DdpgConfig& c);
DdpgConfig ddpg_config_from_json(const nlohmann::json& j);

// Greedy action: actor output.
std::vector<double> greedy_action(const nn::Network& actor, std::span<const double> obs);
// Actor output plus independent N(0, sigma^2) per dimension, clamped to [-1,1].
std::vector<double> select_action(const nn::Network& actor, std::span<const double> obs,
                                  double sigma, Rng& rng);

// y = r for terminal rows, r + gamma * Q'(s', mu'(s')) otherwise.
nn::Vector td_targets(const Batch& batch, const nn::Network& target_actor,
                      const nn::Network& target_critic, double gamma);

struct TrainStats {
  double critic_loss = 0.0;
  double mean_q = 0.0;
  bool updated = false;
};

class Agent {
 public:
  Agent(int obs_dim, int act_dim, DdpgConfig config, std::uint64_t seed);

  const DdpgConfig& config() const { return config_; }
  const nn::Network& actor() const { return actor_; }
  const nn::Network& critic() const { return critic_; }
  const nn::Network& target_actor() const { return target_actor_; }
  const nn::Network& target_critic() const { return target_critic_; }
  nn::Network& actor() { return actor_; }
  nn::Network& critic() { return critic_; }

  // One critic and one actor update on a minibatch, then soft target
  // updates. No-op while the buffer holds fewer than max(warmup, batch).
  TrainStats train_step(const ReplayBuffer& buffer, Rng& rng);
  TrainStats train_on_batch(const Batch& batch);

  nn::PolicyCheckpoint to_checkpoint(const env::NormalizationSpec& norm, std::uint64_t config_hash,
                                     std::int64_t episode) const;
  // Restores networks; optimizer moments restart from zero.
  void load_networks(const nn::PolicyCheckpoint& ckpt);

 private:
  DdpgConfig config_;
  nn::Network actor_;
  nn::Network critic_;
  nn::Network target_actor_;
  nn::Network target_critic_;
  nn::Adam actor_opt_;
  nn::Adam critic_opt_;
  nn::ParameterSet actor_grad_;
  nn::ParameterSet critic_grad_;
};

}  // namespace sepsis::ddpg
