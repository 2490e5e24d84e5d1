#include "sepsis/ddpg/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sepsis::ddpg {

double noise_sigma(int episode, const NoiseSchedule& s) {
  if (episode < 0) throw std::invalid_argument("episode must be >= 0");
  // Repeated division keeps 0.1 / 10 == 0.01 exact where pow() would not.
  double sigma = s.base_sigma;
  for (int k = episode / s.decay_every; k > 0; --k) sigma /= s.decay_factor;
  return sigma;
}

void DdpgConfig::validate() const {
  if (actor_hidden.empty() || critic_hidden.size() < 2) {
    throw std::invalid_argument("actor needs >= 1 and critic >= 2 hidden layers");
  }
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0,1]");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (replay_capacity < 1) throw std::invalid_argument("replay_capacity must be >= 1");
  if (!(noise.base_sigma > 0.0) || !(noise.decay_factor > 0.0) || noise.decay_every < 1) {
    throw std::invalid_argument("invalid noise schedule");
  }
  if (!(reward_scale > 0.0)) throw std::invalid_argument("reward_scale must be > 0");
  if (!(actor_preactivation_penalty >= 0.0) || !(critic_weight_decay >= 0.0)) {
    throw std::invalid_argument("penalties must be >= 0");
  }
}

nlohmann::json to_json(const DdpgConfig& c) {
  return {{"actor_hidden", c.actor_hidden},
          {"critic_hidden", c.critic_hidden},
          {"critic_output", nn::activation_name(c.critic_output)},
          {"final_layer_init", c.final_layer_init},
          {"actor_lr", c.actor_lr},
          {"critic_lr", c.critic_lr},
          {"critic_weight_decay", c.critic_weight_decay},
          {"actor_preactivation_penalty", c.actor_preactivation_penalty},
          {"tau", c.tau},
          {"gamma", c.gamma},
          {"batch_size", c.batch_size},
          {"replay_capacity", c.replay_capacity},
          {"warmup", c.warmup},
          {"reward_scale", c.reward_scale},
          {"noise",
           {{"base_sigma", c.noise.base_sigma},
            {"decay_factor", c.noise.decay_factor},
            {"decay_every", c.noise.decay_every}}}};
}

DdpgConfig ddpg_config_from_json(const nlohmann::json& j) {
  DdpgConfig c;
  c.actor_hidden = j.at("actor_hidden").get<std::vector<int>>();
  c.critic_hidden = j.at("critic_hidden").get<std::vector<int>>();
  c.critic_output = nn::activation_from_name(j.at("critic_output").get<std::string>());
  c.final_layer_init = j.at("final_layer_init").get<double>();
  c.actor_lr = j.at("actor_lr").get<double>();
  c.critic_lr = j.at("critic_lr").get<double>();
  c.critic_weight_decay = j.at("critic_weight_decay").get<double>();
  c.actor_preactivation_penalty = j.at("actor_preactivation_penalty").get<double>();
  c.tau = j.at("tau").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.replay_capacity = j.at("replay_capacity").get<std::size_t>();
  c.warmup = j.at("warmup").get<std::size_t>();
  c.reward_scale = j.at("reward_scale").get<double>();
  const auto& n = j.at("noise");
  c.noise.base_sigma = n.at("base_sigma").get<double>();
  c.noise.decay_factor = n.at("decay_factor").get<double>();
  c.noise.decay_every = n.at("decay_every").get<int>();
  c.validate();
  return c;
}

std::vector<double> greedy_action(const nn::Network& actor, std::span<const double> obs) {
  return actor.forward(obs);
}

std::vector<double> select_action(const nn::Network& actor, std::span<const double> obs,
                                  double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be >= 0");
  std::vector<double> a = actor.forward(obs);
  if (sigma == 0.0) return a;
  for (double& v : a) v = std::clamp(v + sigma * rng.normal(), -1.0, 1.0);
  return a;
}

nn::Vector td_targets(const Batch& batch, const nn::Network& target_actor,
                      const nn::Network& target_critic, double gamma) {
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  const nn::Matrix a_next = target_actor.forward(batch.s_next);
  const nn::Matrix q_next = target_critic.forward(batch.s_next, &a_next);
  nn::Vector y = batch.r;
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    if (batch.terminal(j) == 0.0) y(j) += gamma * q_next(0, j);
  }
  return y;
}

Agent::Agent(int obs_dim, int act_dim, DdpgConfig config, std::uint64_t seed)
    : config_(std::move(config)) {
  config_.validate();
  const auto actor_spec = nn::NetworkSpec::actor(obs_dim, config_.actor_hidden, act_dim);
  const auto critic_spec =
      nn::NetworkSpec::critic(obs_dim, config_.critic_hidden, act_dim, config_.critic_output);
  // Distinct seeds per network; Rng streams inside init are per layer.
  actor_ = nn::Network::initialized(actor_spec, seed * 2 + 0x5eed0001ULL, config_.final_layer_init);
  critic_ =
      nn::Network::initialized(critic_spec, seed * 2 + 0x5eed1002ULL, config_.final_layer_init);
  target_actor_ = actor_;
  target_critic_ = critic_;
  actor_opt_ = nn::Adam(actor_.params(), {config_.actor_lr});
  critic_opt_ = nn::Adam(critic_.params(),
                         {config_.critic_lr, 0.9, 0.999, 1e-8, config_.critic_weight_decay});
  actor_grad_ = nn::ParameterSet::zeros_like(actor_spec);
  critic_grad_ = nn::ParameterSet::zeros_like(critic_spec);
}

TrainStats Agent::train_step(const ReplayBuffer& buffer, Rng& rng) {
  const std::size_t needed = std::max<std::size_t>(config_.warmup, config_.batch_size);
  if (buffer.size() < needed) return {};
  return train_on_batch(buffer.sample(config_.batch_size, rng));
}

TrainStats Agent::train_on_batch(const Batch& batch) {
  const double n = static_cast<double>(batch.size());
  TrainStats stats;
  stats.updated = true;

  // Critic: minimise mean (Q(s,a) - y)^2.
  const nn::Vector y = td_targets(batch, target_actor_, target_critic_, config_.gamma);
  nn::Tape critic_tape;
  const nn::Matrix q = critic_.forward(batch.s, &batch.a, critic_tape);
  const nn::Matrix err = q - y.transpose();
  stats.critic_loss = err.squaredNorm() / n;
  critic_grad_.set_zero();
  critic_.backward(critic_tape, (2.0 / n) * err, &critic_grad_);
  critic_opt_.step(critic_.params(), critic_grad_);

  // Actor: ascend mean Q(s, mu(s)) through the critic's action input.
  nn::Tape actor_tape;
  const nn::Matrix mu = actor_.forward(batch.s, nullptr, actor_tape);
  const nn::Matrix q_mu = critic_.forward(batch.s, &mu, critic_tape);
  stats.mean_q = q_mu.mean();
  nn::Matrix d_action;
  critic_.backward(critic_tape, nn::Matrix::Constant(1, q_mu.cols(), -1.0 / n), nullptr, nullptr,
                   &d_action);
  actor_grad_.set_zero();
  if (config_.actor_preactivation_penalty > 0.0) {
    const nn::Matrix d_pre = (2.0 * config_.actor_preactivation_penalty / n) * actor_tape.pre_output;
    actor_.backward(actor_tape, d_action, &actor_grad_, nullptr, nullptr, &d_pre);
  } else {
    actor_.backward(actor_tape, d_action, &actor_grad_);
  }
  actor_opt_.step(actor_.params(), actor_grad_);

  nn::soft_update(target_actor_.params(), actor_.params(), config_.tau);
  nn::soft_update(target_critic_.params(), critic_.params(), config_.tau);
  return stats;
}

nn::PolicyCheckpoint Agent::to_checkpoint(const env::NormalizationSpec& norm,
                                          std::uint64_t config_hash, std::int64_t episode) const {
  nn::PolicyCheckpoint c;
  c.networks = {{"actor", actor_},
                {"critic", critic_},
                {"target_actor", target_actor_},
                {"target_critic", target_critic_}};
  c.normalization = norm;
  c.config_hash = config_hash;
  c.episode = episode;
  return c;
}

void Agent::load_networks(const nn::PolicyCheckpoint& ckpt) {
  auto take = [&](const char* name, nn::Network& dst) {
    const nn::Network& src = ckpt.network(name);
    if (!(src.spec() == dst.spec())) {
      throw std::runtime_error(std::string("checkpoint network '") + name +
                               "' does not match the configured architecture");
    }
    dst = src;
  };
  take("actor", actor_);
  take("critic", critic_);
  take("target_actor", target_actor_);
  take("target_critic", target_critic_);
  actor_opt_ = nn::Adam(actor_.params(), actor_opt_.config());
  critic_opt_ = nn::Adam(critic_.params(), critic_opt_.config());
}

}  // namespace sepsis::ddpg
