#include "sepsis/env/sepsis_env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "sepsis/log.hpp"

namespace sepsis::env {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kOngoing: return "ongoing";
    case Outcome::kHealth: return "health";
    case Outcome::kDeath: return "death";
    case Outcome::kTimeout: return "timeout";
  }
  return "?";
}

Outcome outcome_from_name(const std::string& name) {
  for (Outcome o : {Outcome::kOngoing, Outcome::kHealth, Outcome::kDeath, Outcome::kTimeout}) {
    if (name == outcome_name(o)) return o;
  }
  throw std::invalid_argument("unknown outcome '" + name + "'");
}

std::array<std::string, kObservationSize> observation_labels() {
  std::array<std::string, kObservationSize> out;
  const auto& labels = abm::default_cytokine_labels();
  for (int k = 0; k < abm::kNumCytokines; ++k) out[k] = labels[k];
  out[12] = "TNFr_total";
  out[13] = "IL1r_total";
  out[14] = "macrophages";
  out[15] = "neutrophils";
  out[16] = "Th0";
  out[17] = "Th1";
  out[18] = "Th2";
  out[kObsDamage] = "damage";
  out[kObsInfection] = "infection";
  return out;
}

void EpisodeConfig::validate() const {
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (!(health_threshold_pct > 0.0)) throw std::invalid_argument("health threshold must be > 0");
  if (confirm_window < 0) throw std::invalid_argument("confirm_window must be >= 0");
  if (frame_skip < 1) throw std::invalid_argument("frame_skip must be >= 1");
  if (max_burn_in_rerolls < 0) throw std::invalid_argument("max_burn_in_rerolls must be >= 0");
}

nlohmann::json to_json(const RewardSpec& r) {
  return {{"terminal_health", r.terminal_health},
          {"terminal_death", r.terminal_death},
          {"beta", r.beta},
          {"action_penalty_lambda", r.action_penalty_lambda},
          {"gamma_shaping", r.gamma_shaping}};
}

RewardSpec reward_spec_from_json(const nlohmann::json& j) {
  RewardSpec r;
  r.terminal_health = j.at("terminal_health").get<double>();
  r.terminal_death = j.at("terminal_death").get<double>();
  r.beta = j.at("beta").get<double>();
  r.action_penalty_lambda = j.at("action_penalty_lambda").get<double>();
  r.gamma_shaping = j.at("gamma_shaping").get<double>();
  return r;
}

nlohmann::json to_json(const EpisodeConfig& c) {
  return {{"burn_in", c.burn_in},
          {"max_steps", c.max_steps},
          {"health_threshold_pct", c.health_threshold_pct},
          {"confirm_window", c.confirm_window},
          {"frame_skip", c.frame_skip},
          {"max_burn_in_rerolls", c.max_burn_in_rerolls}};
}

EpisodeConfig episode_config_from_json(const nlohmann::json& j) {
  EpisodeConfig c;
  c.burn_in = j.at("burn_in").get<int>();
  c.max_steps = j.at("max_steps").get<int>();
  c.health_threshold_pct = j.at("health_threshold_pct").get<double>();
  c.confirm_window = j.at("confirm_window").get<int>();
  c.frame_skip = j.at("frame_skip").get<int>();
  c.max_burn_in_rerolls = j.at("max_burn_in_rerolls").get<int>();
  c.validate();
  return c;
}

RawObservation observe(const abm::SimState& state) {
  RawObservation out{};
  for (int k = 0; k < abm::kNumCytokines; ++k) out[k] = state.cytokines[k].sum();
  const auto receptors = abm::receptor_totals(state);
  for (int k = 0; k < abm::kNumReceptors; ++k) out[kObsReceptorBegin + k] = receptors[k];
  const auto counts = abm::leukocyte_counts(state);
  for (int k = 0; k < 5; ++k) out[kObsCountBegin + k] = counts[k];
  out[kObsDamage] = state.damage.sum();
  out[kObsInfection] = state.infection.sum();
  return out;
}

double potential(const abm::SystemTotals& totals) { return -totals.total_damage_pct / 100.0; }

double shaping_term(const abm::SystemTotals& prev, const abm::SystemTotals& next,
                    const RewardSpec& spec) {
  return spec.beta * (spec.gamma_shaping * potential(next) - potential(prev));
}

double action_penalty(std::span<const double> action, const RewardSpec& spec) {
  double l1 = 0.0;
  for (double a : action) l1 += std::abs(a);
  return spec.action_penalty_lambda * l1;
}

double reward(const abm::SystemTotals& prev, std::span<const double> action,
              const abm::SystemTotals& next, Outcome outcome, const RewardSpec& spec) {
  if (outcome == Outcome::kDeath) return spec.terminal_death;
  if (outcome == Outcome::kHealth) return spec.terminal_health;
  return shaping_term(prev, next, spec) - action_penalty(action, spec);
}

bool below_health_threshold(const abm::SystemTotals& totals, const EpisodeConfig& config) {
  return totals.total_damage_pct + totals.total_infection_pct < config.health_threshold_pct;
}

bool check_health(const abm::SystemTotals& totals, int intervention_free_frames,
                  const EpisodeConfig& config) {
  return below_health_threshold(totals, config) &&
         intervention_free_frames >= config.confirm_window;
}

SepsisEnv::SepsisEnv(abm::SimulationParams params, EpisodeConfig config, RewardSpec reward,
                     NormalizationSpec normalization)
    : params_(std::move(params)),
      config_(config),
      reward_(reward),
      normalization_(std::move(normalization)) {
  params_.validate();
  config_.validate();
  normalization_.validate();
  if (normalization_.size() != static_cast<std::size_t>(kObservationSize)) {
    throw std::invalid_argument("normalization spec must have 21 dimensions");
  }
}

std::vector<double> SepsisEnv::observation() const {
  const RawObservation raw = observe(*state_);
  return normalize(raw, normalization_);
}

std::vector<double> SepsisEnv::reset(std::uint64_t seed) {
  const abm::ActionVector zero = abm::ActionVector::zeros();
  for (int attempt = 0;; ++attempt) {
    abm::SimState s = abm::init_simulation(params_, seed, static_cast<std::uint64_t>(attempt));
    abm::SystemTotals t = abm::system_totals(s);
    bool died = false;
    for (int f = 0; f < config_.burn_in; ++f) {
      t = abm::step_frame(s, zero);
      if (abm::check_outcome(t, s.frame_count) == abm::FrameOutcome::kDeath) {
        died = true;
        break;
      }
    }
    if (!died) {
      rerolls_ = attempt;
      state_ = std::move(s);
      totals_ = t;
      steps_ = 0;
      zero_streak_ = config_.burn_in;
      outcome_ = Outcome::kOngoing;
      return observation();
    }
    log_warning("seed " + std::to_string(seed) + " stream " + std::to_string(attempt) +
                ": death during burn-in at frame " + std::to_string(s.frame_count) +
                ", re-rolling");
    if (attempt >= config_.max_burn_in_rerolls) {
      throw std::runtime_error("seed " + std::to_string(seed) +
                               ": every burn-in attempt ended in death");
    }
  }
}

std::vector<double> SepsisEnv::reset_from_state(abm::SimState state, int intervention_free_frames) {
  totals_ = abm::system_totals(state);
  state_ = std::move(state);
  steps_ = 0;
  rerolls_ = 0;
  zero_streak_ = std::max(0, intervention_free_frames);
  outcome_ = Outcome::kOngoing;
  return observation();
}

bool SepsisEnv::forcing_zero_actions() const {
  return state_ && below_health_threshold(totals_, config_) &&
         zero_streak_ < config_.confirm_window;
}

StepResult SepsisEnv::step(std::span<const double> action) {
  if (!state_) throw std::logic_error("step called before reset");
  if (done()) throw std::logic_error("step called on a finished episode");
  if (action.size() != static_cast<std::size_t>(kActionSize)) {
    throw std::invalid_argument("action must have 12 components");
  }

  abm::ActionVector applied;
  if (!forcing_zero_actions()) {
    for (int k = 0; k < kActionSize; ++k) {
      // NaN maps to 0 rather than poisoning the simulation.
      const double a = std::isnan(action[k]) ? 0.0 : action[k];
      applied.values[k] = std::clamp(a, -1.0, 1.0);
    }
  }

  const abm::SystemTotals prev = totals_;
  Outcome outcome = Outcome::kOngoing;
  for (int f = 0; f < config_.frame_skip; ++f) {
    totals_ = abm::step_frame(*state_, applied);
    if (abm::check_outcome(totals_, state_->frame_count) == abm::FrameOutcome::kDeath) {
      outcome = Outcome::kDeath;
      break;
    }
  }
  ++steps_;
  zero_streak_ = applied.is_zero() ? zero_streak_ + config_.frame_skip : 0;

  if (outcome == Outcome::kOngoing && check_health(totals_, zero_streak_, config_)) {
    outcome = Outcome::kHealth;
  }
  if (outcome == Outcome::kOngoing && steps_ >= config_.max_steps) outcome = Outcome::kTimeout;
  outcome_ = outcome;

  StepResult r;
  r.observation = observation();
  r.applied_action.assign(applied.values.begin(), applied.values.end());
  r.shaping = shaping_term(prev, totals_, reward_);
  r.penalty = action_penalty(r.applied_action, reward_);
  r.reward = reward(prev, r.applied_action, totals_, outcome, reward_);
  r.outcome = outcome;
  r.done = outcome != Outcome::kOngoing;
  return r;
}

NormalizationSpec calibrate_normalization(const abm::SimulationParams& params,
                                          const EpisodeConfig& config, int n_episodes,
                                          std::uint64_t base_seed, const std::string& provenance) {
  if (n_episodes < 1) throw std::invalid_argument("calibration needs >= 1 episode");
  SepsisEnv environment(params, config);
  RangeTracker tracker(kObservationSize);
  const std::vector<double> zero(kActionSize, 0.0);
  for (int e = 0; e < n_episodes; ++e) {
    environment.reset(episode_seed(base_seed, static_cast<std::uint64_t>(e)));
    tracker.observe(environment.raw_observation());
    while (!environment.done()) {
      environment.step(zero);
      tracker.observe(environment.raw_observation());
    }
  }
  std::vector<std::size_t> degenerate;
  NormalizationSpec spec = tracker.finish(&degenerate);
  const auto labels = observation_labels();
  for (std::size_t k : degenerate) {
    log_warning("normalization: '" + labels[k] + "' is constant over calibration; scale set to 1");
  }
  spec.provenance = provenance;
  spec.episodes = n_episodes;
  return spec;
}

}  // namespace sepsis::env
