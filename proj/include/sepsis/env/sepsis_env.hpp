#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "sepsis/abm/simulation.hpp"
#include "sepsis/env/environment.hpp"
#include "sepsis/env/normalization.hpp"

namespace sepsis::env {

inline constexpr int kObservationSize = 21;
inline constexpr int kActionSize = abm::kNumCytokines;
using RawObservation = std::array<double, kObservationSize>;

// Observation layout: 12 cytokines, 2 receptor totals, macrophage,
// neutrophil, Th0, Th1, Th2 counts, damage sum, infection sum.
inline constexpr int kObsReceptorBegin = 12;
inline constexpr int kObsCountBegin = 14;
inline constexpr int kObsDamage = 19;
inline constexpr int kObsInfection = 20;
std::array<std::string, kObservationSize> observation_labels();

struct RewardSpec {
  double terminal_health = 250.0;
  double terminal_death = -250.0;
  double beta = 100.0;
  double action_penalty_lambda = 1.0;
  double gamma_shaping = 1.0;
};

struct EpisodeConfig {
  int burn_in = 26;  // frames (12 h at 28 min/frame)
  int max_steps = 1000;
  double health_threshold_pct = 0.8;
  int confirm_window = 26;  // intervention-free frames required for health
  int frame_skip = 1;
  int max_burn_in_rerolls = 64;

  void validate() const;
};

nlohmann::json to_json(const RewardSpec& r);
RewardSpec reward_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EpisodeConfig& c);
EpisodeConfig episode_config_from_json(const nlohmann::json& j);

// Grid sums of every observed quantity.
RawObservation observe(const abm::SimState& state);

// phi(s) = -damage fraction.
double potential(const abm::SystemTotals& totals);
double shaping_term(const abm::SystemTotals& prev, const abm::SystemTotals& next,
                    const RewardSpec& spec);
double action_penalty(std::span<const double> action, const RewardSpec& spec);
double reward(const abm::SystemTotals& prev, std::span<const double> action,
              const abm::SystemTotals& next, Outcome outcome, const RewardSpec& spec);

bool below_health_threshold(const abm::SystemTotals& totals, const EpisodeConfig& config);
// `intervention_free_frames` counts the most recent consecutive frames run
// with an all-zero intervention.
bool check_health(const abm::SystemTotals& totals, int intervention_free_frames,
                  const EpisodeConfig& config);

class SepsisEnv final : public Environment {
 public:
  SepsisEnv(abm::SimulationParams params, EpisodeConfig config, RewardSpec reward = {},
            NormalizationSpec normalization = NormalizationSpec::identity(kObservationSize));

  int observation_size() const override { return kObservationSize; }
  int action_size() const override { return kActionSize; }

  // Runs burn_in zero-action frames. A death during burn-in re-rolls the
  // episode on the next stream of the same seed and is logged.
  std::vector<double> reset(std::uint64_t seed) override;
  StepResult step(std::span<const double> action) override;

  // Starts an episode from an explicit state, skipping burn-in.
  std::vector<double> reset_from_state(abm::SimState state, int intervention_free_frames);

  const abm::SimState& state() const { return *state_; }
  const abm::SystemTotals& totals() const { return totals_; }
  RawObservation raw_observation() const { return observe(*state_); }
  std::vector<double> observation() const;

  const EpisodeConfig& config() const { return config_; }
  const RewardSpec& reward_spec() const { return reward_; }
  const NormalizationSpec& normalization() const { return normalization_; }
  const abm::SimulationParams& params() const { return params_; }

  int steps() const { return steps_; }
  bool done() const { return outcome_ != Outcome::kOngoing; }
  Outcome outcome() const { return outcome_; }
  int intervention_free_frames() const { return zero_streak_; }
  // Burn-in re-rolls taken by the most recent reset.
  int burn_in_rerolls() const { return rerolls_; }
  // True while the health threshold holds but the confirmation window has
  // not elapsed; actions are replaced by zeros in this state.
  bool forcing_zero_actions() const;

 private:
  abm::SimulationParams params_;
  EpisodeConfig config_;
  RewardSpec reward_;
  NormalizationSpec normalization_;
  std::optional<abm::SimState> state_;
  abm::SystemTotals totals_;
  int steps_ = 0;
  int zero_streak_ = 0;
  int rerolls_ = 0;
  Outcome outcome_ = Outcome::kOngoing;
};

// Normalization from the per-dimension range of raw observations over every
// post-reset frame of n zero-intervention episodes (seeds base_seed + i).
// Constant dimensions get scale 1 and a logged warning.
NormalizationSpec calibrate_normalization(const abm::SimulationParams& params,
                                          const EpisodeConfig& config, int n_episodes,
                                          std::uint64_t base_seed, const std::string& provenance);

}  // namespace sepsis::env
