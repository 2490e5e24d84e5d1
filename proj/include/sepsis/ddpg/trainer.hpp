#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sepsis/ddpg/agent.hpp"
#include "sepsis/env/environment.hpp"
#include "sepsis/env/normalization.hpp"

namespace sepsis::ddpg {

struct TrainingConfig {
  DdpgConfig ddpg;
  int max_episodes = 3500;
  std::uint64_t base_seed = 1;
  int streak_checkpoint_interval = 20;
  int snapshot_every = 0;  // periodic "latest" checkpoint; 0 disables
  std::string checkpoint_dir;  // no files written when empty
  std::uint64_t config_hash = 0;
  // Stored in checkpoints so a policy carries its input transform.
  std::optional<env::NormalizationSpec> normalization;

  void validate() const;
};

struct EpisodeRecord {
  int episode = 0;
  double episode_return = 0.0;
  env::Outcome outcome = env::Outcome::kOngoing;
  int length = 0;
  double sigma = 0.0;
  double wall_ms = 0.0;
  int heal_streak = 0;
  // Trailing averages over the last (up to) 100 records.
  double ma_return = 0.0;
  double ma_health = 0.0;
  double ma_death = 0.0;
  double ma_timeout = 0.0;
  double ma_length = 0.0;
};

class TrainingLog {
 public:
  static constexpr int kWindow = 100;

  void append(EpisodeRecord r);  // fills the moving averages
  const std::vector<EpisodeRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  static std::string csv_header();
  // wall_ms is the only column that varies between identical runs.
  void write_csv(std::ostream& os, bool include_wall_time = true) const;
  void write_csv(const std::string& path, const std::string& comment,
                 bool include_wall_time = true) const;
  // Equality on every column except wall_ms.
  bool same_trajectory(const TrainingLog& other) const;

 private:
  std::vector<EpisodeRecord> records_;
};

struct TrainingResult {
  TrainingLog log;
  std::vector<std::string> checkpoints;
  Agent agent;
  int first_episode = 0;
};

using EpisodeCallback = std::function<void(const EpisodeRecord&)>;

// One gradient step per environment step. Episode e uses seed
// episode_seed(base_seed, e) and noise sigma(e). Resuming from a checkpoint
// restores the networks and continues at checkpoint.episode + 1 with an
// empty replay buffer.
TrainingResult run_training(env::Environment& env, const TrainingConfig& config,
                            const nn::PolicyCheckpoint* resume = nullptr,
                            const EpisodeCallback& on_episode = {});

}  // namespace sepsis::ddpg
