#include "sepsis/ddpg/trainer.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "sepsis/log.hpp"

namespace sepsis::ddpg {
namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f697365000000ULL;
constexpr std::uint64_t kReplaySalt = 0x7265706c61790000ULL;

std::string checkpoint_path(const std::string& dir, const std::string& stem) {
  return (std::filesystem::path(dir) / (stem + ".sepc")).string();
}

}  // namespace

void TrainingConfig::validate() const {
  ddpg.validate();
  if (max_episodes < 0) throw std::invalid_argument("max_episodes must be >= 0");
  if (streak_checkpoint_interval < 1) {
    throw std::invalid_argument("streak_checkpoint_interval must be >= 1");
  }
  if (snapshot_every < 0) throw std::invalid_argument("snapshot_every must be >= 0");
}

void TrainingLog::append(EpisodeRecord r) {
  records_.push_back(r);
  const std::size_t n = records_.size();
  const std::size_t begin = n > kWindow ? n - kWindow : 0;
  double ret = 0, health = 0, death = 0, timeout = 0, length = 0;
  for (std::size_t i = begin; i < n; ++i) {
    const EpisodeRecord& e = records_[i];
    ret += e.episode_return;
    health += e.outcome == env::Outcome::kHealth;
    death += e.outcome == env::Outcome::kDeath;
    timeout += e.outcome == env::Outcome::kTimeout;
    length += e.length;
  }
  const double w = static_cast<double>(n - begin);
  EpisodeRecord& last = records_.back();
  last.ma_return = ret / w;
  last.ma_health = health / w;
  last.ma_death = death / w;
  last.ma_timeout = timeout / w;
  last.ma_length = length / w;
}

std::string TrainingLog::csv_header() {
  return "episode,return,outcome,length,sigma,wall_ms,heal_streak,ma_return,ma_health,ma_death,"
         "ma_timeout,ma_length";
}

void TrainingLog::write_csv(std::ostream& os, bool include_wall_time) const {
  os << csv_header() << '\n' << std::setprecision(17);
  for (const EpisodeRecord& r : records_) {
    os << r.episode << ',' << r.episode_return << ',' << env::outcome_name(r.outcome) << ','
       << r.length << ',' << r.sigma << ',' << (include_wall_time ? r.wall_ms : 0.0) << ','
       << r.heal_streak << ',' << r.ma_return << ',' << r.ma_health << ',' << r.ma_death << ','
       << r.ma_timeout << ',' << r.ma_length << '\n';
  }
}

void TrainingLog::write_csv(const std::string& path, const std::string& comment,
                            bool include_wall_time) const {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  if (!comment.empty()) os << "# " << comment << '\n';
  write_csv(os, include_wall_time);
}

bool TrainingLog::same_trajectory(const TrainingLog& other) const {
  if (records_.size() != other.records_.size()) return false;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const EpisodeRecord& a = records_[i];
    const EpisodeRecord& b = other.records_[i];
    if (a.episode != b.episode || a.episode_return != b.episode_return ||
        a.outcome != b.outcome || a.length != b.length || a.sigma != b.sigma ||
        a.heal_streak != b.heal_streak || a.ma_return != b.ma_return ||
        a.ma_health != b.ma_health || a.ma_death != b.ma_death ||
        a.ma_timeout != b.ma_timeout || a.ma_length != b.ma_length) {
      return false;
    }
  }
  return true;
}

TrainingResult run_training(env::Environment& env, const TrainingConfig& config,
                            const nn::PolicyCheckpoint* resume,
                            const EpisodeCallback& on_episode) {
  config.validate();
  const int obs_dim = env.observation_size();
  const int act_dim = env.action_size();
  const env::NormalizationSpec norm =
      config.normalization.value_or(env::NormalizationSpec::identity(obs_dim));

  TrainingResult result{{}, {}, Agent(obs_dim, act_dim, config.ddpg, config.base_seed), 0};
  Agent& agent = result.agent;
  if (resume) {
    agent.load_networks(*resume);
    result.first_episode = static_cast<int>(resume->episode) + 1;
    log_info("resuming training at episode " + std::to_string(result.first_episode));
  }
  const bool write_files = !config.checkpoint_dir.empty();
  if (write_files) std::filesystem::create_directories(config.checkpoint_dir);

  auto save = [&](const std::string& stem, int episode) {
    if (!write_files) return;
    const std::string path = checkpoint_path(config.checkpoint_dir, stem);
    nn::save_checkpoint(agent.to_checkpoint(norm, config.config_hash, episode), path);
    result.checkpoints.push_back(path);
  };

  ReplayBuffer buffer(config.ddpg.replay_capacity, obs_dim, act_dim);
  int streak = 0;
  for (int e = result.first_episode; e < config.max_episodes; ++e) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng noise_rng(config.base_seed ^ kNoiseSalt, static_cast<std::uint64_t>(e));
    Rng replay_rng(config.base_seed ^ kReplaySalt, static_cast<std::uint64_t>(e));
    const double sigma = noise_sigma(e, config.ddpg.noise);

    std::vector<double> obs = env.reset(episode_seed(config.base_seed, e));
    EpisodeRecord rec;
    rec.episode = e;
    rec.sigma = sigma;
    for (;;) {
      const std::vector<double> a = select_action(agent.actor(), obs, sigma, noise_rng);
      env::StepResult step = env.step(a);
      const bool terminal =
          step.outcome == env::Outcome::kHealth || step.outcome == env::Outcome::kDeath;
      buffer.add(obs, step.applied_action, config.ddpg.reward_scale * step.reward,
                 step.observation, terminal);
      agent.train_step(buffer, replay_rng);
      rec.episode_return += step.reward;
      ++rec.length;
      obs = std::move(step.observation);
      if (step.done) {
        rec.outcome = step.outcome;
        break;
      }
    }
    streak = rec.outcome == env::Outcome::kHealth ? streak + 1 : 0;
    rec.heal_streak = streak;
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    result.log.append(rec);
    if (streak > 0 && streak % config.streak_checkpoint_interval == 0) {
      char stem[64];
      std::snprintf(stem, sizeof stem, "streak_ep%05d_n%d", e, streak);
      save(stem, e);
    }
    if (config.snapshot_every > 0 && (e + 1) % config.snapshot_every == 0) save("latest", e);
    if (on_episode) on_episode(result.log.records().back());
  }
  if (config.max_episodes > result.first_episode) save("final", config.max_episodes - 1);
  return result;
}

}  // namespace sepsis::ddpg
