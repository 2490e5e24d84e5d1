#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sepsis/ddpg/trainer.hpp"
#include "sepsis/env/sepsis_env.hpp"
#include "sepsis/eval/evaluate.hpp"

namespace sepsis::harness {

std::uint64_t fnv1a64(std::string_view bytes);
std::string hash_hex(std::uint64_t h);

// Fully resolved run configuration. The hash is FNV-1a over the canonical
// (sorted-key, compact) dump of `resolved`.
struct RunConfig {
  nlohmann::json resolved;
  std::uint64_t hash = 0;
  std::filesystem::path base_dir;  // relative paths in the file resolve here

  std::string hash_string() const { return hash_hex(hash); }
  // paths.<key>, resolved against base_dir.
  std::filesystem::path path(const std::string& key) const;
  std::uint64_t base_seed() const;
  double frame_minutes() const;
  env::EpisodeConfig training_episode() const;
  env::RewardSpec reward() const;
  ddpg::TrainingConfig training() const;
  eval::EvalConfig evaluation() const;
  eval::ParameterSpace sampling_space() const;
};

// Applies "a.b.c=value". The value is parsed as JSON when possible and kept
// as a string otherwise. The key must already exist, so typos fail loudly.
void apply_override(nlohmann::json& j, const std::string& assignment);

RunConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides);
RunConfig resolve_config(nlohmann::json file, std::filesystem::path base_dir,
                         const std::vector<std::string>& overrides);

// Resolved config plus its hash, pretty-printed.
void write_config_snapshot(const RunConfig& config, const std::filesystem::path& file);

struct Calibration {
  std::string version;
  std::vector<eval::Parameterization> parameterizations;
  const eval::Parameterization& find(const std::string& id) const;
};
Calibration load_calibration(const std::filesystem::path& path);

}  // namespace sepsis::harness
