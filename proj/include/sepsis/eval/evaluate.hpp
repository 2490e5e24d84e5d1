#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sepsis/abm/params.hpp"
#include "sepsis/abm/rng.hpp"
#include "sepsis/env/normalization.hpp"
#include "sepsis/env/sepsis_env.hpp"
#include "sepsis/nn/network.hpp"

namespace sepsis::eval {

// Mortality interval. The upper end is always open.
struct Bin {
  double lo = 0.0;
  double hi = 1.0;
  bool lo_inclusive = true;
  bool contains(double m) const { return (lo_inclusive ? m >= lo : m > lo) && m < hi; }
};
std::vector<Bin> default_bins();  // (1%,20%), [20%,40%), ..., [80%,99%)
// Index of the bin holding m, or -1.
int bin_index(const std::vector<Bin>& bins, double m);

struct EvalConfig {
  int episodes_per_param = 50;
  double strict_threshold_pct = 0.02;
  int max_steps = 1000;
  int burn_in = 26;
  int confirm_window = 26;
  int post_frames = 26;  // action-free frames run before the outcome is read
  std::vector<Bin> bins = default_bins();
  int per_bin_count = 100;
  int sampling_budget = 5000;  // candidate parameterizations tried at most
  std::uint64_t base_seed = 1;
  int threads = 1;

  void validate() const;
  env::EpisodeConfig episode_config() const;
};
nlohmann::json to_json(const EvalConfig& c);
EvalConfig eval_config_from_json(const nlohmann::json& j);

struct Parameterization {
  std::string id;
  abm::PatientParams patient;
  int grid_side = abm::kDefaultGridSide;
};
nlohmann::json to_json(const Parameterization& p);
Parameterization parameterization_from_json(const nlohmann::json& j);

// Rule constants and frame length shared by every rollout.
struct SimContext {
  abm::RuleConstants constants;
  double frame_minutes = 28.0;
  abm::SimulationParams params_for(const Parameterization& p) const;
};

// Maps a normalized observation to an action.
using Policy = std::function<std::vector<double>(std::span<const double>)>;
Policy zero_policy(int action_size = env::kActionSize);
Policy actor_policy(const nn::Network& actor);

enum class EvalOutcome { kDeath, kHealed, kUnresolved };
const char* eval_outcome_name(EvalOutcome o);

struct RolloutResult {
  EvalOutcome outcome = EvalOutcome::kUnresolved;
  env::Outcome episode_outcome = env::Outcome::kOngoing;
  int policy_steps = 0;  // steps taken through the environment
  std::int64_t frames = 0;  // total frames including burn-in and the post window
  double final_damage_pct = 0.0;
  double final_infection_pct = 0.0;
  std::vector<std::array<double, env::kActionSize>> actions;  // when recorded
  bool died() const { return outcome == EvalOutcome::kDeath; }
};

// Greedy rollout under the strict threshold. After health, timeout or the
// step cap the simulation runs post_frames more frames with no intervention;
// a death at any point is a death, otherwise the patient survived (healed if
// below the strict threshold at the end).
RolloutResult rollout_policy(const abm::SimulationParams& params, std::uint64_t seed,
                             const Policy& policy, const env::NormalizationSpec& norm,
                             const EvalConfig& config, bool record_actions = false);

// Seeds episode_seed(base_seed, i), i < n, shared by every arm.
std::vector<std::uint64_t> eval_seeds(const EvalConfig& config, int n);

std::vector<RolloutResult> rollout_many(const abm::SimulationParams& params,
                                        std::span<const std::uint64_t> seeds,
                                        const Policy& policy, const env::NormalizationSpec& norm,
                                        const EvalConfig& config);

double mortality_rate(std::span<const RolloutResult> results);
double mortality_rate(const abm::SimulationParams& params, const Policy& policy,
                      const env::NormalizationSpec& norm, const EvalConfig& config, int n);

struct Performance {
  double value = 0.0;
  bool both_zero = false;
};
// (baseline - post) / max(baseline, post); (0, 0) gives 0 with the flag set.
Performance performance(double baseline, double post);

// Trailing moving average; the first window-1 entries average what exists.
std::vector<double> moving_average(std::span<const double> series, int window);

// Uniform box over patient parameters.
struct ParameterSpace {
  int grid_side = abm::kDefaultGridSide;
  std::array<int, 2> injury{1, 40};
  std::array<double, 2> invasiveness{1.0, 6.0};
  std::array<double, 2> toxigenesis{1.0, 10.0};
  std::array<double, 2> environmental_toxicity{0.0, 10.0};
  std::array<double, 2> resilience{0.1, 1.0};
};
nlohmann::json to_json(const ParameterSpace& s);
ParameterSpace parameter_space_from_json(const nlohmann::json& j);
Parameterization draw_parameterization(const ParameterSpace& space, Rng& rng, int index);

struct SampledParameterization {
  Parameterization param;
  double baseline_mortality = 0.0;
  int bin = -1;
};
struct SamplingResult {
  std::vector<SampledParameterization> accepted;  // ordered by bin, then draw
  int candidates_tried = 0;
  bool complete = false;  // every bin filled within the budget
  std::vector<int> bin_counts;
};
// Rejection sampling: draws candidates, measures zero-policy mortality over
// episodes_per_param seeds, keeps those landing in a bin that still has room.
SamplingResult sample_parameterizations(const EvalConfig& config, const ParameterSpace& space,
                                        const SimContext& ctx, Rng& rng);

}  // namespace sepsis::eval
