#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sepsis/eval/evaluate.hpp"

namespace sepsis::eval {

enum class Arm { kBaseline, kPolicy };
const char* arm_name(Arm a);

struct EpisodeRow {
  std::string param_id;
  Arm arm = Arm::kBaseline;
  std::uint64_t seed = 0;
  EvalOutcome outcome = EvalOutcome::kUnresolved;
  int policy_steps = 0;
  std::int64_t frames = 0;
  double final_damage_pct = 0.0;
};

struct ParamSummary {
  Parameterization param;
  int episodes = 0;
  int baseline_deaths = 0;
  int policy_deaths = 0;
  double baseline_mortality = 0.0;
  double post_mortality = 0.0;
  Performance performance;
};

struct Aggregate {
  int parameterizations = 0;
  int episodes_per_arm = 0;
  int baseline_deaths = 0;
  int policy_deaths = 0;
  double baseline_mortality = 0.0;  // episode-weighted
  double post_mortality = 0.0;
  double baseline_mortality_param_mean = 0.0;  // averaged over parameterizations
  double post_mortality_param_mean = 0.0;
  int both_zero = 0;  // parameterizations with performance(0, 0)
};

struct MortalityReport {
  std::vector<EpisodeRow> episodes;
  std::vector<ParamSummary> summaries;
  Aggregate aggregate;
};

// Adds one parameterization's paired baseline and policy rollouts.
void add_parameterization(MortalityReport& report, const Parameterization& param,
                          std::span<const std::uint64_t> seeds,
                          std::span<const RolloutResult> baseline,
                          std::span<const RolloutResult> policy);
// Recomputes the aggregate from the summaries.
Aggregate aggregate_of(const std::vector<ParamSummary>& summaries);
// Recount straight from per-episode rows; must equal the stored aggregate.
Aggregate recount(const std::vector<EpisodeRow>& rows);

// Runs both arms for every parameterization on shared seeds.
MortalityReport evaluate_policy(const std::vector<Parameterization>& params, const SimContext& ctx,
                                const Policy& policy, const env::NormalizationSpec& norm,
                                const EvalConfig& config);

void write_episodes_csv(std::ostream& os, const std::vector<EpisodeRow>& rows);
void write_summary_csv(std::ostream& os, const std::vector<ParamSummary>& rows);
void write_aggregate_csv(std::ostream& os, const Aggregate& a);
// Mortality histograms for both arms (bins of width 1/bins over [0,1]) and
// the performance values sorted ascending.
void write_histogram_csv(std::ostream& os, const std::vector<ParamSummary>& rows, int bins = 10);
void write_performance_csv(std::ostream& os, const std::vector<ParamSummary>& rows);

// Writes episodes.csv, summary.csv, aggregate.csv, histogram.csv and
// performance.csv into dir, each starting with "# <comment>" when given.
void write_report(const MortalityReport& report, const std::string& dir,
                  const std::string& comment);

// Raw and window-smoothed applied actions of one rollout.
struct ActionTrace {
  std::vector<std::array<double, env::kActionSize>> raw;
  std::vector<std::array<double, env::kActionSize>> smoothed;
  RolloutResult rollout;
};
ActionTrace action_trace(const abm::SimulationParams& params, std::uint64_t seed,
                         const Policy& policy, const env::NormalizationSpec& norm,
                         const EvalConfig& config, int smoothing_window = 20);
void smooth_actions(ActionTrace& trace, int smoothing_window);
void write_action_trace_csv(std::ostream& os, const ActionTrace& trace);

}  // namespace sepsis::eval
