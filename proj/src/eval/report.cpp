#include "sepsis/eval/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sepsis::eval {

const char* arm_name(Arm a) { return a == Arm::kBaseline ? "baseline" : "policy"; }

void add_parameterization(MortalityReport& report, const Parameterization& param,
                          std::span<const std::uint64_t> seeds,
                          std::span<const RolloutResult> baseline,
                          std::span<const RolloutResult> policy) {
  if (baseline.size() != seeds.size() || policy.size() != seeds.size() || seeds.empty()) {
    throw std::invalid_argument("paired arms must cover the same non-empty seed set");
  }
  ParamSummary s;
  s.param = param;
  s.episodes = static_cast<int>(seeds.size());
  for (Arm arm : {Arm::kBaseline, Arm::kPolicy}) {
    const auto& results = arm == Arm::kBaseline ? baseline : policy;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const RolloutResult& r = results[i];
      report.episodes.push_back({param.id, arm, seeds[i], r.outcome, r.policy_steps, r.frames,
                                 r.final_damage_pct});
      (arm == Arm::kBaseline ? s.baseline_deaths : s.policy_deaths) += r.died();
    }
  }
  s.baseline_mortality = double(s.baseline_deaths) / s.episodes;
  s.post_mortality = double(s.policy_deaths) / s.episodes;
  s.performance = performance(s.baseline_mortality, s.post_mortality);
  report.summaries.push_back(std::move(s));
  report.aggregate = aggregate_of(report.summaries);
}

Aggregate aggregate_of(const std::vector<ParamSummary>& summaries) {
  Aggregate a;
  a.parameterizations = static_cast<int>(summaries.size());
  for (const auto& s : summaries) {
    a.episodes_per_arm += s.episodes;
    a.baseline_deaths += s.baseline_deaths;
    a.policy_deaths += s.policy_deaths;
    a.baseline_mortality_param_mean += s.baseline_mortality;
    a.post_mortality_param_mean += s.post_mortality;
    a.both_zero += s.performance.both_zero;
  }
  if (a.episodes_per_arm > 0) {
    a.baseline_mortality = double(a.baseline_deaths) / a.episodes_per_arm;
    a.post_mortality = double(a.policy_deaths) / a.episodes_per_arm;
  }
  if (a.parameterizations > 0) {
    a.baseline_mortality_param_mean /= a.parameterizations;
    a.post_mortality_param_mean /= a.parameterizations;
  }
  return a;
}

Aggregate recount(const std::vector<EpisodeRow>& rows) {
  // Rebuild per-parameterization summaries in first-seen order.
  std::vector<ParamSummary> summaries;
  for (const EpisodeRow& r : rows) {
    auto it = std::find_if(summaries.begin(), summaries.end(),
                           [&](const ParamSummary& s) { return s.param.id == r.param_id; });
    if (it == summaries.end()) {
      summaries.emplace_back();
      summaries.back().param.id = r.param_id;
      it = summaries.end() - 1;
    }
    const bool death = r.outcome == EvalOutcome::kDeath;
    if (r.arm == Arm::kBaseline) {
      ++it->episodes;
      it->baseline_deaths += death;
    } else {
      it->policy_deaths += death;
    }
  }
  for (auto& s : summaries) {
    s.baseline_mortality = double(s.baseline_deaths) / s.episodes;
    s.post_mortality = double(s.policy_deaths) / s.episodes;
    s.performance = performance(s.baseline_mortality, s.post_mortality);
  }
  return aggregate_of(summaries);
}

MortalityReport evaluate_policy(const std::vector<Parameterization>& params, const SimContext& ctx,
                                const Policy& policy, const env::NormalizationSpec& norm,
                                const EvalConfig& config) {
  config.validate();
  MortalityReport report;
  const auto seeds = eval_seeds(config, config.episodes_per_param);
  const Policy zero = zero_policy();
  for (const Parameterization& p : params) {
    const abm::SimulationParams sp = ctx.params_for(p);
    const auto base = rollout_many(sp, seeds, zero, norm, config);
    const auto post = rollout_many(sp, seeds, policy, norm, config);
    add_parameterization(report, p, seeds, base, post);
  }
  return report;
}

void write_episodes_csv(std::ostream& os, const std::vector<EpisodeRow>& rows) {
  os << "param_id,arm,seed,outcome,policy_steps,frames,final_damage_pct\n" << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.param_id << ',' << arm_name(r.arm) << ',' << r.seed << ','
       << eval_outcome_name(r.outcome) << ',' << r.policy_steps << ',' << r.frames << ','
       << r.final_damage_pct << '\n';
  }
}

void write_summary_csv(std::ostream& os, const std::vector<ParamSummary>& rows) {
  os << "param_id,grid_side,initial_injury_size,microbial_invasiveness,microbial_toxigenesis,"
        "environmental_toxicity,host_resilience,episodes,baseline_deaths,policy_deaths,"
        "baseline_mortality,post_mortality,performance,both_zero\n"
     << std::setprecision(17);
  for (const auto& s : rows) {
    const auto& p = s.param.patient;
    os << s.param.id << ',' << s.param.grid_side << ',' << p.initial_injury_size << ','
       << p.microbial_invasiveness << ',' << p.microbial_toxigenesis << ','
       << p.environmental_toxicity << ',' << p.host_resilience << ',' << s.episodes << ','
       << s.baseline_deaths << ',' << s.policy_deaths << ',' << s.baseline_mortality << ','
       << s.post_mortality << ',' << s.performance.value << ',' << s.performance.both_zero
       << '\n';
  }
}

void write_aggregate_csv(std::ostream& os, const Aggregate& a) {
  os << "parameterizations,episodes_per_arm,baseline_deaths,policy_deaths,baseline_mortality,"
        "post_mortality,baseline_mortality_param_mean,post_mortality_param_mean,both_zero\n"
     << std::setprecision(17) << a.parameterizations << ',' << a.episodes_per_arm << ','
     << a.baseline_deaths << ',' << a.policy_deaths << ',' << a.baseline_mortality << ','
     << a.post_mortality << ',' << a.baseline_mortality_param_mean << ','
     << a.post_mortality_param_mean << ',' << a.both_zero << '\n';
}

void write_histogram_csv(std::ostream& os, const std::vector<ParamSummary>& rows, int bins) {
  if (bins < 1) throw std::invalid_argument("histogram needs >= 1 bin");
  std::vector<int> base(bins, 0), post(bins, 0);
  auto idx = [bins](double m) { return std::min(bins - 1, static_cast<int>(m * bins)); };
  for (const auto& s : rows) {
    ++base[idx(s.baseline_mortality)];
    ++post[idx(s.post_mortality)];
  }
  os << "bin_lo,bin_hi,baseline_count,post_count\n" << std::setprecision(17);
  for (int b = 0; b < bins; ++b) {
    os << double(b) / bins << ',' << double(b + 1) / bins << ',' << base[b] << ',' << post[b]
       << '\n';
  }
}

void write_performance_csv(std::ostream& os, const std::vector<ParamSummary>& rows) {
  std::vector<std::pair<double, std::string>> perf;
  for (const auto& s : rows) perf.emplace_back(s.performance.value, s.param.id);
  std::sort(perf.begin(), perf.end());
  os << "rank,performance,param_id\n" << std::setprecision(17);
  for (std::size_t i = 0; i < perf.size(); ++i) {
    os << i << ',' << perf[i].first << ',' << perf[i].second << '\n';
  }
}

void write_report(const MortalityReport& report, const std::string& dir,
                  const std::string& comment) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    if (!comment.empty()) os << "# " << comment << '\n';
    return os;
  };
  {
    auto os = open("episodes.csv");
    write_episodes_csv(os, report.episodes);
  }
  {
    auto os = open("summary.csv");
    write_summary_csv(os, report.summaries);
  }
  {
    auto os = open("aggregate.csv");
    write_aggregate_csv(os, report.aggregate);
  }
  {
    auto os = open("histogram.csv");
    write_histogram_csv(os, report.summaries);
  }
  {
    auto os = open("performance.csv");
    write_performance_csv(os, report.summaries);
  }
}

void smooth_actions(ActionTrace& trace, int window) {
  trace.smoothed.assign(trace.raw.size(), {});
  std::vector<double> series(trace.raw.size());
  for (int k = 0; k < env::kActionSize; ++k) {
    for (std::size_t t = 0; t < trace.raw.size(); ++t) series[t] = trace.raw[t][k];
    const auto avg = moving_average(series, window);
    for (std::size_t t = 0; t < avg.size(); ++t) trace.smoothed[t][k] = avg[t];
  }
}

ActionTrace action_trace(const abm::SimulationParams& params, std::uint64_t seed,
                         const Policy& policy, const env::NormalizationSpec& norm,
                         const EvalConfig& config, int smoothing_window) {
  ActionTrace t;
  t.rollout = rollout_policy(params, seed, policy, norm, config, true);
  t.raw = t.rollout.actions;
  smooth_actions(t, smoothing_window);
  return t;
}

void write_action_trace_csv(std::ostream& os, const ActionTrace& trace) {
  const auto& labels = abm::default_cytokine_labels();
  os << "step";
  for (const auto& l : labels) os << ",raw_" << l;
  for (const auto& l : labels) os << ",avg_" << l;
  os << '\n' << std::setprecision(17);
  for (std::size_t t = 0; t < trace.raw.size(); ++t) {
    os << t;
    for (double v : trace.raw[t]) os << ',' << v;
    for (double v : trace.smoothed[t]) os << ',' << v;
    os << '\n';
  }
}

}  // namespace sepsis::eval
