#include "sepsis/eval/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <stdexcept>
#include <thread>

#include "sepsis/log.hpp"

namespace sepsis::eval {

std::vector<Bin> default_bins() {
  return {{0.01, 0.20, false}, {0.20, 0.40, true}, {0.40, 0.60, true},
          {0.60, 0.80, true},  {0.80, 0.99, true}};
}

int bin_index(const std::vector<Bin>& bins, double m) {
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (bins[i].contains(m)) return static_cast<int>(i);
  }
  return -1;
}

void EvalConfig::validate() const {
  if (episodes_per_param < 1 || per_bin_count < 1) {
    throw std::invalid_argument("episode and bin counts must be >= 1");
  }
  if (!(strict_threshold_pct > 0.0) || max_steps < 1 || post_frames < 0 || burn_in < 0 ||
      confirm_window < 0 || threads < 1 || sampling_budget < 0) {
    throw std::invalid_argument("invalid evaluation config");
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    if (!(bins[i].lo < bins[i].hi)) throw std::invalid_argument("empty mortality bin");
    if (i > 0 && bins[i].lo < bins[i - 1].hi) {
      throw std::invalid_argument("mortality bins must be ordered and disjoint");
    }
  }
}

env::EpisodeConfig EvalConfig::episode_config() const {
  env::EpisodeConfig c;
  c.burn_in = burn_in;
  c.max_steps = max_steps;
  c.health_threshold_pct = strict_threshold_pct;
  c.confirm_window = confirm_window;
  return c;
}

nlohmann::json to_json(const EvalConfig& c) {
  nlohmann::json bins = nlohmann::json::array();
  for (const Bin& b : c.bins) bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"lo_inclusive", b.lo_inclusive}});
  return {{"episodes_per_param", c.episodes_per_param},
          {"strict_threshold_pct", c.strict_threshold_pct},
          {"max_steps", c.max_steps},
          {"burn_in", c.burn_in},
          {"confirm_window", c.confirm_window},
          {"post_frames", c.post_frames},
          {"bins", bins},
          {"per_bin_count", c.per_bin_count},
          {"sampling_budget", c.sampling_budget},
          {"base_seed", c.base_seed},
          {"threads", c.threads}};
}

EvalConfig eval_config_from_json(const nlohmann::json& j) {
  EvalConfig c;
  c.episodes_per_param = j.at("episodes_per_param").get<int>();
  c.strict_threshold_pct = j.at("strict_threshold_pct").get<double>();
  c.max_steps = j.at("max_steps").get<int>();
  c.burn_in = j.at("burn_in").get<int>();
  c.confirm_window = j.at("confirm_window").get<int>();
  c.post_frames = j.at("post_frames").get<int>();
  c.bins.clear();
  for (const auto& b : j.at("bins")) {
    c.bins.push_back({b.at("lo").get<double>(), b.at("hi").get<double>(),
                      b.at("lo_inclusive").get<bool>()});
  }
  c.per_bin_count = j.at("per_bin_count").get<int>();
  c.sampling_budget = j.at("sampling_budget").get<int>();
  c.base_seed = j.at("base_seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<int>();
  c.validate();
  return c;
}

nlohmann::json to_json(const Parameterization& p) {
  nlohmann::json j = abm::to_json(p.patient);
  j["id"] = p.id;
  j["grid_side"] = p.grid_side;
  return j;
}

Parameterization parameterization_from_json(const nlohmann::json& j) {
  Parameterization p;
  p.id = j.at("id").get<std::string>();
  p.patient = abm::patient_from_json(j);
  p.grid_side = j.at("grid_side").get<int>();
  return p;
}

abm::SimulationParams SimContext::params_for(const Parameterization& p) const {
  return abm::make_params(p.patient, constants, p.grid_side, frame_minutes);
}

Policy zero_policy(int action_size) {
  return [action_size](std::span<const double>) { return std::vector<double>(action_size, 0.0); };
}

Policy actor_policy(const nn::Network& actor) {
  auto net = std::make_shared<const nn::Network>(actor);
  return [net](std::span<const double> obs) { return net->forward(obs); };
}

const char* eval_outcome_name(EvalOutcome o) {
  switch (o) {
    case EvalOutcome::kDeath: return "death";
    case EvalOutcome::kHealed: return "healed";
    case EvalOutcome::kUnresolved: return "unresolved";
  }
  return "?";
}

RolloutResult rollout_policy(const abm::SimulationParams& params, std::uint64_t seed,
                             const Policy& policy, const env::NormalizationSpec& norm,
                             const EvalConfig& config, bool record_actions) {
  env::SepsisEnv environment(params, config.episode_config(), {}, norm);
  std::vector<double> obs = environment.reset(seed);
  RolloutResult r;
  env::StepResult step;
  do {
    step = environment.step(policy(obs));
    obs = std::move(step.observation);
    if (record_actions) {
      std::array<double, env::kActionSize> a{};
      std::copy(step.applied_action.begin(), step.applied_action.end(), a.begin());
      r.actions.push_back(a);
    }
  } while (!step.done);
  r.policy_steps = environment.steps();
  r.episode_outcome = step.outcome;

  // The post window needs its own copy of the state; the environment is
  // finished and rejects further steps.
  abm::SimState state = environment.state();
  abm::SystemTotals totals = environment.totals();
  bool died = step.outcome == env::Outcome::kDeath;
  for (int f = 0; !died && f < config.post_frames; ++f) {
    totals = abm::step_frame(state, abm::ActionVector::zeros());
    died = abm::check_outcome(totals, state.frame_count) == abm::FrameOutcome::kDeath;
  }
  r.frames = state.frame_count;
  r.final_damage_pct = totals.total_damage_pct;
  r.final_infection_pct = totals.total_infection_pct;
  if (died) {
    r.outcome = EvalOutcome::kDeath;
  } else if (totals.total_damage_pct + totals.total_infection_pct < config.strict_threshold_pct) {
    r.outcome = EvalOutcome::kHealed;
  } else {
    r.outcome = EvalOutcome::kUnresolved;
  }
  return r;
}

std::vector<std::uint64_t> eval_seeds(const EvalConfig& config, int n) {
  std::vector<std::uint64_t> seeds(n);
  for (int i = 0; i < n; ++i) seeds[i] = episode_seed(config.base_seed, static_cast<std::uint64_t>(i));
  return seeds;
}

std::vector<RolloutResult> rollout_many(const abm::SimulationParams& params,
                                        std::span<const std::uint64_t> seeds,
                                        const Policy& policy, const env::NormalizationSpec& norm,
                                        const EvalConfig& config) {
  std::vector<RolloutResult> out(seeds.size());
  const int threads = std::min<int>(config.threads, static_cast<int>(seeds.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      out[i] = rollout_policy(params, seeds[i], policy, norm, config);
    }
    return out;
  }
  // Results land in their seed's slot, so the merge order is fixed.
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
          out[i] = rollout_policy(params, seeds[i], policy, norm, config);
        }
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double mortality_rate(std::span<const RolloutResult> results) {
  if (results.empty()) throw std::invalid_argument("mortality of zero episodes");
  std::size_t deaths = 0;
  for (const auto& r : results) deaths += r.died();
  return static_cast<double>(deaths) / static_cast<double>(results.size());
}

double mortality_rate(const abm::SimulationParams& params, const Policy& policy,
                      const env::NormalizationSpec& norm, const EvalConfig& config, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto seeds = eval_seeds(config, n);
  const auto results = rollout_many(params, seeds, policy, norm, config);
  return mortality_rate(results);
}

Performance performance(double baseline, double post) {
  const double m = std::max(baseline, post);
  if (m == 0.0) return {0.0, true};
  return {(baseline - post) / m, false};
}

std::vector<double> moving_average(std::span<const double> series, int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> out(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t begin = t + 1 >= std::size_t(window) ? t + 1 - window : 0;
    double s = 0.0;
    for (std::size_t k = begin; k <= t; ++k) s += series[k];
    out[t] = s / static_cast<double>(t + 1 - begin);
  }
  return out;
}

nlohmann::json to_json(const ParameterSpace& s) {
  return {{"grid_side", s.grid_side},
          {"injury", s.injury},
          {"invasiveness", s.invasiveness},
          {"toxigenesis", s.toxigenesis},
          {"environmental_toxicity", s.environmental_toxicity},
          {"resilience", s.resilience}};
}

ParameterSpace parameter_space_from_json(const nlohmann::json& j) {
  ParameterSpace s;
  s.grid_side = j.at("grid_side").get<int>();
  s.injury = j.at("injury").get<std::array<int, 2>>();
  s.invasiveness = j.at("invasiveness").get<std::array<double, 2>>();
  s.toxigenesis = j.at("toxigenesis").get<std::array<double, 2>>();
  s.environmental_toxicity = j.at("environmental_toxicity").get<std::array<double, 2>>();
  s.resilience = j.at("resilience").get<std::array<double, 2>>();
  return s;
}

Parameterization draw_parameterization(const ParameterSpace& space, Rng& rng, int index) {
  Parameterization p;
  p.id = "sample_" + std::to_string(index);
  p.grid_side = space.grid_side;
  const int span = space.injury[1] - space.injury[0] + 1;
  p.patient.initial_injury_size =
      space.injury[0] + static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(span)));
  p.patient.microbial_invasiveness = rng.uniform(space.invasiveness[0], space.invasiveness[1]);
  p.patient.microbial_toxigenesis = rng.uniform(space.toxigenesis[0], space.toxigenesis[1]);
  p.patient.environmental_toxicity =
      rng.uniform(space.environmental_toxicity[0], space.environmental_toxicity[1]);
  p.patient.host_resilience = rng.uniform(space.resilience[0], space.resilience[1]);
  return p;
}

SamplingResult sample_parameterizations(const EvalConfig& config, const ParameterSpace& space,
                                        const SimContext& ctx, Rng& rng) {
  config.validate();
  SamplingResult out;
  out.bin_counts.assign(config.bins.size(), 0);
  std::vector<std::vector<SampledParameterization>> per_bin(config.bins.size());
  const auto seeds = eval_seeds(config, config.episodes_per_param);
  const Policy zero = zero_policy();
  const auto identity = env::NormalizationSpec::identity(env::kObservationSize);
  auto full = [&] {
    return std::all_of(out.bin_counts.begin(), out.bin_counts.end(),
                       [&](int c) { return c >= config.per_bin_count; });
  };
  while (!full() && out.candidates_tried < config.sampling_budget) {
    Parameterization p = draw_parameterization(space, rng, out.candidates_tried);
    ++out.candidates_tried;
    const auto results = rollout_many(ctx.params_for(p), seeds, zero, identity, config);
    const double m = mortality_rate(results);
    const int b = bin_index(config.bins, m);
    if (b < 0 || out.bin_counts[b] >= config.per_bin_count) continue;
    ++out.bin_counts[b];
    per_bin[b].push_back({std::move(p), m, b});
  }
  out.complete = full();
  for (auto& v : per_bin) {
    for (auto& s : v) out.accepted.push_back(std::move(s));
  }
  if (!out.complete) {
    log_warning("parameterization sampling exhausted its budget of " +
                std::to_string(config.sampling_budget) + " candidates before filling every bin");
  }
  return out;
}

}  // namespace sepsis::eval
