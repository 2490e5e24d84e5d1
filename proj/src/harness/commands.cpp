#include "sepsis/harness/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sepsis/ddpg/trainer.hpp"
#include "sepsis/env/trace.hpp"
#include "sepsis/eval/report.hpp"
#include "sepsis/harness/config.hpp"
#include "sepsis/log.hpp"
#include "sepsis/nn/checkpoint.hpp"

namespace fs = std::filesystem;

namespace sepsis::harness {
namespace {

struct Common {
  std::string config_path = "config/run.json";
  std::vector<std::string> overrides;
  std::string out;
};

// Everything a subcommand needs once the config is resolved.
struct Session {
  RunConfig config;
  eval::SimContext ctx;
  Calibration calibration;
  fs::path out_dir;
  std::string command;

  std::string header() const {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream os;
    os << "sepsis " << command << " config_hash=" << config.hash_string()
       << " written=" << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
  }
  fs::path file(const std::string& name) const { return out_dir / name; }
  std::ofstream open(const std::string& name) const {
    std::ofstream os(file(name));
    if (!os) throw std::runtime_error("cannot write " + file(name).string());
    os << "# " << header() << '\n';
    return os;
  }
};

Session open_session(const Common& common, const std::string& command,
                     std::vector<std::string> extra_overrides) {
  std::vector<std::string> overrides = common.overrides;
  overrides.insert(overrides.end(), extra_overrides.begin(), extra_overrides.end());
  Session s{resolve_config(common.config_path, overrides), {}, {}, {}, command};
  s.ctx.constants = abm::load_rule_constants(s.config.path("constants").string());
  s.ctx.frame_minutes = s.config.frame_minutes();
  s.calibration = load_calibration(s.config.path("calibration"));
  if (!common.out.empty()) {
    s.out_dir = common.out;
  } else if (const char* env_dir = std::getenv(kOutDirEnv); env_dir && *env_dir) {
    s.out_dir = env_dir;
  } else {
    s.out_dir = s.config.path("output_dir");
  }
  fs::create_directories(s.out_dir);
  write_config_snapshot(s.config, s.file(command + "_config.json"));
  std::cout << "config hash " << s.config.hash_string() << ", output " << s.out_dir.string()
            << '\n';
  return s;
}

std::string set(const std::string& key, const std::string& value) { return key + "=" + value; }
std::string json_string(const std::string& v) { return nlohmann::json(v).dump(); }

env::NormalizationSpec read_normalization(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read normalization " + path.string());
  return env::normalization_from_json(nlohmann::json::parse(is).at("normalization"));
}

void write_normalization(const Session& s, const env::NormalizationSpec& spec) {
  // JSON has no comment syntax, so this file carries the hash but no timestamp.
  std::ofstream out(s.file("normalization.json"));
  if (!out) throw std::runtime_error("cannot write " + s.file("normalization.json").string());
  nlohmann::json j = {{"config_hash", s.config.hash_string()},
                      {"normalization", env::to_json(spec)},
                      {"labels", env::observation_labels()}};
  out << j.dump(2) << '\n';
}

nn::PolicyCheckpoint load_policy(const Session& s, const std::string& path, bool strict_hash) {
  nn::PolicyCheckpoint ckpt = nn::load_checkpoint(path);
  if (ckpt.config_hash != s.config.hash) {
    const std::string msg = "checkpoint config hash " + hash_hex(ckpt.config_hash) +
                            " differs from the current config " + s.config.hash_string();
    if (strict_hash) throw std::runtime_error(msg);
    log_warning(msg);
  }
  return ckpt;
}

int cmd_calibrate(const Session& s) {
  const auto& c = s.config.resolved.at("calibrate");
  const std::string id = c.at("param_id").get<std::string>();
  const int episodes = c.at("episodes").get<int>();
  const int zone_seeds = c.at("zone_seeds").get<int>();
  const auto params = s.ctx.params_for(s.calibration.find(id));

  const auto spec = env::calibrate_normalization(params, s.config.training_episode(), episodes,
                                                 s.config.base_seed(), id);
  write_normalization(s, spec);
  std::cout << "normalization over " << episodes << " zero-action episodes of " << id
            << " written to " << s.file("normalization.json").string() << '\n';

  eval::EvalConfig ec = s.config.evaluation();
  const auto seeds = eval::eval_seeds(ec, zone_seeds);
  const auto ident = env::NormalizationSpec::identity(env::kObservationSize);
  const auto results = eval::rollout_many(params, seeds, eval::zero_policy(), ident, ec);
  eval::MortalityReport report;
  eval::add_parameterization(report, s.calibration.find(id), seeds, results, results);
  {
    auto os = s.open("calibrate_episodes.csv");
    std::vector<eval::EpisodeRow> rows(report.episodes.begin(),
                                       report.episodes.begin() + zone_seeds);
    eval::write_episodes_csv(os, rows);
  }
  const double m = report.summaries.front().baseline_mortality;
  const bool zone = m > 0.05 && m < 0.95;
  std::cout << "zero-intervention mortality " << m << " over " << zone_seeds << " seeds; "
            << (zone ? "inside" : "outside") << " the stochastic zone (5%, 95%)\n";
  return 0;
}

int cmd_baseline(const Session& s, const std::string& id) {
  eval::EvalConfig ec = s.config.evaluation();
  const auto seeds = eval::eval_seeds(ec, ec.episodes_per_param);
  const auto results =
      eval::rollout_many(s.ctx.params_for(s.calibration.find(id)), seeds, eval::zero_policy(),
                         env::NormalizationSpec::identity(env::kObservationSize), ec);
  eval::MortalityReport report;
  eval::add_parameterization(report, s.calibration.find(id), seeds, results, results);
  auto os = s.open("baseline_episodes.csv");
  eval::write_episodes_csv(
      os, std::vector<eval::EpisodeRow>(report.episodes.begin(),
                                        report.episodes.begin() + static_cast<long>(seeds.size())));
  std::cout << "baseline mortality " << id << ": " << eval::mortality_rate(results) << " ("
            << report.summaries.front().baseline_deaths << "/" << seeds.size() << ")\n";
  return 0;
}

int cmd_train(const Session& s, const std::string& resume_path) {
  const auto& t = s.config.resolved.at("train");
  const std::string id = t.at("param_id").get<std::string>();
  const auto params = s.ctx.params_for(s.calibration.find(id));

  env::NormalizationSpec norm;
  const std::string norm_path = s.config.resolved.at("paths").at("normalization").get<std::string>();
  if (!norm_path.empty()) {
    norm = read_normalization(s.config.path("normalization"));
  } else {
    const int episodes = s.config.resolved.at("calibrate").at("episodes").get<int>();
    std::cout << "calibrating normalization on " << id << " (" << episodes << " episodes)\n";
    norm = env::calibrate_normalization(params, s.config.training_episode(), episodes,
                                        s.config.base_seed(), id);
    write_normalization(s, norm);
  }

  ddpg::TrainingConfig tc = s.config.training();
  tc.normalization = norm;
  tc.checkpoint_dir = s.file("checkpoints").string();
  std::optional<nn::PolicyCheckpoint> resume;
  if (!resume_path.empty()) resume = load_policy(s, resume_path, false);

  env::SepsisEnv environment(params, s.config.training_episode(), s.config.reward(), norm);
  const auto result = ddpg::run_training(environment, tc, resume ? &*resume : nullptr,
                                         [](const ddpg::EpisodeRecord& r) {
                                           std::cout << "episode " << r.episode << ' '
                                                     << env::outcome_name(r.outcome) << " len "
                                                     << r.length << " return " << r.episode_return
                                                     << " streak " << r.heal_streak << '\n';
                                         });
  {
    auto os = s.open("training_log.csv");
    result.log.write_csv(os, false);
  }
  // Wall time lives apart so the log body is reproducible byte for byte.
  auto timing = s.open("training_timing.csv");
  timing << "episode,wall_ms\n";
  for (const auto& r : result.log.records()) timing << r.episode << ',' << r.wall_ms << '\n';
  std::cout << result.log.size() << " episodes, " << result.checkpoints.size()
            << " checkpoints written\n";
  return 0;
}

int cmd_evaluate(const Session& s, const std::string& ckpt_path, std::vector<std::string> ids,
                 bool sample, bool strict_hash) {
  const nn::PolicyCheckpoint ckpt = load_policy(s, ckpt_path, strict_hash);
  eval::EvalConfig ec = s.config.evaluation();
  std::vector<eval::Parameterization> params;
  if (sample) {
    Rng rng(s.config.base_seed(), 0x73616d70);
    const auto sampled = eval::sample_parameterizations(ec, s.config.sampling_space(), s.ctx, rng);
    if (!sampled.complete) {
      std::cerr << "error: sampling budget exhausted before every mortality bin was filled\n";
      return 1;
    }
    for (const auto& p : sampled.accepted) params.push_back(p.param);
  } else {
    if (ids.empty()) ids = s.config.resolved.at("evaluate").at("param_ids").get<std::vector<std::string>>();
    for (const auto& id : ids) params.push_back(s.calibration.find(id));
  }
  const auto report = eval::evaluate_policy(params, s.ctx, eval::actor_policy(ckpt.network("actor")),
                                            ckpt.normalization, ec);
  eval::write_report(report, s.out_dir.string(), s.header());
  const auto& a = report.aggregate;
  std::cout << "baseline mortality " << a.baseline_mortality << ", post-intervention "
            << a.post_mortality << " over " << a.parameterizations << " parameterizations x "
            << ec.episodes_per_param << " seeds\n";
  return 0;
}

eval::Policy policy_or_zero(const Session& s, const std::string& ckpt_path,
                            env::NormalizationSpec& norm) {
  if (ckpt_path.empty()) {
    norm = env::NormalizationSpec::identity(env::kObservationSize);
    return eval::zero_policy();
  }
  const auto ckpt = load_policy(s, ckpt_path, false);
  norm = ckpt.normalization;
  return eval::actor_policy(ckpt.network("actor"));
}

int cmd_rollout(const Session& s, const std::string& id, std::uint64_t seed,
                const std::string& ckpt_path) {
  env::NormalizationSpec norm;
  const eval::Policy policy = policy_or_zero(s, ckpt_path, norm);
  const auto r = eval::rollout_policy(s.ctx.params_for(s.calibration.find(id)), seed, policy, norm,
                                      s.config.evaluation());
  std::cout << id << " seed " << seed << ": " << eval::eval_outcome_name(r.outcome) << " after "
            << r.policy_steps << " steps (" << r.frames << " frames), damage "
            << r.final_damage_pct << "%\n";
  return 0;
}

int cmd_trace(const Session& s, const std::string& id, std::uint64_t seed,
              const std::string& ckpt_path, int window) {
  env::NormalizationSpec norm;
  const eval::Policy policy = policy_or_zero(s, ckpt_path, norm);
  const eval::EvalConfig ec = s.config.evaluation();
  env::SepsisEnv environment(s.ctx.params_for(s.calibration.find(id)), ec.episode_config(),
                             s.config.reward(), norm);
  std::vector<double> obs = environment.reset(seed);
  std::vector<env::TraceRow> rows{env::trace_row(environment, nullptr)};
  eval::ActionTrace actions;
  while (!environment.done()) {
    const env::StepResult step = environment.step(policy(obs));
    obs = step.observation;
    rows.push_back(env::trace_row(environment, &step));
    actions.raw.push_back(rows.back().action);
  }
  eval::smooth_actions(actions, window);
  {
    auto os = s.open("trace.csv");
    env::write_trace_csv(os, rows);
  }
  {
    auto os = s.open("action_trace.csv");
    eval::write_action_trace_csv(os, actions);
  }
  std::cout << id << " seed " << seed << ": " << env::outcome_name(environment.outcome())
            << " after " << environment.steps() << " steps\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Sepsis treatment-policy simulator, trainer and evaluator"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("-c,--config", common.config_path, "Run configuration (JSON)");
  app.add_option("--set", common.overrides, "Override a config value, e.g. train.max_episodes=10");
  app.add_option("-o,--out", common.out, "Output directory");

  std::string param_id, checkpoint, resume;
  std::vector<std::string> param_ids;
  int episodes = -1, zone_seeds = -1, window = 20;
  std::uint64_t seed = 1;
  bool sample = false, strict_hash = false;

  auto* calibrate = app.add_subcommand("calibrate", "Normalization ranges and stochastic-zone check");
  calibrate->add_option("--param-id", param_id);
  calibrate->add_option("--episodes", episodes, "Zero-action episodes for the ranges");
  calibrate->add_option("--zone-seeds", zone_seeds, "Seeds for the mortality check");

  auto* baseline = app.add_subcommand("baseline", "Zero-intervention mortality");
  baseline->add_option("--param-id", param_id)->required();
  baseline->add_option("--episodes", episodes);

  auto* train = app.add_subcommand("train", "Train a policy");
  train->add_option("--param-id", param_id);
  train->add_option("--episodes", episodes);
  train->add_option("--resume", resume, "Continue from a checkpoint")->check(CLI::ExistingFile);

  auto* evaluate = app.add_subcommand("evaluate", "Paired baseline/policy mortality report");
  evaluate->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--param-id", param_ids);
  evaluate->add_option("--episodes", episodes);
  evaluate->add_flag("--sample", sample, "Rejection-sample parameterizations into mortality bins");
  evaluate->add_flag("--strict-hash", strict_hash, "Fail when the checkpoint config hash differs");

  auto* rollout = app.add_subcommand("rollout", "One greedy evaluation rollout");
  rollout->add_option("--param-id", param_id)->required();
  rollout->add_option("--seed", seed);
  rollout->add_option("--checkpoint", checkpoint)->check(CLI::ExistingFile);

  auto* trace = app.add_subcommand("trace", "Per-step observation and action traces");
  trace->add_option("--param-id", param_id)->required();
  trace->add_option("--seed", seed);
  trace->add_option("--checkpoint", checkpoint)->check(CLI::ExistingFile);
  trace->add_option("--window", window, "Moving-average window")->check(CLI::PositiveNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (calibrate->parsed()) {
      std::vector<std::string> o;
      if (!param_id.empty()) o.push_back(set("calibrate.param_id", json_string(param_id)));
      if (episodes >= 0) o.push_back(set("calibrate.episodes", std::to_string(episodes)));
      if (zone_seeds >= 0) o.push_back(set("calibrate.zone_seeds", std::to_string(zone_seeds)));
      return cmd_calibrate(open_session(common, "calibrate", o));
    }
    if (baseline->parsed()) {
      std::vector<std::string> o;
      if (episodes >= 0) o.push_back(set("evaluate.episodes_per_param", std::to_string(episodes)));
      return cmd_baseline(open_session(common, "baseline", o), param_id);
    }
    if (train->parsed()) {
      std::vector<std::string> o;
      if (!param_id.empty()) o.push_back(set("train.param_id", json_string(param_id)));
      if (episodes >= 0) o.push_back(set("train.max_episodes", std::to_string(episodes)));
      return cmd_train(open_session(common, "train", o), resume);
    }
    if (evaluate->parsed()) {
      std::vector<std::string> o;
      if (episodes >= 0) o.push_back(set("evaluate.episodes_per_param", std::to_string(episodes)));
      return cmd_evaluate(open_session(common, "evaluate", o), checkpoint, param_ids, sample,
                          strict_hash);
    }
    if (rollout->parsed()) return cmd_rollout(open_session(common, "rollout", {}), param_id, seed, checkpoint);
    if (trace->parsed()) {
      return cmd_trace(open_session(common, "trace", {}), param_id, seed, checkpoint, window);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace sepsis::harness
