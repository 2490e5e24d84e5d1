#include "sepsis/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sepsis::harness {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace

std::filesystem::path RunConfig::path(const std::string& key) const {
  std::filesystem::path p = resolved.at("paths").at(key).get<std::string>();
  return p.is_absolute() ? p : base_dir / p;
}

std::uint64_t RunConfig::base_seed() const { return resolved.at("base_seed").get<std::uint64_t>(); }

double RunConfig::frame_minutes() const {
  return resolved.at("simulation").at("frame_minutes").get<double>();
}

env::EpisodeConfig RunConfig::training_episode() const {
  return env::episode_config_from_json(resolved.at("episode"));
}

env::RewardSpec RunConfig::reward() const { return env::reward_spec_from_json(resolved.at("reward")); }

ddpg::TrainingConfig RunConfig::training() const {
  const auto& t = resolved.at("train");
  ddpg::TrainingConfig c;
  c.ddpg = ddpg::ddpg_config_from_json(t.at("ddpg"));
  c.max_episodes = t.at("max_episodes").get<int>();
  c.streak_checkpoint_interval = t.at("streak_checkpoint_interval").get<int>();
  c.snapshot_every = t.at("snapshot_every").get<int>();
  c.base_seed = base_seed();
  c.config_hash = hash;
  c.validate();
  return c;
}

eval::EvalConfig RunConfig::evaluation() const {
  eval::EvalConfig c = eval::eval_config_from_json(resolved.at("evaluate"));
  return c;
}

eval::ParameterSpace RunConfig::sampling_space() const {
  return eval::parameter_space_from_json(resolved.at("sampling"));
}

void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("override '" + assignment + "' is not key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json* node = &j;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!node->is_object() || !node->contains(part)) {
      throw std::invalid_argument("override key '" + key + "' is not in the config");
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  *node = std::move(value);
}

RunConfig resolve_config(nlohmann::json file, std::filesystem::path base_dir,
                         const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(file, o);
  RunConfig c;
  c.resolved = std::move(file);
  c.hash = fnv1a64(c.resolved.dump());
  c.base_dir = std::move(base_dir);
  return c;
}

RunConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  const std::filesystem::path p(path);
  return resolve_config(read_json(p), p.parent_path(), overrides);
}

void write_config_snapshot(const RunConfig& config, const std::filesystem::path& file) {
  std::ofstream os(file);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  nlohmann::json snap = {{"config_hash", config.hash_string()}, {"config", config.resolved}};
  os << snap.dump(2) << '\n';
}

const eval::Parameterization& Calibration::find(const std::string& id) const {
  for (const auto& p : parameterizations) {
    if (p.id == id) return p;
  }
  throw std::invalid_argument("no parameterization '" + id + "' in the calibration set");
}

Calibration load_calibration(const std::filesystem::path& path) {
  const nlohmann::json j = read_json(path);
  Calibration c;
  c.version = j.at("version").get<std::string>();
  for (const auto& p : j.at("parameterizations")) {
    c.parameterizations.push_back(eval::parameterization_from_json(p));
  }
  return c;
}

}  // namespace sepsis::harness
