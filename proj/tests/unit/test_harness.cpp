#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "sepsis/harness/commands.hpp"
#include "sepsis/harness/config.hpp"

using namespace sepsis;
using namespace sepsis::harness;
namespace fs = std::filesystem;

namespace {

std::string config_path() { return fixtures::source_path("config/run.json"); }

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / name;
  fs::remove_all(d);
  return d;
}

std::vector<std::string> lines_of(const fs::path& file) {
  std::ifstream in(file);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), {"sepsis", "--config", config_path()});
  return run_cli(args);
}

// Small, fast training settings.
const std::vector<std::string> kTinyTrain = {
    "--set", "calibrate.episodes=2",
    "--set", "train.ddpg.actor_hidden=[8,8]",
    "--set", "train.ddpg.critic_hidden=[8,8]",
    "--set", "episode.max_steps=20",
};

}  // namespace

TEST_CASE("fnv1a64 known values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(hash_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("overrides") {
  nlohmann::json j = {{"a", {{"b", 1}, {"s", "x"}}}, {"n", 2.5}};
  apply_override(j, "a.b=5");
  CHECK(j["a"]["b"] == 5);
  apply_override(j, "a.s=hello");
  CHECK(j["a"]["s"] == "hello");
  apply_override(j, "n=[1,2]");
  CHECK(j["n"] == nlohmann::json::array({1, 2}));
  CHECK_THROWS_AS(apply_override(j, "a.missing=1"), std::invalid_argument);
  CHECK_THROWS_AS(apply_override(j, "no_equals"), std::invalid_argument);
}

TEST_CASE("resolve_config and hashing") {
  const RunConfig plain = resolve_config(config_path(), {});
  std::ifstream in(config_path());
  CHECK(plain.resolved == nlohmann::json::parse(in));
  CHECK(resolve_config(config_path(), {}).hash == plain.hash);

  const RunConfig five = resolve_config(config_path(), {"train.max_episodes=5"});
  CHECK(five.resolved["train"]["max_episodes"] == 5);
  CHECK(five.training().max_episodes == 5);
  CHECK(five.hash != plain.hash);
  CHECK(five.hash == resolve_config(config_path(), {"train.max_episodes=5"}).hash);

  CHECK(plain.training().ddpg.actor_lr == 1e-4);
  CHECK(plain.evaluation().strict_threshold_pct == 0.02);
  CHECK(plain.training_episode().burn_in == 26);
  CHECK(plain.path("constants").filename() == "constants.json");

  const fs::path dir = fresh_dir("sepsis_harness_snapshot");
  fs::create_directories(dir);
  write_config_snapshot(five, dir / "snap.json");
  std::ifstream snap(dir / "snap.json");
  const auto j = nlohmann::json::parse(snap);
  CHECK(j.at("config") == five.resolved);
  CHECK(j.at("config_hash") == five.hash_string());
  fs::remove_all(dir);
}

TEST_CASE("shipped calibration") {
  const RunConfig rc = resolve_config(config_path(), {});
  const Calibration cal = load_calibration(rc.path("calibration"));
  CHECK_FALSE(cal.version.empty());
  CHECK(cal.find("g51_stochastic").grid_side == 51);
  CHECK_THROWS(cal.find("nope"));
}

TEST_CASE("cli errors") {
  CHECK(cli({"evaluate"}) != 0);
  CHECK(cli({"baseline", "--bogus"}) != 0);
  CHECK(cli({}) != 0);
  CHECK(run_cli({"sepsis", "--config", "/nonexistent.json", "baseline", "--param-id", "x"}) != 0);
  CHECK(cli({"baseline", "--param-id", "unknown_id", "--out", fresh_dir("sepsis_cli_err").string()}) != 0);
}

TEST_CASE("cli baseline") {
  const fs::path out = fresh_dir("sepsis_cli_baseline");
  REQUIRE(cli({"baseline", "--param-id", "g51_mild", "--episodes", "3", "--out", out.string(),
               "--set", "episode.max_steps=30"}) == 0);
  const auto rows = lines_of(out / "baseline_episodes.csv");
  REQUIRE(rows.size() == 5u);  // comment, header, 3 episodes
  CHECK(rows[0].find("config_hash=") != std::string::npos);
  CHECK(fs::exists(out / "baseline_config.json"));
  fs::remove_all(out);
}

TEST_CASE("cli train is reproducible and honours the output override") {
  const fs::path a = fresh_dir("sepsis_cli_train_a"), b = fresh_dir("sepsis_cli_train_b");
  std::vector<std::string> args{"train", "--episodes", "3", "--out", a.string()};
  args.insert(args.end(), kTinyTrain.begin(), kTinyTrain.end());
  REQUIRE(cli(args) == 0);

  // Output directory from the environment.
  setenv(kOutDirEnv, b.string().c_str(), 1);
  std::vector<std::string> env_args{"train", "--episodes", "3"};
  env_args.insert(env_args.end(), kTinyTrain.begin(), kTinyTrain.end());
  REQUIRE(cli(env_args) == 0);
  unsetenv(kOutDirEnv);

  const auto la = lines_of(a / "training_log.csv"), lb = lines_of(b / "training_log.csv");
  REQUIRE(la.size() == 5u);
  // Bodies match byte for byte; only the comment line carries a timestamp.
  CHECK(std::vector<std::string>(la.begin() + 1, la.end()) ==
        std::vector<std::string>(lb.begin() + 1, lb.end()));
  CHECK(fs::exists(a / "checkpoints" / "final.sepc"));
  CHECK(fs::exists(a / "normalization.json"));
  CHECK(fs::exists(a / "training_timing.csv"));

  // A checkpoint drives rollout, trace and evaluate.
  const std::string ck = (a / "checkpoints" / "final.sepc").string();
  const fs::path e = fresh_dir("sepsis_cli_eval");
  CHECK(cli({"rollout", "--param-id", "g51_mild", "--seed", "4", "--checkpoint", ck, "--out",
             e.string(), "--set", "evaluate.max_steps=20"}) == 0);
  CHECK(cli({"trace", "--param-id", "g51_mild", "--seed", "4", "--checkpoint", ck, "--out",
             e.string(), "--set", "evaluate.max_steps=20"}) == 0);
  CHECK(fs::exists(e / "trace.csv"));
  CHECK(fs::exists(e / "action_trace.csv"));
  CHECK(cli({"evaluate", "--checkpoint", ck, "--param-id", "g51_mild", "--episodes", "2", "--out",
             e.string(), "--set", "evaluate.max_steps=20"}) == 0);
  CHECK(lines_of(e / "episodes.csv").size() == 6u);  // comment, header, 2 arms x 2
  // Hash mismatch: a warning normally, an error when strict.
  CHECK(cli({"evaluate", "--checkpoint", ck, "--param-id", "g51_mild", "--episodes", "1", "--out",
             e.string(), "--set", "evaluate.max_steps=20", "--strict-hash"}) != 0);
  fs::remove_all(a);
  fs::remove_all(b);
  fs::remove_all(e);
}
