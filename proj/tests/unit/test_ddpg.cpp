#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "sepsis/ddpg/agent.hpp"
#include "sepsis/ddpg/point_mass.hpp"
#include "sepsis/ddpg/replay_buffer.hpp"
#include "sepsis/ddpg/trainer.hpp"

using namespace sepsis;
using namespace sepsis::ddpg;

namespace {

DdpgConfig small_config() {
  DdpgConfig c;
  c.actor_hidden = {16, 16};
  c.critic_hidden = {16, 16};
  c.batch_size = 8;
  c.warmup = 8;
  c.replay_capacity = 1000;
  return c;
}

Transition make_transition(int obs, int act, double tag, bool terminal = false) {
  Transition t;
  t.s.assign(obs, tag);
  t.a.assign(act, tag / 10.0);
  t.r = tag;
  t.s_next.assign(obs, tag + 0.5);
  t.terminal = terminal;
  return t;
}

// Two-step episodes: the first step times out or heals depending on the seed.
class FakeEnv final : public env::Environment {
 public:
  explicit FakeEnv(env::Outcome outcome) : outcome_(outcome) {}
  int observation_size() const override { return 2; }
  int action_size() const override { return 1; }
  std::vector<double> reset(std::uint64_t seed) override {
    seed_ = seed;
    return {0.0, double(seed % 7)};
  }
  env::StepResult step(std::span<const double> a) override {
    env::StepResult r;
    r.observation = {1.0, double(seed_ % 7)};
    r.applied_action.assign(a.begin(), a.end());
    r.outcome = outcome_;
    r.done = true;
    r.reward = outcome_ == env::Outcome::kHealth ? 1.0 : -1.0;
    return r;
  }

 private:
  env::Outcome outcome_;
  std::uint64_t seed_ = 0;
};

}  // namespace

TEST_CASE("noise schedule") {
  const NoiseSchedule s;
  CHECK(noise_sigma(0, s) == 0.1);
  CHECK(noise_sigma(999, s) == 0.1);
  CHECK(noise_sigma(1000, s) == 0.01);
  CHECK(noise_sigma(2500, s) == 0.001);
  CHECK(noise_sigma(2000, s) == 0.001);
}

TEST_CASE("replay buffer is a FIFO ring") {
  ReplayBuffer buf(3, 2, 1);
  for (int i = 0; i < 5; ++i) buf.add(make_transition(2, 1, i, i % 2 == 0));
  CHECK(buf.size() == 3);
  CHECK(buf.at(0) == make_transition(2, 1, 2, true));
  CHECK(buf.at(2) == make_transition(2, 1, 4, true));
  CHECK(buf.at(1).terminal == false);
  CHECK_THROWS(buf.at(3));
  CHECK_THROWS(buf.add(std::vector<double>{1.0}, std::vector<double>{0.0}, 0.0,
                       std::vector<double>{1.0, 2.0}, false));

  const std::size_t slots[] = {0, 2};
  const Batch b = buf.gather(slots);
  CHECK(b.size() == 2);
  CHECK(b.s.rows() == 2);
  CHECK(b.r.size() == 2);
}

TEST_CASE("sampling is uniform with replacement") {
  ReplayBuffer buf(10, 1, 1);
  for (int i = 0; i < 4; ++i) buf.add(make_transition(1, 1, i));
  Rng rng(3);
  std::array<int, 4> counts{};
  const int n = 40000;
  const Batch b = buf.sample(n, rng);
  for (int j = 0; j < n; ++j) ++counts[static_cast<int>(b.r(j))];
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  CHECK(chi2 < 16.27);  // 3 dof, p = 0.001
  CHECK_THROWS(ReplayBuffer(10, 1, 1).sample(1, rng));
}

TEST_CASE("td targets") {
  const DdpgConfig cfg = small_config();
  Agent agent(3, 2, cfg, 9);
  ReplayBuffer buf(16, 3, 2);
  for (int i = 0; i < 6; ++i) buf.add(make_transition(3, 2, i * 0.3 - 0.7, i == 2));
  std::vector<std::size_t> slots{0, 1, 2, 3, 4, 5};
  const Batch b = buf.gather(slots);
  const nn::Vector y = td_targets(b, agent.target_actor(), agent.target_critic(), 0.9);
  for (int j = 0; j < 6; ++j) {
    const Transition t = buf.at(j);
    if (t.terminal) {
      CHECK(y(j) == t.r);
      continue;
    }
    const auto a_next = agent.target_actor().forward(t.s_next);
    const double q = agent.target_critic().forward(t.s_next, a_next)[0];
    CHECK(y(j) == doctest::Approx(t.r + 0.9 * q).epsilon(1e-12));
  }

  // Zero target critic: y = r.
  nn::Network zero_critic(agent.target_critic().spec());
  const nn::Vector y0 = td_targets(b, agent.target_actor(), zero_critic, 0.99);
  for (int j = 0; j < 6; ++j) CHECK(y0(j) == b.r(j));
}

TEST_CASE("select_action: greedy, clamped, independent noise") {
  Agent agent(4, 3, small_config(), 1);
  const std::vector<double> obs{0.1, -0.2, 0.3, 0.4};
  Rng rng(5);
  CHECK(select_action(agent.actor(), obs, 0.0, rng) == greedy_action(agent.actor(), obs));
  for (int i = 0; i < 200; ++i) {
    for (double v : select_action(agent.actor(), obs, 5.0, rng)) CHECK(std::abs(v) <= 1.0);
  }

  // Zero actor: actions are pure noise; check pairwise correlation.
  nn::Network zero(agent.actor().spec());
  const int n = 20000;
  std::vector<std::array<double, 3>> draws(n);
  for (auto& d : draws) {
    const auto a = select_action(zero, obs, 0.1, rng);
    d = {a[0], a[1], a[2]};
  }
  for (int p = 0; p < 3; ++p) {
    for (int q = p + 1; q < 3; ++q) {
      double sp = 0, sq = 0, spq = 0, spp = 0, sqq = 0;
      for (const auto& d : draws) {
        sp += d[p];
        sq += d[q];
        spq += d[p] * d[q];
        spp += d[p] * d[p];
        sqq += d[q] * d[q];
      }
      const double cov = spq / n - sp / n * sq / n;
      const double corr = cov / std::sqrt((spp / n - sp * sp / n / n) * (sqq / n - sq * sq / n / n));
      CHECK(std::abs(corr) < 0.02);
    }
  }
}

TEST_CASE("critic overfits one batch") {
  DdpgConfig cfg = small_config();
  cfg.tau = 0.0;  // targets frozen: a fixed regression problem
  Agent agent(3, 2, cfg, 4);
  ReplayBuffer buf(16, 3, 2);
  for (int i = 0; i < 8; ++i) buf.add(make_transition(3, 2, i * 0.25 - 1.0));
  std::vector<std::size_t> slots{0, 1, 2, 3, 4, 5, 6, 7};
  const Batch b = buf.gather(slots);
  const double first = agent.train_on_batch(b).critic_loss;
  double last = first;
  for (int k = 0; k < 300; ++k) last = agent.train_on_batch(b).critic_loss;
  CHECK(last < 0.01 * first);
}

TEST_CASE("actor step raises mean Q to first order") {
  DdpgConfig cfg = small_config();
  cfg.critic_lr = 0.0;  // isolate the actor update
  cfg.actor_lr = 1e-6;
  cfg.tau = 0.0;
  Agent agent(3, 2, cfg, 6);
  // Make the critic's action dependence non-trivial.
  agent.critic() = nn::Network::initialized(agent.critic().spec(), 99, 0.5);
  ReplayBuffer buf(16, 3, 2);
  for (int i = 0; i < 8; ++i) buf.add(make_transition(3, 2, i * 0.2 - 0.8));
  std::vector<std::size_t> slots{0, 1, 2, 3, 4, 5, 6, 7};
  const Batch b = buf.gather(slots);
  auto mean_q = [&] {
    const nn::Matrix mu = agent.actor().forward(b.s);
    return agent.critic().forward(b.s, &mu).mean();
  };
  const nn::Network critic_before = agent.critic();
  const double before = mean_q();
  agent.train_on_batch(b);
  CHECK(agent.critic() == critic_before);
  CHECK(mean_q() > before);
}

TEST_CASE("train_step waits for warm-up") {
  DdpgConfig cfg = small_config();
  cfg.warmup = 20;
  Agent agent(2, 1, cfg, 1);
  ReplayBuffer buf(100, 2, 1);
  Rng rng(1);
  for (int i = 0; i < 19; ++i) buf.add(make_transition(2, 1, i * 0.01));
  const nn::Network before = agent.actor();
  CHECK_FALSE(agent.train_step(buf, rng).updated);
  CHECK(agent.actor() == before);
  buf.add(make_transition(2, 1, 0.5));
  CHECK(agent.train_step(buf, rng).updated);
  CHECK_FALSE(agent.actor() == before);
}

TEST_CASE("soft update reduces target drift") {
  Agent agent(2, 1, small_config(), 3);
  nn::ParameterSet target = agent.target_actor().params();
  const nn::ParameterSet online = nn::Network::initialized(agent.actor().spec(), 77).params();
  auto max_dist = [&] {
    double d = 0.0;
    const auto a = target.flatten(), b = online.flatten();
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
  };
  const double d0 = max_dist();
  nn::soft_update(target, online, 0.001);
  CHECK(max_dist() < d0);
  CHECK(max_dist() == doctest::Approx(0.999 * d0));

  nn::ParameterSet ten = nn::ParameterSet::zeros_like(agent.actor().spec());
  nn::ParameterSet zero = ten;
  ten.weights[0](0, 0) = 10.0;
  nn::soft_update(zero, ten, 0.001);
  CHECK(zero.weights[0](0, 0) == doctest::Approx(0.01));
}

TEST_CASE("training log moving averages") {
  TrainingLog log;
  for (int i = 1; i <= 150; ++i) {
    EpisodeRecord r;
    r.episode = i - 1;
    r.episode_return = i;
    r.outcome = i % 2 ? env::Outcome::kHealth : env::Outcome::kDeath;
    r.length = 10;
    log.append(r);
  }
  CHECK(log.records()[0].ma_return == 1.0);
  CHECK(log.records()[9].ma_return == 5.5);
  CHECK(log.records().back().ma_return == doctest::Approx(100.5));
  CHECK(log.records().back().ma_health == 0.5);
  CHECK(log.records().back().ma_timeout == 0.0);
  std::ostringstream os;
  log.write_csv(os, false);
  CHECK(os.str().rfind(TrainingLog::csv_header(), 0) == 0);
}

TEST_CASE("run_training: streak checkpoints and empty runs") {
  const auto dir = std::filesystem::temp_directory_path() / "sepsis_ddpg_test";
  std::filesystem::remove_all(dir);
  TrainingConfig tc;
  tc.ddpg = small_config();
  tc.max_episodes = 5;
  tc.streak_checkpoint_interval = 2;
  tc.checkpoint_dir = dir.string();
  FakeEnv healthy(env::Outcome::kHealth);
  const TrainingResult r = run_training(healthy, tc);
  CHECK(r.log.size() == 5);
  CHECK(r.log.records().back().heal_streak == 5);
  std::vector<std::string> names;
  for (const auto& p : r.checkpoints) names.push_back(std::filesystem::path(p).filename().string());
  CHECK(names == std::vector<std::string>{"streak_ep00001_n2.sepc", "streak_ep00003_n4.sepc",
                                          "final.sepc"});
  const auto ck = nn::load_checkpoint((dir / "final.sepc").string());
  CHECK(ck.episode == 4);
  CHECK(ck.has("target_critic"));

  FakeEnv timeouts(env::Outcome::kTimeout);
  const TrainingResult t = run_training(timeouts, tc);
  CHECK(t.log.records().back().heal_streak == 0);

  tc.max_episodes = 0;
  std::filesystem::remove_all(dir);
  const TrainingResult empty = run_training(healthy, tc);
  CHECK(empty.log.size() == 0);
  CHECK(empty.checkpoints.empty());
  CHECK_FALSE(std::filesystem::exists(dir / "final.sepc"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("training is deterministic") {
  TrainingConfig tc;
  tc.ddpg = small_config();
  tc.max_episodes = 10;
  tc.base_seed = 17;
  PointMassConfig pm;
  pm.max_steps = 40;
  PointMassEnv e1(pm), e2(pm);
  const TrainingResult a = run_training(e1, tc);
  const TrainingResult b = run_training(e2, tc);
  CHECK(a.log.same_trajectory(b.log));
  CHECK(a.agent.actor() == b.agent.actor());
  CHECK(a.agent.target_critic() == b.agent.target_critic());
  tc.base_seed = 18;
  PointMassEnv e3(pm);
  CHECK_FALSE(run_training(e3, tc).log.same_trajectory(a.log));
}

TEST_CASE("point mass dynamics") {
  PointMassEnv env;
  env.reset(3);
  CHECK(std::abs(env.position()) <= 1.0);
  CHECK(env.velocity() == 0.0);
  const double x0 = env.position();
  const auto r = env.step(std::vector<double>{1.0});
  CHECK(env.velocity() == doctest::Approx(0.1));
  CHECK(env.position() == doctest::Approx(x0 + 0.01));
  CHECK(r.observation.size() == 2u);
  CHECK(point_mass_pd(0.0, 0.0, 1.0, 1.0) == 0.0);
  CHECK(point_mass_pd(10.0, 0.0, 1.0, 1.0) == -1.0);
}
