#pragma once

#include <array>
#include <cstdint>

namespace sepsis {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
//
// The 64-bit seed is the Philox key; the 128-bit counter is split into a
// 64-bit block index and a 64-bit stream id, so independent streams for the
// same seed never overlap. Distribution helpers are implemented here rather
// than with <random> so sequences are identical across standard libraries.
class Rng {
 public:
  using result_type = std::uint32_t;

  struct State {
    std::array<std::uint32_t, 2> key{};
    std::array<std::uint32_t, 4> counter{};
    std::array<std::uint32_t, 4> block{};
    std::uint32_t block_pos = 4;
    bool has_spare_normal = false;
    double spare_normal = 0.0;

    bool operator==(const State&) const = default;
  };

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return 0xffffffffu; }

  result_type operator()();
  std::uint64_t next_u64();

  // [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Unbiased integer in [0, n); n must be > 0.
  std::uint32_t uniform_int(std::uint32_t n);
  bool bernoulli(double p) { return uniform() < p; }
  // Standard normal via the Box-Muller transform.
  double normal();
  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  const State& state() const { return state_; }
  void set_state(const State& s) { state_ = s; }

  bool operator==(const Rng& other) const { return state_ == other.state_; }

  // One raw Philox4x32-10 block; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox_block(std::array<std::uint32_t, 4> counter,
                                                   std::array<std::uint32_t, 2> key);

 private:
  void refill();

  State state_;
};

// Stream id used for an episode within a run.
inline std::uint64_t episode_seed(std::uint64_t base_seed, std::uint64_t episode_index) {
  return base_seed + episode_index;
}

}  // namespace sepsis
