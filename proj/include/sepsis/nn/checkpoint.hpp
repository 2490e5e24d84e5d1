#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sepsis/env/normalization.hpp"
#include "sepsis/nn/network.hpp"

namespace sepsis::nn {

inline constexpr std::uint16_t kCheckpointVersion = 1;

struct NamedNetwork {
  std::string name;
  Network network;
  bool operator==(const NamedNetwork&) const = default;
};

// Networks plus the input transform they were trained with. Training
// checkpoints hold "actor", "critic", "target_actor", "target_critic".
struct PolicyCheckpoint {
  std::vector<NamedNetwork> networks;
  env::NormalizationSpec normalization;
  std::uint64_t config_hash = 0;
  std::int64_t episode = 0;

  // Throws std::out_of_range when absent.
  const Network& network(const std::string& name) const;
  bool has(const std::string& name) const;
  bool operator==(const PolicyCheckpoint&) const = default;
};

// Layout, all integers and floats little-endian:
//   "SEPC", u16 version, u64 config_hash, i64 episode, u32 network count,
//   per network: u32 name length, name bytes, u32 layer count n,
//     n x u32 layer sizes, u8 hidden activation, u8 output activation,
//     i32 action_injection_layer, i32 action_size;
//   normalization: u32 dim, dim x f64 offsets, dim x f64 scales,
//     u32 provenance length, provenance bytes, i64 episodes;
//   per network, per layer: W row-major (f64), then b (f64).
std::vector<std::uint8_t> checkpoint_bytes(const PolicyCheckpoint& ckpt);
PolicyCheckpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes);
void save_checkpoint(const PolicyCheckpoint& ckpt, const std::string& path);
// Throws std::runtime_error on a bad magic, version or truncated file.
PolicyCheckpoint load_checkpoint(const std::string& path);

}  // namespace sepsis::nn
