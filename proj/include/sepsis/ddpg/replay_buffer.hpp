#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sepsis/abm/rng.hpp"
#include "sepsis/nn/network.hpp"

namespace sepsis::ddpg {

struct Transition {
  std::vector<double> s;
  std::vector<double> a;
  double r = 0.0;
  std::vector<double> s_next;
  bool terminal = false;  // health or death; a timeout keeps bootstrapping
  bool operator==(const Transition&) const = default;
};

// Column-per-sample minibatch.
struct Batch {
  nn::Matrix s;
  nn::Matrix a;
  nn::Vector r;
  nn::Matrix s_next;
  nn::Vector terminal;  // 1 for terminal transitions, else 0
  std::size_t size() const { return static_cast<std::size_t>(r.size()); }
};

// Fixed-capacity FIFO ring stored as flat arrays. Storage grows on demand
// up to the capacity.
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim);

  void add(std::span<const double> s, std::span<const double> a, double r,
           std::span<const double> s_next, bool terminal);
  void add(const Transition& t) { add(t.s, t.a, t.r, t.s_next, t.terminal); }

  std::size_t size() const { return size_; }
  std::size_t capacity() const { return capacity_; }
  int obs_dim() const { return obs_dim_; }
  int act_dim() const { return act_dim_; }

  // i-th oldest stored transition.
  Transition at(std::size_t i) const;
  // Uniform with replacement over the current contents.
  Batch sample(std::size_t n, Rng& rng) const;
  Batch gather(std::span<const std::size_t> slots) const;

 private:
  std::size_t slot(std::size_t i) const;

  std::size_t capacity_;
  int obs_dim_;
  int act_dim_;
  std::size_t size_ = 0;
  std::size_t cursor_ = 0;  // next slot to write
  std::vector<double> s_;
  std::vector<double> a_;
  std::vector<double> r_;
  std::vector<double> s_next_;
  std::vector<unsigned char> terminal_;
};

}  // namespace sepsis::ddpg
