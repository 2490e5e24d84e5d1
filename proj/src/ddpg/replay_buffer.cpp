#include "sepsis/ddpg/replay_buffer.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace sepsis::ddpg {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int obs_dim, int act_dim)
    : capacity_(capacity), obs_dim_(obs_dim), act_dim_(act_dim) {
  if (capacity == 0) throw std::invalid_argument("replay capacity must be >= 1");
  if (capacity > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("replay capacity too large");
  }
  if (obs_dim < 1 || act_dim < 1) throw std::invalid_argument("replay dimensions must be >= 1");
}

void ReplayBuffer::add(std::span<const double> s, std::span<const double> a, double r,
                       std::span<const double> s_next, bool terminal) {
  if (s.size() != std::size_t(obs_dim_) || s_next.size() != std::size_t(obs_dim_) ||
      a.size() != std::size_t(act_dim_)) {
    throw std::invalid_argument("transition shape mismatch");
  }
  const std::size_t k = cursor_;
  if (r_.size() <= k) {
    s_.resize((k + 1) * obs_dim_);
    s_next_.resize((k + 1) * obs_dim_);
    a_.resize((k + 1) * act_dim_);
    r_.resize(k + 1);
    terminal_.resize(k + 1);
  }
  std::copy(s.begin(), s.end(), s_.begin() + k * obs_dim_);
  std::copy(s_next.begin(), s_next.end(), s_next_.begin() + k * obs_dim_);
  std::copy(a.begin(), a.end(), a_.begin() + k * act_dim_);
  r_[k] = r;
  terminal_[k] = terminal ? 1 : 0;
  cursor_ = (cursor_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::size_t ReplayBuffer::slot(std::size_t i) const {
  if (i >= size_) throw std::out_of_range("replay index out of range");
  const std::size_t oldest = size_ < capacity_ ? 0 : cursor_;
  return (oldest + i) % capacity_;
}

Transition ReplayBuffer::at(std::size_t i) const {
  const std::size_t k = slot(i);
  Transition t;
  t.s.assign(s_.begin() + k * obs_dim_, s_.begin() + (k + 1) * obs_dim_);
  t.a.assign(a_.begin() + k * act_dim_, a_.begin() + (k + 1) * act_dim_);
  t.r = r_[k];
  t.s_next.assign(s_next_.begin() + k * obs_dim_, s_next_.begin() + (k + 1) * obs_dim_);
  t.terminal = terminal_[k] != 0;
  return t;
}

Batch ReplayBuffer::gather(std::span<const std::size_t> slots) const {
  const auto n = static_cast<Eigen::Index>(slots.size());
  Batch b;
  b.s.resize(obs_dim_, n);
  b.s_next.resize(obs_dim_, n);
  b.a.resize(act_dim_, n);
  b.r.resize(n);
  b.terminal.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const std::size_t k = slots[j];
    if (k >= size_) throw std::out_of_range("replay slot out of range");
    b.s.col(j) = Eigen::Map<const nn::Vector>(s_.data() + k * obs_dim_, obs_dim_);
    b.s_next.col(j) = Eigen::Map<const nn::Vector>(s_next_.data() + k * obs_dim_, obs_dim_);
    b.a.col(j) = Eigen::Map<const nn::Vector>(a_.data() + k * act_dim_, act_dim_);
    b.r(j) = r_[k];
    b.terminal(j) = terminal_[k];
  }
  return b;
}

Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const {
  if (size_ == 0) throw std::logic_error("sampling an empty replay buffer");
  std::vector<std::size_t> slots(n);
  for (auto& k : slots) k = rng.uniform_int(static_cast<std::uint32_t>(size_));
  return gather(slots);
}

}  // namespace sepsis::ddpg
